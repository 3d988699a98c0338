//! Discrete Wigner functions on the `N x N` lattice phase space.
//!
//! A discrete Wigner function is fixed by its Fano kernel, a family of `N^2`
//! Hermitian matrices `Delta(q,p)` with `W(q,p) = Tr[Delta(q,p) rho]`.
//! Requiring the marginal, reality and completeness conditions together with
//! covariance under lattice translations and parity narrows the kernel down to
//! a choice of sign `R(s,t) = +-1` per phase-space frequency, but does not fix
//! it: for every `N` there are several admissible kernels.
//!
//! - [`algebra`]: complex matrices, roots of unity, momentum basis
//! - [`clockshift`]: shift/clock matrices and translation/parity unitaries
//! - [`kernel`]: sign functions, coefficient tables, kernel construction
//! - [`axioms`]: matrix-level verification of a kernel
//! - [`transform`]: states to Wigner grids and back
//! - [`enumerate`]: the full family of admissible kernels
//! - [`continuum`]: quadrature checks of the continuous Wigner function
//! - [`io`]: JSON and CSV file formats
//!
//! ```
//! use fano_core::{build_kernel, cohendet_sign, verify_all, LatticeDim};
//!
//! let n = LatticeDim::new(5)?;
//! let kernel = build_kernel(&cohendet_sign(n)?)?;
//! assert!(verify_all(&kernel, 1e-12)?.pass);
//! # Ok::<(), fano_core::Error>(())
//! ```

pub mod algebra;
pub mod axioms;
pub mod clockshift;
pub mod continuum;
pub mod enumerate;
mod error;
pub mod io;
pub mod kernel;
pub mod transform;

pub use algebra::{approx_equal, momentum_vector, omega, tau, CMatrix, Cplx, LatticeDim};
pub use axioms::{verify_all, CheckRecord, VerificationReport};
pub use clockshift::{
    parity_unitary, phase_matrix, shift_matrix, shifted_parity_unitary, translation_unitary,
    SymmetryKind, SymmetryUnitary,
};
pub use continuum::{GaussianState, QuadratureConfig};
pub use enumerate::{count_kernels, enumerate_kernels, membership, EnumerationResult};
pub use error::{Error, Result};
pub use kernel::{
    build_kernel, cohendet_sign, coefficient_table, phase_factor, sign_from_bits, FanoKernel,
    SignFn,
};
pub use transform::{marginal, state_of_wigner, wigner_of_state, Axis, DensityMatrix, WignerGrid};
