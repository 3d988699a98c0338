//! Density matrices to lattice Wigner functions and back.
//!
//! `W(q,p) = Tr[Delta(q,p) rho]`, and since the kernel matrices are
//! orthogonal with `Tr[Delta^dagger Delta'] = delta / N`, the inverse is
//! `rho = N sum_{q,p} W(q,p) Delta^dagger(q,p)`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::algebra::{momentum_vector, CMatrix, Cplx, LatticeDim, ZERO};
use crate::error::{Error, Result};
use crate::kernel::FanoKernel;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const REALITY_TOL: f64 = 1e-12;
pub const MASS_TOL: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: LatticeDim,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = LatticeDim::new(matrix.dim())?;
        if !matrix.is_finite() {
            return Err(Error::NotDensity("non-finite entry".into()));
        }
        let herm = matrix.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotDensity(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace is {tr}, expected 1")));
        }
        let lowest = min_eigenvalue(&matrix);
        if lowest < -PSD_TOL {
            return Err(Error::NotDensity(format!(
                "smallest eigenvalue {lowest:e} is negative"
            )));
        }
        Ok(Self { n, matrix })
    }

    /// `|psi><psi|` for a nonzero vector, normalized.
    pub fn pure(psi: &[Cplx]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotDensity("state vector has zero norm".into()));
        }
        let v: Vec<Cplx> = psi.iter().map(|z| z / norm).collect();
        Self::new(hermitize(&CMatrix::outer(&v, &v)))
    }

    pub fn maximally_mixed(n: LatticeDim) -> Self {
        let d = n.get();
        Self {
            n,
            matrix: CMatrix::identity(d).scale(Cplx::new(1.0 / d as f64, 0.0)),
        }
    }

    /// `|q><q|` in the position basis.
    pub fn position(n: LatticeDim, q: i64) -> Self {
        let mut psi = vec![ZERO; n.get()];
        psi[n.reduce(q)] = Cplx::new(1.0, 0.0);
        Self::pure(&psi).expect("basis vector is a valid state")
    }

    /// `|p><p|` in the momentum basis.
    pub fn momentum(n: LatticeDim, p: i64) -> Self {
        Self::pure(&momentum_vector(n, p)).expect("momentum vector is a valid state")
    }

    pub fn dim(&self) -> LatticeDim {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `<p|rho|p>` for every momentum label.
    pub fn momentum_diagonal(&self) -> Vec<f64> {
        (0..self.n.get() as i64)
            .map(|p| {
                let v = momentum_vector(self.n, p);
                let rv = self.matrix.mul_vec(&v);
                v.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<Cplx>().re
            })
            .collect()
    }

    pub fn position_diagonal(&self) -> Vec<f64> {
        (0..self.n.get()).map(|q| self.matrix[(q, q)].re).collect()
    }
}

/// `(M + M^dagger) / 2`.
fn hermitize(m: &CMatrix) -> CMatrix {
    (m + &m.adjoint()).scale(Cplx::new(0.5, 0.0))
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    let n = m.dim();
    let h = hermitize(m);
    let dm = DMatrix::from_fn(n, n, |a, b| h[(a, b)]);
    dm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Random mixed state `G G^dagger / Tr` from a complex Gaussian matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(n: LatticeDim, rng: &mut R) -> DensityMatrix {
    let d = n.get();
    let g = CMatrix::from_fn(d, |_, _| {
        Cplx::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = hermitize(&(&g * &g.adjoint()));
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(Cplx::new(1.0 / tr, 0.0))).expect("G G^dagger is a state")
}

/// Random pure state with a complex Gaussian amplitude vector.
pub fn random_pure_state<R: Rng + ?Sized>(n: LatticeDim, rng: &mut R) -> DensityMatrix {
    let psi: Vec<Cplx> = (0..n.get())
        .map(|_| Cplx::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DensityMatrix::pure(&psi).expect("Gaussian vector is nonzero")
}

/// Real `N x N` array `W(q,p)` with unit total mass.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    n: LatticeDim,
    values: Vec<f64>,
}

impl WignerGrid {
    /// Row-major values indexed `[q * N + p]`.
    pub fn new(n: LatticeDim, values: Vec<f64>) -> Result<Self> {
        let d = n.get();
        if values.len() != d * d {
            return Err(Error::Shape(format!(
                "grid has {} values, expected {}",
                values.len(),
                d * d
            )));
        }
        if values.iter().any(|w| !w.is_finite()) {
            return Err(Error::InconsistentGrid("non-finite value".into()));
        }
        let mass: f64 = values.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InconsistentGrid(format!(
                "total mass is {mass}, expected 1"
            )));
        }
        Ok(Self { n, values })
    }

    pub fn dim(&self) -> LatticeDim {
        self.n
    }

    pub fn get(&self, q: i64, p: i64) -> f64 {
        self.values[self.n.reduce(q) * self.n.get() + self.n.reduce(p)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `(q, p, w)` in lexicographic `(q, p)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let d = self.n.get();
        self.values.iter().enumerate().map(move |(i, &w)| (i / d, i % d, w))
    }
}

/// The raw traces `Tr[Delta(q,p) rho]` in row-major `(q,p)` order, imaginary
/// parts included.
pub fn kernel_traces(kernel: &FanoKernel, rho: &DensityMatrix) -> Result<Vec<Cplx>> {
    let n = kernel.dim();
    if rho.dim() != n {
        return Err(Error::Shape(format!(
            "state has dimension {}, kernel {}",
            rho.dim(),
            n
        )));
    }
    Ok(kernel
        .matrices()
        .par_iter()
        .map(|delta| delta.trace_product(rho.matrix()))
        .collect())
}

/// `W` together with the largest discarded imaginary part.
pub fn wigner_with_residue(kernel: &FanoKernel, rho: &DensityMatrix) -> Result<(WignerGrid, f64)> {
    let traces = kernel_traces(kernel, rho)?;
    let d = kernel.dim().get();
    let mut residue: f64 = 0.0;
    for (i, t) in traces.iter().enumerate() {
        if t.im.abs() > REALITY_TOL {
            return Err(Error::NonRealTrace {
                q: i / d,
                p: i % d,
                imag: t.im,
            });
        }
        residue = residue.max(t.im.abs());
    }
    let grid = WignerGrid::new(kernel.dim(), traces.iter().map(|t| t.re).collect())?;
    Ok((grid, residue))
}

/// `W(q,p) = Re Tr[Delta(q,p) rho]`; fails if any trace has an imaginary
/// part above 1e-12.
pub fn wigner_of_state(kernel: &FanoKernel, rho: &DensityMatrix) -> Result<WignerGrid> {
    wigner_with_residue(kernel, rho).map(|(w, _)| w)
}

/// `rho = N sum_{q,p} W(q,p) Delta^dagger(q,p)`; fails with an
/// inconsistent-grid error if the result is not a density matrix.
pub fn state_of_wigner(kernel: &FanoKernel, w: &WignerGrid) -> Result<DensityMatrix> {
    let n = kernel.dim();
    if w.dim() != n {
        return Err(Error::Shape(format!(
            "grid has dimension {}, kernel {}",
            w.dim(),
            n
        )));
    }
    let d = n.get();
    let scale = d as f64;
    let rho = CMatrix::from_fn(d, |a, b| {
        let mut acc = ZERO;
        for (delta, &wv) in kernel.matrices().iter().zip(w.values()) {
            // (Delta^dagger)[a][b] = conj(Delta[b][a])
            acc += delta[(b, a)].conj() * wv;
        }
        acc * scale
    });
    DensityMatrix::new(rho).map_err(|e| match e {
        Error::NotDensity(msg) => Error::InconsistentGrid(format!(
            "reconstruction is not a density matrix: {msg}"
        )),
        other => other,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Q,
    P,
}

/// `Axis::Q` sums over `p` and returns a vector indexed by `q`; `Axis::P`
/// the other way round.
pub fn marginal(w: &WignerGrid, axis: Axis) -> Vec<f64> {
    let d = w.dim().get() as i64;
    (0..d)
        .map(|i| match axis {
            Axis::Q => (0..d).map(|p| w.get(i, p)).sum(),
            Axis::P => (0..d).map(|q| w.get(q, i)).sum(),
        })
        .collect()
}
