//! Matrix-level verification of a kernel against the defining conditions
//! (marginals, hermiticity, completeness) and the lattice covariance
//! conditions (translation, parity, shifted parity).
//!
//! Every check reports the largest absolute deviation it saw, so the same
//! run can be judged against different tolerances.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{momentum_vector, CMatrix, ONE, ZERO};
use crate::clockshift::{parity_unitary, shifted_parity_unitary, translation_unitary};
use crate::error::{Error, Result};
use crate::kernel::FanoKernel;

pub const DEFAULT_TOL: f64 = 1e-12;

/// Above this dimension the O(N^6) completeness check gets slow.
pub const COMPLETENESS_WARN_DIM: usize = 8;

pub const MARGINAL_Q: &str = "marginal_q";
pub const MARGINAL_P: &str = "marginal_p";
pub const HERMITICITY: &str = "hermiticity";
pub const COMPLETENESS: &str = "completeness";
pub const TRANSLATION: &str = "translation_covariance";
pub const PARITY: &str = "parity_covariance";
pub const SHIFTED_PARITY: &str = "shifted_parity";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, max_dev: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            max_dev,
            tol,
            pass: max_dev <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kernel: String,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(kernel: impl Into<String>, checks: Vec<CheckRecord>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            kernel: kernel.into(),
            checks,
            pass,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str())
    }

    pub fn max_dev(&self) -> f64 {
        self.checks.iter().map(|c| c.max_dev).fold(0.0, f64::max)
    }
}

fn sum(ms: impl Iterator<Item = CMatrix>, n: usize) -> CMatrix {
    ms.fold(CMatrix::zeros(n), |acc, m| &acc + &m)
}

fn dev(a: &CMatrix, b: &CMatrix) -> f64 {
    a.max_abs_diff(b).expect("kernel matrices share one dimension")
}

/// `sum_p Delta(q,p) = |q><q|`.
pub fn check_marginal_q(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let n = kernel.dim().get();
    let worst = (0..n)
        .map(|q| {
            let row = sum((0..n).map(|p| kernel.delta(q as i64, p as i64).clone()), n);
            let mut e = vec![ZERO; n];
            e[q] = ONE;
            dev(&row, &CMatrix::outer(&e, &e))
        })
        .fold(0.0, f64::max);
    CheckRecord::new(MARGINAL_Q, worst, tol)
}

/// `sum_q Delta(q,p) = |p><p|` with momentum eigenvectors.
pub fn check_marginal_p(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let d = kernel.dim();
    let n = d.get();
    let worst = (0..n)
        .map(|p| {
            let col = sum((0..n).map(|q| kernel.delta(q as i64, p as i64).clone()), n);
            let v = momentum_vector(d, p as i64);
            dev(&col, &CMatrix::outer(&v, &v))
        })
        .fold(0.0, f64::max);
    CheckRecord::new(MARGINAL_P, worst, tol)
}

pub fn check_hermiticity(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let worst = kernel
        .matrices()
        .iter()
        .map(CMatrix::hermiticity_defect)
        .fold(0.0, f64::max);
    CheckRecord::new(HERMITICITY, worst, tol)
}

/// `sum_{q,p} (Delta^dagger)_{q1 q2} Delta_{q3 q4} = delta_{q1 q4} delta_{q3 q2} / N`
/// over all four indices.
pub fn check_completeness(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let n = kernel.dim().get();
    if n > COMPLETENESS_WARN_DIM {
        warn!("completeness check is O(N^6); N = {n} may be slow");
    }
    let inv = 1.0 / n as f64;
    let ms = kernel.matrices();
    let worst = (0..n * n)
        .into_par_iter()
        .map(|q12| {
            let (q1, q2) = (q12 / n, q12 % n);
            let mut local: f64 = 0.0;
            for q3 in 0..n {
                for q4 in 0..n {
                    let mut acc = ZERO;
                    for m in ms {
                        acc += m[(q2, q1)].conj() * m[(q3, q4)];
                    }
                    let want = if q1 == q4 && q3 == q2 { inv } else { 0.0 };
                    local = local.max((acc - want).norm());
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    CheckRecord::new(COMPLETENESS, worst, tol)
}

/// `U(a,b) Delta(q,p) U(a,b)^{-1} = Delta(q-a, p-b)` for all `a, b, q, p`.
pub fn check_translation_covariance(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let d = kernel.dim();
    let n = d.get() as i64;
    let worst = (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            let u = translation_unitary(d, a, b);
            let mut local: f64 = 0.0;
            for q in 0..n {
                for p in 0..n {
                    let moved = u.conjugate(kernel.delta(q, p));
                    local = local.max(dev(&moved, kernel.delta(q - a, p - b)));
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    CheckRecord::new(TRANSLATION, worst, tol)
}

/// `T Delta(q,p) T^{-1} = Delta(-q, -p)`.
pub fn check_parity_covariance(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let d = kernel.dim();
    let n = d.get() as i64;
    let t = parity_unitary(d);
    let mut worst: f64 = 0.0;
    for q in 0..n {
        for p in 0..n {
            let moved = t.conjugate(kernel.delta(q, p));
            worst = worst.max(dev(&moved, kernel.delta(-q, -p)));
        }
    }
    CheckRecord::new(PARITY, worst, tol)
}

fn shifted_parity_dev(kernel: &FanoKernel, c: i64, d: i64) -> f64 {
    let dim = kernel.dim();
    let n = dim.get() as i64;
    // U(a,b) moves kernel labels by -(a,b), so the reflection about
    // (c/2, d/2) is T(-c,-d) = U(-c,-d) T = T U(c,d).
    let t = shifted_parity_unitary(dim, -c, -d);
    let mut worst: f64 = 0.0;
    for q in 0..n {
        for p in 0..n {
            let moved = t.conjugate(kernel.delta(q, p));
            worst = worst.max(dev(&moved, kernel.delta(c - q, d - p)));
        }
    }
    worst
}

/// Covariance under the point reflection `(q,p) -> (c-q, d-p)` about
/// `(c/2, d/2)`: `V Delta(q,p) V^{-1} = Delta(c-q, d-p)` with
/// `V = shifted_parity_unitary(-c, -d)`.
pub fn check_shifted_parity(kernel: &FanoKernel, c: i64, d: i64, tol: f64) -> CheckRecord {
    CheckRecord::new(SHIFTED_PARITY, shifted_parity_dev(kernel, c, d), tol)
}

/// Shifted parity swept over every centre `(c,d)`.
pub fn check_shifted_parity_all(kernel: &FanoKernel, tol: f64) -> CheckRecord {
    let n = kernel.dim().get() as i64;
    let worst = (0..n * n)
        .into_par_iter()
        .map(|cd| shifted_parity_dev(kernel, cd / n, cd % n))
        .reduce(|| 0.0, f64::max);
    CheckRecord::new(SHIFTED_PARITY, worst, tol)
}

/// Runs all seven checks in a fixed order.
pub fn verify_all(kernel: &FanoKernel, tol: f64) -> Result<VerificationReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let checks = vec![
        check_marginal_q(kernel, tol),
        check_marginal_p(kernel, tol),
        check_hermiticity(kernel, tol),
        check_completeness(kernel, tol),
        check_translation_covariance(kernel, tol),
        check_parity_covariance(kernel, tol),
        check_shifted_parity_all(kernel, tol),
    ];
    Ok(VerificationReport::new(kernel.id(), checks))
}
