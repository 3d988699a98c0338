//! Fano kernels `Delta(q,p)` built from a `+-1` sign function.
//!
//! Translation covariance forces the Fourier coefficients onto the support
//! `atilde(s,t;n,m) = F(s,t) delta_{t,n} delta_{s,m}`, and parity together with
//! hermiticity leave `F(s,t) = tau^{-st} R(s,t) / N^2` with `R = +-1`, where
//! `tau = e^{i pi/N}` is evaluated on representatives `s, t` in `0..N`. The
//! kernel is then
//!
//! ```text
//! Delta(q,p) = sum_{n,m} omega^{pn - qm} F(m,n) S^n P^m.
//! ```
//!
//! Under this root convention a sign function is admissible iff
//! `R(s,0) = R(0,t) = +1` and `R(s,t) = (-1)^{N+s+t} R(N-s, N-t)` for
//! `s, t` in `1..N`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{omega_pow, tau_pow, CMatrix, Cplx, LatticeDim, ZERO};
use crate::enumerate::orbit_structure;
use crate::error::{Error, Result};

/// A `+-1` assignment `R(s,t)` on `Z_N x Z_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignFn {
    n: LatticeDim,
    values: Vec<i8>,
}

impl SignFn {
    /// Validates entries, boundary and pairing.
    pub fn new(n: LatticeDim, rows: Vec<Vec<i8>>) -> Result<Self> {
        let sign = Self::from_rows_unchecked(n, rows)?;
        sign.validate()?;
        Ok(sign)
    }

    /// Checks only shape and that every entry is `+-1`; boundary and pairing
    /// are left unchecked so that inadmissible kernels can be built and
    /// examined.
    pub fn from_rows_unchecked(n: LatticeDim, rows: Vec<Vec<i8>>) -> Result<Self> {
        let dim = n.get();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape(format!("sign array must be {dim}x{dim}")));
        }
        let values: Vec<i8> = rows.into_iter().flatten().collect();
        if let Some(v) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidSign(format!("entry {v} is not +1 or -1")));
        }
        Ok(Self { n, values })
    }

    /// Row-major flat values; panics unless every entry is `+-1`.
    pub fn from_flat_unchecked(n: LatticeDim, values: Vec<i8>) -> Self {
        assert_eq!(values.len(), n.get() * n.get());
        assert!(values.iter().all(|&v| v == 1 || v == -1));
        Self { n, values }
    }

    /// `R = +1` everywhere. Admissible only for `N = 2`.
    pub fn all_plus(n: LatticeDim) -> Self {
        Self {
            n,
            values: vec![1; n.get() * n.get()],
        }
    }

    pub fn dim(&self) -> LatticeDim {
        self.n
    }

    /// `R(s,t)` with both arguments reduced mod `N`.
    pub fn get(&self, s: i64, t: i64) -> i8 {
        let dim = self.n.get();
        self.values[self.n.reduce(s) * dim + self.n.reduce(t)]
    }

    pub fn set(&mut self, s: usize, t: usize, v: i8) {
        assert!(v == 1 || v == -1);
        let dim = self.n.get();
        self.values[s * dim + t] = v;
    }

    pub fn flat(&self) -> &[i8] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.values.chunks(self.n.get()).map(<[i8]>::to_vec).collect()
    }

    /// First violated constraint, if any.
    pub fn violation(&self) -> Option<String> {
        let dim = self.n.get();
        for s in 0..dim {
            if self.get(s as i64, 0) != 1 {
                return Some(format!("boundary: R({s},0) must be +1"));
            }
            if self.get(0, s as i64) != 1 {
                return Some(format!("boundary: R(0,{s}) must be +1"));
            }
        }
        for s in 1..dim {
            for t in 1..dim {
                if self.get(s as i64, t as i64) != pairing_partner(self, s, t) {
                    return Some(format!(
                        "pairing: R({s},{t}) must equal (-1)^(N+s+t) R({},{})",
                        dim - s,
                        dim - t
                    ));
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.violation().is_none()
    }

    pub fn validate(&self) -> Result<()> {
        match self.violation() {
            Some(msg) => Err(Error::InvalidSign(msg)),
            None => Ok(()),
        }
    }

    /// Values at the orbit representatives, `true` for `+1`.
    pub fn free_bits(&self) -> Vec<bool> {
        orbit_structure(self.n)
            .iter()
            .map(|orbit| {
                let (s, t) = orbit.representative();
                self.get(s as i64, t as i64) == 1
            })
            .collect()
    }
}

impl fmt::Display for SignFn {
    /// Rows of `+`/`-` separated by `/`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.values.chunks(self.n.get()).enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            for &v in row {
                f.write_str(if v == 1 { "+" } else { "-" })?;
            }
        }
        Ok(())
    }
}

/// The value the pairing rule demands at `(s,t)`, read off its partner.
fn pairing_partner(sign: &SignFn, s: usize, t: usize) -> i8 {
    let dim = sign.n.get();
    let parity = if (dim + s + t) % 2 == 0 { 1 } else { -1 };
    parity * sign.get((dim - s) as i64, (dim - t) as i64)
}

/// `R(s,t) = (-1)^{st}`; defined for odd `N` only.
pub fn cohendet_sign(n: LatticeDim) -> Result<SignFn> {
    if n.get() % 2 == 0 {
        return Err(Error::UnsupportedDimension {
            n: n.get(),
            reason: "the Cohendet sign (-1)^(st) is defined for odd N only",
        });
    }
    let dim = n.get();
    let values = (0..dim)
        .flat_map(|s| (0..dim).map(move |t| if (s * t) % 2 == 0 { 1 } else { -1 }))
        .collect();
    let sign = SignFn { n, values };
    debug_assert!(sign.is_valid());
    Ok(sign)
}

/// Builds the admissible sign function with the given free bits, one per
/// negation orbit of `{1..N-1}^2` in lexicographic order of representatives
/// (`true` = `+1`). Partners are completed by the pairing rule.
pub fn sign_from_bits(n: LatticeDim, bits: &[bool]) -> Result<SignFn> {
    let orbits = orbit_structure(n);
    if bits.len() != orbits.len() {
        return Err(Error::Arity {
            expected: orbits.len(),
            got: bits.len(),
        });
    }
    let mut sign = SignFn::all_plus(n);
    for (orbit, &bit) in orbits.iter().zip(bits) {
        let (s, t) = orbit.representative();
        sign.set(s, t, if bit { 1 } else { -1 });
        if let Some((s2, t2)) = orbit.partner() {
            let v = pairing_partner(&sign, s2, t2);
            sign.set(s2, t2, v);
        }
    }
    debug_assert!(sign.is_valid());
    Ok(sign)
}

/// Parses a bit string of `+` and `-` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(true),
            '-' => Ok(false),
            other => Err(Error::Format(format!(
                "bit strings use '+' and '-', found {other:?}"
            ))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '+' } else { '-' }).collect()
}

/// `F(s,t) = tau^{-st} r / N^2` with `s, t` taken as representatives in
/// `0..N`.
pub fn phase_factor(n: LatticeDim, s: i64, t: i64, r: i8) -> Cplx {
    let (s, t) = (n.reduce(s) as i64, n.reduce(t) as i64);
    let norm = (n.get() * n.get()) as f64;
    tau_pow(n, -s * t) * (f64::from(r) / norm)
}

/// Expansion coefficients `a(q,p;n,m)` of `Delta(q,p)` in the `S^n P^m`
/// basis together with their Fourier transform `atilde(s,t;n,m)`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    n: LatticeDim,
    a: Vec<Cplx>,
    atilde: Vec<Cplx>,
}

impl CoefficientTable {
    fn index(&self, i: i64, j: i64, k: i64, l: i64) -> usize {
        let d = self.n.get();
        let r = |x| self.n.reduce(x);
        ((r(i) * d + r(j)) * d + r(k)) * d + r(l)
    }

    pub fn dim(&self) -> LatticeDim {
        self.n
    }

    pub fn a(&self, q: i64, p: i64, n: i64, m: i64) -> Cplx {
        self.a[self.index(q, p, n, m)]
    }

    pub fn atilde(&self, s: i64, t: i64, n: i64, m: i64) -> Cplx {
        self.atilde[self.index(s, t, n, m)]
    }
}

pub fn coefficient_table(sign: &SignFn) -> Result<CoefficientTable> {
    sign.validate()?;
    let n = sign.dim();
    let d = n.get() as i64;
    let mut a = Vec::with_capacity((d * d * d * d) as usize);
    for q in 0..d {
        for p in 0..d {
            for nn in 0..d {
                for m in 0..d {
                    let f = phase_factor(n, m, nn, sign.get(m, nn));
                    a.push(omega_pow(n, p * nn - q * m) * f);
                }
            }
        }
    }
    let mut atilde = Vec::with_capacity(a.len());
    for s in 0..d {
        for t in 0..d {
            for nn in 0..d {
                for m in 0..d {
                    atilde.push(if t == nn && s == m {
                        phase_factor(n, s, t, sign.get(s, t))
                    } else {
                        ZERO
                    });
                }
            }
        }
    }
    Ok(CoefficientTable { n, a, atilde })
}

/// Square-root-of-omega convention used to evaluate `omega^{-st/2}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `tau = e^{i pi/N}` on representatives `0..N`.
    #[default]
    Tau,
}

/// The `N^2` operators `Delta(q,p)` of a lattice Wigner function.
#[derive(Clone, Debug)]
pub struct FanoKernel {
    n: LatticeDim,
    sign: SignFn,
    convention: Convention,
    delta: Vec<CMatrix>,
}

impl FanoKernel {
    /// Wraps explicitly supplied matrices, indexed `[q * N + p]`. Nothing
    /// ties them to `sign`; use the axiom checks to find out whether they
    /// form a valid kernel.
    pub fn from_matrices(sign: SignFn, delta: Vec<CMatrix>) -> Result<Self> {
        let n = sign.dim();
        let d = n.get();
        if delta.len() != d * d {
            return Err(Error::Shape(format!(
                "expected {} matrices, got {}",
                d * d,
                delta.len()
            )));
        }
        if let Some(m) = delta.iter().find(|m| m.dim() != d) {
            return Err(Error::Shape(format!(
                "kernel matrix is {0}x{0}, expected {d}x{d}",
                m.dim()
            )));
        }
        Ok(Self {
            n,
            sign,
            convention: Convention::Tau,
            delta,
        })
    }

    pub fn dim(&self) -> LatticeDim {
        self.n
    }

    pub fn sign(&self) -> &SignFn {
        &self.sign
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `Delta(q,p)` with both labels reduced mod `N`.
    pub fn delta(&self, q: i64, p: i64) -> &CMatrix {
        &self.delta[self.n.reduce(q) * self.n.get() + self.n.reduce(p)]
    }

    pub fn delta_mut(&mut self, q: usize, p: usize) -> &mut CMatrix {
        let d = self.n.get();
        &mut self.delta[q * d + p]
    }

    /// All matrices in `(q,p)` lexicographic order.
    pub fn matrices(&self) -> &[CMatrix] {
        &self.delta
    }

    pub fn id(&self) -> String {
        format!("N={} R={}", self.n, self.sign)
    }

    /// Largest entrywise difference over all `N^2` matrices.
    pub fn max_abs_diff(&self, other: &FanoKernel) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "kernels have dimensions {} and {}",
                self.n, other.n
            )));
        }
        self.delta
            .iter()
            .zip(&other.delta)
            .try_fold(0.0f64, |acc, (a, b)| Ok(acc.max(a.max_abs_diff(b)?)))
    }
}

/// Builds the kernel of an admissible sign function.
pub fn build_kernel(sign: &SignFn) -> Result<FanoKernel> {
    sign.validate()?;
    Ok(build_kernel_unchecked(sign))
}

/// Same construction without the admissibility check. The result may fail
/// any of the axioms.
pub fn build_kernel_unchecked(sign: &SignFn) -> FanoKernel {
    let n = sign.dim();
    let d = n.get();
    let period = 2 * d;
    let tau_table: Vec<Cplx> = (0..period as i64).map(|k| tau_pow(n, k)).collect();
    let norm = 1.0 / (d * d) as f64;

    // (S^k P^m)[a][b] = omega^{m b} when b = a + k, so each entry of Delta
    // is a single sum over m; all phases are collected into one tau power.
    let delta = (0..d * d)
        .into_par_iter()
        .map(|qp| {
            let (q, p) = (qp / d, qp % d);
            CMatrix::from_fn(d, |a, b| {
                let k = (b + d - a) % d;
                let mut acc = ZERO;
                for m in 0..d {
                    let exp = 2 * (p * k + m * b + (d - q) * m) + (period - m * k % period);
                    let r = f64::from(sign.get(m as i64, k as i64));
                    acc += tau_table[exp % period] * r;
                }
                acc * norm
            })
        })
        .collect();

    FanoKernel {
        n,
        sign: sign.clone(),
        convention: Convention::Tau,
        delta,
    }
}
