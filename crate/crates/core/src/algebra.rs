//! Complex scalars, small dense complex matrices and roots of unity.
//!
//! Matrices are stored row-major with the row index as the bra label and the
//! column index as the ket label, so `m[(a, b)]` is `<a|M|b>`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Double-precision complex scalar. Serializes as `[re, im]`.
pub type Cplx = Complex64;

pub const ZERO: Cplx = Cplx::new(0.0, 0.0);
pub const ONE: Cplx = Cplx::new(1.0, 0.0);

/// Dimension `N` of the lattice `Z_N x Z_N`; always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticeDim(usize);

impl LatticeDim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n as i64));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Reduces any integer to its representative in `0..n`.
    pub fn reduce(self, k: i64) -> usize {
        k.rem_euclid(self.0 as i64) as usize
    }
}

impl TryFrom<i64> for LatticeDim {
    type Error = Error;

    fn try_from(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self(n as usize))
    }
}

impl<'de> Deserialize<'de> for LatticeDim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = i64::deserialize(d)?;
        LatticeDim::try_from(n).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for LatticeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `e^{2 pi i / n}`.
pub fn omega(n: LatticeDim) -> Cplx {
    omega_pow(n, 1)
}

/// `omega(n)^k`, evaluated from the reduced exponent rather than by repeated
/// multiplication.
pub fn omega_pow(n: LatticeDim, k: i64) -> Cplx {
    let k = n.reduce(k);
    Cplx::from_polar(1.0, 2.0 * PI * k as f64 / n.get() as f64)
}

/// `e^{i pi / n}`, the square root of `omega(n)` used to resolve
/// `omega^{-st/2}`.
pub fn tau(n: LatticeDim) -> Cplx {
    tau_pow(n, 1)
}

/// `tau(n)^k` with `k` reduced modulo `2n`.
pub fn tau_pow(n: LatticeDim, k: i64) -> Cplx {
    let period = 2 * n.get() as i64;
    let k = k.rem_euclid(period);
    Cplx::from_polar(1.0, PI * k as f64 / n.get() as f64)
}

/// Momentum eigenvector `|p> = N^{-1/2} sum_q omega^{-pq} |q>`.
pub fn momentum_vector(n: LatticeDim, p: i64) -> Vec<Cplx> {
    let p = n.reduce(p) as i64;
    let norm = 1.0 / (n.get() as f64).sqrt();
    (0..n.get() as i64)
        .map(|q| omega_pow(n, -p * q) * norm)
        .collect()
}

/// Square dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Cplx>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |a, b| if a == b { ONE } else { ZERO })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cplx) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                data.push(f(a, b));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Cplx>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn diagonal(entries: &[Cplx]) -> Self {
        Self::from_fn(entries.len(), |a, b| if a == b { entries[a] } else { ZERO })
    }

    /// `|u><v|`.
    pub fn outer(u: &[Cplx], v: &[Cplx]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |a, b| u[a] * v[b].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Cplx] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cplx]> {
        self.data.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<Cplx>> {
        self.rows().map(<[Cplx]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |a, b| self[(b, a)].conj())
    }

    pub fn trace(&self) -> Cplx {
        (0..self.n).map(|a| self[(a, a)]).sum()
    }

    pub fn scale(&self, z: Cplx) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * z).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cplx]) -> Vec<Cplx> {
        assert_eq!(v.len(), self.n);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// `Tr[self * other]` without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> Cplx {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut acc = ZERO;
        for a in 0..n {
            for b in 0..n {
                acc += self.data[a * n + b] * other.data[b * n + a];
            }
        }
        acc
    }

    /// `self * other * self^dagger`.
    pub fn conjugate_by(&self, other: &CMatrix) -> Self {
        &(self * other) * &self.adjoint()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "cannot compare {0}x{0} with {1}x{1}",
                self.n, other.n
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n;
        let mut dev: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                dev = dev.max((self.data[a * n + b] - self.data[b * n + a].conj()).norm());
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// True iff the largest entrywise difference is at most `tol`.
pub fn approx_equal(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool> {
    Ok(a.max_abs_diff(b)? <= tol)
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Cplx;

    fn index(&self, (a, b): (usize, usize)) -> &Cplx {
        &self.data[a * self.n + b]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (a, b): (usize, usize)) -> &mut Cplx {
        &mut self.data[a * self.n + b]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for a in 0..n {
            for k in 0..n {
                let x = self.data[a * n + k];
                if x == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[a * n..(a + 1) * n];
                for (d, y) in dst.iter_mut().zip(row) {
                    *d += x * y;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Cplx>>::deserialize(d)?;
        let m = CMatrix::from_rows(rows).map_err(serde::de::Error::custom)?;
        if !m.is_finite() {
            return Err(serde::de::Error::custom("non-finite matrix entry"));
        }
        Ok(m)
    }
}
