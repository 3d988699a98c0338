//! Quadrature checks of the continuous Wigner function on Gaussian states.
//!
//! `W(q,p) = (2 pi hbar)^{-1} int dr e^{-ipr/hbar} psi(q + r/2) psi*(q - r/2)`
//! is integrated with composite Simpson over `[-r_max, r_max]` and then
//! compared against the analytic position and momentum densities and
//! against the analytically displaced or reflected state.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Cplx, ZERO};
use crate::axioms::{CheckRecord, VerificationReport};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const REALITY_TOL: f64 = 1e-10;
pub const MIN_STEPS: usize = 64;

pub const MARGINALS: &str = "marginals";
pub const REALITY: &str = "reality";
pub const TRANSLATION: &str = "translation_covariance";
pub const PARITY: &str = "parity_covariance";

/// Pure Gaussian wave packet centred at `(q0, p0)` with unit squeezing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub q0: f64,
    pub p0: f64,
    pub hbar: f64,
}

impl GaussianState {
    pub fn new(q0: f64, p0: f64, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Config(format!("hbar must be positive, got {hbar}")));
        }
        if !q0.is_finite() || !p0.is_finite() {
            return Err(Error::Config("state centre must be finite".into()));
        }
        Ok(Self { q0, p0, hbar })
    }

    pub fn vacuum() -> Self {
        Self {
            q0: 0.0,
            p0: 0.0,
            hbar: 1.0,
        }
    }

    /// `U(a,b) psi`, up to a global phase.
    pub fn displaced(&self, a: f64, b: f64) -> Self {
        Self {
            q0: self.q0 + a,
            p0: self.p0 + b,
            ..*self
        }
    }

    /// `psi(-x)`.
    pub fn reflected(&self) -> Self {
        Self {
            q0: -self.q0,
            p0: -self.p0,
            ..*self
        }
    }

    /// `|psi(x)|^2`.
    pub fn position_density(&self, x: f64) -> f64 {
        (-(x - self.q0).powi(2) / self.hbar).exp() / (PI * self.hbar).sqrt()
    }

    /// `|<p|psi>|^2`.
    pub fn momentum_density(&self, p: f64) -> f64 {
        (-(p - self.p0).powi(2) / self.hbar).exp() / (PI * self.hbar).sqrt()
    }
}

/// `r_max >= 8 sqrt(hbar)` keeps the truncated tails below double precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub r_max: f64,
    pub steps: usize,
    pub grid_extent: f64,
    pub grid_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            r_max: 12.0,
            steps: 512,
            grid_extent: 8.0,
            grid_points: 129,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps < MIN_STEPS {
            return Err(Error::Config(format!(
                "steps = {} is below the minimum of {MIN_STEPS}",
                self.steps
            )));
        }
        if self.steps % 2 != 0 {
            return Err(Error::Config(format!("steps = {} must be even", self.steps)));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::Config(format!("r_max must be positive, got {}", self.r_max)));
        }
        if !(self.grid_extent > 0.0 && self.grid_extent.is_finite()) {
            return Err(Error::Config(format!(
                "grid_extent must be positive, got {}",
                self.grid_extent
            )));
        }
        // Simpson over the grid needs an even number of intervals
        if self.grid_points < 3 || self.grid_points % 2 == 0 {
            return Err(Error::Config(format!(
                "grid_points = {} must be odd and at least 3",
                self.grid_points
            )));
        }
        Ok(())
    }

    /// Symmetric grid `[-grid_extent, grid_extent]` used for both axes.
    pub fn axis(&self) -> Vec<f64> {
        let h = 2.0 * self.grid_extent / (self.grid_points - 1) as f64;
        (0..self.grid_points)
            .map(|i| -self.grid_extent + h * i as f64)
            .collect()
    }

    fn grid_step(&self) -> f64 {
        2.0 * self.grid_extent / (self.grid_points - 1) as f64
    }
}

/// Composite Simpson weights for `intervals` (even) equal steps of width `h`.
fn simpson_weights(intervals: usize, h: f64) -> Vec<f64> {
    (0..=intervals)
        .map(|j| {
            let w = if j == 0 || j == intervals {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

fn simpson(values: &[f64], h: f64) -> f64 {
    simpson_weights(values.len() - 1, h)
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// `(pi hbar)^{-1/4} exp(-(x - q0)^2 / (2 hbar) + i p0 x / hbar)`.
pub fn gaussian_wavefunction(state: &GaussianState, x: f64) -> Cplx {
    let amp = (PI * state.hbar).powf(-0.25);
    let arg = Cplx::new(
        -(x - state.q0).powi(2) / (2.0 * state.hbar),
        state.p0 * x / state.hbar,
    );
    arg.exp() * amp
}

/// Quadrature nodes together with the Fourier phases `exp(-i p r / hbar)`
/// for a fixed set of momenta; the phases do not depend on `q`, so a grid
/// computes them once.
struct Quadrature {
    rs: Vec<f64>,
    weights: Vec<f64>,
    /// `phases[k * rs.len() + j]` for momentum `k` and node `j`.
    phases: Vec<Cplx>,
    momenta: usize,
}

impl Quadrature {
    fn new(hbar: f64, ps: &[f64], cfg: &QuadratureConfig) -> Self {
        let h = 2.0 * cfg.r_max / cfg.steps as f64;
        let rs: Vec<f64> = (0..=cfg.steps).map(|j| -cfg.r_max + h * j as f64).collect();
        let phases = ps
            .iter()
            .flat_map(|&p| rs.iter().map(move |&r| Cplx::from_polar(1.0, -p * r / hbar)))
            .collect();
        Self {
            weights: simpson_weights(cfg.steps, h),
            rs,
            phases,
            momenta: ps.len(),
        }
    }
}

/// Complex quadrature values `W(q, p)` for one `q` and every momentum of
/// `quad`, before the imaginary residue is dropped.
fn wigner_row(state: &GaussianState, q: f64, quad: &Quadrature) -> Vec<Cplx> {
    let products: Vec<Cplx> = quad
        .rs
        .iter()
        .zip(&quad.weights)
        .map(|(&r, &w)| {
            gaussian_wavefunction(state, q + r / 2.0)
                * gaussian_wavefunction(state, q - r / 2.0).conj()
                * w
        })
        .collect();
    let norm = 1.0 / (2.0 * PI * state.hbar);
    quad.phases
        .chunks(quad.rs.len())
        .take(quad.momenta)
        .map(|phases| {
            let mut acc = ZERO;
            for (e, f) in phases.iter().zip(&products) {
                acc += e * f;
            }
            acc * norm
        })
        .collect()
}

/// Complex value of the quadrature; the imaginary part is the residue.
pub fn wigner_continuum_complex(
    state: &GaussianState,
    q: f64,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<Cplx> {
    cfg.validate()?;
    Ok(wigner_row(state, q, &Quadrature::new(state.hbar, &[p], cfg))[0])
}

/// Real part of the quadrature; fails if the imaginary residue exceeds 1e-10.
pub fn wigner_continuum(state: &GaussianState, q: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let w = wigner_continuum_complex(state, q, p, cfg)?;
    if w.im.abs() > REALITY_TOL {
        return Err(Error::ImaginaryResidue(w.im));
    }
    Ok(w.re)
}

/// `W` sampled on the configured square grid.
#[derive(Clone, Debug)]
pub struct ContinuumGrid {
    pub axis: Vec<f64>,
    /// Indexed `[i_q * len + i_p]`.
    pub values: Vec<f64>,
    /// Largest discarded imaginary part.
    pub max_imag: f64,
}

impl ContinuumGrid {
    pub fn get(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.axis.len() + ip]
    }

    /// `(q, p, w)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let len = self.axis.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.axis[i / len], self.axis[i % len], w))
    }

    /// `int W dq dp` over the grid.
    pub fn total_mass(&self, h: f64) -> f64 {
        let len = self.axis.len();
        let rows: Vec<f64> = (0..len)
            .map(|iq| simpson(&self.values[iq * len..(iq + 1) * len], h))
            .collect();
        simpson(&rows, h)
    }
}

/// Evaluates `W` at `(f(q_i), g(p_j))` for every grid point.
fn sample(
    state: &GaussianState,
    cfg: &QuadratureConfig,
    q_map: impl Fn(f64) -> f64 + Sync,
    p_map: impl Fn(f64) -> f64 + Sync,
) -> ContinuumGrid {
    let axis = cfg.axis();
    let ps: Vec<f64> = axis.iter().map(|&p| p_map(p)).collect();
    let quad = Quadrature::new(state.hbar, &ps, cfg);
    let rows: Vec<Vec<Cplx>> = axis
        .par_iter()
        .map(|&q| wigner_row(state, q_map(q), &quad))
        .collect();
    let max_imag = rows
        .iter()
        .flatten()
        .map(|w| w.im.abs())
        .fold(0.0, f64::max);
    ContinuumGrid {
        values: rows.into_iter().flatten().map(|w| w.re).collect(),
        axis,
        max_imag,
    }
}

pub fn wigner_grid(state: &GaussianState, cfg: &QuadratureConfig) -> Result<ContinuumGrid> {
    cfg.validate()?;
    Ok(sample(state, cfg, |q| q, |p| p))
}

fn marginal_deviation(state: &GaussianState, grid: &ContinuumGrid, cfg: &QuadratureConfig) -> f64 {
    let h = cfg.grid_step();
    let len = grid.axis.len();
    let over_p: Vec<f64> = (0..len)
        .map(|iq| simpson(&grid.values[iq * len..(iq + 1) * len], h))
        .collect();
    let over_q: Vec<f64> = (0..len)
        .map(|ip| {
            let col: Vec<f64> = (0..len).map(|iq| grid.get(iq, ip)).collect();
            simpson(&col, h)
        })
        .collect();
    let pointwise = grid
        .axis
        .iter()
        .zip(over_p.iter().zip(&over_q))
        .map(|(&x, (mq, mp))| {
            (mq - state.position_density(x))
                .abs()
                .max((mp - state.momentum_density(x)).abs())
        })
        .fold(0.0, f64::max);
    // each marginal must also carry unit probability on the window
    let mass = (simpson(&over_p, h) - 1.0)
        .abs()
        .max((simpson(&over_q, h) - 1.0).abs());
    pointwise.max(mass)
}

/// `int W dp = |psi(q)|^2` and `int W dq = |phi(p)|^2` on the grid, plus the
/// unit mass of each marginal over the window.
pub fn check_marginals_continuum(
    state: &GaussianState,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<CheckRecord> {
    let grid = wigner_grid(state, cfg)?;
    Ok(CheckRecord::new(MARGINALS, marginal_deviation(state, &grid, cfg), tol))
}

/// Largest imaginary residue of the quadrature over the grid.
pub fn check_reality_continuum(state: &GaussianState, cfg: &QuadratureConfig) -> Result<CheckRecord> {
    let grid = wigner_grid(state, cfg)?;
    Ok(CheckRecord::new(REALITY, grid.max_imag, REALITY_TOL))
}

/// `W_{U rho U^-1}(q,p) = W_rho(q - a, p - b)`.
pub fn check_translation_continuum(
    state: &GaussianState,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<CheckRecord> {
    cfg.validate()?;
    let moved = sample(&state.displaced(a, b), cfg, |q| q, |p| p);
    let shifted = sample(state, cfg, |q| q - a, |p| p - b);
    Ok(CheckRecord::new(TRANSLATION, max_gap(&moved, &shifted), tol))
}

/// `W_{T rho T^-1}(q,p) = W_rho(-q, -p)`.
pub fn check_parity_continuum(
    state: &GaussianState,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<CheckRecord> {
    cfg.validate()?;
    let reflected = sample(&state.reflected(), cfg, |q| q, |p| p);
    let mirrored = sample(state, cfg, |q| -q, |p| -p);
    Ok(CheckRecord::new(PARITY, max_gap(&reflected, &mirrored), tol))
}

fn max_gap(a: &ContinuumGrid, b: &ContinuumGrid) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// All four continuum checks for one state and one translation `(a, b)`.
pub fn continuum_report(
    state: &GaussianState,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<VerificationReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    cfg.validate()?;
    let grid = wigner_grid(state, cfg)?;
    let checks = vec![
        CheckRecord::new(MARGINALS, marginal_deviation(state, &grid, cfg), tol),
        CheckRecord::new(REALITY, grid.max_imag, REALITY_TOL),
        check_translation_continuum(state, a, b, cfg, tol)?,
        check_parity_continuum(state, cfg, tol)?,
    ];
    let id = format!(
        "gaussian q0={} p0={} hbar={}",
        state.q0, state.p0, state.hbar
    );
    Ok(VerificationReport::new(id, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn wavefunction_examples() {
        let vac = GaussianState::vacuum();
        let v = gaussian_wavefunction(&vac, 0.0);
        assert!((v.re - PI.powf(-0.25)).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re - 0.7511).abs() < 1e-4);

        let s = GaussianState::new(1.5, -0.7, 0.5).unwrap();
        let peak = gaussian_wavefunction(&s, s.q0).norm();
        assert!((peak - PI.powf(-0.25) * 0.5f64.powf(-0.25)).abs() < 1e-14);

        let xs: Vec<f64> = (0..=4000).map(|i| -20.0 + 0.01 * i as f64).collect();
        for st in [vac, s, GaussianState::new(-3.0, 2.0, 2.0).unwrap()] {
            let dens: Vec<f64> = xs.iter().map(|&x| gaussian_wavefunction(&st, x).norm_sqr()).collect();
            assert!((simpson(&dens, 0.01) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(GaussianState::new(0.0, 0.0, 0.0).is_err());
        assert!(GaussianState::new(f64::NAN, 0.0, 1.0).is_err());
        let coarse = QuadratureConfig { steps: 8, ..cfg() };
        assert!(matches!(wigner_continuum(&GaussianState::vacuum(), 0.0, 0.0, &coarse), Err(Error::Config(_))));
        assert!(QuadratureConfig { steps: 65, ..cfg() }.validate().is_err());
        assert!(QuadratureConfig { grid_points: 128, ..cfg() }.validate().is_err());
        assert!(QuadratureConfig { r_max: 0.0, ..cfg() }.validate().is_err());
        assert!(cfg().validate().is_ok());
    }

    #[test]
    fn peak_values() {
        let w = wigner_continuum(&GaussianState::vacuum(), 0.0, 0.0, &cfg()).unwrap();
        assert!((w - 1.0 / PI).abs() < 1e-6);
        let coh = GaussianState::new(1.3, -0.4, 1.0).unwrap();
        let w = wigner_continuum(&coh, 1.3, -0.4, &cfg()).unwrap();
        assert!((w - 1.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn matches_closed_form_gaussian() {
        // W = exp(-((q-q0)^2 + (p-p0)^2) / hbar) / (pi hbar)
        let s = GaussianState::new(0.5, 1.0, 1.0).unwrap();
        for &(q, p) in &[(0.0, 0.0), (1.0, 2.0), (-1.5, 0.3), (2.5, -1.0)] {
            let w = wigner_continuum(&s, q, p, &cfg()).unwrap();
            let want = (-((q - s.q0).powi(2) + (p - s.p0).powi(2)) / s.hbar).exp() / (PI * s.hbar);
            assert!((w - want).abs() < 1e-10, "({q},{p}): {w} vs {want}");
        }
    }

    #[test]
    fn grid_mass_is_one() {
        let grid = wigner_grid(&GaussianState::vacuum(), &cfg()).unwrap();
        let h = 16.0 / 128.0;
        assert!((grid.total_mass(h) - 1.0).abs() < 1e-4);
        assert!(grid.max_imag <= REALITY_TOL);
        let first = grid.entries().next().unwrap();
        assert_eq!((first.0, first.1), (-8.0, -8.0));
    }

    #[test]
    fn marginal_examples() {
        for s in [GaussianState::vacuum(), GaussianState::new(1.0, 0.5, 1.0).unwrap()] {
            let rec = check_marginals_continuum(&s, &cfg(), DEFAULT_TOL).unwrap();
            assert!(rec.pass, "{rec:?}");
        }
        let far = GaussianState::new(10.0, 0.0, 1.0).unwrap();
        let tight = QuadratureConfig { grid_extent: 1.0, ..cfg() };
        let rec = check_marginals_continuum(&far, &tight, DEFAULT_TOL).unwrap();
        assert!(!rec.pass);
        assert!(rec.max_dev > 0.5);
    }

    #[test]
    fn translation_examples() {
        let vac = GaussianState::vacuum();
        assert!(check_translation_continuum(&vac, 1.0, 0.0, &cfg(), DEFAULT_TOL).unwrap().pass);
        let id = check_translation_continuum(&vac, 0.0, 0.0, &cfg(), DEFAULT_TOL).unwrap();
        assert!(id.max_dev <= 1e-12);
        let coh = GaussianState::new(1.0, 1.0, 1.0).unwrap();
        assert!(check_translation_continuum(&coh, -1.0, -1.0, &cfg(), DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn parity_examples() {
        let vac = check_parity_continuum(&GaussianState::vacuum(), &cfg(), DEFAULT_TOL).unwrap();
        assert!(vac.max_dev <= 1e-10);
        let coh = GaussianState::new(1.0, 0.5, 1.0).unwrap();
        assert!(check_parity_continuum(&coh, &cfg(), DEFAULT_TOL).unwrap().pass);

        let refl = GaussianState::new(2.0, 0.0, 1.0).unwrap().reflected();
        let grid = wigner_grid(&refl, &cfg()).unwrap();
        let (imax, _) = grid
            .values
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        let len = grid.axis.len();
        assert_eq!((grid.axis[imax / len], grid.axis[imax % len]), (-2.0, 0.0));
    }

    #[test]
    fn reality_on_test_states() {
        for s in [
            GaussianState::vacuum(),
            GaussianState::new(1.0, 0.5, 1.0).unwrap(),
            GaussianState::new(-2.0, 1.5, 0.5).unwrap(),
        ] {
            assert!(check_reality_continuum(&s, &cfg()).unwrap().pass);
        }
    }

    #[test]
    fn refinement_is_stable() {
        let s = GaussianState::new(1.0, 0.5, 1.0).unwrap();
        let fine = QuadratureConfig { r_max: 24.0, steps: 1024, ..cfg() };
        let finer = QuadratureConfig { steps: 2048, ..fine };
        for &(q, p) in &[(0.0, 0.0), (1.0, 0.5), (2.0, -1.0)] {
            let base = wigner_continuum(&s, q, p, &cfg()).unwrap();
            assert!((wigner_continuum(&s, q, p, &fine).unwrap() - base).abs() < 1e-6);
            assert!((wigner_continuum(&s, q, p, &finer).unwrap() - base).abs() < 1e-6);
        }
    }

    #[test]
    fn report_collects_all_checks() {
        let r = continuum_report(&GaussianState::vacuum(), 1.0, 0.0, &cfg(), DEFAULT_TOL).unwrap();
        assert!(r.pass);
        let names: Vec<_> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec![MARGINALS, REALITY, TRANSLATION, PARITY]);
        assert!(continuum_report(&GaussianState::vacuum(), 0.0, 0.0, &cfg(), -1.0).is_err());
    }
}
