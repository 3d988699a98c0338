//! Enumeration of every admissible sign function, and hence every kernel of
//! the delta-supported form, for a given `N`.
//!
//! The free data are one sign per orbit of `(s,t) -> (-s,-t)` on
//! `{1..N-1}^2`, so the family has `2^ceil((N-1)^2/2)` members. That count is
//! derived here; it is cross-checked against brute-force search in the tests.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{tau_pow, LatticeDim};
use crate::axioms::{verify_all, DEFAULT_TOL};
use crate::clockshift::{phase_power, shift_power};
use crate::error::{Error, Result};
use crate::kernel::{build_kernel, sign_from_bits, FanoKernel, SignFn};

pub const MAX_ENUMERATE_DIM: usize = 7;
pub const MAX_CERTIFY_DIM: usize = 4;

/// An orbit of the negation map on `{1..N-1}^2`: a fixed point or a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orbit {
    representative: (usize, usize),
    partner: Option<(usize, usize)>,
}

impl Orbit {
    /// Lexicographically smallest element.
    pub fn representative(&self) -> (usize, usize) {
        self.representative
    }

    /// The other element, `None` for a fixed point.
    pub fn partner(&self) -> Option<(usize, usize)> {
        self.partner
    }

    pub fn elements(&self) -> Vec<(usize, usize)> {
        std::iter::once(self.representative).chain(self.partner).collect()
    }
}

/// Orbits ordered by representative; there are `ceil((N-1)^2 / 2)` of them.
pub fn orbit_structure(n: LatticeDim) -> Vec<Orbit> {
    let d = n.get();
    let mut seen = vec![false; d * d];
    let mut orbits = Vec::new();
    for s in 1..d {
        for t in 1..d {
            if seen[s * d + t] {
                continue;
            }
            let image = (d - s, d - t);
            seen[s * d + t] = true;
            seen[image.0 * d + image.1] = true;
            orbits.push(Orbit {
                representative: (s, t),
                partner: (image != (s, t)).then_some(image),
            });
        }
    }
    orbits
}

fn guard(n: LatticeDim, limit: usize, what: &'static str) -> Result<()> {
    if n.get() > limit {
        return Err(Error::TooLarge {
            n: n.get(),
            limit,
            what,
        });
    }
    Ok(())
}

fn bits_of(mask: u64, k: usize) -> Vec<bool> {
    (0..k).map(|i| mask >> (k - 1 - i) & 1 == 1).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationResult {
    pub n: LatticeDim,
    pub count: u64,
    #[serde(skip)]
    pub signs: Option<Vec<SignFn>>,
    /// Whether every member passed matrix-level verification.
    pub certified: bool,
}

/// All admissible sign functions in lexicographic order of their flattened
/// values. With `certify`, each candidate kernel is built and must pass
/// `verify_all` at the default tolerance to be counted.
pub fn enumerate_kernels(n: LatticeDim, certify: bool) -> Result<EnumerationResult> {
    guard(n, MAX_ENUMERATE_DIM, "enumeration")?;
    if certify {
        guard(n, MAX_CERTIFY_DIM, "certified enumeration")?;
    }
    let k = orbit_structure(n).len();
    let candidates = (0..1u64 << k).into_par_iter().map(|mask| sign_from_bits(n, &bits_of(mask, k)));
    let mut signs: Vec<SignFn> = if certify {
        candidates
            .map(|sign| {
                let sign = sign?;
                let kernel = build_kernel(&sign)?;
                Ok(verify_all(&kernel, DEFAULT_TOL)?.pass.then_some(sign))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect()
    } else {
        candidates
            .map(|sign| Ok(sign?).map(|s: SignFn| s.is_valid().then_some(s)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect()
    };
    signs.sort_by(|a, b| a.flat().cmp(b.flat()));
    Ok(EnumerationResult {
        n,
        count: signs.len() as u64,
        signs: Some(signs),
        certified: certify,
    })
}

/// Closed-form family size `2^ceil((N-1)^2 / 2)`.
pub fn count_kernels(n: LatticeDim) -> Result<u64> {
    guard(n, MAX_ENUMERATE_DIM, "counting")?;
    let free = ((n.get() - 1).pow(2)).div_ceil(2);
    Ok(1u64 << free)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCertification {
    pub sampled: usize,
    pub passed: usize,
    pub max_dev: f64,
}

impl SampleCertification {
    pub fn pass(&self) -> bool {
        self.sampled == self.passed
    }
}

/// Matrix-verifies a seeded random sample of family members, for `N` where
/// certifying every member is too slow.
pub fn certify_sample(n: LatticeDim, size: usize, seed: u64) -> Result<SampleCertification> {
    let members = enumerate_kernels(n, false)?.signs.unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = size.min(members.len());
    let mut picks = sample(&mut rng, members.len(), size).into_vec();
    picks.sort_unstable();
    let reports = picks
        .par_iter()
        .map(|&i| verify_all(&build_kernel(&members[i])?, DEFAULT_TOL))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleCertification {
        sampled: size,
        passed: reports.iter().filter(|r| r.pass).count(),
        max_dev: reports.iter().map(|r| r.max_dev()).fold(0.0, f64::max),
    })
}

/// Reads `R(s,t)` back off `Delta(0,0)` by projecting onto `S^t P^s`;
/// `None` if some value is not `+-1`.
fn decode_sign(kernel: &FanoKernel) -> Option<SignFn> {
    let n = kernel.dim();
    let d = n.get();
    let origin = kernel.delta(0, 0);
    let mut values = Vec::with_capacity(d * d);
    for s in 0..d as i64 {
        for t in 0..d as i64 {
            let basis = &shift_power(n, t) * &phase_power(n, s);
            // a(0,0;t,s) = Tr[(S^t P^s)^dagger Delta(0,0)] / N = F(s,t)
            let a = basis.adjoint().trace_product(origin) / d as f64;
            let r = a * tau_pow(n, s * t) * (d * d) as f64;
            if (r.re.abs() - 1.0).abs() > 1e-6 || r.im.abs() > 1e-6 {
                return None;
            }
            values.push(if r.re > 0.0 { 1 } else { -1 });
        }
    }
    Some(SignFn::from_flat_unchecked(n, values))
}

/// Whether `kernel` equals, within 1e-12, the kernel of some member of the
/// enumerated family.
pub fn membership(n: LatticeDim, kernel: &FanoKernel) -> Result<bool> {
    guard(n, MAX_ENUMERATE_DIM, "membership")?;
    if kernel.dim() != n {
        return Err(Error::Shape(format!(
            "kernel has dimension {}, expected {n}",
            kernel.dim()
        )));
    }
    let Some(sign) = decode_sign(kernel) else {
        return Ok(false);
    };
    if !sign.is_valid() {
        return Ok(false);
    }
    Ok(build_kernel(&sign)?.max_abs_diff(kernel)? <= DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CMatrix;
    use crate::kernel::cohendet_sign;

    fn dim(n: usize) -> LatticeDim {
        LatticeDim::new(n).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let o3 = orbit_structure(dim(3));
        assert_eq!(o3.len(), 2);
        assert_eq!(o3[0].elements(), vec![(1, 1), (2, 2)]);
        assert_eq!(o3[1].elements(), vec![(1, 2), (2, 1)]);

        let o2 = orbit_structure(dim(2));
        assert_eq!(o2.len(), 1);
        assert_eq!(o2[0].partner(), None);
        assert_eq!(o2[0].representative(), (1, 1));

        let o4 = orbit_structure(dim(4));
        assert_eq!(o4.len(), 5);
        let fixed: Vec<_> = o4.iter().filter(|o| o.partner().is_none()).collect();
        assert_eq!(fixed.len(), 1);
        assert_eq!(fixed[0].representative(), (2, 2));
    }

    #[test]
    fn orbits_partition_the_interior() {
        for n in 2..=9 {
            let orbits = orbit_structure(dim(n));
            assert_eq!(orbits.len(), ((n - 1) * (n - 1)).div_ceil(2));
            let mut all: Vec<_> = orbits.iter().flat_map(Orbit::elements).collect();
            all.sort();
            let want: Vec<_> = (1..n).flat_map(|s| (1..n).map(move |t| (s, t))).collect();
            assert_eq!(all, want);
            for o in &orbits {
                let (s, t) = o.representative();
                let image = ((n - s) % n, (n - t) % n);
                assert_eq!(o.partner().unwrap_or((s, t)), image);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        for (n, want) in [(2, 2), (3, 4), (4, 32)] {
            let r = enumerate_kernels(dim(n), true).unwrap();
            assert_eq!(r.count, want);
            assert!(r.certified);
            assert_eq!(r.signs.as_ref().unwrap().len() as u64, r.count);
        }
        for n in 2..=6 {
            let r = enumerate_kernels(dim(n), false).unwrap();
            assert_eq!(r.count, count_kernels(dim(n)).unwrap());
            assert!(!r.certified);
        }
        assert_eq!(count_kernels(dim(5)).unwrap(), 256);
        assert_eq!(count_kernels(dim(7)).unwrap(), 1 << 18);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let signs = enumerate_kernels(dim(4), false).unwrap().signs.unwrap();
        for w in signs.windows(2) {
            assert!(w[0].flat() < w[1].flat());
        }
        let again = enumerate_kernels(dim(4), false).unwrap().signs.unwrap();
        assert_eq!(signs, again);
    }

    #[test]
    fn two_by_two_family() {
        let signs = enumerate_kernels(dim(2), true).unwrap().signs.unwrap();
        assert_eq!(signs[0].to_rows(), vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(signs[1].to_rows(), vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn size_guards() {
        assert!(matches!(enumerate_kernels(dim(8), false), Err(Error::TooLarge { limit: 7, .. })));
        assert!(matches!(enumerate_kernels(dim(5), true), Err(Error::TooLarge { limit: 4, .. })));
        assert!(count_kernels(dim(9)).is_err());
        assert!(certify_sample(dim(8), 1, 0).is_err());
    }

    #[test]
    fn sample_certification_at_five() {
        let a = certify_sample(dim(5), 32, 7).unwrap();
        assert_eq!(a.sampled, 32);
        assert!(a.pass());
        assert!(a.max_dev <= DEFAULT_TOL);
        assert_eq!(a, certify_sample(dim(5), 32, 7).unwrap());
        let small = certify_sample(dim(2), 32, 0).unwrap();
        assert_eq!(small.sampled, 2);
    }

    #[test]
    fn membership_examples() {
        let k3 = build_kernel(&cohendet_sign(dim(3)).unwrap()).unwrap();
        assert!(membership(dim(3), &k3).unwrap());

        let mut broken = k3.clone();
        *broken.delta_mut(0, 0) = CMatrix::identity(3).scale((1.0 / 3.0).into());
        assert!(!membership(dim(3), &broken).unwrap());

        let plus = build_kernel(&SignFn::all_plus(dim(2))).unwrap();
        assert!(membership(dim(2), &plus).unwrap());

        // perturbing a matrix other than Delta(0,0) is still caught
        let mut nudged = k3.clone();
        nudged.delta_mut(2, 1)[(0, 0)] += num_complex::Complex64::new(1e-9, 0.0);
        assert!(!membership(dim(3), &nudged).unwrap());

        assert!(matches!(membership(dim(4), &k3), Err(Error::Shape(_))));
    }

    #[test]
    fn membership_agrees_with_brute_force() {
        let d = dim(3);
        let family: Vec<_> = enumerate_kernels(d, false)
            .unwrap()
            .signs
            .unwrap()
            .iter()
            .map(|s| build_kernel(s).unwrap())
            .collect();
        for mask in 0..1u32 << 9 {
            let values = (0..9).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let k = crate::kernel::build_kernel_unchecked(&SignFn::from_flat_unchecked(d, values));
            let brute = family.iter().any(|m| m.max_abs_diff(&k).unwrap() <= DEFAULT_TOL);
            assert_eq!(membership(d, &k).unwrap(), brute, "mask {mask}");
        }
    }
}
