//! Shift (`S`) and clock (`P`) matrices and the lattice symmetry unitaries
//! built from them.
//!
//! `S|p> = omega^{-p}|p>` on momentum states and `P|q> = omega^q|q>` on the
//! standard basis. Translations are `U(a,b) = P^b S^a`, parity is the
//! reflection `|b> -> |-b>`, and the shifted parity is `T(c,d) = U(c,d) T`.

use crate::algebra::{omega_pow, CMatrix, LatticeDim, ONE, ZERO};

/// Cyclic shift with `S[a][b] = 1` iff `b = a + 1 (mod n)`.
pub fn shift_matrix(n: LatticeDim) -> CMatrix {
    shift_power(n, 1)
}

/// Diagonal clock matrix `diag(1, omega, ..., omega^{n-1})`.
pub fn phase_matrix(n: LatticeDim) -> CMatrix {
    phase_power(n, 1)
}

/// `S^k`, built directly: `(S^k)[a][b] = 1` iff `b = a + k (mod n)`.
pub fn shift_power(n: LatticeDim, k: i64) -> CMatrix {
    let k = n.reduce(k);
    let dim = n.get();
    CMatrix::from_fn(dim, |a, b| if b == (a + k) % dim { ONE } else { ZERO })
}

/// `P^k = diag(omega^{k j})`.
pub fn phase_power(n: LatticeDim, k: i64) -> CMatrix {
    CMatrix::from_fn(n.get(), |a, b| {
        if a == b {
            omega_pow(n, k * a as i64)
        } else {
            ZERO
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryKind {
    Translation { a: usize, b: usize },
    Parity,
    ShiftedParity { c: usize, d: usize },
}

/// A unitary implementing a lattice phase-space symmetry.
#[derive(Clone, Debug)]
pub struct SymmetryUnitary {
    pub kind: SymmetryKind,
    pub n: LatticeDim,
    pub matrix: CMatrix,
}

impl SymmetryUnitary {
    /// `M A M^{-1}`, using `M^{-1} = M^dagger`.
    pub fn conjugate(&self, a: &CMatrix) -> CMatrix {
        self.matrix.conjugate_by(a)
    }
}

/// `U(a,b) = P^b S^a`.
pub fn translation_unitary(n: LatticeDim, a: i64, b: i64) -> SymmetryUnitary {
    let (a, b) = (n.reduce(a), n.reduce(b));
    let dim = n.get();
    // (P^b S^a)[x][y] = omega^{b x} when y = x + a
    let matrix = CMatrix::from_fn(dim, |x, y| {
        if y == (x + a) % dim {
            omega_pow(n, (b * x) as i64)
        } else {
            ZERO
        }
    });
    SymmetryUnitary {
        kind: SymmetryKind::Translation { a, b },
        n,
        matrix,
    }
}

/// `T[x][y] = 1` iff `x = -y (mod n)`.
pub fn parity_unitary(n: LatticeDim) -> SymmetryUnitary {
    let dim = n.get();
    let matrix = CMatrix::from_fn(dim, |x, y| if (x + y) % dim == 0 { ONE } else { ZERO });
    SymmetryUnitary {
        kind: SymmetryKind::Parity,
        n,
        matrix,
    }
}

/// `T(c,d) = U(c,d) T`. Conjugation by it sends `Delta(q,p)` to
/// `Delta(-c-q, -d-p)`.
pub fn shifted_parity_unitary(n: LatticeDim, c: i64, d: i64) -> SymmetryUnitary {
    let u = translation_unitary(n, c, d);
    let t = parity_unitary(n);
    SymmetryUnitary {
        kind: SymmetryKind::ShiftedParity {
            c: n.reduce(c),
            d: n.reduce(d),
        },
        n,
        matrix: &u.matrix * &t.matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{approx_equal, momentum_vector, omega_pow, Cplx};

    fn dim(n: usize) -> LatticeDim {
        LatticeDim::new(n).unwrap()
    }

    fn real(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Cplx::new(x, 0.0)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn eq(a: &CMatrix, b: &CMatrix) -> bool {
        approx_equal(a, b, 1e-12).unwrap()
    }

    fn is_unitary(m: &CMatrix) -> bool {
        eq(&(&m.adjoint() * m), &CMatrix::identity(m.dim()))
    }

    #[test]
    fn shift_matrix_examples() {
        assert_eq!(shift_matrix(dim(2)), real(&[&[0., 1.], &[1., 0.]]));
        assert_eq!(
            shift_matrix(dim(3)),
            real(&[&[0., 1., 0.], &[0., 0., 1.], &[1., 0., 0.]])
        );
        assert!(eq(&shift_matrix(dim(4)).pow(4), &CMatrix::identity(4)));
    }

    #[test]
    fn phase_matrix_examples() {
        assert!(eq(&phase_matrix(dim(2)), &real(&[&[1., 0.], &[0., -1.]])));
        let i = Cplx::i();
        let want = CMatrix::diagonal(&[Cplx::new(1.0, 0.0), i, -Cplx::new(1.0, 0.0), -i]);
        assert!(eq(&phase_matrix(dim(4)), &want));
        assert!(eq(&phase_matrix(dim(3)).pow(3), &CMatrix::identity(3)));
    }

    #[test]
    fn eigenrelations() {
        for n in 2..=9 {
            let d = dim(n);
            let s = shift_matrix(d);
            for p in 0..n as i64 {
                let v = momentum_vector(d, p);
                let sv = s.mul_vec(&v);
                let w = omega_pow(d, -p);
                for (x, y) in sv.iter().zip(&v) {
                    assert!((x - w * y).norm() < 1e-12);
                }
            }
            let pm = phase_matrix(d);
            for q in 0..n {
                assert!((pm[(q, q)] - omega_pow(d, q as i64)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn commutation_relation() {
        for n in 2..=8 {
            let d = dim(n);
            for k in 0..n as i64 {
                for m in 0..n as i64 {
                    let lhs = &shift_power(d, k) * &phase_power(d, m);
                    let rhs = (&phase_power(d, m) * &shift_power(d, k)).scale(omega_pow(d, k * m));
                    assert!(eq(&lhs, &rhs), "n={n} k={k} m={m}");
                }
            }
            assert!(eq(&shift_matrix(d).pow(n as u32), &CMatrix::identity(n)));
            assert!(eq(&phase_matrix(d).pow(n as u32), &CMatrix::identity(n)));
        }
    }

    #[test]
    fn powers_agree_with_repeated_products() {
        for n in 2..=6 {
            let d = dim(n);
            for k in 0..n {
                assert!(eq(&shift_power(d, k as i64), &shift_matrix(d).pow(k as u32)));
                assert!(eq(&phase_power(d, k as i64), &phase_matrix(d).pow(k as u32)));
            }
        }
    }

    #[test]
    fn translation_examples() {
        for n in 2..=5 {
            let d = dim(n);
            assert!(eq(&translation_unitary(d, 0, 0).matrix, &CMatrix::identity(n)));
            assert!(eq(&translation_unitary(d, 1, 0).matrix, &shift_matrix(d)));
        }
        let u = translation_unitary(dim(2), 1, 1);
        assert!(eq(&u.matrix, &real(&[&[0., 1.], &[-1., 0.]])));
        assert_eq!(u.kind, SymmetryKind::Translation { a: 1, b: 1 });
        assert_eq!(
            translation_unitary(dim(3), -1, 4).kind,
            SymmetryKind::Translation { a: 2, b: 1 }
        );
    }

    #[test]
    fn translation_is_product_of_powers_and_conjugates_generators() {
        for n in 2..=7 {
            let d = dim(n);
            let (s, p) = (shift_matrix(d), phase_matrix(d));
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let u = translation_unitary(d, a, b);
                    assert!(eq(&u.matrix, &(&phase_power(d, b) * &shift_power(d, a))));
                    assert!(is_unitary(&u.matrix));
                    assert!(eq(&u.conjugate(&p), &p.scale(omega_pow(d, a))));
                    assert!(eq(&u.conjugate(&s), &s.scale(omega_pow(d, -b))));
                }
            }
        }
    }

    #[test]
    fn translation_group_law_up_to_phase() {
        for n in 2..=6 {
            let d = dim(n);
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    for a2 in 0..n as i64 {
                        for b2 in 0..n as i64 {
                            let prod = &translation_unitary(d, a, b).matrix
                                * &translation_unitary(d, a2, b2).matrix;
                            let phase = omega_pow(d, a * b2);
                            let want = translation_unitary(d, a + a2, b + b2).matrix;
                            assert!(eq(&prod.scale(phase.conj()), &want));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert!(eq(&parity_unitary(dim(2)).matrix, &CMatrix::identity(2)));
        assert_eq!(
            parity_unitary(dim(3)).matrix,
            real(&[&[1., 0., 0.], &[0., 0., 1.], &[0., 1., 0.]])
        );
        let t5 = parity_unitary(dim(5)).matrix;
        assert!(eq(&t5.pow(2), &CMatrix::identity(5)));
    }

    #[test]
    fn parity_inverts_generators() {
        for n in 2..=9 {
            let d = dim(n);
            let t = parity_unitary(d);
            assert_eq!(t.matrix, t.matrix.adjoint());
            assert!(t.matrix.as_slice().iter().all(|z| z.im == 0.0));
            assert!(eq(&t.matrix.pow(2), &CMatrix::identity(n)));
            assert!(eq(&t.conjugate(&phase_matrix(d)), &phase_power(d, -1)));
            assert!(eq(&t.conjugate(&shift_matrix(d)), &shift_power(d, -1)));
        }
    }

    #[test]
    fn shifted_parity_examples() {
        for n in 2..=5 {
            let d = dim(n);
            assert!(eq(
                &shifted_parity_unitary(d, 0, 0).matrix,
                &parity_unitary(d).matrix
            ));
        }
        let d3 = dim(3);
        assert!(eq(
            &shifted_parity_unitary(d3, 1, 0).matrix,
            &(&shift_matrix(d3) * &parity_unitary(d3).matrix)
        ));
        let d2 = dim(2);
        assert!(eq(
            &shifted_parity_unitary(d2, 1, 1).matrix,
            &(&phase_matrix(d2) * &shift_matrix(d2))
        ));
        let sp = shifted_parity_unitary(dim(4), 5, -1);
        assert_eq!(sp.kind, SymmetryKind::ShiftedParity { c: 1, d: 3 });
        assert!(is_unitary(&sp.matrix));
    }
}
