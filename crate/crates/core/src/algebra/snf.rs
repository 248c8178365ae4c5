use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{AlgebraError, FGAbelianGroup, IntMatrix};

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal, non-negative, each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t) / &pivot;
                if !q.is_zero() {
                    let f = -q;
                    d.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = d.get(t, j) / &pivot;
                if !q.is_zero() {
                    let f = -q;
                    d.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn smallest_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| &a < b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Isomorphism type of `Z^generators / rowspace(relations)`.
///
/// Each row of `relations` is one relation among the generators.
pub fn group_from_presentation(generators: usize, relations: &IntMatrix) -> Result<FGAbelianGroup, AlgebraError> {
    if relations.cols() != generators {
        return Err(AlgebraError::DimensionMismatch(format!(
            "relation matrix has {} columns for {generators} generators",
            relations.cols()
        )));
    }
    let snf = smith_normal_form(relations);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    let torsion: Vec<BigUint> = diag
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.magnitude().clone())
        .filter(|x| *x > BigUint::from(1u8))
        .collect();
    FGAbelianGroup::new(generators - rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn one_by_one_is_already_diagonal() {
        let s = check(&IntMatrix::from_rows(&[[6]]).unwrap());
        assert_eq!(s.d, IntMatrix::from_rows(&[[6]]).unwrap());
    }

    #[test]
    fn coprime_diagonal_merges() {
        // Hand elimination: diag(2,3) ~ diag(1,6).
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap());
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix_stays_zero() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn negative_and_rectangular() {
        // Entry gcd 2; 2x2 minors -40, -16, 4 have gcd 4, so d_2 = 4 / 2.
        let s = check(&IntMatrix::from_rows(&[[-4, 6, 2], [8, -2, 0]]).unwrap());
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn presentations() {
        let free = group_from_presentation(2, &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(free, FGAbelianGroup::free(2));
        let z2 = group_from_presentation(1, &IntMatrix::from_rows(&[[2]]).unwrap()).unwrap();
        assert_eq!(z2, FGAbelianGroup::cyclic(2));
        let z6 = group_from_presentation(2, &IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap()).unwrap();
        assert_eq!(z6, FGAbelianGroup::cyclic(6));
        assert!(group_from_presentation(3, &IntMatrix::from_rows(&[[2, 0]]).unwrap()).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn snf_identity_holds(a in small_matrix()) {
            check(&a);
        }

        #[test]
        fn presentation_invariant_under_permutation(a in small_matrix(), seed in 0u64..1000) {
            let g = group_from_presentation(a.cols(), &a).unwrap();
            let mut rows = a.to_rows();
            rows.reverse();
            let cols = a.cols();
            if cols > 1 {
                let k = (seed as usize) % cols;
                for r in rows.iter_mut() {
                    r.rotate_left(k);
                }
            }
            let b = IntMatrix::from_big_rows_with_cols(rows, cols).unwrap();
            prop_assert_eq!(group_from_presentation(cols, &b).unwrap(), g);
        }
    }
}
