use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, IntMatrix};

/// Quadratic refinement of the standard symplectic form on `(Z/2)^{2g}`,
/// recorded by its values `q(a_1), q(b_1), …, q(a_g), q(b_g)` on a
/// symplectic basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticRefinement {
    pub genus: usize,
    pub values: Vec<u8>,
}

impl QuadraticRefinement {
    pub fn new(genus: usize, values: Vec<u8>) -> Result<Self, AlgebraError> {
        let q = QuadraticRefinement { genus, values };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.values.len() != 2 * self.genus {
            return Err(AlgebraError::InvalidArgument(format!(
                "genus {} needs {} values, got {}",
                self.genus,
                2 * self.genus,
                self.values.len()
            )));
        }
        if self.values.iter().any(|&v| v > 1) {
            return Err(AlgebraError::InvalidArgument("refinement values must be bits".into()));
        }
        Ok(())
    }

    /// Orthogonal sum with another refinement.
    pub fn sum(&self, other: &QuadraticRefinement) -> QuadraticRefinement {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        QuadraticRefinement { genus: self.genus + other.genus, values }
    }
}

/// Arf invariant `Σ q(a_i) q(b_i) mod 2`.
pub fn arf_invariant(q: &QuadraticRefinement) -> Result<u8, AlgebraError> {
    q.validate()?;
    Ok(q.values.chunks(2).map(|p| p[0] & p[1]).fold(0, |acc, x| acc ^ x))
}

/// Signature of a nondegenerate symmetric integer form.
///
/// Diagonalises by exact congruence over the rationals. A zero pivot is
/// replaced by a later nonzero diagonal entry, or, when the remaining
/// diagonal vanishes, by adding a row/column with a nonzero off-diagonal
/// pairing (which produces diagonal `2 a_ij`).
pub fn signature(form: &IntMatrix) -> Result<i64, AlgebraError> {
    if !form.is_square() {
        return Err(AlgebraError::NotSquare { rows: form.rows(), cols: form.cols() });
    }
    if !form.is_symmetric() {
        return Err(AlgebraError::NotSymmetric);
    }
    let n = form.rows();
    let mut a: Vec<Vec<BigRational>> = form
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut sig = 0i64;
    for t in 0..n {
        if a[t][t].is_zero() {
            if let Some(s) = (t + 1..n).find(|&s| !a[s][s].is_zero()) {
                a.swap(t, s);
                for row in a.iter_mut() {
                    row.swap(t, s);
                }
            } else if let Some(s) = (t + 1..n).find(|&s| !a[t][s].is_zero()) {
                // e_t <- e_t + e_s
                for j in 0..n {
                    let v = a[s][j].clone();
                    a[t][j] += v;
                }
                for i in 0..n {
                    let v = a[i][s].clone();
                    a[i][t] += v;
                }
            } else {
                return Err(AlgebraError::Degenerate);
            }
        }
        let pivot = a[t][t].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for i in t + 1..n {
            if a[i][t].is_zero() {
                continue;
            }
            let f = &a[i][t] / &pivot;
            for j in t..n {
                let v = &f * &a[t][j];
                a[i][j] -= v;
            }
        }
        for row in a.iter_mut().skip(t + 1) {
            row[t] = BigRational::zero();
        }
        for j in t + 1..n {
            a[t][j] = BigRational::zero();
        }
    }
    Ok(sig)
}

/// Gram matrix of the `E8` lattice (Cartan matrix of the `E8` root system).
pub fn e8_form() -> IntMatrix {
    // Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut m = IntMatrix::diagonal(std::iter::repeat_n(BigInt::from(2), 8));
    for (i, j) in edges {
        m.set(i, j, BigInt::from(-1));
        m.set(j, i, BigInt::from(-1));
    }
    m
}

/// The hyperbolic plane `[[0,1],[1,0]]`.
pub fn hyperbolic_form() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 1], [1, 0]]).expect("2x2")
}
