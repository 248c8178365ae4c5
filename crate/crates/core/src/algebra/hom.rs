use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{group_from_presentation, smith_normal_form, AlgebraError, FGAbelianGroup, IntMatrix};

/// Basis of the integer kernel `{x : a x = 0}`, one vector per entry.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols()).map(|j| snf.v.column(j)).collect()
}

/// Isomorphism type of the subgroup of `group` generated by `vectors`, each
/// given in the group's canonical coordinates.
pub fn subgroup_generated(group: &FGAbelianGroup, vectors: &[Vec<BigInt>]) -> Result<FGAbelianGroup, AlgebraError> {
    let g = group.generator_count();
    if let Some(v) = vectors.iter().find(|v| v.len() != g) {
        return Err(AlgebraError::DimensionMismatch(format!(
            "vector of length {} in a group with {g} generators",
            v.len()
        )));
    }
    let p = vectors.len();
    if p == 0 {
        return Ok(FGAbelianGroup::trivial());
    }
    // Relations among the p vectors: y with Σ y_i w_i ∈ relation lattice of the group.
    let w = IntMatrix::from_big_rows_with_cols(
        (0..g).map(|r| vectors.iter().map(|v| v[r].clone()).collect()).collect(),
        p,
    )?;
    let rel = group.relation_matrix().transpose();
    let stacked = w.hconcat(&rel)?;
    let relations: Vec<Vec<BigInt>> = integer_kernel(&stacked).into_iter().map(|k| k[..p].to_vec()).collect();
    let relations = IntMatrix::from_big_rows_with_cols(relations, p)?;
    group_from_presentation(p, &relations)
}

/// Homomorphism between finitely generated abelian groups in canonical bases.
///
/// `matrix` has one row per codomain generator and one column per domain
/// generator; column `j` is the image of domain generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    domain: FGAbelianGroup,
    codomain: FGAbelianGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    pub fn new(domain: FGAbelianGroup, codomain: FGAbelianGroup, matrix: IntMatrix) -> Result<Self, AlgebraError> {
        if matrix.rows() != codomain.generator_count() || matrix.cols() != domain.generator_count() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "matrix is {}x{} but groups need {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.generator_count(),
                domain.generator_count()
            )));
        }
        for (j, d) in domain.generator_orders().into_iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let d = BigInt::from(d);
            let image: Vec<BigInt> = matrix.column(j).into_iter().map(|x| x * &d).collect();
            if !codomain.is_zero_element(&image) {
                return Err(AlgebraError::IllDefinedHomomorphism(format!(
                    "generator {j} has order {d} but its image does not"
                )));
            }
        }
        Ok(Homomorphism { domain, codomain, matrix })
    }

    pub fn zero(domain: FGAbelianGroup, codomain: FGAbelianGroup) -> Self {
        let matrix = IntMatrix::zeros(codomain.generator_count(), domain.generator_count());
        Homomorphism { domain, codomain, matrix }
    }

    pub fn domain(&self) -> &FGAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FGAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.matrix.mul_vec(x);
        y.into_iter()
            .zip(self.codomain.generator_orders())
            .map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(&BigInt::from(d)) })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.codomain.is_zero_element(&self.matrix.column(j)))
    }

    /// Generators of the kernel, in domain coordinates.
    pub fn kernel_generators(&self) -> Vec<Vec<BigInt>> {
        let a = self.domain.generator_count();
        // x ∈ ker iff M x lies in the codomain relation lattice: solve [M | T] (x, z) = 0.
        let t = self.codomain.relation_matrix().transpose();
        let stacked = self.matrix.hconcat(&t).expect("row counts agree");
        integer_kernel(&stacked).into_iter().map(|v| v[..a].to_vec()).collect()
    }

    pub fn kernel(&self) -> FGAbelianGroup {
        subgroup_generated(&self.domain, &self.kernel_generators()).expect("kernel vectors have domain length")
    }

    pub fn image(&self) -> FGAbelianGroup {
        let cols: Vec<Vec<BigInt>> = (0..self.matrix.cols()).map(|j| self.matrix.column(j)).collect();
        subgroup_generated(&self.codomain, &cols).expect("columns have codomain length")
    }

    pub fn cokernel(&self) -> FGAbelianGroup {
        let b = self.codomain.generator_count();
        let mut rows = self.codomain.relation_matrix().to_rows();
        rows.extend((0..self.matrix.cols()).map(|j| self.matrix.column(j)));
        let rel = IntMatrix::from_big_rows_with_cols(rows, b).expect("uniform width");
        group_from_presentation(b, &rel).expect("width matches generator count")
    }
}
