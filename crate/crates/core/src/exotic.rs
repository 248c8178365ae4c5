//! Group arithmetic for homotopy spheres.
//!
//! `Θ_k` sits in the exact sequence
//! `0 -> bP_(k+1) -> Θ_k -> coker J_k -> P_k`, where `P_k` is the surgery
//! obstruction group and the last map is the Kervaire invariant or
//! signature/8 of a framed surgery problem.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{arf_invariant, bernoulli, signature, AlgebraError, FGAbelianGroup, IntMatrix, QuadraticRefinement};
use crate::tables::{SphereTables, TableError};

/// Largest `k + 1` accepted by [`bp_order`].
pub const MAX_BP_DIMENSION: u32 = 30;
/// Largest `k` accepted by [`theta_assembly`].
pub const MAX_THETA_DIMENSION: u32 = 18;

/// Dimensions `4m + 2` carrying a framed manifold of Kervaire invariant one.
const KERVAIRE_ONE_DIMENSIONS: [u32; 6] = [2, 6, 14, 30, 62, 126];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExoticError {
    #[error("{0} is outside the supported window")]
    OutOfTable(String),
    #[error("r = {0}/4 is not an integer")]
    NonIntegralR(u32),
    #[error("k = {k} has the wrong parity for this invariant: {msg}")]
    WrongParity { k: u32, msg: String },
    #[error("form is not even (some diagonal entry is odd) or not unimodular")]
    NonEvenForm,
    #[error("signature {0} is not divisible by 8")]
    SignatureNotDivisibleBy8(i64),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `P_k`: 0 for odd `k`, `Z/2` for `k ≡ 2 mod 4`, `Z` for `k ≡ 0 mod 4`.
pub fn p_group(k: u32) -> FGAbelianGroup {
    match k % 4 {
        0 => FGAbelianGroup::integers(),
        2 => FGAbelianGroup::cyclic(2),
        _ => FGAbelianGroup::trivial(),
    }
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

/// `|bP_(k+1)|` for `2 ≤ k + 1 ≤ 30`.
///
/// - `k + 1 = 4m`, `m ≥ 2`: `2^(2m-2) (2^(2m-1) - 1) numerator(4 B_m / m)`;
///   `bP_4` is trivial.
/// - `k + 1 = 4m + 2`: 2, except 1 in the Kervaire-invariant-one dimensions.
/// - `k + 1` odd: 1.
pub fn bp_order(kplus1: u32) -> Result<BigUint, ExoticError> {
    if !(2..=MAX_BP_DIMENSION).contains(&kplus1) {
        return Err(ExoticError::OutOfTable(format!("bP_{kplus1}")));
    }
    Ok(match kplus1 % 4 {
        0 => {
            let m = kplus1 / 4;
            if m == 1 {
                BigUint::one()
            } else {
                let q = bernoulli(m) * BigRational::new(BigInt::from(4), BigInt::from(m));
                let num = q.numer().to_biguint().expect("positive");
                pow2(2 * m - 2) * (pow2(2 * m - 1) - 1u8) * num
            }
        }
        2 if KERVAIRE_ONE_DIMENSIONS.contains(&kplus1) => BigUint::one(),
        2 => BigUint::from(2u8),
        _ => BigUint::one(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RConvention {
    /// `r = (k + 1) / 2`.
    Half,
    /// `r = (k + 1) / 4`.
    Quarter,
}

/// `2^(2r-1) (2^(2r-1) - 1) numerator(B_r / r)` under either reading of `r`.
///
/// Kept for comparison with [`bp_order`]; under `Half` it gives 16256 for
/// `k + 1 = 8`, which 28 does not divide.
pub fn bp_order_divisor_paper(kplus1: u32, convention: RConvention) -> Result<BigUint, ExoticError> {
    let r = match convention {
        RConvention::Half if kplus1 % 2 == 0 => kplus1 / 2,
        RConvention::Quarter if kplus1 % 4 == 0 => kplus1 / 4,
        RConvention::Half => return Err(ExoticError::WrongParity { k: kplus1, msg: "k + 1 must be even".into() }),
        RConvention::Quarter => return Err(ExoticError::NonIntegralR(kplus1)),
    };
    if r == 0 || kplus1 > 2 * MAX_BP_DIMENSION {
        return Err(ExoticError::OutOfTable(format!("k + 1 = {kplus1}")));
    }
    let q = bernoulli(r) / BigRational::from_integer(BigInt::from(r));
    let num = q.numer().to_biguint().expect("positive");
    Ok(pow2(2 * r - 1) * (pow2(2 * r - 1) - 1u8) * num)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaAssembly {
    pub k: u32,
    pub bp: FGAbelianGroup,
    pub coker_j: FGAbelianGroup,
    pub p_target: FGAbelianGroup,
    /// `|ker φ|` inside coker J.
    pub kernel_phi_order: u64,
    pub phi_image_order: u64,
    pub theta_order: BigUint,
    /// The group itself, when the table records it.
    pub resolved_group: Option<FGAbelianGroup>,
    /// The tabulated order of `Θ_k`.
    pub published_order: u64,
}

impl ThetaAssembly {
    pub fn to_json(&self) -> Value {
        let v = json!({
            "k": self.k,
            "bp": self.bp,
            "coker_j": self.coker_j,
            "p_target": self.p_target,
            "kernel_phi_order": self.kernel_phi_order,
            "phi_image_order": self.phi_image_order,
            "theta_order": crate::algebra::group::biguint_json(&self.theta_order),
            "published_order": self.published_order,
            "resolved_group": self.resolved_group,
        });
        crate::schema::tag(v, crate::schema::THETA_ASSEMBLY)
    }
}

/// Assembles `|Θ_k| = |bP_(k+1)| · |ker φ|` for `1 ≤ k ≤ 18`.
///
/// coker J is the stable stem with one cyclic summand of order
/// `im_j_order(k)` removed; `|ker φ|` comes from the table.
pub fn theta_assembly(tables: &SphereTables, k: u32) -> Result<ThetaAssembly, ExoticError> {
    if !(1..=MAX_THETA_DIMENSION).contains(&k) {
        return Err(ExoticError::OutOfTable(format!("Theta_{k}")));
    }
    let bp_order = bp_order(k + 1)?;
    let bp = FGAbelianGroup::from_cyclic_orders([bp_order.clone()]);
    let stem = tables.stable_stem(k)?;
    let imj = tables.im_j_order(k)?;
    let coker_j = stem.remove_cyclic_summand(&BigUint::from(imj))?;
    let coker_order = coker_j
        .order()
        .and_then(|o| o.to_u64())
        .ok_or_else(|| ExoticError::Inconsistent(format!("coker J in stem {k} is not a small finite group")))?;
    let kernel_phi_order = tables.kernel_phi_order(k)?;
    if kernel_phi_order == 0 || coker_order % kernel_phi_order != 0 {
        return Err(ExoticError::Inconsistent(format!("|ker phi| = {kernel_phi_order} does not divide {coker_order}")));
    }
    let theta_order = &bp_order * BigUint::from(kernel_phi_order);
    let entry = tables.theta(k)?;
    if let Some(g) = &entry.group {
        if g.order() != Some(theta_order.clone()) {
            return Err(ExoticError::Inconsistent(format!("Theta_{k} = {g} but the sequence gives order {theta_order}")));
        }
    }
    Ok(ThetaAssembly {
        k,
        bp,
        coker_j,
        p_target: p_group(k),
        kernel_phi_order,
        phi_image_order: coker_order / kernel_phi_order,
        theta_order,
        resolved_group: entry.group.clone(),
        published_order: entry.order,
    })
}

/// Input to [`surgery_invariant`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurgeryForm {
    Intersection(IntMatrix),
    Refinement(QuadraticRefinement),
}

/// Kervaire invariant for `k ≡ 2 mod 4`, signature/8 for `k ≡ 0 mod 4`.
pub fn surgery_invariant(k: u32, form: &SurgeryForm) -> Result<i64, ExoticError> {
    match (k % 4, form) {
        (2, SurgeryForm::Refinement(q)) => Ok(arf_invariant(q)? as i64),
        (0, SurgeryForm::Intersection(m)) => {
            let n = m.rows();
            let even = m.is_square() && (0..n).all(|i| (m.get(i, i) % BigInt::from(2)).is_zero());
            let unimodular = m.is_square() && m.determinant().is_ok_and(|d| d.magnitude().is_one());
            if !m.is_symmetric() {
                return Err(AlgebraError::NotSymmetric.into());
            }
            if !even || !unimodular {
                return Err(ExoticError::NonEvenForm);
            }
            let sig = signature(m)?;
            if sig % 8 != 0 {
                return Err(ExoticError::SignatureNotDivisibleBy8(sig));
            }
            Ok(sig / 8)
        }
        (2, _) => Err(ExoticError::WrongParity { k, msg: "k ≡ 2 mod 4 takes a quadratic refinement".into() }),
        (0, _) => Err(ExoticError::WrongParity { k, msg: "k ≡ 0 mod 4 takes an intersection form".into() }),
        _ => Err(ExoticError::WrongParity { k, msg: "odd k has no surgery obstruction".into() }),
    }
}
