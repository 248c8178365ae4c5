use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{group_from_presentation, AlgebraError, IntMatrix};

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_t` with
/// `d_1 | d_2 | … | d_t` and every `d_i ≥ 2`.
///
/// The canonical generating set lists the free generators first, then one
/// generator per torsion coefficient, in order. Homomorphism matrices and
/// table generator labels are expressed in that basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FGAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigUint>,
}

impl FGAbelianGroup {
    /// Validating constructor: `torsion` must already be in invariant-factor form.
    pub fn new(free_rank: usize, torsion: Vec<BigUint>) -> Result<Self, AlgebraError> {
        let two = BigUint::from(2u8);
        if let Some(bad) = torsion.iter().find(|d| **d < two) {
            return Err(AlgebraError::InvalidGroup(format!("torsion coefficient {bad} is below 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(AlgebraError::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(FGAbelianGroup { free_rank, torsion })
    }

    /// Normalises an arbitrary list of cyclic orders (0 meaning `Z`, 1 meaning trivial).
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigUint>>(orders: I) -> Self {
        let orders: Vec<BigUint> = orders.into_iter().collect();
        let n = orders.len();
        let rel = IntMatrix::diagonal(orders.into_iter().map(BigInt::from));
        group_from_presentation(n, &rel).expect("square diagonal presentation")
    }

    pub fn trivial() -> Self {
        FGAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn integers() -> Self {
        Self::free(1)
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::integers(),
            1 => Self::trivial(),
            _ => FGAbelianGroup { free_rank: 0, torsion: vec![BigUint::from(n)] },
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigUint] {
        &self.torsion
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Order of each canonical generator: 0 for free generators.
    pub fn generator_orders(&self) -> Vec<BigUint> {
        std::iter::repeat_n(BigUint::zero(), self.free_rank).chain(self.torsion.iter().cloned()).collect()
    }

    /// Relation matrix of the canonical presentation (one row per torsion generator).
    pub fn relation_matrix(&self) -> IntMatrix {
        let g = self.generator_count();
        let mut m = IntMatrix::zeros(self.torsion.len(), g);
        for (r, d) in self.torsion.iter().enumerate() {
            m.set(r, self.free_rank + r, BigInt::from(d.clone()));
        }
        m
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        Self::from_cyclic_orders(self.generator_orders().into_iter().chain(other.generator_orders()))
    }

    /// Whether `v` (in canonical coordinates) is the zero element.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        v.iter().zip(self.generator_orders()).all(|(x, d)| {
            if d.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(&BigInt::from(d))
            }
        })
    }

    /// Quotient by a cyclic direct summand of order `d`.
    ///
    /// Removes one `Z/p^e` from the primary decomposition for every prime power
    /// `p^e` exactly dividing `d`. Fails when the group has no such summand.
    pub fn remove_cyclic_summand(&self, d: &BigUint) -> Result<FGAbelianGroup, AlgebraError> {
        if d.is_one() {
            return Ok(self.clone());
        }
        if d.is_zero() {
            if self.free_rank == 0 {
                return Err(AlgebraError::NotASummand(d.clone()));
            }
            let mut g = self.clone();
            g.free_rank -= 1;
            return Ok(g);
        }
        let mut parts: Vec<(BigUint, BigUint)> = self.torsion.iter().flat_map(prime_power_parts).collect();
        for (p, pe) in prime_power_parts(d) {
            match parts.iter().position(|(q, qe)| *q == p && *qe == pe) {
                Some(i) => {
                    parts.swap_remove(i);
                }
                None => return Err(AlgebraError::NotASummand(d.clone())),
            }
        }
        let orders = std::iter::repeat_n(BigUint::zero(), self.free_rank).chain(parts.into_iter().map(|(_, pe)| pe));
        Ok(Self::from_cyclic_orders(orders))
    }
}

/// Prime-power factors `(p, p^e)` of `n ≥ 1`, by trial division.
fn prime_power_parts(n: &BigUint) -> Vec<(BigUint, BigUint)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u8);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut pe = BigUint::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                pe *= &p;
            }
            out.push((p.clone(), pe));
        }
        p += 1u8;
    }
    if n > BigUint::one() {
        out.push((n.clone(), n));
    }
    out
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON number when the value fits in `u64`, decimal string otherwise.
pub(crate) fn biguint_json(x: &BigUint) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for FGAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FGAbelianGroup", 3)?;
        s.serialize_field("display", &self.to_string())?;
        s.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<serde_json::Value> = self.torsion.iter().map(biguint_json).collect();
        s.serialize_field("torsion", &torsion)?;
        s.end()
    }
}
