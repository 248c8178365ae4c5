//! Homotopy groups of `G_n`, the monoid of self-equivalences of `S^(n-1)`.
//!
//! With `q = n - 1`, evaluation at a base point gives a fibration
//! `F_q -> G_n -> S^q` with `π_k(F_q) = π_(k+q)(S^q)`, and the exact sequence
//!
//! ```text
//! π_(k+1)(S^q) --φ_(k+1)--> π_(n+k-1)(S^q) --i*--> π_k(G_n) --j*--> π_k(S^q) --φ_k--> π_(n+k-2)(S^q)
//! ```
//!
//! where `φ_k(α) = [α, ι_q]`. So `π_k(G_n)` is an extension of
//! `ker φ_k` by `im i* = π_(n+k-1)(S^q) / im φ_(k+1)`. Extensions are
//! resolved only when that is forced; otherwise both ends are reported.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{FGAbelianGroup, Homomorphism};
use crate::tables::{SphereTables, TableError, WhiteheadOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GnError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("no composition data for phi_{k} on pi_{k}(S^{q}) (n = {n}); the result is unknown", q = .n - 1)]
    MissingCompositionData { n: u32, k: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Generic,
    K0,
    KEqNMinus2NOdd,
    KEqNMinus1NEven,
    KEq2nMinus3NOdd,
    Stable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GnStatus {
    /// The isomorphism type is determined.
    Resolved,
    /// Both ends of the extension are known but the extension is not.
    ExtensionUnresolved,
    /// `ker i*` is unknown, so only the ambient group of the image is known.
    SubgroupUnknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnGroupResult {
    pub n: u32,
    pub k: u32,
    pub case_tag: CaseTag,
    pub status: GnStatus,
    pub resolved: Option<FGAbelianGroup>,
    /// `(sub, quotient)` = `(im i*, ker φ_k)`, present whenever the image of `i*` is known.
    pub ses: Option<(FGAbelianGroup, FGAbelianGroup)>,
    /// `ker φ_k`.
    pub quotient: FGAbelianGroup,
    /// `π_(n+k-1)(S^(n-1))`, of which `im i*` is a quotient.
    pub sub_ambient: FGAbelianGroup,
}

impl GnGroupResult {
    /// Order of `π_k(G_n)` when it is determined and finite.
    pub fn order(&self) -> Option<BigUint> {
        match (&self.resolved, &self.ses) {
            (Some(g), _) => g.order(),
            (None, Some((s, q))) => Some(s.order()? * q.order()?),
            _ => None,
        }
    }

    /// Whether `π_k(G_n)` is known to be finite.
    pub fn is_finite(&self) -> Option<bool> {
        match (&self.resolved, &self.ses) {
            (Some(g), _) => Some(g.is_finite()),
            (None, Some((s, q))) => Some(s.is_finite() && q.is_finite()),
            _ if !self.quotient.is_finite() => Some(false),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "k": self.k,
            "case_tag": self.case_tag,
            "status": self.status,
            "quotient": self.quotient,
            "sub_ambient": self.sub_ambient,
            "resolved": self.resolved,
        });
        v["ses"] = match &self.ses {
            Some((s, q)) => json!({"sub": s, "quotient": q}),
            None => Value::Null,
        };
        if let Some(o) = self.order() {
            v["order"] = crate::algebra::group::biguint_json(&o);
        }
        crate::schema::tag(v, crate::schema::GN_GROUP)
    }
}

/// `φ_k : π_k(S^(n-1)) -> π_(n+k-2)(S^(n-1))`, `α -> [α, ι_(n-1)]`.
///
/// Zero when either group vanishes or `[ι_(n-1), ι_(n-1)] = 0`; otherwise
/// read from the composition entries of the table.
pub fn phi_map(tables: &SphereTables, n: u32, k: u32) -> Result<Homomorphism, GnError> {
    if n < 2 {
        return Err(GnError::InvalidArgument(format!("phi needs n >= 2, got {n}")));
    }
    let q = n - 1;
    let domain = tables.pi_sphere(q, k)?;
    let codomain = tables.pi_sphere(q, n + k - 2)?;
    if domain.is_trivial() || codomain.is_trivial() {
        return Ok(Homomorphism::zero(domain, codomain));
    }
    if tables.whitehead_square(q)?.order == WhiteheadOrder::Finite(1) {
        return Ok(Homomorphism::zero(domain, codomain));
    }
    match tables.composition(n, k) {
        Some(entry) => Ok(tables.composition_hom(entry)),
        None => Err(GnError::MissingCompositionData { n, k }),
    }
}

fn case_tag(n: u32, k: u32) -> CaseTag {
    if k == 0 {
        CaseTag::K0
    } else if n % 2 == 1 && k + 2 == n {
        CaseTag::KEqNMinus2NOdd
    } else if n % 2 == 0 && k + 1 == n {
        CaseTag::KEqNMinus1NEven
    } else if n % 2 == 1 && k + 3 == 2 * n {
        CaseTag::KEq2nMinus3NOdd
    } else if n >= k + 2 {
        CaseTag::Stable
    } else {
        CaseTag::Generic
    }
}

/// `π_k(G_n)`.
pub fn pi_gn(tables: &SphereTables, n: u32, k: u32) -> Result<GnGroupResult, GnError> {
    if n == 0 {
        return Err(GnError::InvalidArgument("G_n needs n >= 1".into()));
    }
    let tag = case_tag(n, k);
    let resolved = |g: FGAbelianGroup, quotient: FGAbelianGroup, ambient: FGAbelianGroup, ses| GnGroupResult {
        n,
        k,
        case_tag: tag,
        status: GnStatus::Resolved,
        resolved: Some(g),
        ses,
        quotient,
        sub_ambient: ambient,
    };
    if k == 0 {
        // G_n has two components: degree +1 and degree -1.
        let z2 = FGAbelianGroup::cyclic(2);
        return Ok(resolved(z2, FGAbelianGroup::trivial(), FGAbelianGroup::trivial(), None));
    }
    if n == 1 {
        // G_1 is the discrete group {±1}.
        let t = FGAbelianGroup::trivial();
        return Ok(resolved(t.clone(), t.clone(), t, None));
    }
    let q = n - 1;

    let quotient = match phi_map(tables, n, k) {
        Ok(phi) => phi.kernel(),
        // ker φ on π_(2q-1)(S^q) is Z for q even.
        Err(GnError::MissingCompositionData { .. }) if tag == CaseTag::KEq2nMinus3NOdd => FGAbelianGroup::integers(),
        Err(e) => return Err(e),
    };
    let ambient = tables.pi_sphere(q, n + k - 1)?;
    let sub = match phi_map(tables, n, k + 1) {
        Ok(phi) => Some(phi.cokernel()),
        Err(GnError::MissingCompositionData { .. }) | Err(GnError::Table(TableError::OutOfTable(_))) => None,
        Err(e) => return Err(e),
    };
    let Some(sub) = sub else {
        return Ok(GnGroupResult {
            n,
            k,
            case_tag: tag,
            status: GnStatus::SubgroupUnknown,
            resolved: None,
            ses: None,
            quotient,
            sub_ambient: ambient,
        });
    };

    let split = if sub.is_trivial() {
        Some(quotient.clone())
    } else if quotient.is_trivial() {
        Some(sub.clone())
    } else if quotient.is_free() {
        Some(sub.direct_sum(&quotient))
    } else {
        match (sub.order(), quotient.order()) {
            (Some(a), Some(b)) if a.gcd(&b) == BigUint::from(1u8) => Some(sub.direct_sum(&quotient)),
            _ => None,
        }
    };
    let ses = Some((sub, quotient.clone()));
    Ok(match split {
        Some(g) => resolved(g, quotient, ambient, ses),
        None => GnGroupResult {
            n,
            k,
            case_tag: tag,
            status: GnStatus::ExtensionUnresolved,
            resolved: None,
            ses,
            quotient,
            sub_ambient: ambient,
        },
    })
}

/// Degree of the unique infinite homotopy group of `BG_c`, `c = n - m ≥ 2`:
/// `c` for even `c`, `2c - 2` for odd `c`.
pub fn bg_infinite_dim(codim: u32) -> Result<u32, GnError> {
    if codim < 2 {
        return Err(GnError::InvalidArgument(format!("codimension must be at least 2, got {codim}")));
    }
    Ok(if codim % 2 == 0 { codim } else { 2 * codim - 2 })
}
