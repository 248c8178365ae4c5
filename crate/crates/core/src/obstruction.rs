//! Characteristic-class data for manifolds and the decidable rational
//! obstruction tests.
//!
//! Manifolds enter only through their class data: graded cohomology,
//! Pontryagin class coordinates, and (optionally) the cup-product pairings on
//! a middle degree `c`. The finite-order obstructions that follow the
//! rational layer are not computed; every unobstructed report carries the
//! residual flag.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{FGAbelianGroup, IntMatrix};
use crate::bridge::LiftingInstance;
use crate::diophantine::{Equation, QuadSystem};
use crate::schema::{self, SchemaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("missing class data: {0}")]
    MissingClassData(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("codimension {0} is odd; the Euler-square problem needs even codimension")]
    OddCodimension(u32),
    #[error("target dimension {n} must exceed the manifold dimension {m}")]
    TargetTooSmall { m: u32, n: u32 },
    #[error("invalid class data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// Cup pairings `H^c ⊗ H^c -> H^{2c}`: one symmetric matrix per basis class
/// of the free part of `H^{2c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleForms {
    pub c: u32,
    pub forms: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldClassData {
    m: u32,
    orientable: bool,
    closed: bool,
    cohomology: BTreeMap<u32, FGAbelianGroup>,
    pontryagin: BTreeMap<u32, Vec<i64>>,
    middle: Option<MiddleForms>,
}

impl ManifoldClassData {
    /// Validating constructor.
    ///
    /// Each Pontryagin key `i` needs `1 ≤ i`, `4i ≤ m`, a declared `H^{4i}`,
    /// and one coordinate per free generator of it. Middle forms need declared
    /// `H^c` and `H^{2c}`, one form per free generator of `H^{2c}`, each a
    /// symmetric square matrix of the free rank of `H^c`.
    pub fn new(
        m: u32,
        orientable: bool,
        closed: bool,
        cohomology: BTreeMap<u32, FGAbelianGroup>,
        pontryagin: BTreeMap<u32, Vec<i64>>,
        middle: Option<MiddleForms>,
    ) -> Result<Self, ObstructionError> {
        let bad = |msg: String| Err(ObstructionError::InvalidData(msg));
        if let Some(&d) = cohomology.keys().find(|&&d| d > m) {
            return bad(format!("cohomology degree {d} exceeds the dimension {m}"));
        }
        for (&i, coords) in &pontryagin {
            if i == 0 || 4 * i > m {
                return bad(format!("Pontryagin class p_{i} must satisfy 1 <= i and 4i <= {m}"));
            }
            let Some(h) = cohomology.get(&(4 * i)) else {
                return bad(format!("p_{i} given but H^{} is not declared", 4 * i));
            };
            if coords.len() != h.free_rank() {
                return bad(format!("p_{i} has {} coordinates, H^{} has free rank {}", coords.len(), 4 * i, h.free_rank()));
            }
        }
        if let Some(mid) = &middle {
            let c = mid.c;
            if c == 0 || 2 * c > m {
                return bad(format!("middle degree c = {c} needs 1 <= c and 2c <= {m}"));
            }
            let (Some(hc), Some(h2c)) = (cohomology.get(&c), cohomology.get(&(2 * c))) else {
                return bad(format!("middle forms need H^{c} and H^{} declared", 2 * c));
            };
            if mid.forms.len() != h2c.free_rank() {
                return bad(format!("{} forms given, H^{} has free rank {}", mid.forms.len(), 2 * c, h2c.free_rank()));
            }
            let r = hc.free_rank();
            for (k, f) in mid.forms.iter().enumerate() {
                if f.rows() != r || f.cols() != r {
                    return bad(format!("form {} is {}x{}, H^{c} has free rank {r}", k + 1, f.rows(), f.cols()));
                }
                if !f.is_symmetric() {
                    return bad(format!("form {} is not symmetric", k + 1));
                }
            }
        }
        Ok(ManifoldClassData { m, orientable, closed, cohomology, pontryagin, middle })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn cohomology(&self, degree: u32) -> Option<&FGAbelianGroup> {
        self.cohomology.get(&degree)
    }

    pub fn pontryagin(&self, i: u32) -> Option<&[i64]> {
        self.pontryagin.get(&i).map(Vec::as_slice)
    }

    pub fn middle(&self) -> Option<&MiddleForms> {
        self.middle.as_ref()
    }

    pub fn from_json(value: Value) -> Result<Self, ObstructionError> {
        let value = schema::untag(value, schema::MANIFOLD_CLASS_DATA)?;
        let raw: RawData = serde_json::from_value(value).map_err(|e| ObstructionError::InvalidData(e.to_string()))?;
        let key = |s: &str| -> Result<u32, ObstructionError> {
            s.parse().map_err(|_| ObstructionError::InvalidData(format!("`{s}` is not a non-negative integer key")))
        };
        let mut cohomology = BTreeMap::new();
        for (d, g) in &raw.cohomology {
            if g.torsion.iter().any(|&t| t < 2) {
                return Err(ObstructionError::InvalidData(format!("H^{d} torsion coefficients must be at least 2")));
            }
            let orders = std::iter::repeat_n(BigUint::from(0u8), g.rank).chain(g.torsion.iter().map(|&t| BigUint::from(t)));
            cohomology.insert(key(d)?, FGAbelianGroup::from_cyclic_orders(orders));
        }
        let mut pontryagin = BTreeMap::new();
        for (i, v) in raw.pontryagin {
            pontryagin.insert(key(&i)?, v);
        }
        let middle = match raw.middle {
            None => None,
            Some(mid) => {
                let forms = mid
                    .forms
                    .iter()
                    .map(|rows| {
                        let cols = rows.first().map_or(0, Vec::len);
                        let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                        IntMatrix::from_big_rows_with_cols(big, cols).map_err(|e| ObstructionError::InvalidData(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
                Some(MiddleForms { c: mid.c, forms })
            }
        };
        Self::new(raw.m, raw.orientable, raw.closed.unwrap_or(true), cohomology, pontryagin, middle)
    }

    pub fn to_json(&self) -> Value {
        let mut coh = Map::new();
        for (d, g) in &self.cohomology {
            let torsion: Vec<Value> = g.torsion().iter().map(crate::algebra::group::biguint_json).collect();
            coh.insert(d.to_string(), json!({"rank": g.free_rank(), "torsion": torsion}));
        }
        let mut pont = Map::new();
        for (i, v) in &self.pontryagin {
            pont.insert(i.to_string(), json!(v));
        }
        let mut out = json!({
            "m": self.m,
            "orientable": self.orientable,
            "closed": self.closed,
            "cohomology": coh,
            "pontryagin": pont,
        });
        if let Some(mid) = &self.middle {
            let forms: Vec<Value> = mid
                .forms
                .iter()
                .map(|f| {
                    Value::Array(
                        f.to_rows()
                            .into_iter()
                            .map(|r| Value::Array(r.into_iter().map(|x| json!(x.to_i64().expect("small entry"))).collect()))
                            .collect(),
                    )
                })
                .collect();
            out["middle"] = json!({"c": mid.c, "forms": forms});
        }
        schema::tag(out, schema::MANIFOLD_CLASS_DATA)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawData {
    m: u32,
    orientable: bool,
    #[serde(default)]
    closed: Option<bool>,
    #[serde(default)]
    cohomology: BTreeMap<String, RawGroup>,
    #[serde(default)]
    pontryagin: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    middle: Option<RawMiddle>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMiddle {
    c: u32,
    forms: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionVerdict {
    RationallyUnobstructed,
    /// The least window degree `i` with `p_i ≠ 0`.
    Obstructed(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub verdict: ObstructionVerdict,
    /// Finite-order obstructions were not computed.
    pub residual: bool,
    /// Pontryagin indices `i` that were tested.
    pub checked: Vec<u32>,
    /// Window indices with `4i > m`, where `p_i` vanishes for dimension reasons.
    pub vacuous: Vec<u32>,
}

impl ObstructionReport {
    fn from_window(data: &ManifoldClassData, checked: Vec<u32>, vacuous: Vec<u32>) -> Result<Self, ObstructionError> {
        for &i in &checked {
            let coords = data.pontryagin(i).ok_or_else(|| ObstructionError::MissingClassData(format!("p_{i}")))?;
            if coords.iter().any(|&x| x != 0) {
                return Ok(ObstructionReport { verdict: ObstructionVerdict::Obstructed(i), residual: false, checked, vacuous });
            }
        }
        Ok(ObstructionReport { verdict: ObstructionVerdict::RationallyUnobstructed, residual: true, checked, vacuous })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "residual": if self.residual { Value::from("FiniteObstructionsNotComputed") } else { Value::Null },
            "checked_degrees": self.checked,
            "vacuous_degrees": self.vacuous,
        });
        match self.verdict {
            ObstructionVerdict::RationallyUnobstructed => v["verdict"] = json!("RationallyUnobstructed"),
            ObstructionVerdict::Obstructed(i) => {
                v["verdict"] = json!("Obstructed");
                v["witness_degree"] = json!(i);
            }
        }
        schema::tag(v, schema::OBSTRUCTION_REPORT)
    }
}

fn check_target(data: &ManifoldClassData, n: u32) -> Result<(), ObstructionError> {
    if n <= data.m {
        return Err(ObstructionError::TargetTooSmall { m: data.m, n });
    }
    Ok(())
}

/// Immersion test: `p_i = 0` for every `i` with `2(n - m) < 4i ≤ m`.
pub fn pontryagin_obstruction(data: &ManifoldClassData, n: u32) -> Result<ObstructionReport, ObstructionError> {
    check_target(data, n)?;
    let lo = 2 * (n - data.m);
    let checked = (1..=data.m / 4).filter(|&i| 4 * i > lo).collect();
    ObstructionReport::from_window(data, checked, Vec::new())
}

/// Closed-embedding test: the normal Euler class vanishes, which widens the
/// window to `2(n - m) ≤ 4i ≤ 2m`. Indices with `4i > m` pass automatically
/// and are recorded as vacuous.
pub fn closed_embedding_obstruction(data: &ManifoldClassData, n: u32) -> Result<ObstructionReport, ObstructionError> {
    if !data.orientable {
        return Err(ObstructionError::NotApplicable("the manifold is not orientable".into()));
    }
    if !data.closed {
        return Err(ObstructionError::NotApplicable("the manifold is not closed".into()));
    }
    check_target(data, n)?;
    let lo = 2 * (n - data.m);
    let window = (1..=data.m / 2).filter(|&i| 4 * i >= lo);
    let (checked, vacuous) = window.partition(|&i| 4 * i <= data.m);
    ObstructionReport::from_window(data, checked, vacuous)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSquareProblem {
    pub system: QuadSystem,
    /// `H^c` has torsion, which the system ignores.
    pub torsion_ignored: bool,
}

/// Equations for an Euler class `x = Σ x_i e_i` in the free part of `H^c`,
/// `c = n - m`, with `x² = p_{c/2}`.
///
/// Equation `k` is `Σ_{i≤j} q_ij^(k) x_i x_j = (p_{c/2})_k`, where `q_ij^(k)`
/// is read from the upper triangle of the `k`-th middle form.
pub fn euler_square_problem(data: &ManifoldClassData, n: u32) -> Result<EulerSquareProblem, ObstructionError> {
    check_target(data, n)?;
    let c = n - data.m;
    if c % 2 == 1 {
        return Err(ObstructionError::OddCodimension(c));
    }
    let mid = data
        .middle
        .as_ref()
        .filter(|mid| mid.c == c)
        .ok_or_else(|| ObstructionError::MissingClassData(format!("middle forms for c = {c}")))?;
    let r = data.cohomology[&c].free_rank();
    let targets: Vec<i64> = match data.pontryagin(c / 2) {
        Some(p) => p.to_vec(),
        None if mid.forms.is_empty() => Vec::new(),
        None => return Err(ObstructionError::MissingClassData(format!("p_{}", c / 2))),
    };
    let equations = mid
        .forms
        .iter()
        .zip(targets)
        .map(|(f, b)| {
            let terms = (0..r)
                .flat_map(|i| (i..r).map(move |j| (i, j)))
                .map(|(i, j)| (i + 1, j + 1, f.get(i, j).to_i64().expect("form entries fit in i64")))
                .collect();
            Equation::new(terms, b)
        })
        .collect();
    let system = QuadSystem::new(r, true, equations).validate().expect("indices are in range by construction");
    let torsion_ignored = !data.cohomology[&c].torsion().is_empty();
    Ok(EulerSquareProblem { system, torsion_ignored })
}

/// Class data of the boundary of the thickening of a lifting instance: a
/// closed `4c`-manifold with `H^c = Z^r`, `H^{2c} = Z^s`, cup pairings given
/// by the attaching coefficients, and `p_{c/2}` given by the BSO degrees.
pub fn class_data_from_lifting(inst: &LiftingInstance) -> ManifoldClassData {
    let c = inst.c();
    let (r, s) = (inst.r(), inst.cells().len());
    let cohomology = BTreeMap::from([
        (0, FGAbelianGroup::integers()),
        (c, FGAbelianGroup::free(r)),
        (2 * c, FGAbelianGroup::free(s)),
        (4 * c, FGAbelianGroup::integers()),
    ]);
    let forms = inst
        .cells()
        .iter()
        .map(|cell| {
            let mut f = IntMatrix::zeros(r, r);
            for &(i, j, a) in &cell.coeffs {
                f.set(i - 1, j - 1, BigInt::from(a));
                f.set(j - 1, i - 1, BigInt::from(a));
            }
            for &(i, a) in cell.squares.iter().flatten() {
                f.set(i - 1, i - 1, BigInt::from(a));
            }
            f
        })
        .collect();
    let p = inst.cells().iter().map(|cell| cell.bso_degree).collect();
    ManifoldClassData::new(
        4 * c,
        true,
        true,
        cohomology,
        BTreeMap::from([(c / 2, p)]),
        Some(MiddleForms { c, forms }),
    )
    .expect("instance data is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::{compile_to_lifting, extract_quadratic};
    use crate::diophantine::{solve_within_bound, SolveOutcome, SolverConfig};

    /// `p(HP²) = (1 + u)^6 / (1 + 4u)` truncated at `u³`.
    fn hp2_pontryagin() -> Vec<i64> {
        let mut num = [1i64, 0, 0];
        for _ in 0..6 {
            num = [num[0], num[1] + num[0], num[2] + num[1]];
        }
        let inv = [1i64, -4, 16];
        vec![num[0] * inv[1] + num[1] * inv[0], num[0] * inv[2] + num[1] * inv[1] + num[2] * inv[0]]
    }

    fn hp2() -> ManifoldClassData {
        let p = hp2_pontryagin();
        assert_eq!(p, vec![2, 7]);
        let coh = BTreeMap::from([(0, FGAbelianGroup::integers()), (4, FGAbelianGroup::integers()), (8, FGAbelianGroup::integers())]);
        ManifoldClassData::new(8, true, true, coh, BTreeMap::from([(1, vec![p[0]]), (2, vec![p[1]])]), None).unwrap()
    }

    fn zero_data(m: u32) -> ManifoldClassData {
        let coh: BTreeMap<u32, FGAbelianGroup> = (0..=m / 4).map(|i| (4 * i, FGAbelianGroup::integers())).collect();
        let p = (1..=m / 4).map(|i| (i, vec![0])).collect();
        ManifoldClassData::new(m, true, true, coh, p, None).unwrap()
    }

    #[test]
    fn hp2_immersion_window() {
        let r = pontryagin_obstruction(&hp2(), 11).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::Obstructed(2));
        assert!(!r.residual);
        let r = pontryagin_obstruction(&hp2(), 13).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::RationallyUnobstructed);
        assert!(r.residual && r.checked.is_empty());
        // Left edge is strict: n = 12 gives 2(n - m) = 8 = 4i, so i = 2 is excluded.
        assert_eq!(pontryagin_obstruction(&hp2(), 12).unwrap().verdict, ObstructionVerdict::RationallyUnobstructed);
        assert_eq!(pontryagin_obstruction(&hp2(), 9).unwrap().verdict, ObstructionVerdict::Obstructed(1));
    }

    #[test]
    fn hp2_closed_embedding_window() {
        let r = closed_embedding_obstruction(&hp2(), 12).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::Obstructed(2));
        let r = closed_embedding_obstruction(&hp2(), 16).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::RationallyUnobstructed);
        assert!(r.checked.is_empty());
        assert_eq!(r.vacuous, vec![4]);
        assert!(closed_embedding_obstruction(&hp2(), 8).is_err());
    }

    #[test]
    fn applicability() {
        let mut d = hp2();
        d.orientable = false;
        assert!(matches!(closed_embedding_obstruction(&d, 12), Err(ObstructionError::NotApplicable(_))));
        let mut d = hp2();
        d.closed = false;
        assert!(matches!(closed_embedding_obstruction(&d, 12), Err(ObstructionError::NotApplicable(_))));
    }

    #[test]
    fn missing_data() {
        let coh = BTreeMap::from([(4, FGAbelianGroup::integers()), (8, FGAbelianGroup::integers())]);
        let d = ManifoldClassData::new(8, true, true, coh, BTreeMap::new(), None).unwrap();
        assert_eq!(pontryagin_obstruction(&d, 11), Err(ObstructionError::MissingClassData("p_2".into())));
        assert_eq!(pontryagin_obstruction(&d, 13).unwrap().verdict, ObstructionVerdict::RationallyUnobstructed);
    }

    #[test]
    fn zero_data_never_obstructed() {
        for m in 1..=16 {
            let d = zero_data(m);
            for n in m + 1..=2 * m + 4 {
                assert_eq!(pontryagin_obstruction(&d, n).unwrap().verdict, ObstructionVerdict::RationallyUnobstructed);
                assert_eq!(closed_embedding_obstruction(&d, n).unwrap().verdict, ObstructionVerdict::RationallyUnobstructed);
            }
        }
    }

    #[test]
    fn validation() {
        let coh = BTreeMap::from([(4, FGAbelianGroup::free(2))]);
        assert!(ManifoldClassData::new(8, true, true, coh.clone(), BTreeMap::from([(1, vec![1])]), None).is_err());
        assert!(ManifoldClassData::new(8, true, true, coh.clone(), BTreeMap::from([(3, vec![1])]), None).is_err());
        assert!(ManifoldClassData::new(8, true, true, coh, BTreeMap::from([(1, vec![1, 0])]), None).is_ok());
        let coh = BTreeMap::from([(2, FGAbelianGroup::free(2)), (4, FGAbelianGroup::integers())]);
        let asym = IntMatrix::from_rows(&[[0, 1], [0, 0]]).unwrap();
        assert!(ManifoldClassData::new(8, true, true, coh, BTreeMap::new(), Some(MiddleForms { c: 2, forms: vec![asym] })).is_err());
    }

    #[test]
    fn euler_square_examples() {
        let cfg = SolverConfig::default();
        let coh = BTreeMap::from([(2, FGAbelianGroup::integers()), (4, FGAbelianGroup::integers())]);
        let zero = MiddleForms { c: 2, forms: vec![IntMatrix::zeros(1, 1)] };
        let d = ManifoldClassData::new(8, true, true, coh.clone(), BTreeMap::from([(1, vec![0])]), Some(zero)).unwrap();
        let e = euler_square_problem(&d, 10).unwrap();
        assert!(e.system.include_squares);
        assert_eq!(solve_within_bound(&e.system, 0, &cfg).unwrap(), SolveOutcome::Solution(vec![0]));

        let one = MiddleForms { c: 2, forms: vec![IntMatrix::from_rows(&[[1]]).unwrap()] };
        let d = ManifoldClassData::new(8, true, true, coh, BTreeMap::from([(1, vec![4])]), Some(one)).unwrap();
        let e = euler_square_problem(&d, 10).unwrap();
        assert_eq!(e.system.equations[0].terms, vec![(1, 1, 1)]);
        assert_eq!(solve_within_bound(&e.system, 3, &cfg).unwrap(), SolveOutcome::Solution(vec![2]));
        assert_eq!(euler_square_problem(&d, 11), Err(ObstructionError::OddCodimension(3)));
        assert!(matches!(euler_square_problem(&d, 12), Err(ObstructionError::MissingClassData(_))));
    }

    #[test]
    fn torsion_flag() {
        let coh = BTreeMap::from([
            (2, FGAbelianGroup::from_cyclic_orders([0u8, 2].map(BigUint::from))),
            (4, FGAbelianGroup::integers()),
        ]);
        let f = MiddleForms { c: 2, forms: vec![IntMatrix::from_rows(&[[2]]).unwrap()] };
        let d = ManifoldClassData::new(8, true, true, coh, BTreeMap::from([(1, vec![2])]), Some(f)).unwrap();
        assert!(euler_square_problem(&d, 10).unwrap().torsion_ignored);
    }

    #[test]
    fn bridge_coherence() {
        let sys = QuadSystem::new(2, false, vec![Equation::new(vec![(1, 2, 1)], 1)]);
        for c in [2, 4, 6] {
            let inst = compile_to_lifting(&sys, c).unwrap();
            let data = class_data_from_lifting(&inst);
            let e = euler_square_problem(&data, 5 * c).unwrap();
            let x = extract_quadratic(&inst);
            assert_eq!((e.system.r, &e.system.equations), (x.r, &x.equations));
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"m":8,"orientable":true,"cohomology":{"0":{"rank":1},"4":{"rank":1,"torsion":[]},"8":{"rank":1}},"pontryagin":{"1":[2],"2":[7]}}"#;
        let d = ManifoldClassData::from_json(serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(d, hp2());
        let again = ManifoldClassData::from_json(d.to_json()).unwrap();
        assert_eq!(again, d);
        let bad = r#"{"m":8,"orientable":true,"cohomology":{"x":{"rank":1}}}"#;
        assert!(ManifoldClassData::from_json(serde_json::from_str(bad).unwrap()).is_err());
    }
}
