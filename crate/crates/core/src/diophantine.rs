//! Quadratic Diophantine systems `Σ a_ij^(k) x_i x_j = b_k` and a bounded,
//! budgeted search for integer solutions.
//!
//! Solvability of such systems is undecidable in general, so the solver only
//! semi-decides: it scans a box `|x_i| ≤ bound` and reports either the
//! lexicographically first solution or that none exists in the box. Modular
//! filters give sound proofs of unsatisfiability when they apply.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::schema::{self, SchemaError};

/// Default cap on search nodes for both the box scan and modular filters.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
/// Largest modulus accepted by [`modular_obstruction`] by default.
pub const DEFAULT_MODULUS_CAP: u64 = 64;
/// Largest box half-width accepted; keeps every evaluation inside `i128`.
pub const MAX_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiophantineError {
    #[error("malformed indices: {0}")]
    MalformedIndices(String),
    #[error("coefficient of x_{i} x_{j} given twice with different values in equation {equation}")]
    ConflictingCoefficient { equation: usize, i: usize, j: usize },
    #[error("node budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("bound {0} exceeds the supported maximum {MAX_BOUND}")]
    BoundTooLarge(u64),
    #[error("modulus {modulus} outside 2..={cap}")]
    InvalidModulus { modulus: u64, cap: u64 },
    #[error("invalid system document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("internal error: assignment {0:?} does not satisfy the system")]
    UnsoundSolution(Vec<i64>),
}

/// One equation: a list of `(i, j, a_ij)` terms (1-based, `i ≤ j`) and a target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub terms: Vec<(usize, usize, i64)>,
    pub target: i64,
}

impl Equation {
    pub fn new(terms: Vec<(usize, usize, i64)>, target: i64) -> Self {
        Equation { terms, target }
    }

    fn value(&self, x: &[i64]) -> i128 {
        self.terms.iter().map(|&(i, j, a)| a as i128 * x[i - 1] as i128 * x[j - 1] as i128).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSystem {
    pub r: usize,
    pub include_squares: bool,
    pub equations: Vec<Equation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    r: usize,
    #[serde(default)]
    include_squares: bool,
    equations: Vec<RawEquation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEquation {
    coeffs: Vec<(i64, i64, i64)>,
    target: i64,
}

pub(crate) fn parse_terms(raw: &[(i64, i64, i64)]) -> Result<Vec<(usize, usize, i64)>, DiophantineError> {
    raw.iter()
        .map(|&(i, j, a)| {
            if i < 1 || j < 1 {
                return Err(DiophantineError::MalformedIndices(format!("indices are 1-based, got ({i}, {j})")));
            }
            Ok((i as usize, j as usize, a))
        })
        .collect()
}

pub(crate) fn terms_json(terms: &[(usize, usize, i64)]) -> Value {
    Value::Array(terms.iter().map(|&(i, j, a)| json!([i, j, a])).collect())
}

impl QuadSystem {
    pub fn new(r: usize, include_squares: bool, equations: Vec<Equation>) -> Self {
        QuadSystem { r, include_squares, equations }
    }

    /// Number of equations.
    pub fn s(&self) -> usize {
        self.equations.len()
    }

    /// Canonical form: terms sorted by `(i, j)`, repeated identical terms
    /// merged, zero coefficients dropped.
    ///
    /// An index pair with `i > j`, an index outside `1..=r`, or `i = j`
    /// without `include_squares` is [`DiophantineError::MalformedIndices`].
    /// The same pair listed twice with different coefficients is
    /// [`DiophantineError::ConflictingCoefficient`].
    pub fn validate(&self) -> Result<QuadSystem, DiophantineError> {
        let mut equations = Vec::with_capacity(self.equations.len());
        for (k, eq) in self.equations.iter().enumerate() {
            let mut coeffs: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for &(i, j, a) in &eq.terms {
                if i < 1 || j > self.r || i > j {
                    return Err(DiophantineError::MalformedIndices(format!(
                        "equation {}: pair ({i}, {j}) with r = {}",
                        k + 1,
                        self.r
                    )));
                }
                if i == j && !self.include_squares {
                    return Err(DiophantineError::MalformedIndices(format!(
                        "equation {}: square term ({i}, {i}) needs include_squares",
                        k + 1
                    )));
                }
                if let Some(&prev) = coeffs.get(&(i, j)) {
                    if prev != a {
                        return Err(DiophantineError::ConflictingCoefficient { equation: k + 1, i, j });
                    }
                }
                coeffs.insert((i, j), a);
            }
            let terms = coeffs.into_iter().filter(|&(_, a)| a != 0).map(|((i, j), a)| (i, j, a)).collect();
            equations.push(Equation { terms, target: eq.target });
        }
        Ok(QuadSystem { r: self.r, include_squares: self.include_squares, equations })
    }

    /// Whether `x` satisfies every equation exactly.
    pub fn is_satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.r && self.equations.iter().all(|e| e.value(x) == e.target as i128)
    }

    pub fn from_json(value: Value) -> Result<QuadSystem, DiophantineError> {
        let value = schema::untag(value, schema::QUAD_SYSTEM)?;
        let raw: RawSystem = serde_json::from_value(value).map_err(|e| DiophantineError::InvalidDocument(e.to_string()))?;
        let equations = raw
            .equations
            .iter()
            .map(|e| Ok(Equation { terms: parse_terms(&e.coeffs)?, target: e.target }))
            .collect::<Result<_, DiophantineError>>()?;
        QuadSystem { r: raw.r, include_squares: raw.include_squares, equations }.validate()
    }

    /// Schema-tagged JSON of this system as stored (call [`validate`](Self::validate) first for canonical output).
    pub fn to_json(&self) -> Value {
        let equations: Vec<Value> = self
            .equations
            .iter()
            .map(|e| json!({"coeffs": terms_json(&e.terms), "target": e.target}))
            .collect();
        schema::tag(json!({"r": self.r, "include_squares": self.include_squares, "equations": equations}), schema::QUAD_SYSTEM)
    }
}

/// Why a system has no integer solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnsatWitness {
    /// No assignment satisfies the system modulo this number.
    Modulus(u64),
    /// This equation (1-based) has no terms but a nonzero target.
    ZeroEquation(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Vec<i64>),
    NoSolutionWithinBound(u64),
    UnsatisfiableProof(UnsatWitness),
}

impl SolveOutcome {
    /// A `Solution`, re-verified by substitution.
    pub fn solution(sys: &QuadSystem, x: Vec<i64>) -> Result<SolveOutcome, DiophantineError> {
        if sys.is_satisfied_by(&x) {
            Ok(SolveOutcome::Solution(x))
        } else {
            Err(DiophantineError::UnsoundSolution(x))
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            SolveOutcome::Solution(x) => json!({"outcome": "Solution", "assignment": x}),
            SolveOutcome::NoSolutionWithinBound(b) => json!({"outcome": "NoSolutionWithinBound", "bound": b}),
            SolveOutcome::UnsatisfiableProof(UnsatWitness::Modulus(m)) => {
                json!({"outcome": "UnsatisfiableProof", "witness": {"kind": "modulus", "modulus": m}})
            }
            SolveOutcome::UnsatisfiableProof(UnsatWitness::ZeroEquation(k)) => {
                json!({"outcome": "UnsatisfiableProof", "witness": {"kind": "zero-equation", "equation": k}})
            }
        };
        schema::tag(body, schema::SOLVE_OUTCOME)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub node_budget: u64,
    pub modulus_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: DEFAULT_NODE_BUDGET, modulus_cap: DEFAULT_MODULUS_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularVerdict {
    Unsatisfiable,
    Inconclusive,
}

/// Equations grouped by the highest variable they involve, so each one is
/// checked as soon as its last variable is assigned.
fn checkpoints(sys: &QuadSystem) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); sys.r + 1];
    for (k, e) in sys.equations.iter().enumerate() {
        let last = e.terms.iter().map(|&(_, j, _)| j).max().unwrap_or(0);
        at[last].push(k);
    }
    at
}

struct Search<'a> {
    sys: &'a QuadSystem,
    at: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), DiophantineError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(DiophantineError::BudgetExceeded(self.budget));
        }
        Ok(())
    }
}

/// Lexicographically first solution with every `|x_i| ≤ bound`, or
/// `NoSolutionWithinBound`.
///
/// Every equation is invariant under `x -> -x`, so only `x_1 ≥ 0` is
/// scanned; `x_1` runs over `0..=bound` and the remaining variables over
/// `-bound..=bound`, both ascending.
pub fn solve_within_bound(sys: &QuadSystem, bound: u64, config: &SolverConfig) -> Result<SolveOutcome, DiophantineError> {
    if bound > MAX_BOUND {
        return Err(DiophantineError::BoundTooLarge(bound));
    }
    let sys = sys.validate()?;
    if sys.equations.iter().any(|e| e.terms.is_empty() && e.target != 0) {
        return Ok(SolveOutcome::NoSolutionWithinBound(bound));
    }
    if sys.r == 0 {
        return SolveOutcome::solution(&sys, Vec::new());
    }
    let mut search = Search { at: checkpoints(&sys), sys: &sys, budget: config.node_budget, nodes: 0 };
    let mut x = vec![0i64; sys.r];
    let b = bound as i64;
    if box_dfs(&mut search, &mut x, 0, b)? {
        SolveOutcome::solution(&sys, x)
    } else {
        Ok(SolveOutcome::NoSolutionWithinBound(bound))
    }
}

fn box_dfs(s: &mut Search<'_>, x: &mut [i64], t: usize, b: i64) -> Result<bool, DiophantineError> {
    let lo = if t == 0 { 0 } else { -b };
    for v in lo..=b {
        s.tick()?;
        x[t] = v;
        let ok = s.at[t + 1].iter().all(|&k| {
            let e = &s.sys.equations[k];
            e.value(x) == e.target as i128
        });
        if !ok {
            continue;
        }
        if t + 1 == x.len() || box_dfs(s, x, t + 1, b)? {
            return Ok(true);
        }
    }
    x[t] = 0;
    Ok(false)
}

/// Exhaustive check over `(Z/m)^r`: `Unsatisfiable` proves that no integer
/// solution exists.
pub fn modular_obstruction(sys: &QuadSystem, m: u64, config: &SolverConfig) -> Result<ModularVerdict, DiophantineError> {
    if m < 2 || m > config.modulus_cap {
        return Err(DiophantineError::InvalidModulus { modulus: m, cap: config.modulus_cap });
    }
    let sys = sys.validate()?;
    let total = (m as u128).checked_pow(sys.r as u32);
    if total.is_none_or(|t| t > config.node_budget as u128) {
        return Err(DiophantineError::BudgetExceeded(config.node_budget));
    }
    let mut search = Search { at: checkpoints(&sys), sys: &sys, budget: config.node_budget, nodes: 0 };
    let m = m as i64;
    let zero_ok = search.at[0].iter().all(|&k| (search.sys.equations[k].target as i128).rem_euclid(m as i128) == 0);
    if !zero_ok {
        return Ok(ModularVerdict::Unsatisfiable);
    }
    if sys.r == 0 {
        return Ok(ModularVerdict::Inconclusive);
    }
    let mut x = vec![0i64; sys.r];
    if mod_dfs(&mut search, &mut x, 0, m)? {
        Ok(ModularVerdict::Inconclusive)
    } else {
        Ok(ModularVerdict::Unsatisfiable)
    }
}

fn mod_dfs(s: &mut Search<'_>, x: &mut [i64], t: usize, m: i64) -> Result<bool, DiophantineError> {
    for v in 0..m {
        s.tick()?;
        x[t] = v;
        let ok = s.at[t + 1].iter().all(|&k| {
            let e = &s.sys.equations[k];
            (e.value(x) - e.target as i128).rem_euclid(m as i128) == 0
        });
        if ok && (t + 1 == x.len() || mod_dfs(s, x, t + 1, m)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Zero-equation and modular filters (moduli `2..=max_modulus`), then the
/// bounded scan.
pub fn solve_with_filters(
    sys: &QuadSystem,
    bound: u64,
    max_modulus: Option<u64>,
    config: &SolverConfig,
) -> Result<SolveOutcome, DiophantineError> {
    let sys = sys.validate()?;
    if let Some(k) = sys.equations.iter().position(|e| e.terms.is_empty() && e.target != 0) {
        return Ok(SolveOutcome::UnsatisfiableProof(UnsatWitness::ZeroEquation(k + 1)));
    }
    if let Some(max) = max_modulus {
        for m in 2..=max {
            if modular_obstruction(&sys, m, config)? == ModularVerdict::Unsatisfiable {
                return Ok(SolveOutcome::UnsatisfiableProof(UnsatWitness::Modulus(m)));
            }
        }
    }
    solve_within_bound(&sys, bound, config)
}
