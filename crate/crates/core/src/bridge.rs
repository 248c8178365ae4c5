//! Translation between quadratic systems and Whitehead-product lifting
//! instances.
//!
//! A system `Σ_{i<j} a_ij^(k) x_i x_j = b_k` in `r` variables becomes the
//! complex obtained from a wedge of `r` copies of `S^c` by attaching one
//! `2c`-cell per equation along `Σ a_ij^(k) [ι_i, ι_j]`, together with a map
//! to `BSO` sending the `k`-th cell to `b_k` times the generator. A lift to
//! `BSO_c` is an Euler class `x = Σ x_i e_i` whose square is the top
//! Pontryagin class, which is exactly the original system. The instance is
//! kept symbolic; no spaces are built.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::diophantine::{
    parse_terms, solve_within_bound, terms_json, DiophantineError, Equation, QuadSystem, SolveOutcome, SolverConfig,
};
use crate::schema::{self, SchemaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BridgeError {
    #[error("half-degree c = {0} is odd; an Euler class squaring to a Pontryagin class needs even c")]
    OddHalfDegree(u32),
    #[error("half-degree c = {0} must be at least 2")]
    HalfDegreeTooSmall(u32),
    #[error("systems with include_squares have no Whitehead-product presentation")]
    DiagonalTermsPresent,
    #[error("a lifting instance needs at least one sphere")]
    EmptyWedge,
    #[error("invalid lifting instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// One `2c`-cell: mixed Whitehead-product attaching coefficients `(i, j, a_ij)`
/// with `i < j`, the degree of its image in `BSO`, and optional diagonal
/// cup-square data `(i, a_ii)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub coeffs: Vec<(usize, usize, i64)>,
    pub bso_degree: i64,
    pub squares: Option<Vec<(usize, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingInstance {
    c: u32,
    r: usize,
    cells: Vec<Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThickeningMetadata {
    pub c: u32,
    pub thickening_dim: u32,
    pub boundary_dim: u32,
    pub target_dim: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    c: u32,
    r: usize,
    cells: Vec<RawCell>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    coeffs: Vec<(i64, i64, i64)>,
    bso_degree: i64,
    #[serde(default)]
    squares: Option<Vec<(i64, i64)>>,
}

fn check_half_degree(c: u32) -> Result<(), BridgeError> {
    if c % 2 == 1 {
        return Err(BridgeError::OddHalfDegree(c));
    }
    if c < 2 {
        return Err(BridgeError::HalfDegreeTooSmall(c));
    }
    Ok(())
}

impl LiftingInstance {
    /// Validating constructor; attaching data is normalised (sorted, zero
    /// coefficients dropped).
    pub fn new(c: u32, r: usize, cells: Vec<Cell>) -> Result<Self, BridgeError> {
        check_half_degree(c)?;
        if r == 0 {
            return Err(BridgeError::EmptyWedge);
        }
        let mut out = Vec::with_capacity(cells.len());
        for (k, cell) in cells.into_iter().enumerate() {
            if cell.coeffs.iter().any(|&(i, j, _)| i >= j) {
                return Err(BridgeError::InvalidInstance(format!(
                    "cell {}: Whitehead-product pairs must satisfy i < j",
                    k + 1
                )));
            }
            let mut terms = cell.coeffs.clone();
            if let Some(sq) = &cell.squares {
                terms.extend(sq.iter().map(|&(i, a)| (i, i, a)));
            }
            // Reuse the system validator for range, duplicate and ordering rules.
            let probe = QuadSystem::new(r, true, vec![Equation::new(terms, cell.bso_degree)]).validate()?;
            let normal = &probe.equations[0].terms;
            let coeffs = normal.iter().filter(|t| t.0 < t.1).copied().collect();
            let squares = cell.squares.as_ref().map(|_| normal.iter().filter(|t| t.0 == t.1).map(|t| (t.0, t.2)).collect());
            out.push(Cell { coeffs, bso_degree: cell.bso_degree, squares });
        }
        Ok(LiftingInstance { c, r, cells: out })
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn from_json(value: Value) -> Result<Self, BridgeError> {
        let value = schema::untag(value, schema::LIFTING_INSTANCE)?;
        let raw: RawInstance = serde_json::from_value(value).map_err(|e| BridgeError::InvalidInstance(e.to_string()))?;
        let cells = raw
            .cells
            .into_iter()
            .map(|c| {
                let squares = match c.squares {
                    None => None,
                    Some(sq) => Some(
                        sq.into_iter()
                            .map(|(i, a)| {
                                if i < 1 {
                                    Err(BridgeError::InvalidInstance(format!("sphere index {i} is not 1-based")))
                                } else {
                                    Ok((i as usize, a))
                                }
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                };
                Ok(Cell { coeffs: parse_terms(&c.coeffs)?, bso_degree: c.bso_degree, squares })
            })
            .collect::<Result<Vec<_>, BridgeError>>()?;
        Self::new(raw.c, raw.r, cells)
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|cell| {
                let mut v = json!({"coeffs": terms_json(&cell.coeffs), "bso_degree": cell.bso_degree});
                if let Some(sq) = &cell.squares {
                    v["squares"] = Value::Array(sq.iter().map(|&(i, a)| json!([i, a])).collect());
                }
                v
            })
            .collect();
        schema::tag(json!({"c": self.c, "r": self.r, "cells": cells}), schema::LIFTING_INSTANCE)
    }
}

/// One `2c`-cell per equation, attached by the equation's coefficients.
pub fn compile_to_lifting(sys: &QuadSystem, c: u32) -> Result<LiftingInstance, BridgeError> {
    check_half_degree(c)?;
    if sys.include_squares {
        return Err(BridgeError::DiagonalTermsPresent);
    }
    let sys = sys.validate()?;
    let cells = sys
        .equations
        .iter()
        .map(|e| Cell { coeffs: e.terms.clone(), bso_degree: e.target, squares: None })
        .collect();
    LiftingInstance::new(c, sys.r, cells)
}

/// The Euler-class equations of an instance.
///
/// Cup squares of the wedge generators vanish unless a cell carries explicit
/// `squares` data, in which case the system includes diagonal terms.
pub fn extract_quadratic(inst: &LiftingInstance) -> QuadSystem {
    let include_squares = inst.cells.iter().any(|c| c.squares.is_some());
    let equations = inst
        .cells
        .iter()
        .map(|cell| {
            let mut terms = cell.coeffs.clone();
            if let Some(sq) = &cell.squares {
                terms.extend(sq.iter().map(|&(i, a)| (i, i, a)));
            }
            Equation::new(terms, cell.bso_degree)
        })
        .collect();
    QuadSystem::new(inst.r, include_squares, equations).validate().expect("instance data is validated on construction")
}

pub fn thickening_metadata(inst: &LiftingInstance) -> ThickeningMetadata {
    thickening_for(inst.c)
}

/// Dimensions of the thickening, its boundary and the immersion target for half-degree `c`.
pub fn thickening_for(c: u32) -> ThickeningMetadata {
    ThickeningMetadata { c, thickening_dim: 4 * c + 1, boundary_dim: 4 * c, target_dim: 5 * c }
}

/// Bounded search for a lift: [`extract_quadratic`] followed by
/// [`solve_within_bound`]. A `Solution` certifies a lift; anything else
/// certifies nothing.
pub fn lifting_solvable(inst: &LiftingInstance, bound: u64, config: &SolverConfig) -> Result<SolveOutcome, BridgeError> {
    Ok(solve_within_bound(&extract_quadratic(inst), bound, config)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(r: usize, eqs: &[(&[(usize, usize, i64)], i64)]) -> QuadSystem {
        QuadSystem::new(r, false, eqs.iter().map(|(t, b)| Equation::new(t.to_vec(), *b)).collect())
    }

    #[test]
    fn smallest_instance() {
        let s = sys(2, &[(&[(1, 2, 1)], 1)]);
        let inst = compile_to_lifting(&s, 2).unwrap();
        assert_eq!(inst.r(), 2);
        assert_eq!(inst.cells().len(), 1);
        assert_eq!(inst.cells()[0].coeffs, vec![(1, 2, 1)]);
        assert_eq!(inst.cells()[0].bso_degree, 1);
        assert_eq!(extract_quadratic(&inst), s.validate().unwrap());
        assert_eq!(compile_to_lifting(&s, 3), Err(BridgeError::OddHalfDegree(3)));
        assert_eq!(compile_to_lifting(&s, 0), Err(BridgeError::HalfDegreeTooSmall(0)));
    }

    #[test]
    fn empty_system() {
        let inst = compile_to_lifting(&sys(3, &[]), 2).unwrap();
        assert!(inst.cells().is_empty());
        assert_eq!(extract_quadratic(&inst).s(), 0);
        assert_eq!(compile_to_lifting(&sys(0, &[]), 2), Err(BridgeError::EmptyWedge));
    }

    #[test]
    fn diagonal_terms_rejected() {
        let mut s = sys(1, &[(&[(1, 1, 1)], 4)]);
        s.include_squares = true;
        assert_eq!(compile_to_lifting(&s, 2), Err(BridgeError::DiagonalTermsPresent));
    }

    #[test]
    fn two_cell_expansion() {
        let cells = vec![
            Cell { coeffs: vec![(1, 2, 2)], bso_degree: 4, squares: None },
            Cell { coeffs: vec![(1, 3, 1), (2, 3, -1)], bso_degree: 0, squares: None },
        ];
        let inst = LiftingInstance::new(2, 3, cells).unwrap();
        let expected = sys(3, &[(&[(1, 2, 2)], 4), (&[(1, 3, 1), (2, 3, -1)], 0)]);
        assert_eq!(extract_quadratic(&inst), expected);
    }

    #[test]
    fn squares_extension() {
        let cells = vec![Cell { coeffs: vec![], bso_degree: 4, squares: Some(vec![(1, 1)]) }];
        let inst = LiftingInstance::new(2, 1, cells).unwrap();
        let s = extract_quadratic(&inst);
        assert!(s.include_squares);
        assert_eq!(s.equations[0].terms, vec![(1, 1, 1)]);
        let outcome = lifting_solvable(&inst, 3, &SolverConfig::default()).unwrap();
        assert_eq!(outcome, SolveOutcome::Solution(vec![2]));
    }

    #[test]
    fn thickening() {
        let m = |c| {
            let t = thickening_for(c);
            (t.thickening_dim, t.boundary_dim, t.target_dim)
        };
        assert_eq!(m(2), (9, 8, 10));
        assert_eq!(m(4), (17, 16, 20));
        assert_eq!(m(6), (25, 24, 30));
    }

    #[test]
    fn json() {
        let text = r#"{"c":2,"r":2,"cells":[{"coeffs":[[1,2,1]],"bso_degree":1}]}"#;
        let inst = LiftingInstance::from_json(serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(
            schema::to_canonical_string(&inst.to_json()),
            r#"{"c":2,"cells":[{"bso_degree":1,"coeffs":[[1,2,1]]}],"r":2,"schema":"lifting-instance/1"}"#
        );
        for bad in [
            r#"{"c":3,"r":2,"cells":[]}"#,
            r#"{"c":2,"r":0,"cells":[]}"#,
            r#"{"c":2,"r":2,"cells":[{"coeffs":[[2,1,1]],"bso_degree":1}]}"#,
            r#"{"c":2,"r":2,"cells":[{"coeffs":[[1,3,1]],"bso_degree":1}]}"#,
            r#"{"c":2,"r":2,"cells":[],"extra":1}"#,
        ] {
            assert!(LiftingInstance::from_json(serde_json::from_str(bad).unwrap()).is_err(), "{bad}");
        }
    }

    #[test]
    fn solvability_examples() {
        let cfg = SolverConfig::default();
        let inst = compile_to_lifting(&sys(2, &[(&[(1, 2, 1)], 1)]), 2).unwrap();
        assert_eq!(lifting_solvable(&inst, 1, &cfg).unwrap(), SolveOutcome::Solution(vec![1, 1]));
        let three = sys(3, &[(&[(1, 2, 1)], 3), (&[(1, 3, 1)], 2), (&[(2, 3, 1)], 6)]);
        let inst = compile_to_lifting(&three, 2).unwrap();
        assert_eq!(lifting_solvable(&inst, 3, &cfg).unwrap(), SolveOutcome::Solution(vec![1, 3, 2]));
        let parity = compile_to_lifting(&sys(2, &[(&[(1, 2, 2)], 3)]), 2).unwrap();
        assert_eq!(lifting_solvable(&parity, 10, &cfg).unwrap(), SolveOutcome::NoSolutionWithinBound(10));
    }
}
