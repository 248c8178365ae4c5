//! Versioned JSON envelopes.
//!
//! Every document the command-line tool reads or writes carries a
//! `"schema": "<name>/1"` field. Input documents may omit it; a present but
//! different tag is rejected. Output is compact JSON with object keys in
//! sorted order, so identical inputs give byte-identical output.

use serde_json::Value;
use thiserror::Error;

pub const QUAD_SYSTEM: &str = "quad-system/1";
pub const LIFTING_INSTANCE: &str = "lifting-instance/1";
pub const THICKENING: &str = "thickening-metadata/1";
pub const MANIFOLD_CLASS_DATA: &str = "manifold-class-data/1";
pub const SOLVE_OUTCOME: &str = "solve-outcome/1";
pub const OBSTRUCTION_REPORT: &str = "obstruction-report/1";
pub const RANGE_VERDICT: &str = "range-verdict/1";
pub const STABILIZATION: &str = "stabilization/1";
pub const GN_GROUP: &str = "gn-group/1";
pub const SPHERE_GROUP: &str = "sphere-group/1";
pub const THETA_ASSEMBLY: &str = "theta-assembly/1";
pub const BP_ORDER: &str = "bp-order/1";
pub const P_GROUP: &str = "p-group/1";
pub const BERNOULLI: &str = "bernoulli/1";
pub const SIGNATURE: &str = "signature/1";
pub const ARF: &str = "arf/1";
pub const SYMMETRIC_FORM: &str = "symmetric-form/1";
pub const QUADRATIC_REFINEMENT: &str = "quadratic-refinement/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("expected a JSON object")]
    NotAnObject,
    #[error("unsupported schema `{found}` (expected `{expected}`)")]
    UnknownVersion { expected: String, found: String },
    #[error("`schema` must be a string")]
    BadTag,
}

/// Adds the schema tag to a JSON object.
pub fn tag(mut value: Value, schema: &str) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("schema".to_string(), Value::from(schema));
    }
    value
}

/// Checks and strips the schema tag of an input document.
pub fn untag(mut value: Value, expected: &str) -> Result<Value, SchemaError> {
    let map = value.as_object_mut().ok_or(SchemaError::NotAnObject)?;
    if let Some(found) = map.remove("schema") {
        let found = found.as_str().ok_or(SchemaError::BadTag)?;
        if found != expected {
            return Err(SchemaError::UnknownVersion { expected: expected.to_string(), found: found.to_string() });
        }
    }
    Ok(value)
}

/// Compact, key-sorted serialization.
pub fn to_canonical_string(value: &Value) -> String {
    // serde_json's default map is ordered by key.
    serde_json::to_string(value).expect("JSON values always serialize")
}
