//! Bundled reference data for homotopy groups of spheres.
//!
//! The data lives in a line-oriented UTF-8 file:
//!
//! ```text
//! SPHERETABLE v1 <sha256 of everything after the header line>
//! PI n k rank d1,d2,...#label,label     pi_k(S^n)
//! WSQ n order                            order of [iota_n, iota_n] (or `inf`)
//! IMJ k order                            order of the image of J in the stable k-stem
//! CMP n k r1c1,r1c2;r2c1,...             matrix of phi_k on pi_k(S^(n-1))
//! KERPHI k order                         |ker phi| inside coker J_k
//! THETA k order [rank d1,d2,...]         order (and group, when known) of Theta_k
//! ```
//!
//! Blank lines and lines starting with `#` are ignored; any other unknown
//! line type is a load error. Every entry is re-validated when loaded.
//!
//! Lookups follow a fixed window: `pi_k(S^n)` is known for `k < n` (trivial),
//! `k = n` (`Z`), `n = 1`, the stable range `n ≥ (k - n) + 2` for stems up to
//! 19, and whatever unstable entries the file lists. Anything else is
//! [`TableError::OutOfTable`], which callers must treat as "unsupported",
//! never as "trivial".

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{bernoulli, AlgebraError, FGAbelianGroup, Homomorphism, IntMatrix};

const BUNDLED: &str = include_str!("../data/spheres.table");

/// Largest stable stem covered by the bundled data.
pub const MAX_STABLE_STEM: u32 = 19;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("missing or malformed header line")]
    BadHeader,
    #[error("checksum mismatch: header says {expected}, contents hash to {actual}")]
    Checksum { expected: String, actual: String },
    #[error("line {line}: unknown line type `{kind}`")]
    UnknownLineType { line: usize, kind: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: invariant violated: {msg}")]
    Invariant { line: usize, msg: String },
    #[error("table integrity: {0}")]
    Integrity(String),
    #[error("{0} is outside the bundled table")]
    OutOfTable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot read table file: {0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereGroupEntry {
    pub n: u32,
    pub k: u32,
    pub group: FGAbelianGroup,
    pub generator_labels: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhiteheadOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for WhiteheadOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadOrder::Finite(n) => write!(f, "{n}"),
            WhiteheadOrder::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for WhiteheadOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            WhiteheadOrder::Finite(n) => s.serialize_u64(*n),
            WhiteheadOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhiteheadSquareEntry {
    pub n: u32,
    pub order: WhiteheadOrder,
    pub suspension_kernel_note: String,
}

/// Matrix of `phi_k : pi_k(S^(n-1)) -> pi_(n+k-2)(S^(n-1))`,
/// `alpha -> [alpha, iota_(n-1)]`, between canonical generator bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTableEntry {
    pub n: u32,
    pub k: u32,
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaEntry {
    pub k: u32,
    pub order: u64,
    pub group: Option<FGAbelianGroup>,
}

#[derive(Clone, Debug)]
pub struct SphereTables {
    checksum: String,
    pi: BTreeMap<(u32, u32), SphereGroupEntry>,
    wsq: BTreeMap<u32, WhiteheadSquareEntry>,
    imj: BTreeMap<u32, u64>,
    cmp: BTreeMap<(u32, u32), CompositionTableEntry>,
    kerphi: BTreeMap<u32, u64>,
    theta: BTreeMap<u32, ThetaEntry>,
}

/// The bundled table, parsed once.
pub fn bundled() -> &'static SphereTables {
    static TABLES: OnceLock<SphereTables> = OnceLock::new();
    TABLES.get_or_init(|| SphereTables::parse(BUNDLED).expect("bundled sphere table is valid"))
}

/// Raw text of the bundled table file.
pub fn bundled_source() -> &'static str {
    BUNDLED
}

/// Hex SHA-256 of a table body (everything after the header line).
pub fn checksum_of(body: &str) -> String {
    Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl SphereTables {
    pub fn load(path: &Path) -> Result<Self, TableError> {
        let text = std::fs::read_to_string(path).map_err(|e| TableError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        let (header, body) = text.split_once('\n').ok_or(TableError::BadHeader)?;
        let mut h = header.split_whitespace();
        if h.next() != Some("SPHERETABLE") || h.next() != Some("v1") {
            return Err(TableError::BadHeader);
        }
        let expected = h.next().ok_or(TableError::BadHeader)?.to_ascii_lowercase();
        if h.next().is_some() {
            return Err(TableError::BadHeader);
        }
        let actual = checksum_of(body);
        if expected != actual {
            return Err(TableError::Checksum { expected, actual });
        }

        let mut t = SphereTables {
            checksum: actual,
            pi: BTreeMap::new(),
            wsq: BTreeMap::new(),
            imj: BTreeMap::new(),
            cmp: BTreeMap::new(),
            kerphi: BTreeMap::new(),
            theta: BTreeMap::new(),
        };
        let mut cmp_lines = Vec::new();
        let mut theta_lines = Vec::new();
        let mut imj_lines = Vec::new();
        for (idx, raw) in body.lines().enumerate() {
            let line = idx + 2;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            match toks[0] {
                "PI" => t.parse_pi(line, &toks)?,
                "WSQ" => t.parse_wsq(line, &toks)?,
                "IMJ" => {
                    let (k, order) = two_numbers(line, &toks)?;
                    if t.imj.insert(k, order).is_some() {
                        return Err(duplicate(line));
                    }
                    imj_lines.push((line, k));
                }
                "CMP" => cmp_lines.push((line, parse_cmp(line, &toks)?)),
                "KERPHI" => {
                    let (k, order) = two_numbers(line, &toks)?;
                    if order == 0 {
                        return Err(TableError::Invariant { line, msg: "kernel order must be positive".into() });
                    }
                    if t.kerphi.insert(k, order).is_some() {
                        return Err(duplicate(line));
                    }
                }
                "THETA" => theta_lines.push((line, parse_theta(line, &toks)?)),
                other => return Err(TableError::UnknownLineType { line, kind: other.to_string() }),
            }
        }

        t.check_suspension()?;
        for (line, k) in imj_lines {
            t.check_imj(line, k)?;
        }
        for (&k, &order) in &t.kerphi {
            t.check_kerphi(k, order)?;
        }
        for (line, entry) in cmp_lines {
            t.check_cmp(line, &entry)?;
            if t.cmp.insert((entry.n, entry.k), entry).is_some() {
                return Err(duplicate(line));
            }
        }
        for (line, entry) in theta_lines {
            if let Some(g) = &entry.group {
                if g.order() != Some(BigUint::from(entry.order)) {
                    return Err(TableError::Invariant { line, msg: format!("group {g} does not have order {}", entry.order) });
                }
            }
            if t.theta.insert(entry.k, entry).is_some() {
                return Err(duplicate(line));
            }
        }
        Ok(t)
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    fn parse_pi(&mut self, line: usize, toks: &[&str]) -> Result<(), TableError> {
        if toks.len() != 5 {
            return Err(TableError::Parse { line, msg: "PI needs `PI n k rank torsion#labels`".into() });
        }
        let n = num(line, toks[1])?;
        let k = num(line, toks[2])?;
        let rank = num(line, toks[3])? as usize;
        let (tors, labels) = toks[4]
            .split_once('#')
            .ok_or_else(|| TableError::Parse { line, msg: "missing `#` before generator labels".into() })?;
        let torsion = comma_list(line, tors)?;
        let group = FGAbelianGroup::new(rank, torsion.into_iter().map(BigUint::from).collect())
            .map_err(|e| TableError::Invariant { line, msg: e.to_string() })?;
        let labels: Vec<String> =
            if labels.is_empty() { Vec::new() } else { labels.split(',').map(str::to_string).collect() };
        if n == 0 {
            return Err(TableError::Invariant { line, msg: "sphere dimension must be at least 1".into() });
        }
        if labels.len() != group.generator_count() {
            return Err(TableError::Invariant {
                line,
                msg: format!("{} labels for {} generators", labels.len(), group.generator_count()),
            });
        }
        if k < n && !group.is_trivial() {
            return Err(TableError::Invariant { line, msg: "pi_k(S^n) must vanish for k < n".into() });
        }
        if k == n && group != FGAbelianGroup::integers() {
            return Err(TableError::Invariant { line, msg: "pi_n(S^n) must be Z".into() });
        }
        let entry = SphereGroupEntry { n, k, group, generator_labels: labels };
        if self.pi.insert((n, k), entry).is_some() {
            return Err(duplicate(line));
        }
        Ok(())
    }

    fn parse_wsq(&mut self, line: usize, toks: &[&str]) -> Result<(), TableError> {
        if toks.len() != 3 {
            return Err(TableError::Parse { line, msg: "WSQ needs `WSQ n order`".into() });
        }
        let n = num(line, toks[1])?;
        let order = if toks[2] == "inf" { WhiteheadOrder::Infinite } else { WhiteheadOrder::Finite(num64(line, toks[2])?) };
        let hopf_one = matches!(n, 1 | 3 | 7);
        let ok = match order {
            WhiteheadOrder::Infinite => n % 2 == 0,
            WhiteheadOrder::Finite(1) => hopf_one,
            WhiteheadOrder::Finite(o) => o > 0 && n % 2 == 1 && !hopf_one,
        };
        if !ok {
            return Err(TableError::Invariant {
                line,
                msg: format!("[iota_{n}, iota_{n}] cannot have order {order}: even n has Hopf invariant two, order 1 exactly for n in {{1,3,7}}"),
            });
        }
        let note = match order {
            WhiteheadOrder::Finite(1) => "zero: S^n is an H-space".to_string(),
            WhiteheadOrder::Infinite => "Hopf invariant two; generates the kernel of suspension on the free part".to_string(),
            WhiteheadOrder::Finite(_) => "nonzero, killed by suspension".to_string(),
        };
        if self.wsq.insert(n, WhiteheadSquareEntry { n, order, suspension_kernel_note: note }).is_some() {
            return Err(duplicate(line));
        }
        Ok(())
    }

    fn check_suspension(&self) -> Result<(), TableError> {
        for (&(n, k), entry) in &self.pi {
            if k <= n {
                continue;
            }
            let j = k - n;
            if n >= j + 2 {
                let stable = self.pi.get(&(j + 2, 2 * j + 2)).ok_or_else(|| {
                    TableError::Integrity(format!("pi_{k}(S^{n}) is stable but stem {j} has no entry at S^{}", j + 2))
                })?;
                if stable.group != entry.group {
                    return Err(TableError::Integrity(format!(
                        "pi_{k}(S^{n}) = {} disagrees with stable stem {j} = {}",
                        entry.group, stable.group
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_imj(&self, line: usize, k: u32) -> Result<(), TableError> {
        let listed = self.imj[&k];
        let expected = im_j_formula(k);
        if listed != expected {
            return Err(TableError::Invariant { line, msg: format!("image of J in stem {k} has order {expected}, not {listed}") });
        }
        if let Ok(stem) = self.stable_stem(k) {
            if let Some(order) = stem.order() {
                if !order.is_multiple_of(&BigUint::from(listed)) {
                    return Err(TableError::Invariant { line, msg: format!("{listed} does not divide |stem {k}| = {order}") });
                }
            }
        }
        Ok(())
    }

    /// `ker φ` sits in the finite group coker J and φ lands in `P_k`, which
    /// is 0 (k odd), Z/2 (k ≡ 2 mod 4) or Z (k ≡ 0 mod 4). Only a Z/2 target
    /// admits a nonzero image.
    fn check_kerphi(&self, k: u32, order: u64) -> Result<(), TableError> {
        let coker = self
            .stable_stem(k)
            .and_then(|s| Ok((s, self.im_j_order(k)?)))
            .and_then(|(s, j)| {
                s.remove_cyclic_summand(&BigUint::from(j))
                    .map_err(|e| TableError::Integrity(format!("coker J in stem {k}: {e}")))
            })?;
        let coker_order = coker
            .order()
            .ok_or_else(|| TableError::Integrity(format!("coker J in stem {k} is infinite")))?;
        let order = BigUint::from(order);
        if !coker_order.is_multiple_of(&order) {
            return Err(TableError::Integrity(format!("KERPHI {k}: {order} does not divide |coker J| = {coker_order}")));
        }
        let image = coker_order / &order;
        let max_image = if k % 4 == 2 { 2u8 } else { 1 };
        if image > BigUint::from(max_image) {
            return Err(TableError::Integrity(format!("KERPHI {k}: image of order {image} cannot embed in P_{k}")));
        }
        Ok(())
    }

    fn check_cmp(&self, line: usize, entry: &CompositionTableEntry) -> Result<(), TableError> {
        let hom = self
            .hom_from_matrix(entry.n, entry.k, entry.matrix.clone())
            .map_err(|e| TableError::Invariant { line, msg: e.to_string() })?;
        if entry.k + 1 == entry.n {
            // Domain pi_q(S^q) = Z: the image of iota is the Whitehead square.
            let wsq = self
                .whitehead_square(entry.n - 1)
                .map_err(|e| TableError::Invariant { line, msg: e.to_string() })?;
            let found = element_order(hom.codomain(), &hom.matrix().column(0));
            if found != wsq.order {
                return Err(TableError::Invariant {
                    line,
                    msg: format!("image of iota has order {found}, Whitehead square has order {}", wsq.order),
                });
            }
        }
        Ok(())
    }

    fn hom_from_matrix(&self, n: u32, k: u32, matrix: IntMatrix) -> Result<Homomorphism, AlgebraError> {
        let q = n - 1;
        let dom = self.pi_sphere(q, k).map_err(|e| AlgebraError::InvalidArgument(e.to_string()))?;
        let cod = self.pi_sphere(q, q + k - 1).map_err(|e| AlgebraError::InvalidArgument(e.to_string()))?;
        Homomorphism::new(dom, cod, matrix)
    }

    /// `pi_k(S^n)` with generator labels.
    pub fn pi_sphere_entry(&self, n: u32, k: u32) -> Result<SphereGroupEntry, TableError> {
        if n == 0 {
            return Err(TableError::InvalidArgument("sphere dimension must be at least 1".into()));
        }
        let derived = |group: FGAbelianGroup, labels: Vec<String>| SphereGroupEntry { n, k, group, generator_labels: labels };
        if k < n {
            return Ok(derived(FGAbelianGroup::trivial(), Vec::new()));
        }
        if k == n {
            return Ok(derived(FGAbelianGroup::integers(), vec![format!("iota{n}")]));
        }
        if n == 1 {
            // The universal cover of S^1 is contractible.
            return Ok(derived(FGAbelianGroup::trivial(), Vec::new()));
        }
        let j = k - n;
        if n >= j + 2 && j <= MAX_STABLE_STEM {
            let stable = self.pi.get(&(j + 2, 2 * j + 2)).ok_or_else(|| TableError::OutOfTable(format!("stable stem {j}")))?;
            return Ok(derived(stable.group.clone(), stable.generator_labels.clone()));
        }
        self.pi.get(&(n, k)).cloned().ok_or_else(|| TableError::OutOfTable(format!("pi_{k}(S^{n})")))
    }

    pub fn pi_sphere(&self, n: u32, k: u32) -> Result<FGAbelianGroup, TableError> {
        self.pi_sphere_entry(n, k).map(|e| e.group)
    }

    pub fn stable_stem(&self, k: u32) -> Result<FGAbelianGroup, TableError> {
        if k > MAX_STABLE_STEM {
            return Err(TableError::OutOfTable(format!("stable stem {k}")));
        }
        self.pi_sphere(k + 2, 2 * k + 2)
    }

    pub fn whitehead_square(&self, n: u32) -> Result<WhiteheadSquareEntry, TableError> {
        self.wsq.get(&n).cloned().ok_or_else(|| TableError::OutOfTable(format!("Whitehead square of iota_{n}")))
    }

    /// Order of the image of J in the stable `k`-stem.
    ///
    /// For `k = 4r - 1` this is the denominator of `B_r / 4r`; other stems use
    /// the table (2 for `k ≡ 0, 1 mod 8`, otherwise 1).
    pub fn im_j_order(&self, k: u32) -> Result<u64, TableError> {
        if k > MAX_STABLE_STEM {
            return Err(TableError::OutOfTable(format!("image of J in stem {k}")));
        }
        if k % 4 == 3 {
            return Ok(im_j_formula(k));
        }
        self.imj.get(&k).copied().ok_or_else(|| TableError::OutOfTable(format!("image of J in stem {k}")))
    }

    pub fn composition(&self, n: u32, k: u32) -> Option<&CompositionTableEntry> {
        self.cmp.get(&(n, k))
    }

    pub fn kernel_phi_order(&self, k: u32) -> Result<u64, TableError> {
        self.kerphi.get(&k).copied().ok_or_else(|| TableError::OutOfTable(format!("ker phi in dimension {k}")))
    }

    pub fn theta(&self, k: u32) -> Result<&ThetaEntry, TableError> {
        self.theta.get(&k).ok_or_else(|| TableError::OutOfTable(format!("Theta_{k}")))
    }

    /// All explicitly listed `PI` entries.
    pub fn listed_entries(&self) -> impl Iterator<Item = &SphereGroupEntry> {
        self.pi.values()
    }

    pub fn listed_compositions(&self) -> impl Iterator<Item = &CompositionTableEntry> {
        self.cmp.values()
    }

    /// The composition homomorphism for a listed `CMP` entry.
    pub fn composition_hom(&self, entry: &CompositionTableEntry) -> Homomorphism {
        self.hom_from_matrix(entry.n, entry.k, entry.matrix.clone()).expect("validated at load")
    }
}

fn im_j_formula(k: u32) -> u64 {
    if k % 4 == 3 {
        let r = (k + 1) / 4;
        let q = bernoulli(r) / num_rational::BigRational::from_integer(BigInt::from(4 * r));
        return q.denom().to_u64().expect("image of J order fits in u64");
    }
    if k > 0 && (k % 8 == 0 || k % 8 == 1) {
        2
    } else {
        1
    }
}

/// Order of an element given in canonical coordinates.
pub(crate) fn element_order(group: &FGAbelianGroup, v: &[BigInt]) -> WhiteheadOrder {
    let mut lcm = BigUint::one();
    for (x, d) in v.iter().zip(group.generator_orders()) {
        if d.is_zero() {
            if !x.is_zero() {
                return WhiteheadOrder::Infinite;
            }
            continue;
        }
        let d = BigInt::from(d);
        let g = x.gcd(&d);
        let o = (&d / g).magnitude().clone();
        lcm = lcm.lcm(&o);
    }
    WhiteheadOrder::Finite(lcm.to_u64().expect("small order"))
}

fn duplicate(line: usize) -> TableError {
    TableError::Invariant { line, msg: "duplicate entry".into() }
}

fn num(line: usize, s: &str) -> Result<u32, TableError> {
    s.parse().map_err(|_| TableError::Parse { line, msg: format!("expected a non-negative integer, got `{s}`") })
}

fn num64(line: usize, s: &str) -> Result<u64, TableError> {
    s.parse().map_err(|_| TableError::Parse { line, msg: format!("expected a non-negative integer, got `{s}`") })
}

fn two_numbers(line: usize, toks: &[&str]) -> Result<(u32, u64), TableError> {
    if toks.len() != 3 {
        return Err(TableError::Parse { line, msg: format!("{} needs exactly two fields", toks[0]) });
    }
    Ok((num(line, toks[1])?, num64(line, toks[2])?))
}

fn comma_list(line: usize, s: &str) -> Result<Vec<u64>, TableError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| num64(line, x)).collect()
}

fn parse_cmp(line: usize, toks: &[&str]) -> Result<CompositionTableEntry, TableError> {
    if toks.len() < 4 {
        return Err(TableError::Parse { line, msg: "CMP needs `CMP n k matrix`".into() });
    }
    let n = num(line, toks[1])?;
    let k = num(line, toks[2])?;
    if n < 2 {
        return Err(TableError::Invariant { line, msg: "CMP needs n >= 2".into() });
    }
    let text = toks[3..].join("");
    let mut rows = Vec::new();
    for row in text.split(';') {
        let entries: Result<Vec<BigInt>, _> = row
            .split(',')
            .map(|x| x.parse::<BigInt>().map_err(|_| TableError::Parse { line, msg: format!("bad matrix entry `{x}`") }))
            .collect();
        rows.push(entries?);
    }
    let cols = rows[0].len();
    let matrix = IntMatrix::from_big_rows_with_cols(rows, cols).map_err(|e| TableError::Parse { line, msg: e.to_string() })?;
    Ok(CompositionTableEntry { n, k, matrix })
}

fn parse_theta(line: usize, toks: &[&str]) -> Result<ThetaEntry, TableError> {
    if !(3..=5).contains(&toks.len()) {
        return Err(TableError::Parse { line, msg: "THETA needs `THETA k order [rank torsion]`".into() });
    }
    let k = num(line, toks[1])?;
    let order = num64(line, toks[2])?;
    if order == 0 {
        return Err(TableError::Invariant { line, msg: "Theta_k is finite".into() });
    }
    let group = if toks.len() >= 4 {
        let rank = num(line, toks[3])? as usize;
        let torsion = comma_list(line, toks.get(4).copied().unwrap_or(""))?;
        Some(
            FGAbelianGroup::new(rank, torsion.into_iter().map(BigUint::from).collect())
                .map_err(|e| TableError::Invariant { line, msg: e.to_string() })?,
        )
    } else {
        None
    };
    Ok(ThetaEntry { k, order, group })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, t: &[u64]) -> FGAbelianGroup {
        FGAbelianGroup::new(free, t.iter().map(|&x| BigUint::from(x)).collect()).unwrap()
    }

    fn with_body(body: &str) -> String {
        format!("SPHERETABLE v1 {}\n{body}", checksum_of(body))
    }

    #[test]
    fn bundled_table_loads() {
        let t = bundled();
        assert_eq!(t.checksum().len(), 64);
        assert!(t.listed_entries().count() > 200);
    }

    #[test]
    fn lookups_in_window() {
        let t = bundled();
        assert_eq!(t.pi_sphere(5, 4).unwrap(), FGAbelianGroup::trivial());
        assert_eq!(t.pi_sphere(6, 6).unwrap(), FGAbelianGroup::integers());
        assert_eq!(t.pi_sphere(2, 3).unwrap(), FGAbelianGroup::integers());
        assert_eq!(t.pi_sphere(4, 7).unwrap(), g(1, &[12]));
        assert_eq!(t.pi_sphere(1, 40).unwrap(), FGAbelianGroup::trivial());
        assert_eq!(t.pi_sphere(40, 55).unwrap(), g(0, &[2, 480]));
        assert!(matches!(t.pi_sphere(3, 20), Err(TableError::OutOfTable(_))));
        assert!(matches!(t.pi_sphere(25, 46), Err(TableError::OutOfTable(_))));
        assert!(t.pi_sphere(0, 3).is_err());
    }

    #[test]
    fn stable_stems() {
        let t = bundled();
        assert_eq!(t.stable_stem(0).unwrap(), FGAbelianGroup::integers());
        assert_eq!(t.stable_stem(1).unwrap(), g(0, &[2]));
        assert_eq!(t.stable_stem(3).unwrap(), g(0, &[24]));
        assert_eq!(t.stable_stem(7).unwrap(), g(0, &[240]));
        assert_eq!(t.stable_stem(19).unwrap(), g(0, &[2, 264]));
        assert!(matches!(t.stable_stem(20), Err(TableError::OutOfTable(_))));
    }

    #[test]
    fn whitehead_squares() {
        let t = bundled();
        assert_eq!(t.whitehead_square(3).unwrap().order, WhiteheadOrder::Finite(1));
        assert_eq!(t.whitehead_square(1).unwrap().order, WhiteheadOrder::Finite(1));
        assert_eq!(t.whitehead_square(4).unwrap().order, WhiteheadOrder::Infinite);
        for n in 1..=20 {
            let o = t.whitehead_square(n).unwrap().order;
            assert_eq!(o == WhiteheadOrder::Finite(1), [1, 3, 7].contains(&n), "n = {n}");
        }
        assert!(t.whitehead_square(21).is_err());
    }

    #[test]
    fn image_of_j() {
        let t = bundled();
        assert_eq!(t.im_j_order(3).unwrap(), 24);
        assert_eq!(t.im_j_order(7).unwrap(), 240);
        assert_eq!(t.im_j_order(11).unwrap(), 504);
        assert_eq!(t.im_j_order(8).unwrap(), 2);
        assert_eq!(t.im_j_order(10).unwrap(), 1);
        for k in 0..=MAX_STABLE_STEM {
            let stem = t.stable_stem(k).unwrap();
            if let Some(o) = stem.order() {
                assert!(o.is_multiple_of(&BigUint::from(t.im_j_order(k).unwrap())));
            }
        }
    }

    #[test]
    fn suspension_consistency_of_listed_entries() {
        let t = bundled();
        for e in t.listed_entries() {
            let j = e.k - e.n;
            if e.n >= j + 2 {
                assert_eq!(e.group, t.stable_stem(j).unwrap(), "pi_{}(S^{})", e.k, e.n);
            }
        }
    }

    #[test]
    fn checksum_and_format_errors() {
        let good = with_body("WSQ 2 inf\n");
        assert!(SphereTables::parse(&good).is_ok());
        let tampered = good.replace("WSQ 2 inf", "WSQ 4 inf");
        assert!(matches!(SphereTables::parse(&tampered), Err(TableError::Checksum { .. })));
        assert!(matches!(SphereTables::parse("nonsense\n"), Err(TableError::BadHeader)));
        assert!(matches!(
            SphereTables::parse(&with_body("FOO 1 2\n")),
            Err(TableError::UnknownLineType { line: 2, .. })
        ));
    }

    #[test]
    fn invariant_violations_are_rejected() {
        let cases = [
            "WSQ 3 inf\n",
            "WSQ 4 2\n",
            "WSQ 5 1\n",
            "PI 5 4 0 2#a\n",
            "PI 5 5 0 #\n",
            "PI 4 7 1 12#only-one-label\n",
            "PI 4 7 1 4,6#a,b,c\n",
            "IMJ 3 12\n",
            "IMJ 2 2\n",
            "WSQ 2 inf\nWSQ 2 inf\n",
            "THETA 7 28 0 14\n",
        ];
        for body in cases {
            let r = SphereTables::parse(&with_body(body));
            assert!(r.is_err(), "accepted: {body}");
        }
    }

    #[test]
    fn cmp_entries_must_be_homomorphisms() {
        // pi_3(S^2) = Z, pi_3 target of phi_2 for n = 3; a 2x1 matrix has the wrong shape.
        let body = "PI 2 3 1 #eta\nPI 3 4 0 2#eta\nWSQ 2 inf\nCMP 3 2 2;1\n";
        assert!(SphereTables::parse(&with_body(body)).is_err());
        // Image of iota must have infinite order for even spheres.
        let body = "PI 2 3 1 #eta\nPI 3 4 0 2#eta\nWSQ 2 inf\nCMP 3 2 0\n";
        assert!(SphereTables::parse(&with_body(body)).is_err());
        let body = "PI 2 3 1 #eta\nPI 3 4 0 2#eta\nWSQ 2 inf\nCMP 3 2 2\n";
        assert!(SphereTables::parse(&with_body(body)).is_ok());
    }

    #[test]
    fn stable_entries_must_agree() {
        let body = "PI 3 4 0 2#eta\nPI 4 5 0 3#x\n";
        assert!(matches!(SphereTables::parse(&with_body(body)), Err(TableError::Integrity(_))));
    }

    #[test]
    fn theta_entries() {
        let t = bundled();
        assert_eq!(t.theta(7).unwrap().order, 28);
        assert_eq!(t.theta(15).unwrap().group, Some(g(0, &[2, 8128])));
        assert!(t.theta(19).is_err());
    }
}
