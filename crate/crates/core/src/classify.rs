//! Decidability classification of immersion and embedding problems
//! `M^m -> R^n` by dimension range and category.
//!
//! The classifier is total: every input receives a status, and inputs
//! outside the ranges covered by the known results get
//! [`VerdictStatus::OutOfTheoremScope`] rather than an error. `Open` is
//! reserved for ranges where decidability is genuinely unknown.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("stabilization needs codimension at least 2, got m = {m}, n = {n}")]
    InvalidCodimension { m: u32, n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProblemKind {
    Immersion,
    Embedding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    Smooth,
    PLLocallyFlat,
    PLGeneral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProblemSpec {
    pub m: u32,
    pub n: u32,
    pub kind: ProblemKind,
    pub category: Category,
    pub orientable: bool,
    pub with_boundary: bool,
    pub closed: bool,
}

impl ProblemSpec {
    /// A closed orientable instance.
    pub fn new(m: u32, n: u32, kind: ProblemKind, category: Category) -> Self {
        ProblemSpec { m, n, kind, category, orientable: true, with_boundary: false, closed: true }
    }

    pub fn immersion(m: u32, n: u32, category: Category) -> Self {
        Self::new(m, n, ProblemKind::Immersion, category)
    }

    pub fn embedding(m: u32, n: u32, category: Category) -> Self {
        Self::new(m, n, ProblemKind::Embedding, category)
    }

    /// Manifold with boundary (clears `closed`).
    pub fn with_boundary(mut self) -> Self {
        self.with_boundary = true;
        self.closed = false;
        self
    }

    pub fn non_orientable(mut self) -> Self {
        self.orientable = false;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictStatus {
    AlwaysYes,
    Decidable,
    Undecidable,
    Open,
    OutOfTheoremScope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeVerdict {
    pub status: VerdictStatus,
    pub method_or_reduction: String,
    pub citation: String,
    pub tags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RangeVerdict {
    fn new(status: VerdictStatus, method: &str, citation: &str) -> Self {
        RangeVerdict { status, method_or_reduction: method.into(), citation: citation.into(), tags: Vec::new(), note: None }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }
}

const CITE_WHITNEY_IMMERSION: &str = "Whitney immersion theorem (stable range m < n/2 + 1)";
const CITE_SMOOTH_DECIDABLE: &str = "decidability table, smooth case: n - m odd or 3m <= 2n - 1";
const CITE_SMOOTH_UNDECIDABLE: &str = "decidability table, smooth case: n - m even and 5m >= 4n";
const CITE_SMOOTH_OPEN: &str = "decidability table, smooth case: even codimension outside both bands is unknown";
const CITE_PL_OFF_CODIM2: &str = "decidability table, PL case: n - m != 2";
const CITE_PL_CODIM2: &str = "decidability table, PL case: n - m = 2";
const CITE_SCOPE: &str = "decidability table hypotheses: n >= 4 and m < n";
const CITE_WHITNEY_EMBEDDING: &str = "Whitney embedding theorem (m <= n/2)";
const CITE_CKV: &str = "Cadek-Krcal-Vokrinek embeddability algorithm (m <= 2n/3 - 1)";
const CITE_EMBED_UNDECIDABLE: &str = "embedding undecidability: n - m even and 11m >= 10n + 1, manifolds with boundary";
const CITE_EMBED_CLOSED: &str = "closed manifolds in the embedding undecidability band";
const CITE_EMBED_OPEN: &str = "embedding summary: no result covers this range";

/// Immersion verdict.
///
/// - Smooth: always possible when `2m < n + 2`; decidable when `n - m` is
///   odd or `3m ≤ 2n - 1`; undecidable when `n - m` is even and `5m ≥ 4n`
///   (codimension two only for `n ≥ 10`); otherwise open.
/// - PL, not necessarily locally flat: decidable in every codimension.
/// - PL locally flat: decidable except in codimension two, where it is
///   undecidable for `n ≥ 10` and open below.
///
/// Non-orientable instances get the same verdict, tagged `equivariant`.
pub fn classify_immersion(spec: &ProblemSpec) -> RangeVerdict {
    let (m, n) = (spec.m, spec.n);
    if n < 4 || m == 0 || m >= n || (spec.closed && spec.with_boundary) {
        return RangeVerdict::new(VerdictStatus::OutOfTheoremScope, "none", CITE_SCOPE);
    }
    let codim = n - m;
    let mut v = match spec.category {
        Category::Smooth => {
            if 2 * m < n + 2 {
                RangeVerdict::new(VerdictStatus::AlwaysYes, "stable range: every manifold immerses", CITE_WHITNEY_IMMERSION)
            } else if codim % 2 == 1 {
                RangeVerdict::new(
                    VerdictStatus::Decidable,
                    "odd codimension: Pontryagin vanishing window, then finite obstruction enumeration",
                    CITE_SMOOTH_DECIDABLE,
                )
            } else if 3 * m <= 2 * n - 1 {
                RangeVerdict::new(
                    VerdictStatus::Decidable,
                    "metastable range: Euler class with square zero, general lifting algorithm",
                    CITE_SMOOTH_DECIDABLE,
                )
            } else if 5 * m >= 4 * n {
                if codim == 2 && n < 10 {
                    RangeVerdict::new(VerdictStatus::Open, "none", CITE_SMOOTH_UNDECIDABLE)
                        .with_note("codimension-two undecidability is established only for n >= 10")
                } else {
                    RangeVerdict::new(
                        VerdictStatus::Undecidable,
                        "Hilbert's tenth problem: quadratic systems as Euler-class lifting problems on Wall thickenings",
                        CITE_SMOOTH_UNDECIDABLE,
                    )
                }
            } else {
                RangeVerdict::new(VerdictStatus::Open, "none", CITE_SMOOTH_OPEN)
            }
        }
        Category::PLGeneral => {
            if codim == 2 {
                RangeVerdict::new(
                    VerdictStatus::Decidable,
                    "not necessarily locally flat immersions: lifting to BG-tilde",
                    CITE_PL_CODIM2,
                )
            } else {
                RangeVerdict::new(VerdictStatus::Decidable, "lifting to BG-tilde via finite homotopy data", CITE_PL_OFF_CODIM2)
            }
        }
        Category::PLLocallyFlat => {
            if codim == 2 {
                if n >= 10 {
                    RangeVerdict::new(
                        VerdictStatus::Undecidable,
                        "Hilbert's tenth problem through locally flat codimension-two normal data",
                        CITE_PL_CODIM2,
                    )
                } else {
                    RangeVerdict::new(VerdictStatus::Open, "none", CITE_PL_CODIM2)
                        .with_note("codimension-two undecidability is established only for n >= 10")
                }
            } else {
                RangeVerdict::new(VerdictStatus::Decidable, "lifting to BG-tilde via finite homotopy data", CITE_PL_OFF_CODIM2)
            }
        }
    };
    if !spec.orientable {
        v.tags.push("equivariant".into());
    }
    v
}

/// Embedding verdict for manifolds.
///
/// Always possible for `2m ≤ n`; decidable for `3m ≤ 2n - 3`; undecidable
/// for smooth manifolds with boundary when `n - m ≥ 2` is even and
/// `11m ≥ 10n + 1`. Closed manifolds in that band, and everything else, are
/// open.
pub fn classify_embedding(spec: &ProblemSpec) -> RangeVerdict {
    let (m, n) = (spec.m, spec.n);
    if m == 0 || m > n || (spec.closed && spec.with_boundary) {
        return RangeVerdict::new(VerdictStatus::OutOfTheoremScope, "none", "embedding problems need 1 <= m <= n and consistent flags");
    }
    let mut v = if 2 * m <= n {
        RangeVerdict::new(VerdictStatus::AlwaysYes, "every manifold embeds", CITE_WHITNEY_EMBEDDING)
    } else if 3 * m + 3 <= 2 * n {
        RangeVerdict::new(VerdictStatus::Decidable, "metastable embeddability algorithm", CITE_CKV)
    } else if embedding_band(m, n) && spec.category == Category::Smooth {
        if spec.with_boundary {
            RangeVerdict::new(
                VerdictStatus::Undecidable,
                "stabilized immersion problem: M immerses in R^n iff M x D^k embeds in R^(n+k)",
                CITE_EMBED_UNDECIDABLE,
            )
        } else {
            RangeVerdict::new(VerdictStatus::Open, "none", CITE_EMBED_CLOSED)
                .with_note("closed manifolds in this band cannot be handled by immersion theory; decidability is unknown")
        }
    } else {
        RangeVerdict::new(VerdictStatus::Open, "none", CITE_EMBED_OPEN)
    };
    if !spec.orientable {
        v.tags.push("equivariant".into());
    }
    v
}

/// `n - m` even and at least 2, and `11m ≥ 10n + 1`.
fn embedding_band(m: u32, n: u32) -> bool {
    n >= m + 2 && (n - m) % 2 == 0 && 11 * m >= 10 * n + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub k: u32,
    pub m_prime: u32,
    pub n_prime: u32,
}

/// Crossing with `D^k`, `k = max(4m - 2n + 1, 1)`: `M^m` immerses in `R^n`
/// iff `M × D^k` embeds in `R^(n+k)`.
pub fn embedding_stabilization(m: u32, n: u32) -> Result<Stabilization, ClassifyError> {
    if n < m + 2 {
        return Err(ClassifyError::InvalidCodimension { m, n });
    }
    let k = (4 * m as i64 - 2 * n as i64 + 1).max(1) as u32;
    Ok(Stabilization { k, m_prime: m + k, n_prime: n + k })
}
