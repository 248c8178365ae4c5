//! `immgate`: command-line front end for the immersion/embedding toolkit.
//!
//! Every command prints one compact JSON document (keys sorted) on stdout.
//! Exit codes:
//!
//! - `0`: affirmative or decided answer
//! - `1`: usage or input error (message on stderr, no stdout)
//! - `2`: negative answer: obstructed, no solution within bound, unsatisfiable
//! - `3`: unknown: open problem, outside the bundled tables, missing data,
//!   unresolved extension, exhausted budget

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use immgate_core::algebra::{arf_invariant, bernoulli, signature, IntMatrix, QuadraticRefinement};
use immgate_core::bridge::{compile_to_lifting, extract_quadratic, LiftingInstance};
use immgate_core::classify::{
    classify_embedding, classify_immersion, embedding_stabilization, Category, ProblemKind, ProblemSpec, VerdictStatus,
};
use immgate_core::diophantine::{solve_with_filters, DiophantineError, SolveOutcome, SolverConfig};
use immgate_core::exotic::{bp_order, bp_order_divisor_paper, p_group, theta_assembly, ExoticError, RConvention};
use immgate_core::gn::{pi_gn, GnError, GnStatus};
use immgate_core::obstruction::{
    closed_embedding_obstruction, euler_square_problem, pontryagin_obstruction, ManifoldClassData, ObstructionError,
    ObstructionVerdict,
};
use immgate_core::schema::{self, to_canonical_string};
use immgate_core::tables::{self, SphereTables, TableError};
use immgate_core::QuadSystem;

const TABLE_ENV: &str = "IMMGATE_TABLE_PATH";

#[derive(Parser)]
#[command(name = "immgate", version, about = "Decidability, obstruction and homotopy-group calculations for immersions and embeddings")]
struct Cli {
    /// Node budget for the Diophantine solver and modular filters.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an immersion or embedding problem by decidability.
    Classify {
        #[command(subcommand)]
        kind: ClassifyKind,
    },
    /// Stabilization k = max(4m - 2n + 1, 1) turning immersion into embedding.
    Stabilize {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Compile a quadratic system into a lifting instance.
    Reduce {
        #[command(subcommand)]
        target: ReduceTarget,
    },
    /// Extract the quadratic system of a lifting instance.
    Extract {
        #[command(flatten)]
        io: InOut,
    },
    /// Bounded search for an integer solution of a quadratic system.
    Solve {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        bound: u64,
        /// Try modular filters first: `--mod-filter up-to M`.
        #[arg(long = "mod-filter", num_args = 2, value_names = ["up-to", "M"])]
        mod_filter: Option<Vec<String>>,
    },
    /// Rational Pontryagin-class obstruction tests.
    Obstruct {
        #[command(subcommand)]
        test: ObstructKind,
    },
    /// Quadratic system for an Euler class whose square is p_(c/2).
    EulerSquare {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// pi_k(G_n) from the evaluation fibration.
    PiGn {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// pi_k(S^n) from the bundled tables.
    PiSphere {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Stable k-stem.
    StableStem {
        #[arg(long)]
        k: u32,
    },
    /// Order of Theta_k from the Kervaire-Milnor sequence.
    Theta {
        #[arg(long)]
        k: u32,
    },
    /// Order of bP_(k+1).
    Bp {
        #[arg(long)]
        k1: u32,
        /// Evaluate the alternative divisor expression instead.
        #[arg(long = "paper-divisor", value_enum)]
        paper_divisor: Option<DivisorReading>,
    },
    /// The surgery obstruction group P_k.
    PGroup {
        #[arg(long)]
        k: u32,
    },
    /// Topologists' Bernoulli number B_r = |B_2r|.
    Bernoulli {
        #[arg(long)]
        r: u32,
    },
    /// Signature of a symmetric integer form.
    Signature {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Arf invariant of a quadratic refinement.
    Arf {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum ClassifyKind {
    Immersion(ClassifyArgs),
    Embedding(ClassifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long = "cat", value_enum)]
    category: Cat,
    #[arg(long = "non-orientable")]
    non_orientable: bool,
    #[arg(long, conflicts_with = "closed")]
    boundary: bool,
    #[arg(long)]
    closed: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cat {
    Smooth,
    PlFlat,
    Pl,
}

#[derive(Clone, Copy, ValueEnum)]
enum DivisorReading {
    Half,
    Quarter,
}

#[derive(Subcommand)]
enum ReduceTarget {
    /// Quadratic system to Whitehead-product lifting instance.
    H10 {
        #[arg(long)]
        c: u32,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Subcommand)]
enum ObstructKind {
    Immersion {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        n: u32,
    },
    ClosedEmbedding {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args)]
struct InOut {
    /// Input file (`-` for stdin).
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Output file (stdout when absent).
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

const AFFIRMATIVE: u8 = 0;
const USAGE: u8 = 1;
const NEGATIVE: u8 = 2;
const UNKNOWN: u8 = 3;

/// A finished command: exit code and JSON payload.
struct Reply {
    code: u8,
    payload: Value,
    output: Option<PathBuf>,
}

impl Reply {
    fn new(code: u8, payload: Value) -> Self {
        Reply { code, payload, output: None }
    }

    fn to(mut self, output: Option<PathBuf>) -> Self {
        self.output = output;
        self
    }
}

/// Input errors: reported on stderr with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    match run(cli) {
        Ok(reply) => {
            let text = format!("{}\n", to_canonical_string(&reply.payload));
            let written = match &reply.output {
                Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(USAGE);
            }
            ExitCode::from(reply.code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure(format!("{}: invalid JSON: {e}", path.display())))
}

fn load_tables() -> Result<SphereTables, Failure> {
    match std::env::var_os(TABLE_ENV) {
        Some(path) => Ok(SphereTables::load(Path::new(&path))?),
        None => Ok(tables::bundled().clone()),
    }
}

/// Payload for answers that are unknown rather than wrong.
fn unknown(schema_name: &str, status: &str, detail: String) -> Reply {
    Reply::new(UNKNOWN, schema::tag(json!({"status": status, "detail": detail}), schema_name))
}

fn table_unknown(schema_name: &str, e: TableError) -> Result<Reply, Failure> {
    match e {
        TableError::OutOfTable(_) => Ok(unknown(schema_name, "OutOfTable", e.to_string())),
        other => Err(other.into()),
    }
}

fn run(cli: Cli) -> Result<Reply, Failure> {
    let mut config = SolverConfig::default();
    if let Some(b) = cli.budget {
        config.node_budget = b;
    }
    match cli.command {
        Command::Classify { kind } => {
            let (kind, args) = match kind {
                ClassifyKind::Immersion(a) => (ProblemKind::Immersion, a),
                ClassifyKind::Embedding(a) => (ProblemKind::Embedding, a),
            };
            let category = match args.category {
                Cat::Smooth => Category::Smooth,
                Cat::PlFlat => Category::PLLocallyFlat,
                Cat::Pl => Category::PLGeneral,
            };
            let mut spec = ProblemSpec::new(args.m, args.n, kind, category);
            if args.boundary {
                spec = spec.with_boundary();
            }
            if args.non_orientable {
                spec = spec.non_orientable();
            }
            let verdict = match kind {
                ProblemKind::Immersion => classify_immersion(&spec),
                ProblemKind::Embedding => classify_embedding(&spec),
            };
            let code = match verdict.status {
                VerdictStatus::AlwaysYes | VerdictStatus::Decidable | VerdictStatus::Undecidable => AFFIRMATIVE,
                VerdictStatus::Open | VerdictStatus::OutOfTheoremScope => UNKNOWN,
            };
            let mut payload = serde_json::to_value(&verdict)?;
            payload["problem"] = serde_json::to_value(spec)?;
            Ok(Reply::new(code, schema::tag(payload, schema::RANGE_VERDICT)))
        }
        Command::Stabilize { m, n } => {
            let s = embedding_stabilization(m, n)?;
            let mut payload = serde_json::to_value(s)?;
            payload["m"] = json!(m);
            payload["n"] = json!(n);
            Ok(Reply::new(AFFIRMATIVE, schema::tag(payload, schema::STABILIZATION)))
        }
        Command::Reduce { target: ReduceTarget::H10 { c, io } } => {
            let sys = QuadSystem::from_json(read_json(&io.input)?)?;
            let inst = compile_to_lifting(&sys, c)?;
            Ok(Reply::new(AFFIRMATIVE, inst.to_json()).to(io.output))
        }
        Command::Extract { io } => {
            let inst = LiftingInstance::from_json(read_json(&io.input)?)?;
            Ok(Reply::new(AFFIRMATIVE, extract_quadratic(&inst).to_json()).to(io.output))
        }
        Command::Solve { input, bound, mod_filter } => {
            let sys = QuadSystem::from_json(read_json(&input)?)?;
            let max_modulus = match mod_filter.as_deref() {
                None => None,
                Some([kw, m]) if kw == "up-to" => {
                    Some(m.parse::<u64>().map_err(|_| Failure(format!("--mod-filter: `{m}` is not a modulus")))?)
                }
                Some(_) => return Err(Failure("--mod-filter expects `up-to M`".into())),
            };
            match solve_with_filters(&sys, bound, max_modulus, &config) {
                Ok(outcome) => {
                    let code = match outcome {
                        SolveOutcome::Solution(_) => AFFIRMATIVE,
                        _ => NEGATIVE,
                    };
                    Ok(Reply::new(code, outcome.to_json()))
                }
                Err(DiophantineError::BudgetExceeded(b)) => Ok(Reply::new(
                    UNKNOWN,
                    schema::tag(json!({"outcome": "BudgetExceeded", "budget": b}), schema::SOLVE_OUTCOME),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Obstruct { test } => {
            let (input, n, closed) = match test {
                ObstructKind::Immersion { input, n } => (input, n, false),
                ObstructKind::ClosedEmbedding { input, n } => (input, n, true),
            };
            let data = ManifoldClassData::from_json(read_json(&input)?)?;
            let report = if closed { closed_embedding_obstruction(&data, n) } else { pontryagin_obstruction(&data, n) };
            match report {
                Ok(r) => {
                    let code = match r.verdict {
                        ObstructionVerdict::RationallyUnobstructed => AFFIRMATIVE,
                        ObstructionVerdict::Obstructed(_) => NEGATIVE,
                    };
                    Ok(Reply::new(code, r.to_json()))
                }
                Err(e @ ObstructionError::MissingClassData(_)) => {
                    Ok(unknown(schema::OBSTRUCTION_REPORT, "MissingClassData", e.to_string()))
                }
                Err(e @ ObstructionError::NotApplicable(_)) => {
                    Ok(unknown(schema::OBSTRUCTION_REPORT, "NotApplicable", e.to_string()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::EulerSquare { input, n } => {
            let data = ManifoldClassData::from_json(read_json(&input)?)?;
            match euler_square_problem(&data, n) {
                Ok(p) => {
                    if p.torsion_ignored {
                        eprintln!("note: torsion in H^{} is ignored; the system ranges over the free part", n - data.m());
                    }
                    Ok(Reply::new(AFFIRMATIVE, p.system.to_json()))
                }
                Err(e @ ObstructionError::MissingClassData(_)) => {
                    Ok(unknown(schema::QUAD_SYSTEM, "MissingClassData", e.to_string()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::PiGn { n, k } => {
            let t = load_tables()?;
            match pi_gn(&t, n, k) {
                Ok(r) => {
                    let code = if r.status == GnStatus::Resolved { AFFIRMATIVE } else { UNKNOWN };
                    Ok(Reply::new(code, r.to_json()))
                }
                Err(GnError::Table(e)) => table_unknown(schema::GN_GROUP, e),
                Err(e @ GnError::MissingCompositionData { .. }) => {
                    Ok(unknown(schema::GN_GROUP, "MissingCompositionData", e.to_string()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::PiSphere { n, k } => {
            let t = load_tables()?;
            match t.pi_sphere_entry(n, k) {
                Ok(e) => Ok(Reply::new(AFFIRMATIVE, sphere_payload(json!({"n": n, "k": k}), &e.group, &e.generator_labels))),
                Err(e) => table_unknown(schema::SPHERE_GROUP, e),
            }
        }
        Command::StableStem { k } => {
            let t = load_tables()?;
            match t.stable_stem(k) {
                Ok(g) => {
                    let imj = t.im_j_order(k)?;
                    let mut v = sphere_payload(json!({"stem": k}), &g, &[]);
                    v["im_j_order"] = json!(imj);
                    Ok(Reply::new(AFFIRMATIVE, v))
                }
                Err(e) => table_unknown(schema::SPHERE_GROUP, e),
            }
        }
        Command::Theta { k } => {
            let t = load_tables()?;
            match theta_assembly(&t, k) {
                Ok(a) => Ok(Reply::new(AFFIRMATIVE, a.to_json())),
                Err(ExoticError::OutOfTable(d)) | Err(ExoticError::Table(TableError::OutOfTable(d))) => {
                    Ok(unknown(schema::THETA_ASSEMBLY, "OutOfTable", d))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Bp { k1, paper_divisor } => {
            let result = match paper_divisor {
                None => bp_order(k1).map(|o| json!({"k1": k1, "order": big_json(&o), "convention": "standard"})),
                Some(reading) => {
                    let (conv, name) = match reading {
                        DivisorReading::Half => (RConvention::Half, "half"),
                        DivisorReading::Quarter => (RConvention::Quarter, "quarter"),
                    };
                    bp_order_divisor_paper(k1, conv).map(|o| json!({"k1": k1, "order": big_json(&o), "convention": name}))
                }
            };
            match result {
                Ok(v) => Ok(Reply::new(AFFIRMATIVE, schema::tag(v, schema::BP_ORDER))),
                Err(ExoticError::OutOfTable(d)) => Ok(unknown(schema::BP_ORDER, "OutOfTable", d)),
                Err(e) => Err(e.into()),
            }
        }
        Command::PGroup { k } => {
            if k == 0 {
                return Err(Failure("P_k needs k >= 1".into()));
            }
            let g = p_group(k);
            Ok(Reply::new(AFFIRMATIVE, schema::tag(json!({"k": k, "group": g}), schema::P_GROUP)))
        }
        Command::Bernoulli { r } => {
            if r == 0 {
                return Err(Failure("B_r needs r >= 1".into()));
            }
            let b = bernoulli(r);
            let v = json!({
                "r": r,
                "value": b.to_string(),
                "numerator": b.numer().to_string(),
                "denominator": b.denom().to_string(),
            });
            Ok(Reply::new(AFFIRMATIVE, schema::tag(v, schema::BERNOULLI)))
        }
        Command::Signature { input } => {
            let v = schema::untag(read_json(&input)?, schema::SYMMETRIC_FORM)?;
            let rows: Vec<Vec<i64>> = serde_json::from_value(v.get("matrix").cloned().unwrap_or(Value::Null))
                .map_err(|e| Failure(format!("expected {{\"matrix\": [[...]]}}: {e}")))?;
            let m = IntMatrix::from_rows(&rows)?;
            let s = signature(&m)?;
            Ok(Reply::new(AFFIRMATIVE, schema::tag(json!({"signature": s, "rank": m.rows()}), schema::SIGNATURE)))
        }
        Command::Arf { input } => {
            let v = schema::untag(read_json(&input)?, schema::QUADRATIC_REFINEMENT)?;
            let q: QuadraticRefinement = serde_json::from_value(v)?;
            let a = arf_invariant(&q)?;
            Ok(Reply::new(AFFIRMATIVE, schema::tag(json!({"arf": a, "genus": q.genus}), schema::ARF)))
        }
    }
}

fn big_json(x: &immgate_core::algebra::BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn sphere_payload(mut base: Value, group: &immgate_core::FGAbelianGroup, labels: &[String]) -> Value {
    base["group"] = json!(group.to_string());
    base["structure"] = serde_json::to_value(group).expect("groups serialize");
    base["generator_labels"] = json!(labels);
    schema::tag(base, schema::SPHERE_GROUP)
}
