//! Command-line front end for the `kkshadow` library.
//!
//! Exit codes: 0 success, 1 `decide` found no family, 2 invalid input
//! (including parse errors and bad arguments), 3 capacity or budget
//! exceeded, 4 verification failure.

use clap::{Parser, Subcommand, ValueEnum};
use kkshadow::bbw::{self, hypotenusal_numbers};
use kkshadow::construct::{self, decide_extremal_with_depth, Spec};
use kkshadow::extremal::{depth, embed_extremal, is_extremal_direct};
use kkshadow::hypergraph::{extension_trees, family_of_hypergraph, hypergraph_of_family};
use kkshadow::io::{format_family, format_hypergraph, parse_family, parse_hypergraph};
use kkshadow::numeric::{full_k_binomial_decomposition, k_binomial_decomposition};
use kkshadow::oracle::{verify_all, DEFAULT_BUDGET};
use kkshadow::setfam::{elems, iterated_shadow, KSetFamily};
use kkshadow::{BigInt, Error};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kkshadow", version, about = "Extremal families for the Kruskal-Katona shadow bound")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// k-binomial decomposition of m, or the shadow decomposition of a family
    Decompose {
        m: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Expand the last term (full decomposition)
        #[arg(long, conflicts_with = "shadow")]
        full: bool,
        /// Family file whose shadow decomposition is printed instead
        #[arg(long)]
        shadow: Option<PathBuf>,
    },
    /// i-th iterated shadow of a family
    Shadow {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        iter: usize,
    },
    /// Minimal non-faces of a family
    Hypergraph { file: PathBuf },
    /// k-sets avoiding every edge of a hypergraph
    Family {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Extension trees of a family's hypergraph, with leaf coefficients
    Trees {
        file: PathBuf,
        /// Read a hypergraph file instead; leaf coefficients are taken at --k
        #[arg(long, requires = "k")]
        hypergraph: bool,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Bins-balls-wall process
    Bbw {
        #[command(subcommand)]
        cmd: BbwCmd,
    },
    /// Extremality, shadow decomposition, depth and walls of a family
    Check { file: PathBuf },
    /// Build construction A, B, A' or B' as a hypergraph file
    Construct {
        kind: ConstructKind,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        counts: Vec<usize>,
        #[arg(long)]
        n: usize,
    },
    /// Is there an extremal family of the given size and depth?
    Decide {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: String,
        #[arg(long)]
        depth: usize,
    },
    /// Smallest extension of the ground set making a family extremal
    Embed { file: PathBuf },
    /// Exhaustive cross-checks over all families of k-subsets of [n]
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Subcommand)]
enum BbwCmd {
    /// Wall trace of the process started from a family's trees
    Run {
        file: PathBuf,
        /// Iterations to run (default k + 1)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// The hypotenusal numbers a[0..count]
    Hypotenusal {
        #[arg(long)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "Aprime")]
    APrime,
    #[value(name = "Bprime")]
    BPrime,
}

enum Failure {
    Lib(Error),
    Io(String),
    Verification(String),
    None,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn family(path: &Path) -> Result<KSetFamily, Failure> {
    Ok(parse_family(&read(path)?)?)
}

fn big(s: &str) -> Result<BigInt, Failure> {
    s.parse().map_err(|_| Failure::Lib(Error::InvalidInput(format!("not an integer: {s:?}"))))
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn with_schema(v: impl serde::Serialize) -> Value {
    let mut v = serde_json::to_value(v).expect("library types serialize");
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!("1"));
    }
    v
}

fn set_list(x: u64) -> Value {
    json!(elems(x))
}

fn trace_json(trace: &bbw::WallTrace, cfg: &bbw::BbwConfig, abrupt: bool) -> Value {
    let balls: Vec<Value> = cfg
        .balls
        .iter()
        .map(|(&(pos, delay), c)| json!({"pos": pos, "delay": delay, "count": c.to_string()}))
        .collect();
    json!({"schema": "1", "walls": trace.walls, "balls": balls, "abrupt": abrupt})
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Decompose { m, k, full, shadow } => {
            let d = match (shadow, m, k) {
                (Some(path), None, _) => bbw::shadow_decomposition_direct(&family(&path)?)?,
                (None, Some(m), Some(k)) if full => full_k_binomial_decomposition(&big(&m)?, k)?,
                (None, Some(m), Some(k)) => k_binomial_decomposition(&big(&m)?, k)?,
                _ => return Err(Failure::Lib(Error::InvalidInput("give either <m> --k <k> or --shadow <file>".into()))),
            };
            Ok(pretty(with_schema(&d)))
        }
        Cmd::Shadow { file, iter } => Ok(format_family(&iterated_shadow(&family(&file)?, iter)?)),
        Cmd::Hypergraph { file } => Ok(format_hypergraph(&hypergraph_of_family(&family(&file)?)?)),
        Cmd::Family { file, k } => {
            let h = parse_hypergraph(&read(&file)?)?;
            Ok(format_family(&family_of_hypergraph(&h, k)?))
        }
        Cmd::Trees { file, hypergraph, k } => {
            let (h, n, k) = if hypergraph {
                let h = parse_hypergraph(&read(&file)?)?;
                let n = h.n;
                (h, n, k.expect("clap enforces --k"))
            } else {
                let s = family(&file)?;
                (hypergraph_of_family(&s)?, s.n, s.k)
            };
            let trees: Vec<Value> = extension_trees(&h)?
                .iter()
                .map(|t| {
                    let nodes: Vec<Value> = t
                        .nodes
                        .iter()
                        .map(|v| {
                            json!({
                                "counter": v.counter,
                                "set_index": v.set_index,
                                "parent": v.parent,
                                "edge_label": set_list(v.edge_label),
                                "label": set_list(v.label),
                                "leaf": v.leaf.map(|(lv, le)| json!({"lv": set_list(lv), "le": set_list(le)})),
                            })
                        })
                        .collect();
                    let coeffs: Vec<String> = t.leaf_coefficients(k).iter().map(|c| c.to_string()).collect();
                    json!({
                        "edge": set_list(t.edge),
                        "blocking": t.blocking.iter().map(|&b| set_list(b)).collect::<Vec<_>>(),
                        "nodes": nodes,
                        "leaf_coefficients": coeffs,
                    })
                })
                .collect();
            Ok(pretty(json!({"schema": "1", "n": n, "k": k, "trees": trees})))
        }
        Cmd::Bbw { cmd: BbwCmd::Run { file, steps } } => {
            let s = family(&file)?;
            let cfg = bbw::init_from_hypergraph(&hypergraph_of_family(&s)?)?;
            let (trace, end, abrupt) = bbw::run(&cfg, steps.unwrap_or(s.k + 1))?;
            Ok(pretty(trace_json(&trace, &end, abrupt)))
        }
        Cmd::Bbw { cmd: BbwCmd::Hypotenusal { count } } => {
            let a: Vec<String> = hypotenusal_numbers(count)?.iter().map(|x| x.to_string()).collect();
            Ok(pretty(json!({"schema": "1", "a": a})))
        }
        Cmd::Check { file } => {
            let s = family(&file)?;
            let (trace, _, abrupt) = bbw::family_process(&s)?;
            let beta = bbw::shadow_decomposition_direct(&s)?;
            Ok(pretty(json!({
                "schema": "1",
                "extremal": is_extremal_direct(&s)?,
                "beta": beta.coeffs,
                "depth": depth(&s)?,
                "walls": trace.walls,
                "abrupt": abrupt,
            })))
        }
        Cmd::Construct { kind, j, r, counts, n } => {
            let kind = match kind {
                ConstructKind::A => construct::Kind::A,
                ConstructKind::B => construct::Kind::B,
                ConstructKind::APrime => construct::Kind::APrime,
                ConstructKind::BPrime => construct::Kind::BPrime,
            };
            Ok(format_hypergraph(&construct::construction(&Spec { kind, j, r, counts, n })?))
        }
        Cmd::Decide { n, k, m, depth } => {
            let Some(d) = decide_extremal_with_depth(n, k, &big(&m)?, depth)? else {
                return Err(Failure::None);
            };
            let mut out = format!("# construction {:?} j={} counts={:?}\n", d.spec.kind, d.spec.j, d.spec.counts);
            match (&d.family, &d.hypergraph) {
                (Some(f), _) => out += &format_family(f),
                (None, Some(h)) => {
                    out += "# family too large to list; minimal non-faces follow\n";
                    out += &format_hypergraph(h);
                }
                (None, None) => {
                    out += "# family too large to list; verified through the process walls\n";
                }
            }
            Ok(out)
        }
        Cmd::Embed { file } => {
            let e = embed_extremal(&family(&file)?)?;
            let mut out = format!("# r0 = {}\n# r = {}\n", e.r0, e.r);
            out += &format_family(e.family.as_ref().expect("embedding returns its family"));
            Ok(out)
        }
        Cmd::Verify { n, k, budget, threads } => {
            let report = in_pool(threads, || verify_all(n, k, budget))??;
            let text = pretty(serde_json::to_value(&report).expect("reports serialize"));
            if report.pass {
                Ok(text)
            } else {
                let _ = std::io::stdout().write_all(text.as_bytes());
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn in_pool<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    Ok(f())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(text) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::None) => {
            println!("NONE");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Capacity(_)) { 3 } else { 2 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(4)
        }
    }
}
