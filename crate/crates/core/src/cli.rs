//! The `hamkit` command line: one JSON line per run on stdout, a short
//! summary on stderr.
//!
//! Exit codes: 0 on success (NO answers included), 2 on usage, I/O or parse
//! errors, 3 when an input exceeds a size guard.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::branchings::{detect_k_internal, detect_k_leaf, DvConfig, InternalSieveConfig};
use crate::error::{Error, Result};
use crate::graph::{parse_digraph, Digraph};
use crate::hamcount::{
    count_avg_degree, count_exact_capped, count_hc_mod, CappedCount, SieveMode, SieveParams, DEFAULT_BETA,
    DEFAULT_LAMBDA,
};
use crate::hamdetect::{default_trials, detect_hamiltonian_cycle};
use crate::matrix::count_out_branchings;
use crate::oracle;
use crate::report::DetectionReport;

#[derive(Debug, Parser)]
#[command(
    name = "hamkit",
    version,
    about = "Algebraic Hamiltonicity and out-branching algorithms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Edge-list graph file.
    graph: PathBuf,
    #[arg(long, env = "HAMKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of spanning out-branchings rooted at ROOT.
    CountBranchings {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        root: usize,
    },
    /// Hamiltonian cycle count modulo p^k.
    CountMod {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_BETA)]
        beta: f64,
        #[arg(long, default_value = "mitm")]
        mode: SieveMode,
    },
    /// Exact Hamiltonian cycle count, assuming at most d^n cycles.
    CountExact {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value = "mitm")]
        mode: SieveMode,
    },
    /// Exact Hamiltonian cycle count with d the average out-degree.
    CountAvgDegree {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "mitm")]
        mode: SieveMode,
    },
    /// Randomized Hamiltonian cycle detection.
    DetectHc {
        #[command(flatten)]
        common: Common,
        /// Defaults to 2 ceil(log2 n) + 4.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Out-branching with at least K internal vertices.
    DetectKInternal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        /// Trials per root.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Out-branching with at least K leaves.
    DetectKLeaf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        /// Trials per root and prime; defaults to 4^k.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        s_estimate: Option<usize>,
        /// Skew substitutions towards k / (k + s).
        #[arg(long, requires = "s_estimate")]
        skew: bool,
    },
    /// Brute-force reference answers.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Held-Karp Hamiltonian cycle count.
    HeldKarpHc {
        #[command(flatten)]
        common: Common,
    },
    /// Held-Karp Hamiltonian s-t path count.
    HeldKarpHp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Enumerates the out-branchings rooted at ROOT.
    Branchings {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        root: usize,
    },
    KInternal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
    },
    KLeaf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
    },
    /// Maximum independent set of the underlying undirected graph.
    Mis {
        #[command(flatten)]
        common: Common,
    },
}

/// Machine-readable result of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub args: Vec<String>,
    /// `yes`/`no` for decisions, the count or residue otherwise.
    pub answer: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Value>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub threads: usize,
    pub elapsed_ms: f64,
    pub diagnostics: Value,
}

impl RunReport {
    fn new(answer: String, diagnostics: Value) -> Self {
        RunReport {
            command: String::new(),
            args: Vec::new(),
            answer,
            count: None,
            residue: None,
            modulus: None,
            seed: 0,
            trials: None,
            threads: 1,
            elapsed_ms: 0.0,
            diagnostics,
        }
    }

    fn counted(count: &BigUint, diagnostics: Value) -> Self {
        RunReport {
            count: Some(big(count)),
            ..RunReport::new(count.to_string(), diagnostics)
        }
    }

    fn decided(report: &DetectionReport) -> Self {
        RunReport {
            trials: Some(report.trials),
            ..RunReport::new(answer_str(report.is_yes()), to_value(report))
        }
    }
}

fn big(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn answer_str(yes: bool) -> String {
    if yes { "yes" } else { "no" }.to_string()
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CountBranchings { .. } => "count-branchings",
            Command::CountMod { .. } => "count-mod",
            Command::CountExact { .. } => "count-exact",
            Command::CountAvgDegree { .. } => "count-avg-degree",
            Command::DetectHc { .. } => "detect-hc",
            Command::DetectKInternal { .. } => "detect-k-internal",
            Command::DetectKLeaf { .. } => "detect-k-leaf",
            Command::Oracle(o) => match o {
                OracleCommand::HeldKarpHc { .. } => "oracle held-karp-hc",
                OracleCommand::HeldKarpHp { .. } => "oracle held-karp-hp",
                OracleCommand::Branchings { .. } => "oracle branchings",
                OracleCommand::KInternal { .. } => "oracle k-internal",
                OracleCommand::KLeaf { .. } => "oracle k-leaf",
                OracleCommand::Mis { .. } => "oracle mis",
            },
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::CountBranchings { common, .. }
            | Command::CountMod { common, .. }
            | Command::CountExact { common, .. }
            | Command::CountAvgDegree { common, .. }
            | Command::DetectHc { common, .. }
            | Command::DetectKInternal { common, .. }
            | Command::DetectKLeaf { common, .. } => common,
            Command::Oracle(o) => match o {
                OracleCommand::HeldKarpHc { common }
                | OracleCommand::HeldKarpHp { common, .. }
                | OracleCommand::Branchings { common, .. }
                | OracleCommand::KInternal { common, .. }
                | OracleCommand::KLeaf { common, .. }
                | OracleCommand::Mis { common } => common,
            },
        }
    }
}

fn execute(cmd: &Command, g: &Digraph) -> Result<RunReport> {
    let seed = cmd.common().seed;
    Ok(match cmd {
        Command::CountBranchings { root, .. } => RunReport::counted(&count_out_branchings(g, *root)?, json!({})),
        Command::CountMod {
            p,
            k,
            lambda,
            beta,
            mode,
            ..
        } => {
            let params = SieveParams::with_options(g.n() + 1, *p, *k, *lambda, *beta, seed, *mode)?;
            let out = count_hc_mod(g, &params)?;
            RunReport {
                residue: Some(json!(out.residue)),
                modulus: Some(json!(out.modulus)),
                ..RunReport::new(out.residue.to_string(), to_value(&out))
            }
        }
        Command::CountExact { d, mode, .. } => {
            let out = count_exact_capped(g, *d, seed, *mode)?;
            match &out {
                CappedCount::Exact { count, modulus } => RunReport {
                    modulus: Some(big(modulus)),
                    ..RunReport::counted(count, to_value(&out))
                },
                CappedCount::CapExceeded { residue, modulus } => RunReport {
                    residue: Some(big(residue)),
                    modulus: Some(big(modulus)),
                    ..RunReport::new(residue.to_string(), to_value(&out))
                },
            }
        }
        Command::CountAvgDegree { mode, .. } => RunReport::counted(&count_avg_degree(g, seed, *mode)?, json!({})),
        Command::DetectHc { trials, .. } => {
            let trials = trials.unwrap_or_else(|| default_trials(g.n()));
            RunReport::decided(&detect_hamiltonian_cycle(g, trials, seed)?)
        }
        Command::DetectKInternal { k, trials, .. } => {
            let cfg = InternalSieveConfig {
                trials: *trials,
                ..InternalSieveConfig::new(g.n(), seed)
            };
            RunReport::decided(&detect_k_internal(g, *k, &cfg)?)
        }
        Command::DetectKLeaf {
            k,
            budget,
            s_estimate,
            skew,
            ..
        } => {
            let mut cfg = DvConfig::new(*k, seed);
            if let Some(b) = budget {
                cfg.budget = *b;
            }
            if let Some(s) = s_estimate {
                cfg = if *skew {
                    cfg.with_s_estimate(*s)
                } else {
                    DvConfig {
                        s_estimate: Some(*s),
                        ..cfg
                    }
                };
            }
            RunReport::decided(&detect_k_leaf(g, *k, &cfg)?)
        }
        Command::Oracle(o) => match o {
            OracleCommand::HeldKarpHc { .. } => RunReport::counted(&oracle::held_karp_count_hc(g)?.into(), json!({})),
            OracleCommand::HeldKarpHp { s, t, .. } => {
                RunReport::counted(&oracle::held_karp_count_hp(g, *s, *t)?.into(), json!({}))
            }
            OracleCommand::Branchings { root, .. } => {
                let list = oracle::enumerate_out_branchings(g, *root)?;
                RunReport::counted(&list.branchings.len().into(), to_value(&list))
            }
            OracleCommand::KInternal { k, .. } => {
                RunReport::new(answer_str(oracle::brute_k_internal(g, *k)?), json!({}))
            }
            OracleCommand::KLeaf { k, .. } => RunReport::new(answer_str(oracle::brute_k_leaf(g, *k)?), json!({})),
            OracleCommand::Mis { .. } => {
                let set = oracle::brute_mis(g)?;
                RunReport::new(set.len().to_string(), json!({ "set": set }))
            }
        },
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Guard(_) => 3,
        _ => 2,
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let cmd = cli.command;
    let common = cmd.common();
    let fail = |err: &mut dyn Write, code: i32, msg: String| {
        let _ = writeln!(err, "hamkit: {msg}");
        code
    };

    let text = match std::fs::read_to_string(&common.graph) {
        Ok(t) => t,
        Err(e) => return fail(err, 2, format!("{}: {e}", common.graph.display())),
    };
    let parsed = match parse_digraph(&text) {
        Ok(p) => p,
        Err(e) => return fail(err, 2, format!("{}: {e}", common.graph.display())),
    };
    if parsed.duplicate_arcs > 0 {
        let _ = writeln!(
            err,
            "hamkit: warning: collapsed {} duplicate arcs",
            parsed.duplicate_arcs
        );
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.threads).build() {
        Ok(p) if common.threads > 0 => p,
        _ => return fail(err, 2, format!("invalid thread count {}", common.threads)),
    };

    let start = Instant::now();
    let result = pool.install(|| execute(&cmd, &parsed.graph));
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut report = match result {
        Ok(r) => r,
        Err(e) => return fail(err, exit_code(&e), e.to_string()),
    };
    report.command = cmd.name().to_string();
    report.args = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    report.seed = common.seed;
    report.threads = common.threads;
    report.elapsed_ms = elapsed_ms;

    let line = serde_json::to_string(&report).expect("report serializes");
    if writeln!(out, "{line}").is_err() {
        return 2;
    }
    if let Some(w) = report
        .diagnostics
        .pointer("/diagnostics/warning")
        .and_then(Value::as_str)
    {
        let _ = writeln!(err, "hamkit: warning: {w}");
    }
    let _ = writeln!(
        err,
        "{}: {} (n = {}, m = {}, seed {}, {:.1} ms)",
        report.command,
        report.answer,
        parsed.graph.n(),
        parsed.graph.arc_count(),
        report.seed,
        elapsed_ms
    );
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["hamkit", "detect-hc"]).0, 2);
        assert_eq!(run_str(&["hamkit", "bogus", "g.txt"]).0, 2);
        assert_eq!(run_str(&["hamkit", "detect-hc", "/nonexistent/graph.txt"]).0, 2);
        assert_eq!(run_str(&["hamkit", "--help"]).0, 0);
    }
}
