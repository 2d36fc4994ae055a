//! Command-line surface: computations, verification suites, machine-readable
//! output, and the vertex result cache.
//!
//! Exit codes: 0 on success, 1 on a verification failure, 2 on usage errors
//! (bad flags, parse errors, bound violations). Identical configuration and
//! seed produce byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::chern::Space;
use crate::cobordism::{
    blowup_relation, decompose, milnor_fgl_coefficients, verify_relation, CobordismClass,
};
use crate::dt;
use crate::fgl::FormalGroupLaw;
use crate::parse::{parse_divisor, parse_space, space_expr};
use crate::partition::{chern_order, render as render_partition};
use crate::rat::Q;
use crate::verify::{run_all, VerifyConfig};
use crate::vertex::{self, VertexOptions, CONVENTION_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Runtime configuration shared by all commands. Defaults match the library
/// defaults: degree 6, order 6, vertex bound 3, dimension bound 4.
#[derive(Debug, Args)]
pub struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Truncation degree for formal group laws.
    #[arg(long, global = true, default_value_t = 6)]
    pub degree: u32,
    /// Truncation order for q-series.
    #[arg(long, global = true, default_value_t = 6)]
    pub order: u32,
    /// Bound on the vertex box count.
    #[arg(long, global = true, default_value_t = 3)]
    pub nbound: u32,
    /// Bound on space dimension for Chern-number computations.
    #[arg(long, global = true, default_value_t = 4)]
    pub dimbound: u32,
    /// Seed for the vertex specialization draws.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for the vertex localization sum.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Cache file for vertex results (also via COBORD_CACHE).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

impl Config {
    fn cache_path(&self) -> PathBuf {
        self.cache
            .clone()
            .or_else(|| std::env::var_os("COBORD_CACHE").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".cobord-cache"))
    }

    fn vertex_options(&self) -> VertexOptions {
        VertexOptions {
            seed: self.seed,
            jobs: self.jobs,
            box_bound: self.nbound.max(vertex::DEFAULT_BOX_BOUND),
            draws: 3,
        }
    }

    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            fgl_degree: self.degree,
            qseries_order: self.order,
            vertex_n_bound: self.nbound,
            dim_bound: self.dimbound,
            seed: self.seed,
            jobs: self.jobs,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cobord",
    version,
    about = "Exact computations in double-point algebraic cobordism and degree-0 DT theory"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Formal group laws over Q[p1..pD].
    Fgl {
        #[command(subcommand)]
        cmd: FglCmd,
    },
    /// Cohomology rings and Chern numbers.
    Chern {
        #[command(subcommand)]
        cmd: ChernCmd,
    },
    /// The rational cobordism ring and its relations.
    Cobordism {
        #[command(subcommand)]
        cmd: CobordismCmd,
    },
    /// Degree-0 Donaldson-Thomas partition functions.
    Dt {
        #[command(subcommand)]
        cmd: DtCmd,
    },
    /// The equivariant localization oracle.
    Vertex {
        #[command(subcommand)]
        cmd: VertexCmd,
    },
    /// Run every acceptance criterion; exit nonzero on any failure.
    VerifyAll,
}

#[derive(Debug, Subcommand)]
pub enum FglCmd {
    /// Table of the universal-law coefficients a_{ij}.
    Coeffs,
    /// Table of the difference-series coefficients b_{ij}.
    Bcoeffs,
    /// Check the law axioms and the difference identities.
    Check,
}

#[derive(Debug, Subcommand)]
pub enum ChernCmd {
    /// All Chern numbers of a space.
    Numbers { space: String },
    /// The presented cohomology ring of a space.
    Ring { space: String },
}

#[derive(Debug, Subcommand)]
pub enum CobordismCmd {
    /// Express a space in the basis of products of projective spaces.
    Decompose { space: String },
    /// Check the blow-up double point relation for a 3-fold.
    VerifyBlowup { space: String },
    /// Formal-group-law coefficients from Milnor hypersurfaces.
    FglCoeffs {
        #[arg(long, default_value_t = 4)]
        max: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum DtCmd {
    /// The partition function Z(X, q) (or Z(X/S, q) with --rel).
    Zseries {
        space: String,
        #[arg(long)]
        rel: Option<String>,
    },
    /// The DT exponent n(X) (or n(X/S) with --rel).
    Exponent {
        space: String,
        #[arg(long)]
        rel: Option<String>,
    },
    /// Degeneration-formula residual n(X/S) - n(X) + n(P/S_-).
    CheckDegeneration { space: String, divisor: String },
    /// Compare Z(X, q) coefficients against the vertex oracle.
    VerifyConjecture1 {
        space: String,
        #[arg(long)]
        via: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum VertexCmd {
    /// The degree-0 DT invariant N_{n,0} by localization.
    Ndt {
        space: String,
        #[arg(long)]
        n: u32,
    },
}

/// Output of a run: exit code plus the full stdout text.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn usage_error(msg: impl std::fmt::Display) -> Outcome {
    Outcome { code: EXIT_USAGE, stdout: format!("error: {msg}\n") }
}

/// Entry point used by `main` and by the tests (which check byte-identical
/// reruns and JSON round-trips).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; usage errors exit with 2
            let rendered = e.render().to_string();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome { code, stdout: rendered };
        }
    };
    dispatch(&cli.config, &cli.command)
}

fn dispatch(cfg: &Config, cmd: &Command) -> Outcome {
    match cmd {
        Command::Fgl { cmd } => fgl_cmd(cfg, cmd),
        Command::Chern { cmd } => chern_cmd(cfg, cmd),
        Command::Cobordism { cmd } => cobordism_cmd(cfg, cmd),
        Command::Dt { cmd } => dt_cmd(cfg, cmd),
        Command::Vertex { cmd } => vertex_cmd(cfg, cmd),
        Command::VerifyAll => verify_all_cmd(cfg),
    }
}

// ---------------------------------------------------------------- JSON types

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CoefficientTableJson {
    pub kind: String,
    pub degree: u32,
    /// `a_{ij}` as exponent-vector keyed polynomials over `p1..p_{D-1}`.
    pub coefficients: Vec<CoefficientEntryJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CoefficientEntryJson {
    pub i: u32,
    pub j: u32,
    /// map from comma-separated parameter exponents to rational strings
    pub poly: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ChernNumbersJson {
    pub space: String,
    pub dimension: u32,
    pub chern_numbers: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DecomposeJson {
    pub space: String,
    pub dimension: u32,
    pub classes: Vec<DecomposeEntryJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DecomposeEntryJson {
    pub partition: Vec<u32>,
    pub coefficient: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ZSeriesJson {
    pub space: String,
    pub relative_to: Option<String>,
    pub order: u32,
    pub exponent: String,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct NdtJson {
    pub space: String,
    pub n: u32,
    pub value: String,
    pub convention_version: u32,
}

fn to_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    Outcome { code: EXIT_OK, stdout: format!("{text}\n") }
}

// ------------------------------------------------------------------ commands

fn poly_json(series: &crate::series::MultiSeries) -> BTreeMap<String, String> {
    // keys are comma-separated exponents of the parameter variables only
    let table = series.table();
    let param_idx: Vec<usize> = table
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.truncating)
        .map(|(i, _)| i)
        .collect();
    let mut out = BTreeMap::new();
    for (e, c) in series.terms() {
        let key: Vec<String> = param_idx.iter().map(|&i| e[i].to_string()).collect();
        out.insert(key.join(","), c.to_string());
    }
    out
}

fn fgl_cmd(cfg: &Config, cmd: &FglCmd) -> Outcome {
    let f = FormalGroupLaw::universal(cfg.degree);
    match cmd {
        FglCmd::Coeffs => {
            let coeffs = f.coefficients();
            match cfg.format {
                Format::Text => {
                    let table = crate::fgl::render_coefficient_table("a", &coeffs);
                    Outcome { code: EXIT_OK, stdout: format!("{table}\n") }
                }
                Format::Json => to_json(&CoefficientTableJson {
                    kind: "a".into(),
                    degree: cfg.degree,
                    coefficients: coeffs
                        .iter()
                        .map(|((i, j), c)| CoefficientEntryJson {
                            i: *i,
                            j: *j,
                            poly: poly_json(c),
                        })
                        .collect(),
                }),
            }
        }
        FglCmd::Bcoeffs => {
            let coeffs = match f.difference_coefficients() {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            match cfg.format {
                Format::Text => {
                    let table = crate::fgl::render_coefficient_table("b", &coeffs);
                    Outcome { code: EXIT_OK, stdout: format!("{table}\n") }
                }
                Format::Json => to_json(&CoefficientTableJson {
                    kind: "b".into(),
                    degree: cfg.degree,
                    coefficients: coeffs
                        .iter()
                        .map(|((i, j), c)| CoefficientEntryJson {
                            i: *i,
                            j: *j,
                            poly: poly_json(c),
                        })
                        .collect(),
                }),
            }
        }
        FglCmd::Check => {
            let axioms = match f.check_axioms() {
                Ok(a) => a,
                Err(e) => return usage_error(e),
            };
            let diffs = match f.check_difference_identities() {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            let lines = [
                ("identity", axioms.identity),
                ("commutativity", axioms.commutativity),
                ("associativity", axioms.associativity),
                ("difference translation invariance", diffs.translation_invariance),
                ("difference-sum compatibility", diffs.sum_compatibility),
            ];
            let mut out = String::new();
            let mut ok = true;
            for (name, pass) in lines {
                out.push_str(&format!("{name}: {}\n", if pass { "pass" } else { "FAIL" }));
                ok &= pass;
            }
            Outcome { code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }, stdout: out }
        }
    }
}

fn parse_space_arg(expr: &str) -> Result<Space, Outcome> {
    parse_space(expr).map_err(usage_error)
}

fn chern_cmd(cfg: &Config, cmd: &ChernCmd) -> Outcome {
    match cmd {
        ChernCmd::Numbers { space } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let nums = match x.chern_numbers(cfg.dimbound) {
                Ok(n) => n,
                Err(e) => return usage_error(e),
            };
            match cfg.format {
                Format::Text => {
                    let mut out = String::new();
                    for l in chern_order(x.dimension()) {
                        out.push_str(&format!(
                            "c{} = {}\n",
                            render_partition(&l),
                            nums[&l]
                        ));
                    }
                    Outcome { code: EXIT_OK, stdout: out }
                }
                Format::Json => to_json(&ChernNumbersJson {
                    space: space_expr(&x),
                    dimension: x.dimension(),
                    chern_numbers: nums
                        .iter()
                        .map(|(l, v)| (render_partition(l), v.to_string()))
                        .collect(),
                }),
            }
        }
        ChernCmd::Ring { space } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let geo = match x.geometry() {
                Ok(g) => g,
                Err(e) => return usage_error(e),
            };
            let mut out = format!("{}\n", geo.ring.describe());
            let names: Vec<String> = geo
                .ring
                .generators()
                .iter()
                .map(|g| g.name.clone())
                .collect();
            for degree in 0..=geo.ring.top_degree() {
                let basis: Vec<String> = geo
                    .ring
                    .monomial_basis(degree)
                    .iter()
                    .map(|e| {
                        let mono: Vec<String> = e
                            .iter()
                            .enumerate()
                            .filter(|(_, &x)| x > 0)
                            .map(|(i, &x)| {
                                if x == 1 {
                                    names[i].clone()
                                } else {
                                    format!("{}^{x}", names[i])
                                }
                            })
                            .collect();
                        if mono.is_empty() { "1".to_string() } else { mono.join(" ") }
                    })
                    .collect();
                out.push_str(&format!("degree {degree}: {}\n", basis.join(", ")));
            }
            Outcome { code: EXIT_OK, stdout: out }
        }
    }
}

fn class_json(space: &Space, class: &CobordismClass) -> DecomposeJson {
    DecomposeJson {
        space: space_expr(space),
        dimension: class.dim(),
        classes: class
            .coefficients()
            .map(|(p, c)| DecomposeEntryJson { partition: p.clone(), coefficient: c.to_string() })
            .collect(),
    }
}

fn cobordism_cmd(cfg: &Config, cmd: &CobordismCmd) -> Outcome {
    match cmd {
        CobordismCmd::Decompose { space } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let class = match decompose(&x, cfg.dimbound) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            match cfg.format {
                Format::Text => Outcome {
                    code: EXIT_OK,
                    stdout: format!("[{}] = {class}\n", space_expr(&x)),
                },
                Format::Json => to_json(&class_json(&x, &class)),
            }
        }
        CobordismCmd::VerifyBlowup { space } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let datum = match blowup_relation(&x) {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            let residual = match verify_relation(&datum, cfg.dimbound) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            let ok = residual.is_zero();
            Outcome {
                code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED },
                stdout: format!(
                    "residual = {residual}{}\n",
                    if ok { " (ok)" } else { " (FAIL)" }
                ),
            }
        }
        CobordismCmd::FglCoeffs { max } => {
            let a = match milnor_fgl_coefficients(*max, cfg.dimbound) {
                Ok(a) => a,
                Err(e) => return usage_error(e),
            };
            match cfg.format {
                Format::Text => {
                    let mut out = String::new();
                    for ((i, j), c) in &a {
                        out.push_str(&format!("a[{i},{j}] = {c}\n"));
                    }
                    Outcome { code: EXIT_OK, stdout: out }
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Entry {
                        i: u32,
                        j: u32,
                        classes: Vec<DecomposeEntryJson>,
                    }
                    let entries: Vec<Entry> = a
                        .iter()
                        .map(|((i, j), c)| Entry {
                            i: *i,
                            j: *j,
                            classes: c
                                .coefficients()
                                .map(|(p, q)| DecomposeEntryJson {
                                    partition: p.clone(),
                                    coefficient: q.to_string(),
                                })
                                .collect(),
                        })
                        .collect();
                    to_json(&entries)
                }
            }
        }
    }
}

fn dt_cmd(cfg: &Config, cmd: &DtCmd) -> Outcome {
    match cmd {
        DtCmd::Zseries { space, rel } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let (z, exponent, rel_expr) = match rel {
                None => {
                    let e = match x.dt_exponent() {
                        Ok(e) => e,
                        Err(e) => return usage_error(e),
                    };
                    match dt::z_absolute(&x, cfg.order) {
                        Ok(z) => (z, e, None),
                        Err(e) => return usage_error(e),
                    }
                }
                Some(rel) => {
                    let s = match parse_divisor(rel, &x) {
                        Ok(s) => s,
                        Err(e) => return usage_error(e),
                    };
                    let e = match x.log_dt_exponent(&s) {
                        Ok(e) => e,
                        Err(e) => return usage_error(e),
                    };
                    match dt::z_relative(&x, &s, cfg.order) {
                        Ok(z) => (z, e, Some(rel.clone())),
                        Err(e) => return usage_error(e),
                    }
                }
            };
            match cfg.format {
                Format::Text => Outcome { code: EXIT_OK, stdout: format!("{z}\n") },
                Format::Json => to_json(&ZSeriesJson {
                    space: space_expr(&x),
                    relative_to: rel_expr,
                    order: cfg.order,
                    exponent: exponent.to_string(),
                    coefficients: z.coefficients().iter().map(Q::to_string).collect(),
                }),
            }
        }
        DtCmd::Exponent { space, rel } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let e = match rel {
                None => x.dt_exponent(),
                Some(rel) => match parse_divisor(rel, &x) {
                    Ok(s) => x.log_dt_exponent(&s),
                    Err(e) => return usage_error(e),
                },
            };
            match e {
                Ok(v) => Outcome { code: EXIT_OK, stdout: format!("{v}\n") },
                Err(e) => usage_error(e),
            }
        }
        DtCmd::CheckDegeneration { space, divisor } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let s = match parse_divisor(divisor, &x) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            match dt::check_degeneration(&x, &s) {
                Ok(r) => {
                    let ok = r.is_zero();
                    Outcome {
                        code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED },
                        stdout: format!("residual = {r}{}\n", if ok { " (ok)" } else { " (FAIL)" }),
                    }
                }
                Err(e) => usage_error(e),
            }
        }
        DtCmd::VerifyConjecture1 { space, via } => {
            if via != "vertex" {
                return usage_error("the only supported oracle is --via vertex");
            }
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let order = cfg.order;
            let z = match dt::z_absolute(&x, order) {
                Ok(z) => z,
                Err(e) => return usage_error(e),
            };
            let opts = cfg.vertex_options();
            let mut out = String::new();
            let mut ok = true;
            for n in 0..=order {
                let ndt = match vertex::n_dt(&x, n, &opts) {
                    Ok(v) => v,
                    Err(e) => return usage_error(e),
                };
                let zc = z.coeff(n);
                let agree = zc == Q::from_integer(ndt.clone());
                ok &= agree;
                out.push_str(&format!(
                    "n = {n}: vertex {ndt}, series {zc}{}\n",
                    if agree { "" } else { " (MISMATCH)" }
                ));
            }
            Outcome { code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }, stdout: out }
        }
    }
}

fn vertex_cmd(cfg: &Config, cmd: &VertexCmd) -> Outcome {
    match cmd {
        VertexCmd::Ndt { space, n } => {
            let x = match parse_space_arg(space) {
                Ok(x) => x,
                Err(o) => return o,
            };
            if *n > cfg.nbound {
                return usage_error(format!("n = {n} exceeds --nbound = {}", cfg.nbound));
            }
            let expr = space_expr(&x);
            let key = format!("ndt|{expr}|{n}|v{CONVENTION_VERSION}");
            let cache_path = cfg.cache_path();
            if let Some(hit) = cache_lookup(&cache_path, &key) {
                return emit_ndt(cfg, &expr, *n, &hit);
            }
            let value = match vertex::n_dt(&x, *n, &cfg.vertex_options()) {
                Ok(v) => v.to_string(),
                Err(e) => return usage_error(e),
            };
            cache_append(&cache_path, &key, &value);
            emit_ndt(cfg, &expr, *n, &value)
        }
    }
}

fn emit_ndt(cfg: &Config, expr: &str, n: u32, value: &str) -> Outcome {
    match cfg.format {
        Format::Text => Outcome { code: EXIT_OK, stdout: format!("{value}\n") },
        Format::Json => to_json(&NdtJson {
            space: expr.to_string(),
            n,
            value: value.to_string(),
            convention_version: CONVENTION_VERSION,
        }),
    }
}

/// One `key=value` pair per line; unreadable or corrupt lines are ignored
/// and recomputed.
fn cache_lookup(path: &PathBuf, key: &str) -> Option<String> {
    let content = fs::read_to_string(path).ok()?;
    for line in content.lines() {
        if let Some((k, v)) = line.split_once('=') {
            if k == key && v.chars().all(|c| c.is_ascii_digit() || c == '-') && !v.is_empty() {
                return Some(v.to_string());
            }
        }
    }
    None
}

fn cache_append(path: &PathBuf, key: &str, value: &str) {
    use std::io::Write;
    if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(path) {
        let _ = writeln!(f, "{key}={value}");
    }
}

fn verify_all_cmd(cfg: &Config) -> Outcome {
    let results = run_all(&cfg.verify_config());
    let mut out = String::new();
    let mut ok = true;
    for r in &results {
        out.push_str(&r.line());
        out.push('\n');
        ok &= r.passed;
    }
    out.push_str(&format!(
        "{}: {} of {} criteria passed\n",
        if ok { "PASS" } else { "FAIL" },
        results.iter().filter(|r| r.passed).count(),
        results.len()
    ));
    Outcome { code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }, stdout: out }
}

/// Binary entry point.
pub fn main() -> i32 {
    let outcome = run(std::env::args());
    print!("{}", outcome.stdout);
    outcome.code
}
