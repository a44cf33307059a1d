//! `bzeta`: evaluate twisted multiple zeta functions, their contour
//! extension, residue series, and the associated verification suites.
//!
//! Every subcommand assembles a JSON job and prints exactly one output
//! document per job on stdout; human-readable diagnostics go to stderr.
//! `--config FILE` (or the `BZETA_CONFIG` environment variable) supplies a
//! configuration file whose values sit between the built-in defaults and the
//! command-line overrides.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use bzeta_cli::{defaults_value, run_job, run_line, ConfigLayers, Outcome};

#[derive(Parser)]
#[command(
    name = "bzeta",
    version,
    about = "Twisted multiple zeta functions: evaluation, verification, applications",
    propagate_version = true
)]
struct Cli {
    /// JSON configuration file (fallback: the BZETA_CONFIG environment variable).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Boundary/classification tolerance override.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Convergence tolerance override.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Decimal digits carried through serialization.
    #[arg(long, global = true)]
    working_digits: Option<u32>,

    /// Trapezoid sample count on the small circle.
    #[arg(long, global = true)]
    circle_nodes: Option<u32>,
    /// Initial Gauss-Legendre panel count on the ray.
    #[arg(long, global = true)]
    line_panels: Option<u32>,
    /// Initial ray cutoff.
    #[arg(long, global = true)]
    cutoff_t: Option<f64>,
    /// Quadrature stabilization target.
    #[arg(long, global = true)]
    target_tol: Option<f64>,

    /// Series index cutoff (eval-zeta).
    #[arg(long, global = true)]
    max_index: Option<u32>,
    /// Outer index budget for the Lambert-type sums.
    #[arg(long, global = true)]
    m_trunc: Option<u32>,
    /// Pole-modulus radius for residue series.
    #[arg(long, global = true)]
    r_max: Option<f64>,
    /// Box size for the multiple-gamma product.
    #[arg(long, global = true)]
    trunc: Option<u32>,
    /// Largest denominator scanned by rationality detection.
    #[arg(long, global = true)]
    denom_bound: Option<u64>,

    /// runtime_ms source: "none" keeps output byte-reproducible.
    #[arg(long, global = true, value_parser = ["none", "real"])]
    timing: Option<String>,
    /// Seed for randomized verification suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Cmd,
}

/// Parameter point: either explicit coordinates or a structured family.
#[derive(Args, Default)]
struct PointArgs {
    /// Base parameter w (complex, e.g. "1.5" or "0.3+0.7i").
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Direction list a (comma-separated complex values).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<String>>,
    /// Twist list theta (comma-separated reals; fractions like 1/3 allowed).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Option<Vec<String>>,
    /// Structured family instead of w/a/theta: example-one or example-two.
    #[arg(long)]
    setup: Option<String>,
    /// Dimension N (used with --setup).
    #[arg(long)]
    n: Option<u64>,
    /// Twist parameter c for example-one (real or fraction).
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
}

/// Group element: sign-flip subset, permutation, scaling.
#[derive(Args, Default)]
struct GroupArgs {
    /// Sign-flip subset as comma-separated 0-based indices.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<u64>>,
    /// Permutation in one-line image notation (comma-separated, 0-based).
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<u64>>,
    /// Scaling factor alpha (complex).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Direct series evaluation (requires Re s > N).
    EvalZeta {
        /// Exponent s (complex).
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Contour-integral evaluation of the extension.
    #[command(name = "eval-L", alias = "eval-l")]
    EvalL {
        /// Exponent s (complex).
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Closed-form value at s = -k.
    SpecialValue {
        /// Nonnegative integer k.
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Residue at the simple pole s = k (1 <= k <= N).
    Residue {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Sector residue series.
    Rho {
        /// Exponent s (complex, Re s < 1).
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Sector angle psi in (-pi, pi].
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Check the transformation identity at one point.
    VerifyTransform {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        g: GroupArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Randomized exactness suite for the cocycle factor.
    VerifyCocycle {
        /// Dimension N.
        #[arg(long)]
        n: u64,
        /// Number of random trials (default 100).
        #[arg(long)]
        trials: Option<u32>,
    },
    /// Solve g.p = p: bases of the fixed parameter space.
    FixedPoints {
        #[command(flatten)]
        g: GroupArgs,
        /// Dimension N (needed when --sigma is omitted).
        #[arg(long)]
        n: Option<u64>,
    },
    /// Twisted Lambert-type sum of the first structured family.
    LambertEx1 {
        /// Odd dimension N >= 3.
        #[arg(long)]
        n: u64,
        /// Twist c in [0,1) (real or fraction).
        #[arg(long)]
        c: Option<String>,
        /// Weight k (integer; the identity needs N | k).
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        /// Basis for rationality detection (comma-separated complex values).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        basis: Option<Vec<String>>,
    },
    /// Lambert-type sum of the second structured family.
    LambertEx2 {
        /// Dimension N >= 2.
        #[arg(long)]
        n: u64,
        /// Weight k (congruent to N mod 2N for the one-sided identity).
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        /// Sum over all nonzero integers instead of m >= 1.
        #[arg(long)]
        two_sided: bool,
        /// Basis for rationality detection (comma-separated complex values).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        basis: Option<Vec<String>>,
    },
    /// Truncated multiple-gamma product at the base point.
    GammaProduct {
        /// Dimension N >= 2.
        #[arg(long)]
        n: u64,
    },
    /// Leading Taylor/Laurent data at a fixed point of g.
    Kronecker {
        /// Integer expansion point k.
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[command(flatten)]
        g: GroupArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Domain membership report for a parameter point.
    Classify {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Print the full default configuration.
    Defaults,
    /// Run one JSON job document from a file ("-" for stdin).
    Job {
        /// Path to the job document, or "-".
        file: String,
    },
    /// Run newline-delimited JSON jobs; one output document per line.
    Batch {
        /// Path to the job list, or "-".
        file: String,
    },
}

fn insert_point(params: &mut Map<String, Value>, point: &PointArgs) {
    if let Some(w) = &point.w {
        params.insert("w".into(), w.clone().into());
    }
    if let Some(a) = &point.a {
        params.insert("a".into(), a.iter().cloned().map(Value::from).collect());
    }
    if let Some(theta) = &point.theta {
        params.insert(
            "theta".into(),
            theta.iter().cloned().map(Value::from).collect(),
        );
    }
    if let Some(setup) = &point.setup {
        params.insert("setup".into(), setup.clone().into());
    }
    if let Some(n) = point.n {
        params.insert("n".into(), n.into());
    }
    if let Some(c) = &point.c {
        params.insert("c".into(), c.clone().into());
    }
}

fn insert_group(params: &mut Map<String, Value>, g: &GroupArgs) {
    if let Some(lambda) = &g.lambda {
        params.insert("lambda".into(), lambda.iter().copied().collect());
    }
    if let Some(sigma) = &g.sigma {
        params.insert("sigma".into(), sigma.iter().copied().collect());
    }
    if let Some(alpha) = &g.alpha {
        params.insert("alpha".into(), alpha.clone().into());
    }
}

fn build_job(cmd: &Cmd, seed: Option<u64>) -> Option<Value> {
    let mut params = Map::new();
    let name = match cmd {
        Cmd::EvalZeta { s, point } => {
            params.insert("s".into(), s.clone().into());
            insert_point(&mut params, point);
            "eval-zeta"
        }
        Cmd::EvalL { s, point } => {
            params.insert("s".into(), s.clone().into());
            insert_point(&mut params, point);
            "eval-L"
        }
        Cmd::SpecialValue { k, point } => {
            params.insert("k".into(), (*k).into());
            insert_point(&mut params, point);
            "special-value"
        }
        Cmd::Residue { k, point } => {
            params.insert("k".into(), (*k).into());
            insert_point(&mut params, point);
            "residue"
        }
        Cmd::Rho { s, psi, point } => {
            params.insert("s".into(), s.clone().into());
            params.insert("psi".into(), psi.clone().into());
            insert_point(&mut params, point);
            "rho"
        }
        Cmd::VerifyTransform { s, g, point } => {
            params.insert("s".into(), s.clone().into());
            insert_group(&mut params, g);
            insert_point(&mut params, point);
            "verify-transform"
        }
        Cmd::VerifyCocycle { n, trials } => {
            params.insert("n".into(), (*n).into());
            if let Some(t) = trials {
                params.insert("trials".into(), (*t).into());
            }
            "verify-cocycle"
        }
        Cmd::FixedPoints { g, n } => {
            insert_group(&mut params, g);
            if let Some(n) = n {
                params.insert("n".into(), (*n).into());
            }
            "fixed-points"
        }
        Cmd::LambertEx1 { n, c, k, basis } => {
            params.insert("n".into(), (*n).into());
            if let Some(c) = c {
                params.insert("c".into(), c.clone().into());
            }
            params.insert("k".into(), (*k).into());
            if let Some(b) = basis {
                params.insert("basis".into(), b.iter().cloned().map(Value::from).collect());
            }
            "lambert-ex1"
        }
        Cmd::LambertEx2 {
            n,
            k,
            two_sided,
            basis,
        } => {
            params.insert("n".into(), (*n).into());
            params.insert("k".into(), (*k).into());
            if *two_sided {
                params.insert("two_sided".into(), true.into());
            }
            if let Some(b) = basis {
                params.insert("basis".into(), b.iter().cloned().map(Value::from).collect());
            }
            "lambert-ex2"
        }
        Cmd::GammaProduct { n } => {
            params.insert("n".into(), (*n).into());
            "gamma-product"
        }
        Cmd::Kronecker { k, g, point } => {
            params.insert("k".into(), (*k).into());
            insert_group(&mut params, g);
            insert_point(&mut params, point);
            "kronecker"
        }
        Cmd::Classify { point } => {
            insert_point(&mut params, point);
            "classify"
        }
        Cmd::Defaults | Cmd::Job { .. } | Cmd::Batch { .. } => return None,
    };
    let mut job = Map::new();
    job.insert("command".into(), name.into());
    job.insert("params".into(), Value::Object(params));
    if let Some(s) = seed {
        job.insert("seed".into(), s.into());
    }
    Some(Value::Object(job))
}

fn overrides_of(cli: &Cli) -> Option<Value> {
    let mut precision = Map::new();
    if let Some(x) = cli.abs_tol {
        precision.insert("abs_tol".into(), x.into());
    }
    if let Some(x) = cli.rel_tol {
        precision.insert("rel_tol".into(), x.into());
    }
    if let Some(x) = cli.working_digits {
        precision.insert("working_digits".into(), x.into());
    }
    let mut quadrature = Map::new();
    if let Some(x) = cli.circle_nodes {
        quadrature.insert("circle_nodes".into(), x.into());
    }
    if let Some(x) = cli.line_panels {
        quadrature.insert("line_panels".into(), x.into());
    }
    if let Some(x) = cli.cutoff_t {
        quadrature.insert("cutoff_t".into(), x.into());
    }
    if let Some(x) = cli.target_tol {
        quadrature.insert("target_tol".into(), x.into());
    }
    let mut truncation = Map::new();
    if let Some(x) = cli.max_index {
        truncation.insert("max_index".into(), x.into());
    }
    if let Some(x) = cli.m_trunc {
        truncation.insert("m_trunc".into(), x.into());
    }
    if let Some(x) = cli.r_max {
        truncation.insert("r_max".into(), x.into());
    }
    if let Some(x) = cli.trunc {
        truncation.insert("trunc".into(), x.into());
    }
    if let Some(x) = cli.denom_bound {
        truncation.insert("denom_bound".into(), x.into());
    }
    let mut root = Map::new();
    if !precision.is_empty() {
        root.insert("precision".into(), Value::Object(precision));
    }
    if !quadrature.is_empty() {
        root.insert("quadrature".into(), Value::Object(quadrature));
    }
    if !truncation.is_empty() {
        root.insert("truncation".into(), Value::Object(truncation));
    }
    if let Some(t) = &cli.timing {
        root.insert("timing".into(), t.clone().into());
    }
    if root.is_empty() {
        None
    } else {
        Some(Value::Object(root))
    }
}

fn config_file_value(cli: &Cli) -> Result<Option<Value>, String> {
    let path: Option<PathBuf> = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("BZETA_CONFIG").map(PathBuf::from));
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let value = serde_json::from_str(&text)
        .map_err(|e| format!("config file {} is not valid JSON: {e}", path.display()))?;
    Ok(Some(value))
}

fn read_source(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("cannot read {file}: {e}"))
    }
}

fn emit(out: &Outcome) -> i32 {
    println!("{}", out.to_line());
    if out.exit_code != 0 {
        if let Some(msg) = out.error_message() {
            eprintln!("bzeta: {msg}");
        }
    }
    out.exit_code
}

fn schema_abort(msg: &str) -> i32 {
    println!(
        "{}",
        json!({"status": "schema", "exit_code": 4, "error": msg, "runtime_ms": 0})
    );
    eprintln!("bzeta: {msg}");
    4
}

fn run() -> i32 {
    let cli = Cli::parse();
    let file = match config_file_value(&cli) {
        Ok(f) => f,
        Err(msg) => return schema_abort(&msg),
    };
    let layers = ConfigLayers {
        file,
        overrides: overrides_of(&cli),
    };

    match &cli.command {
        Cmd::Defaults => {
            println!(
                "{}",
                serde_json::to_string_pretty(&defaults_value()).expect("defaults serialize")
            );
            0
        }
        Cmd::Job { file } => {
            let text = match read_source(file) {
                Ok(t) => t,
                Err(msg) => return schema_abort(&msg),
            };
            emit(&run_line(text.trim(), &layers))
        }
        Cmd::Batch { file } => {
            let text = match read_source(file) {
                Ok(t) => t,
                Err(msg) => return schema_abort(&msg),
            };
            for line in text.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                emit(&run_line(line, &layers));
            }
            0
        }
        cmd => {
            let job = build_job(cmd, cli.seed).expect("evaluation commands build a job");
            emit(&run_job(&job, &layers))
        }
    }
}

fn main() {
    std::process::exit(run());
}
