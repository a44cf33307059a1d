//! JSON front end over `bzeta_core`: one job document in, one output
//! document out.
//!
//! A job is `{command, params…, config?, seed?}` where the command-specific
//! parameters may sit either inside a `params` object or flattened at the
//! top level. [`run_job`] resolves the configuration (built-in defaults ←
//! config file ← job `config` ← command-line overrides), dispatches to the
//! library, and renders the result as a single JSON object with sorted keys
//! so that identical jobs produce byte-identical documents.
//!
//! Complex numbers are emitted as `{re, im}` pairs of decimal strings
//! (shortest round-trip form), never as floats, so downstream rationality
//! checks see the full working precision. Exit codes: 0 success, 2
//! precondition violation, 3 non-convergence, 4 malformed job.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use bzeta_core::applications::{
    detect_rational, gamma_product, kronecker_limit, lambert_ex1, lambert_ex2,
    lambert_ex2_twosided, RationalityVerdict,
};
use bzeta_core::contour::{l_extended, rho, verify_transform, QuadratureConfig, ResidualReport};
use bzeta_core::domain::{classify, DomainPoint, Subset};
use bzeta_core::error::Error as CoreError;
use bzeta_core::evaluator::{
    residue_at_integer, special_value, zeta_series, EvalResult, StructuredSetup,
};
use bzeta_core::group::{
    compose, fixed_point_space, inverse, j_factor, CaseTag, GroupElement, Perm, WRule,
};
use bzeta_core::precision::PrecisionConfig;

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

/// Truncation budgets for the summation-based commands. Individual jobs may
/// override any of these through a parameter of the same name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationConfig {
    /// Index cutoff per coordinate for the direct series.
    pub max_index: u32,
    /// Starting outer index for the Lambert-type sums.
    pub m_trunc: u32,
    /// Pole-modulus radius for the sector residue series.
    pub r_max: f64,
    /// Per-coordinate box size for the multiple-gamma product.
    pub trunc: u32,
    /// Largest denominator scanned by rationality detection.
    pub denom_bound: u64,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig {
            max_index: 100_000,
            m_trunc: 64,
            r_max: 120.0,
            trunc: 40,
            denom_bound: 10_000,
        }
    }
}

/// Whether `runtime_ms` reports the wall clock. The default `none` pins the
/// field to 0 so that re-running a job yields a byte-identical document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TimingMode {
    #[default]
    None,
    Real,
}

/// Full run configuration; `bzeta defaults` prints this with every default
/// filled in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub precision: PrecisionConfig,
    pub quadrature: QuadratureConfig,
    pub truncation: TruncationConfig,
    pub timing: TimingMode,
}

/// Configuration sources outside the job document: an already-parsed config
/// file (lowest priority above the defaults) and command-line overrides
/// (highest priority).
#[derive(Debug, Clone, Default)]
pub struct ConfigLayers {
    pub file: Option<Value>,
    pub overrides: Option<Value>,
}

pub fn default_config() -> RunConfig {
    RunConfig::default()
}

pub fn defaults_value() -> Value {
    serde_json::to_value(RunConfig::default()).expect("defaults serialize")
}

fn deep_merge(dst: &mut Value, src: &Value) {
    match (dst, src) {
        (Value::Object(d), Value::Object(s)) => {
            for (k, v) in s {
                match d.get_mut(k) {
                    Some(slot) => deep_merge(slot, v),
                    None => {
                        d.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (d, s) => *d = s.clone(),
    }
}

fn resolve_config(job_cfg: Option<&Value>, layers: &ConfigLayers) -> Result<RunConfig, CliError> {
    let mut merged = defaults_value();
    if let Some(file) = &layers.file {
        if !file.is_object() {
            return Err(CliError::schema("config file must hold a JSON object"));
        }
        deep_merge(&mut merged, file);
    }
    if let Some(job) = job_cfg {
        if !job.is_null() {
            if !job.is_object() {
                return Err(CliError::schema("`config` must be an object"));
            }
            deep_merge(&mut merged, job);
        }
    }
    if let Some(over) = &layers.overrides {
        deep_merge(&mut merged, over);
    }
    let cfg: RunConfig = serde_json::from_value(merged)
        .map_err(|e| CliError::schema(format!("invalid config: {e}")))?;
    cfg.precision.validate()?;
    cfg.quadrature.validate()?;
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// errors and the output document
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum CliError {
    /// The job does not match the published schema (exit 4).
    Schema(String),
    /// A library precondition or convergence failure (exit 2 / 3).
    Core(CoreError),
}

impl CliError {
    fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    fn status(&self) -> (&'static str, i32) {
        match self {
            CliError::Schema(_) => ("schema", 4),
            CliError::Core(CoreError::Precondition(_)) => ("precondition", 2),
            CliError::Core(CoreError::NonConvergence(_)) => ("non-convergence", 3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

/// One rendered document plus the process exit code it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub doc: Value,
    pub exit_code: i32,
}

impl Outcome {
    /// Compact single-line rendering; keys are already sorted.
    pub fn to_line(&self) -> String {
        serde_json::to_string(&self.doc).expect("document serializes")
    }

    /// The `error` field of failure documents, if any.
    pub fn error_message(&self) -> Option<&str> {
        self.doc.get("error").and_then(Value::as_str)
    }
}

struct Payload {
    value: Complex64,
    abs_error_estimate: f64,
    method: String,
    meta: BTreeMap<String, String>,
    residuals: Option<Vec<ResidualReport>>,
    verdict: Option<RationalityVerdict>,
    details: Option<Value>,
}

impl Payload {
    fn bare(value: Complex64, method: &str) -> Self {
        Payload {
            value,
            abs_error_estimate: 0.0,
            method: method.to_string(),
            meta: BTreeMap::new(),
            residuals: None,
            verdict: None,
            details: None,
        }
    }
}

impl From<EvalResult> for Payload {
    fn from(r: EvalResult) -> Self {
        let method = match serde_json::to_value(r.method) {
            Ok(Value::String(s)) => s,
            _ => "unknown".to_string(),
        };
        Payload {
            value: r.value,
            abs_error_estimate: r.abs_error_estimate,
            method,
            meta: r.meta,
            residuals: None,
            verdict: None,
            details: None,
        }
    }
}

/// Shortest decimal form that round-trips to the same f64.
fn fmt_f64(x: f64) -> String {
    match serde_json::Number::from_f64(x) {
        Some(n) => n.to_string(),
        None => x.to_string(),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": fmt_f64(z.re), "im": fmt_f64(z.im)})
}

fn verdict_json(v: &RationalityVerdict) -> Value {
    json!({
        "is_near_rational": v.is_near_rational,
        "numerator": v.numerator,
        "denominator": v.denominator,
        "residual": v.residual,
        "coefficients": v.coefficients
            .iter()
            .map(|&(n, d)| json!([n, d]))
            .collect::<Vec<_>>(),
    })
}

fn residual_json(r: &ResidualReport) -> Value {
    json!({
        "lhs": complex_json(r.lhs),
        "rhs": complex_json(r.rhs),
        "abs_residual": r.abs_residual,
        "rel_residual": r.rel_residual,
        "details": r.details,
    })
}

fn failure(command: Option<&str>, echo: Option<Value>, err: &CliError) -> Outcome {
    let (status, exit_code) = err.status();
    let mut doc = Map::new();
    doc.insert("status".into(), status.into());
    doc.insert("exit_code".into(), exit_code.into());
    if let Some(c) = command {
        doc.insert("command".into(), c.into());
    }
    if let Some(e) = echo {
        doc.insert("input_echo".into(), e);
    }
    doc.insert("error".into(), err.to_string().into());
    doc.insert("runtime_ms".into(), 0.into());
    Outcome {
        doc: Value::Object(doc),
        exit_code,
    }
}

// ---------------------------------------------------------------------------
// parameter extraction
// ---------------------------------------------------------------------------

type Params = Map<String, Value>;

fn pget<'a>(params: &'a Params, names: &[&str]) -> Option<&'a Value> {
    names.iter().find_map(|n| params.get(*n))
}

fn preq<'a>(params: &'a Params, names: &[&str]) -> Result<&'a Value, CliError> {
    pget(params, names)
        .ok_or_else(|| CliError::schema(format!("missing required parameter `{}`", names[0])))
}

fn parse_real_str(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::schema(format!("cannot parse `{s}` as a number")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| CliError::schema(format!("cannot parse `{s}` as a number")))?;
        if d == 0.0 {
            return Err(CliError::schema(format!("zero denominator in `{s}`")));
        }
        return Ok(n / d);
    }
    t.parse()
        .map_err(|_| CliError::schema(format!("cannot parse `{s}` as a number")))
}

/// Accepts `2`, `-1.5e-3`, `1/3`, `i`, `2i`, `1+2i`, `0.5-0.25i`.
fn parse_complex_str(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(CliError::schema("empty complex literal"));
    }
    if let Ok(x) = parse_real_str(&t) {
        return Ok(Complex64::new(x, 0.0));
    }
    let body = t
        .strip_suffix(['i', 'I'])
        .ok_or_else(|| CliError::schema(format!("cannot parse `{s}` as a complex number")))?;
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..body.len()).rev() {
        let c = bytes[idx] as char;
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
            break;
        }
    }
    let unit = |txt: &str| -> Result<f64, CliError> {
        match txt {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real_str(txt),
        }
    };
    match split {
        None => Ok(Complex64::new(0.0, unit(body)?)),
        Some(idx) => Ok(Complex64::new(
            parse_real_str(&body[..idx])?,
            unit(&body[idx..])?,
        )),
    }
}

fn real_of(v: &Value, what: &str) -> Result<f64, CliError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| CliError::schema(format!("`{what}` is not a finite number"))),
        Value::String(s) => parse_real_str(s),
        _ => Err(CliError::schema(format!("`{what}` must be a number"))),
    }
}

fn complex_of(v: &Value, what: &str) -> Result<Complex64, CliError> {
    match v {
        Value::Number(_) => Ok(Complex64::new(real_of(v, what)?, 0.0)),
        Value::String(s) => parse_complex_str(s),
        Value::Array(items) => match items.as_slice() {
            [re] => Ok(Complex64::new(real_of(re, what)?, 0.0)),
            [re, im] => Ok(Complex64::new(real_of(re, what)?, real_of(im, what)?)),
            _ => Err(CliError::schema(format!(
                "`{what}` as an array must be [re] or [re, im]"
            ))),
        },
        Value::Object(o) => {
            let part = |key: &str| -> Result<f64, CliError> {
                match o.get(key) {
                    Some(x) => real_of(x, what),
                    None => Ok(0.0),
                }
            };
            Ok(Complex64::new(part("re")?, part("im")?))
        }
        _ => Err(CliError::schema(format!(
            "`{what}` must be a complex number"
        ))),
    }
}

/// A top-level array is always a list; entries may themselves be `[re, im]`
/// pairs, `{re, im}` objects, strings, or plain numbers.
fn complex_list_of(v: &Value, what: &str) -> Result<Vec<Complex64>, CliError> {
    match v {
        Value::Array(items) => items.iter().map(|x| complex_of(x, what)).collect(),
        _ => Ok(vec![complex_of(v, what)?]),
    }
}

fn real_list_of(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    match v {
        Value::Array(items) => items.iter().map(|x| real_of(x, what)).collect(),
        _ => Ok(vec![real_of(v, what)?]),
    }
}

fn int_of(v: &Value, what: &str) -> Result<i64, CliError> {
    let fail = || CliError::schema(format!("`{what}` must be an integer"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .or_else(|| {
                n.as_f64()
                    .filter(|x| x.fract() == 0.0 && x.abs() < 9e15)
                    .map(|x| x as i64)
            })
            .ok_or_else(fail),
        Value::String(s) => s.trim().parse().map_err(|_| fail()),
        _ => Err(fail()),
    }
}

fn u32_of(v: &Value, what: &str) -> Result<u32, CliError> {
    u32::try_from(int_of(v, what)?)
        .map_err(|_| CliError::schema(format!("`{what}` is out of range")))
}

fn u64_of(v: &Value, what: &str) -> Result<u64, CliError> {
    u64::try_from(int_of(v, what)?)
        .map_err(|_| CliError::schema(format!("`{what}` is out of range")))
}

fn i32_of(v: &Value, what: &str) -> Result<i32, CliError> {
    i32::try_from(int_of(v, what)?)
        .map_err(|_| CliError::schema(format!("`{what}` is out of range")))
}

fn usize_of(v: &Value, what: &str) -> Result<usize, CliError> {
    usize::try_from(int_of(v, what)?)
        .map_err(|_| CliError::schema(format!("`{what}` is out of range")))
}

fn bool_of(v: &Value, what: &str) -> Result<bool, CliError> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::String(s) => match s.trim() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(CliError::schema(format!("`{what}` must be a boolean"))),
        },
        _ => Err(CliError::schema(format!("`{what}` must be a boolean"))),
    }
}

fn usize_list_of(v: &Value, what: &str) -> Result<Vec<usize>, CliError> {
    match v {
        Value::Array(items) => items.iter().map(|x| usize_of(x, what)).collect(),
        _ => Ok(vec![usize_of(v, what)?]),
    }
}

fn setup_of(sv: &Value, params: &Params) -> Result<StructuredSetup, CliError> {
    let (kind, src): (&str, &Params) = match sv {
        Value::String(s) => (s.as_str(), params),
        Value::Object(o) => (
            o.get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| CliError::schema("`setup.kind` must be a string"))?,
            o,
        ),
        _ => return Err(CliError::schema("`setup` must be a string or an object")),
    };
    let n = usize_of(preq(src, &["n", "N"])?, "n")?;
    match kind {
        "example-one" | "example-1" => {
            let c = match pget(src, &["c"]) {
                Some(v) => real_of(v, "c")?,
                None => 0.0,
            };
            Ok(StructuredSetup::ExampleOne { n, c })
        }
        "example-two" | "example-2" => Ok(StructuredSetup::ExampleTwo { n }),
        other => Err(CliError::schema(format!(
            "unknown setup `{other}` (expected example-one or example-two)"
        ))),
    }
}

fn point_of(params: &Params, prec: &PrecisionConfig) -> Result<DomainPoint, CliError> {
    if let Some(sv) = pget(params, &["setup"]) {
        let setup = setup_of(sv, params)?;
        return Ok(setup.point(prec)?);
    }
    let w = complex_of(preq(params, &["w"])?, "w")?;
    let a = complex_list_of(preq(params, &["a"])?, "a")?;
    let theta = match pget(params, &["theta"]) {
        Some(v) => real_list_of(v, "theta")?,
        None => vec![0.0; a.len()],
    };
    Ok(DomainPoint::new(w, a, theta, prec)?)
}

/// Group element from `lambda` (sorted 0-based indices), `sigma` (one-line
/// image notation, 0-based) and `alpha`; the fields may sit inside a `g`
/// object or directly among the parameters.
fn group_of(params: &Params, fallback_n: Option<usize>) -> Result<GroupElement, CliError> {
    let src: &Params = match pget(params, &["g"]) {
        Some(Value::Object(o)) => o,
        Some(_) => return Err(CliError::schema("`g` must be an object")),
        None => params,
    };
    let sigma_images = match pget(src, &["sigma"]) {
        Some(v) => Some(usize_list_of(v, "sigma")?),
        None => None,
    };
    let lambda_idx = match pget(src, &["lambda"]) {
        Some(v) => usize_list_of(v, "lambda")?,
        None => Vec::new(),
    };
    let alpha = match pget(src, &["alpha"]) {
        Some(v) => complex_of(v, "alpha")?,
        None => Complex64::ONE,
    };
    let n = sigma_images
        .as_ref()
        .map(Vec::len)
        .or(fallback_n)
        .or(match pget(src, &["n", "N"]) {
            Some(v) => Some(usize_of(v, "n")?),
            None => None,
        })
        .ok_or_else(|| {
            CliError::schema("cannot infer the dimension of g; provide `sigma` or `n`")
        })?;
    if n == 0 || n > 32 {
        return Err(CliError::schema("group dimension must lie in 1..=32"));
    }
    for &i in &lambda_idx {
        if i >= n {
            return Err(CliError::schema(format!(
                "lambda index {i} is outside 0..{n}"
            )));
        }
    }
    let sigma = match sigma_images {
        Some(images) => Perm::from_images(images)?,
        None => Perm::identity(n),
    };
    Ok(GroupElement::new(
        Subset::from_indices(&lambda_idx),
        sigma,
        alpha,
    )?)
}

// ---------------------------------------------------------------------------
// command dispatch
// ---------------------------------------------------------------------------

const TAU: f64 = std::f64::consts::TAU;

fn attach_rational_verdict(
    payload: &mut Payload,
    k: i32,
    normalize: bool,
    params: &Params,
    cfg: &RunConfig,
) -> Result<(), CliError> {
    let z = if normalize {
        payload.value * Complex64::new(0.0, TAU).powi(1 - k)
    } else {
        payload.value
    };
    let basis = match pget(params, &["basis"]) {
        Some(v) => complex_list_of(v, "basis")?,
        None => vec![Complex64::ONE],
    };
    let bound = match pget(params, &["denom_bound", "denom-bound"]) {
        Some(v) => u64_of(v, "denom_bound")?,
        None => cfg.truncation.denom_bound,
    };
    payload.meta.insert("normalized_re".into(), fmt_f64(z.re));
    payload.meta.insert("normalized_im".into(), fmt_f64(z.im));
    payload.verdict = Some(detect_rational(z, bound, &basis, &cfg.precision));
    Ok(())
}

/// θ-part of the action of g, usable without a full parameter point.
fn act_theta(g: &GroupElement, theta: &[f64]) -> Vec<f64> {
    let inv = g.sigma().inverse();
    (0..g.n())
        .map(|l| {
            let sign = if g.lambda().contains(l) { -1.0 } else { 1.0 };
            sign * theta[inv.apply(l)]
        })
        .collect()
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> Result<GroupElement, CliError> {
    let mask: u32 = rng.gen_range(0..(1u32 << n));
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    // modulus and argument bounded away from 0 and ±π keeps the integer
    // powers branch-free
    let alpha = Complex64::from_polar(rng.gen_range(0.25..4.0), rng.gen_range(-3.0..3.0));
    Ok(GroupElement::new(
        Subset(mask),
        Perm::from_images(images)?,
        alpha,
    )?)
}

fn cocycle_suite(params: &Params, cfg: &RunConfig, seed: u64) -> Result<Payload, CliError> {
    let n = usize_of(preq(params, &["n", "N"])?, "n")?;
    if n == 0 || n > 16 {
        return Err(CliError::schema("`n` must lie in 1..=16"));
    }
    let trials = match pget(params, &["trials"]) {
        Some(v) => u32_of(v, "trials")?,
        None => 100,
    };
    let tol = 100.0 * cfg.precision.abs_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0_f64;
    let mut worst = 0u32;
    for t in 0..trials {
        let g = random_element(&mut rng, n)?;
        let h = random_element(&mut rng, n)?;
        let theta: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let k: i32 = rng.gen_range(-6..=6);
        let s = Complex64::new(k as f64, 0.0);

        let gh = compose(&g, &h)?;
        let theta_h = act_theta(&h, &theta);
        let lhs = j_factor(&gh, s, &theta)?;
        let rhs = j_factor(&g, s, &theta_h)? * j_factor(&h, s, &theta)?;
        let chain = (lhs - rhs).norm() / (1.0 + lhs.norm());

        let hinv = inverse(&h);
        let unit = j_factor(&hinv, s, &theta_h)? * j_factor(&h, s, &theta)?;
        let inv_defect = (unit - Complex64::ONE).norm();

        let r = chain.max(inv_defect);
        if r > max_residual {
            max_residual = r;
            worst = t;
        }
    }
    if max_residual > tol {
        return Err(CoreError::non_convergence(format!(
            "cocycle residual {max_residual:.3e} exceeded tolerance {tol:.3e}"
        ))
        .into());
    }
    let mut payload = Payload::bare(Complex64::new(max_residual, 0.0), "residual-check");
    payload.meta.insert("trials".into(), trials.to_string());
    payload.meta.insert("seed".into(), seed.to_string());
    payload.meta.insert("tolerance".into(), fmt_f64(tol));
    payload.meta.insert("worst_trial".into(), worst.to_string());
    payload.meta.insert("s_mode".into(), "integer".into());
    Ok(payload)
}

fn dispatch(cmd: &str, params: &Params, cfg: &RunConfig, seed: u64) -> Result<Payload, CliError> {
    let prec = &cfg.precision;
    let quad = &cfg.quadrature;
    match cmd {
        "eval-zeta" => {
            let s = complex_of(preq(params, &["s"])?, "s")?;
            let p = point_of(params, prec)?;
            let max_index = match pget(params, &["max_index", "max-index"]) {
                Some(v) => u32_of(v, "max_index")?,
                None => cfg.truncation.max_index,
            };
            Ok(zeta_series(s, &p, max_index, prec)?.into())
        }
        "eval-l" => {
            let s = complex_of(preq(params, &["s"])?, "s")?;
            let p = point_of(params, prec)?;
            Ok(l_extended(s, &p, quad, prec)?.into())
        }
        "special-value" => {
            let k = u32_of(preq(params, &["k"])?, "k")?;
            let p = point_of(params, prec)?;
            let value = special_value(&p, k, prec)?;
            let mut payload = Payload::bare(value, "closed-form");
            payload.meta.insert("k".into(), k.to_string());
            Ok(payload)
        }
        "residue" => {
            let k = u32_of(preq(params, &["k"])?, "k")?;
            let p = point_of(params, prec)?;
            let value = residue_at_integer(&p, k, prec)?;
            let mut payload = Payload::bare(value, "closed-form");
            payload.meta.insert("k".into(), k.to_string());
            Ok(payload)
        }
        "rho" => {
            let s = complex_of(preq(params, &["s"])?, "s")?;
            let psi = real_of(preq(params, &["psi"])?, "psi")?;
            let p = point_of(params, prec)?;
            let r_max = match pget(params, &["r_max", "r-max"]) {
                Some(v) => real_of(v, "r_max")?,
                None => cfg.truncation.r_max,
            };
            Ok(rho(s, &p, psi, r_max, prec)?.into())
        }
        "verify-transform" => {
            let s = complex_of(preq(params, &["s"])?, "s")?;
            let p = point_of(params, prec)?;
            let g = group_of(params, Some(p.dim()))?;
            let r_max = match pget(params, &["r_max", "r-max"]) {
                Some(v) => real_of(v, "r_max")?,
                None => cfg.truncation.r_max,
            };
            let report = verify_transform(&g, &p, s, quad, r_max, prec)?;
            let mut payload = Payload::bare(report.lhs, "residual-check");
            payload.abs_error_estimate = report.abs_residual;
            payload
                .meta
                .insert("abs_residual".into(), fmt_f64(report.abs_residual));
            payload
                .meta
                .insert("rel_residual".into(), fmt_f64(report.rel_residual));
            payload.residuals = Some(vec![report]);
            Ok(payload)
        }
        "verify-cocycle" => cocycle_suite(params, cfg, seed),
        "fixed-points" => {
            let n_param = match pget(params, &["n", "N"]) {
                Some(v) => Some(usize_of(v, "n")?),
                None => None,
            };
            let g = group_of(params, n_param)?;
            let space = fixed_point_space(&g, prec);
            let case = match space.case_tag {
                CaseTag::AlphaEqualsOne => "alpha-equals-one",
                CaseTag::AlphaNotOne => "alpha-not-one",
                CaseTag::Empty => "empty",
            };
            let w_rule = match space.w_rule {
                WRule::Free => "free",
                WRule::HalfTrace => "half-trace",
            };
            let a_basis: Vec<Value> = space
                .a_basis
                .iter()
                .map(|v| Value::Array(v.iter().map(|&z| complex_json(z)).collect()))
                .collect();
            let theta_basis: Vec<Value> = space
                .theta_basis
                .iter()
                .map(|v| Value::Array(v.iter().map(|&x| json!(x)).collect()))
                .collect();
            let mut payload = Payload::bare(
                Complex64::new(space.a_basis.len() as f64, space.theta_basis.len() as f64),
                "fixed-space",
            );
            payload.meta.insert("case".into(), case.into());
            payload.meta.insert("w_rule".into(), w_rule.into());
            payload
                .meta
                .insert("a_dimension".into(), space.a_basis.len().to_string());
            payload.meta.insert(
                "theta_dimension".into(),
                space.theta_basis.len().to_string(),
            );
            payload.details = Some(json!({
                "case": case,
                "w_rule": w_rule,
                "a_basis": a_basis,
                "theta_basis": theta_basis,
            }));
            Ok(payload)
        }
        "lambert-ex1" => {
            let n = usize_of(preq(params, &["n", "N"])?, "n")?;
            let c = match pget(params, &["c"]) {
                Some(v) => real_of(v, "c")?,
                None => 0.0,
            };
            let k = i32_of(preq(params, &["k"])?, "k")?;
            let m_trunc = match pget(params, &["m_trunc", "m-trunc"]) {
                Some(v) => u32_of(v, "m_trunc")?,
                None => cfg.truncation.m_trunc,
            };
            let mut payload: Payload = lambert_ex1(n, c, k, m_trunc, prec)?.into();
            attach_rational_verdict(&mut payload, k, true, params, cfg)?;
            Ok(payload)
        }
        "lambert-ex2" => {
            let n = usize_of(preq(params, &["n", "N"])?, "n")?;
            let k = i32_of(preq(params, &["k"])?, "k")?;
            let m_trunc = match pget(params, &["m_trunc", "m-trunc"]) {
                Some(v) => u32_of(v, "m_trunc")?,
                None => cfg.truncation.m_trunc,
            };
            let two_sided = match pget(params, &["two_sided", "two-sided", "twosided"]) {
                Some(v) => bool_of(v, "two_sided")?,
                None => false,
            };
            let mut payload: Payload = if two_sided {
                lambert_ex2_twosided(n, k, m_trunc, prec)?.into()
            } else {
                lambert_ex2(n, k, m_trunc, prec)?.into()
            };
            attach_rational_verdict(&mut payload, k, !two_sided, params, cfg)?;
            Ok(payload)
        }
        "gamma-product" => {
            let n = usize_of(preq(params, &["n", "N"])?, "n")?;
            let trunc = match pget(params, &["trunc"]) {
                Some(v) => u32_of(v, "trunc")?,
                None => cfg.truncation.trunc,
            };
            Ok(gamma_product(n, trunc, prec)?.into())
        }
        "kronecker" => {
            let k = i32_of(preq(params, &["k"])?, "k")?;
            let p = point_of(params, prec)?;
            let g = group_of(params, Some(p.dim()))?;
            Ok(kronecker_limit(&g, &p, k, quad, prec)?.into())
        }
        "classify" => {
            let p = point_of(params, prec)?;
            let report = classify(&p, prec);
            let lambda = report
                .component_lambda
                .map(|s| Value::Array(s.indices().into_iter().map(Value::from).collect()))
                .unwrap_or(Value::Null);
            let mut payload = Payload::bare(report.pi_value, "classification");
            payload
                .meta
                .insert("in_t_plus".into(), report.in_t_plus.to_string());
            payload
                .meta
                .insert("in_d_n".into(), report.in_d_n.to_string());
            payload
                .meta
                .insert("in_d_tilde".into(), report.in_d_tilde.to_string());
            payload.meta.insert(
                "in_d_tilde_cstar".into(),
                report.in_d_tilde_cstar.to_string(),
            );
            payload.details = Some(json!({
                "in_t_plus": report.in_t_plus,
                "in_d_n": report.in_d_n,
                "in_d_tilde": report.in_d_tilde,
                "in_d_tilde_cstar": report.in_d_tilde_cstar,
                "component_lambda": lambda,
                "pi": complex_json(report.pi_value),
            }));
            Ok(payload)
        }
        other => Err(CliError::schema(format!("unknown command `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// job runner
// ---------------------------------------------------------------------------

/// Run one job document. Never panics on malformed input; every failure is
/// rendered as an error document with the matching exit code.
pub fn run_job(job: &Value, layers: &ConfigLayers) -> Outcome {
    let Some(obj) = job.as_object() else {
        return failure(None, None, &CliError::schema("job must be a JSON object"));
    };
    let Some(cmd_val) = obj.get("command") else {
        return failure(None, None, &CliError::schema("missing `command`"));
    };
    let Some(cmd) = cmd_val.as_str() else {
        return failure(None, None, &CliError::schema("`command` must be a string"));
    };

    let mut params: Params = match obj.get("params") {
        Some(Value::Object(m)) => m.clone(),
        Some(Value::Null) | None => Params::new(),
        Some(_) => {
            return failure(
                Some(cmd),
                None,
                &CliError::schema("`params` must be an object"),
            )
        }
    };
    for (key, value) in obj {
        if !matches!(key.as_str(), "command" | "params" | "config" | "seed") {
            params.entry(key.clone()).or_insert_with(|| value.clone());
        }
    }

    let seed = match obj.get("seed") {
        None | Some(Value::Null) => 0,
        Some(v) => match u64_of(v, "seed") {
            Ok(s) => s,
            Err(e) => return failure(Some(cmd), None, &e),
        },
    };
    let cfg = match resolve_config(obj.get("config"), layers) {
        Ok(c) => c,
        Err(e) => return failure(Some(cmd), None, &e),
    };
    let echo = json!({
        "command": cmd,
        "params": Value::Object(params.clone()),
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "seed": seed,
    });

    let started = Instant::now();
    let result = dispatch(&cmd.to_ascii_lowercase(), &params, &cfg, seed);
    let runtime_ms = match cfg.timing {
        TimingMode::None => Value::from(0),
        TimingMode::Real => Value::from(started.elapsed().as_millis() as u64),
    };

    match result {
        Ok(payload) => {
            let mut doc = Map::new();
            doc.insert("status".into(), "ok".into());
            doc.insert("exit_code".into(), 0.into());
            doc.insert("command".into(), cmd.into());
            doc.insert("input_echo".into(), echo);
            doc.insert("value".into(), complex_json(payload.value));
            doc.insert(
                "abs_error_estimate".into(),
                Value::from(payload.abs_error_estimate),
            );
            doc.insert("method".into(), payload.method.into());
            doc.insert(
                "meta".into(),
                serde_json::to_value(&payload.meta).expect("meta serializes"),
            );
            if let Some(reports) = payload.residuals {
                doc.insert(
                    "residuals".into(),
                    Value::Array(reports.iter().map(residual_json).collect()),
                );
            }
            if let Some(v) = payload.verdict {
                doc.insert("verdict".into(), verdict_json(&v));
            }
            if let Some(d) = payload.details {
                doc.insert("details".into(), d);
            }
            doc.insert("runtime_ms".into(), runtime_ms);
            Outcome {
                doc: Value::Object(doc),
                exit_code: 0,
            }
        }
        Err(e) => failure(Some(cmd), Some(echo), &e),
    }
}

/// Parse one line as a job document and run it.
pub fn run_line(line: &str, layers: &ConfigLayers) -> Outcome {
    match serde_json::from_str::<Value>(line) {
        Ok(v) => run_job(&v, layers),
        Err(e) => failure(None, None, &CliError::schema(format!("invalid JSON: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(job: Value) -> Outcome {
        run_job(&job, &ConfigLayers::default())
    }

    #[test]
    fn complex_literals_parse() {
        let cases = [
            ("2", Complex64::new(2.0, 0.0)),
            ("-1.5e-3", Complex64::new(-1.5e-3, 0.0)),
            ("1/3", Complex64::new(1.0 / 3.0, 0.0)),
            ("i", Complex64::new(0.0, 1.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("2i", Complex64::new(0.0, 2.0)),
            ("1+2i", Complex64::new(1.0, 2.0)),
            ("0.5-0.25i", Complex64::new(0.5, -0.25)),
            ("-1.5e-3+2e2i", Complex64::new(-1.5e-3, 200.0)),
            ("1 + 2 i", Complex64::new(1.0, 2.0)),
        ];
        for (text, want) in cases {
            let got = parse_complex_str(text).unwrap();
            assert_eq!(got, want, "parsing {text}");
        }
        assert!(parse_complex_str("bogus").is_err());
        assert!(parse_complex_str("").is_err());
    }

    #[test]
    fn complex_values_from_json() {
        let prec = PrecisionConfig::default();
        let job = json!({"w": 1, "a": [[0.0, 1.0], {"re": 1}], "theta": [0.25, "1/2"]});
        let p = point_of(job.as_object().unwrap(), &prec).unwrap();
        assert_eq!(p.a()[0], Complex64::new(0.0, 1.0));
        assert_eq!(p.a()[1], Complex64::ONE);
        assert_eq!(p.theta(), &[0.25, 0.5]);
    }

    #[test]
    fn special_value_job_matches_hurwitz() {
        let out = run(json!({"command": "special-value", "k": 0, "w": 1, "a": [1], "theta": [0]}));
        assert_eq!(out.exit_code, 0, "doc: {}", out.to_line());
        let re: f64 = out.doc["value"]["re"].as_str().unwrap().parse().unwrap();
        assert!((re + 0.5).abs() < 1e-12, "zeta(0) = -1/2, got {re}");
        assert_eq!(out.doc["status"], "ok");
        assert_eq!(out.doc["method"], "closed-form");
    }

    #[test]
    fn residue_job_is_exact() {
        let out = run(json!({"command": "residue", "k": 1, "w": 1, "a": [1]}));
        assert_eq!(out.exit_code, 0);
        let re: f64 = out.doc["value"]["re"].as_str().unwrap().parse().unwrap();
        assert!((re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pole_refusal_maps_to_exit_two() {
        let out = run(json!({"command": "eval-L", "s": 1, "w": 1, "a": [1], "theta": [0]}));
        assert_eq!(out.exit_code, 2);
        assert_eq!(out.doc["status"], "precondition");
        assert!(
            out.error_message().unwrap().contains("simple pole"),
            "message should cite the simple-pole restriction: {}",
            out.error_message().unwrap()
        );
    }

    #[test]
    fn schema_violations_map_to_exit_four() {
        assert_eq!(run(json!({"command": "no-such-command"})).exit_code, 4);
        assert_eq!(run(json!({"command": "eval-zeta"})).exit_code, 4);
        assert_eq!(run(json!({"params": {}})).exit_code, 4);
        assert_eq!(run(json!([1, 2])).exit_code, 4);
        let bad_cfg = run(json!({
            "command": "residue", "k": 1, "w": 1, "a": [1],
            "config": {"no_such_section": 1}
        }));
        assert_eq!(bad_cfg.exit_code, 4);
        let out = run_line("not json at all", &ConfigLayers::default());
        assert_eq!(out.exit_code, 4);
        assert_eq!(out.doc["status"], "schema");
    }

    #[test]
    fn params_may_be_nested_or_flat() {
        let flat = run(json!({"command": "residue", "k": 1, "w": 1, "a": [1]}));
        let nested = run(json!({"command": "residue", "params": {"k": 1, "w": 1, "a": [1]}}));
        assert_eq!(flat.exit_code, 0);
        assert_eq!(nested.exit_code, 0);
        assert_eq!(flat.doc["value"], nested.doc["value"]);
    }

    #[test]
    fn config_layers_merge_in_priority_order() {
        let layers = ConfigLayers {
            file: Some(json!({"precision": {"abs_tol": 1e-9}, "truncation": {"trunc": 7}})),
            overrides: Some(json!({"precision": {"abs_tol": 1e-6}})),
        };
        let job = json!({"command": "residue", "k": 1, "w": 1, "a": [1],
                         "config": {"precision": {"rel_tol": 1e-7}}});
        let out = run_job(&job, &layers);
        assert_eq!(out.exit_code, 0);
        let cfg = &out.doc["input_echo"]["config"];
        assert_eq!(cfg["precision"]["abs_tol"].as_f64().unwrap(), 1e-6);
        assert_eq!(cfg["precision"]["rel_tol"].as_f64().unwrap(), 1e-7);
        assert_eq!(cfg["truncation"]["trunc"].as_u64().unwrap(), 7);
        assert_eq!(cfg["truncation"]["m_trunc"].as_u64().unwrap(), 64);
    }

    #[test]
    fn cocycle_suite_is_deterministic_and_clean() {
        let job = json!({"command": "verify-cocycle", "n": 3, "trials": 40, "seed": 7});
        let a = run(job.clone());
        let b = run(job);
        assert_eq!(a.exit_code, 0, "doc: {}", a.to_line());
        assert_eq!(a.to_line(), b.to_line());
        let max: f64 = a.doc["value"]["re"].as_str().unwrap().parse().unwrap();
        assert!(max < 1e-10, "max residual {max}");
    }

    #[test]
    fn fixed_points_reports_the_example_space() {
        // cyclic rotation with alpha = e(1/3): one a-direction, one
        // theta-direction, w pinned to the half trace
        let out = run(json!({
            "command": "fixed-points",
            "sigma": [1, 2, 0],
            "alpha": {"re": -0.5, "im": 0.8660254037844386},
        }));
        assert_eq!(out.exit_code, 0, "doc: {}", out.to_line());
        assert_eq!(out.doc["meta"]["case"], "alpha-not-one");
        assert_eq!(out.doc["meta"]["w_rule"], "half-trace");
        assert_eq!(out.doc["meta"]["a_dimension"], "1");
        assert_eq!(out.doc["meta"]["theta_dimension"], "1");
    }

    #[test]
    fn classify_reports_membership_booleans() {
        let out = run(json!({"command": "classify", "w": 1, "a": [1, [0.0, 1.0]]}));
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.doc["details"]["in_d_tilde"], true);
        assert_eq!(out.doc["details"]["in_d_tilde_cstar"], false);
        let out = run(json!({"command": "classify", "setup": "example-two", "n": 2}));
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.doc["details"]["in_d_tilde"], true);
    }

    #[test]
    fn lambert_job_attaches_a_verdict() {
        let job = json!({
            "command": "lambert-ex1", "n": 3, "c": 0, "k": 3,
            "config": {"precision": {"abs_tol": 1e-8, "rel_tol": 1e-8}}
        });
        let out = run(job);
        assert_eq!(out.exit_code, 0, "doc: {}", out.to_line());
        let verdict = &out.doc["verdict"];
        assert_eq!(verdict["is_near_rational"], true, "doc: {}", out.to_line());
        assert!(verdict["denominator"].as_u64().unwrap() <= 10_000);
    }

    #[test]
    fn input_echo_preserves_parameter_text() {
        let out = run_line(
            r#"{"command": "residue", "k": 1, "w": 2.50, "a": [1], "theta": [0.1000]}"#,
            &ConfigLayers::default(),
        );
        assert_eq!(out.exit_code, 0);
        let echo = out.to_line();
        assert!(echo.contains("2.50"), "echo not verbatim: {echo}");
        assert!(echo.contains("0.1000"), "echo not verbatim: {echo}");
    }
}
