//! Window config files, `(α, β)`-plane scans and their CSV/JSON reports.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::criterion::{classify_predicted, criterion_estimate, in_boundary_band, CriterionConfig};
use crate::error::{invalid, Error, Result};
use crate::estimate::{FrameEstimate, Method, Verdict};
use crate::frame_bounds::{estimate_bounds, zak_criterion, BoundsConfig, ZakConfig};
use crate::window::{CauchyTerm, Lattice, WindowSpec, C64};

/// Parses the key-value window format:
///
/// ```text
/// # comment
/// kind = cauchy-mod-sum      # or shifted-sinc, gaussian
/// w = -0.1
/// term = 1, 0, 0             # a_re, a_im, b; repeated, in order
/// term = 0.5, 0, 1
/// ```
///
/// `shifted-sinc` takes `b` and `w`, `gaussian` takes `width`. A `cauchy-mod-sum`
/// without terms is the plain Cauchy kernel.
pub fn parse_window_config(text: &str) -> Result<WindowSpec> {
    let mut kind: Option<String> = None;
    let mut scalars: Vec<(&'static str, f64)> = Vec::new();
    let mut terms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid("config", format!("line {}: expected `key = value`", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kind" => kind = Some(value.to_string()),
            "w" | "b" | "width" => {
                let name = match key {
                    "w" => "w",
                    "b" => "b",
                    _ => "width",
                };
                if scalars.iter().any(|(n, _)| *n == name) {
                    return Err(invalid(name, "given more than once"));
                }
                scalars.push((name, parse_number(name, value)?));
            }
            "term" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(invalid("term", format!("expected `a_re, a_im, b`, got `{value}`")));
                }
                let re = parse_number("term", parts[0])?;
                let im = parse_number("term", parts[1])?;
                let b = parse_number("term", parts[2])?;
                terms.push(CauchyTerm::new(C64::new(re, im), b));
            }
            other => return Err(invalid("config", format!("unknown key `{other}`"))),
        }
    }
    let get = |name: &'static str| {
        scalars
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
            .ok_or_else(|| invalid(name, "missing"))
    };
    let allow = |allowed: &[&str]| -> Result<()> {
        match scalars.iter().find(|(n, _)| !allowed.contains(n)) {
            Some((n, _)) => Err(invalid(n, "not used by this window kind")),
            None => Ok(()),
        }
    };
    let kind = kind.ok_or_else(|| invalid("kind", "missing"))?;
    match kind.as_str() {
        "cauchy-mod-sum" | "cauchy" => {
            allow(&["w"])?;
            if terms.is_empty() {
                terms.push(CauchyTerm::real(1.0, 0.0));
            }
            WindowSpec::cauchy_mod_sum(get("w")?, terms)
        }
        "shifted-sinc" => {
            allow(&["w", "b"])?;
            if !terms.is_empty() {
                return Err(invalid("term", "not used by this window kind"));
            }
            WindowSpec::shifted_sinc(get("b")?, get("w")?)
        }
        "gaussian" => {
            allow(&["width"])?;
            if !terms.is_empty() {
                return Err(invalid("term", "not used by this window kind"));
            }
            WindowSpec::gaussian(get("width")?)
        }
        other => Err(invalid("kind", format!("unknown window kind `{other}`"))),
    }
}

fn parse_number(name: &'static str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| invalid(name, format!("`{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(name, "must be finite"));
    }
    Ok(v)
}

/// `steps` equispaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl ParamRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min > 0.0 && max >= min && max.is_finite()) {
            return Err(invalid("range", format!("need 0 < min <= max, got {min}:{max}")));
        }
        if steps == 0 {
            return Err(invalid("range", "steps must be at least 1"));
        }
        if steps == 1 && max != min {
            return Err(invalid("range", "a single step needs min = max"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

impl FromStr for ParamRange {
    type Err = Error;

    /// `MIN:MAX:STEPS`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid("range", format!("expected MIN:MAX:STEPS, got `{s}`")));
        }
        let min = parse_number("range", parts[0])?;
        let max = parse_number("range", parts[1])?;
        let steps = parts[2]
            .trim()
            .parse()
            .map_err(|_| invalid("range", format!("`{}` is not a step count", parts[2])))?;
        Self::new(min, max, steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(invalid("format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub window: WindowSpec,
    pub alpha_range: ParamRange,
    pub beta_range: ParamRange,
    /// Numerical methods; `predicted` is always available from the classifier.
    pub methods: Vec<Method>,
    /// Half the row count of the finest finite section.
    pub trunc_n: usize,
    /// Column count of the finest criterion section.
    pub trunc_m: usize,
    /// Spacing of sample points as a fraction of the fibre period.
    pub resolution: f64,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
    /// Threads; `0` lets the pool decide.
    pub workers: usize,
    /// Recorded for provenance; every computation in a scan is deterministic.
    pub seed: u64,
    /// Fill the `ms` column with wall-clock times.
    pub timing: bool,
}

impl ScanConfig {
    pub fn new(window: WindowSpec, alpha_range: ParamRange, beta_range: ParamRange) -> Self {
        Self {
            window,
            alpha_range,
            beta_range,
            methods: vec![Method::Predicted, Method::Criterion, Method::FiniteSection],
            trunc_n: 64,
            trunc_m: 128,
            resolution: 1.0 / 32.0,
            output: None,
            format: ReportFormat::Csv,
            workers: 0,
            seed: 0,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        ParamRange::new(self.alpha_range.min, self.alpha_range.max, self.alpha_range.steps)?;
        ParamRange::new(self.beta_range.min, self.beta_range.max, self.beta_range.steps)?;
        if self.trunc_n < 4 {
            return Err(invalid("trunc-n", "must be at least 4"));
        }
        if self.trunc_m < 4 {
            return Err(invalid("trunc-m", "must be at least 4"));
        }
        if !(self.resolution > 0.0 && self.resolution <= 0.5) {
            return Err(invalid("resolution", "must lie in (0, 0.5]"));
        }
        Ok(())
    }

    fn sample_points(&self) -> usize {
        (1.0 / self.resolution).round().max(2.0) as usize
    }

    pub fn bounds_config(&self) -> BoundsConfig {
        let (k, p) = (self.trunc_n, self.sample_points());
        BoundsConfig {
            levels: vec![((k / 4).max(1), (p / 4).max(1)), ((k / 2).max(1), (p / 2).max(1)), (k, p)],
            ..BoundsConfig::default()
        }
    }

    pub fn criterion_config(&self) -> CriterionConfig {
        CriterionConfig {
            sizes: vec![(self.trunc_m / 2).max(2), self.trunc_m],
            xi_count: 2 * self.sample_points(),
            ..CriterionConfig::default()
        }
    }

    pub fn zak_config(&self) -> ZakConfig {
        let p = self.sample_points();
        ZakConfig {
            grids: vec![(p / 2).max(2), p, 2 * p],
            ..ZakConfig::default()
        }
    }
}

/// One `(α, β, method)` record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(serialize_with = "ser_sig")]
    pub alpha: f64,
    #[serde(serialize_with = "ser_sig")]
    pub beta: f64,
    pub predicted: Verdict,
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_sig_opt")]
    pub lower: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub upper: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub rho: Option<f64>,
    pub method: Method,
    pub ms: u64,
    /// Not part of the report; carries failure and boundary notes.
    #[serde(skip)]
    pub detail: String,
}

/// Rounds to nine significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Nine significant digits, plain notation for moderate magnitudes.
pub fn format_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 || (1e-4..1e9).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn ser_sig<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

fn ser_sig_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v)),
        None => s.serialize_none(),
    }
}

fn estimate(cfg: &ScanConfig, method: Method, lattice: Lattice) -> FrameEstimate {
    let spec = &cfg.window;
    match method {
        Method::Criterion => criterion_estimate(spec, lattice, &cfg.criterion_config()),
        Method::FiniteSection => estimate_bounds(spec, lattice, &cfg.bounds_config()),
        Method::Zak => {
            if (lattice.density() - 1.0).abs() > 1e-9 {
                FrameEstimate::inconclusive(Method::Zak, "zak applies only on alpha * beta = 1")
            } else {
                zak_criterion(spec, lattice.alpha, &cfg.zak_config())
            }
        }
        Method::Predicted => {
            let v = classify_predicted(spec, lattice);
            FrameEstimate {
                verdict: v,
                lower: None,
                upper: None,
                method,
                detail: String::new(),
                trajectory: Vec::new(),
            }
        }
    }
}

fn scan_point(cfg: &ScanConfig, alpha: f64, beta: f64, method: Method) -> ScanRow {
    let rho = cfg.window.hypothesis_margin();
    let start = Instant::now();
    let (predicted, est) = match Lattice::new(alpha, beta) {
        Ok(l) => (classify_predicted(&cfg.window, l), estimate(cfg, method, l)),
        Err(e) => (Verdict::Unknown, FrameEstimate::inconclusive(method, e.to_string())),
    };
    let ms = if cfg.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    ScanRow {
        alpha,
        beta,
        predicted,
        verdict: est.verdict,
        lower: est.lower,
        upper: est.upper,
        rho,
        method,
        ms,
        detail: est.detail,
    }
}

/// Evaluates every grid point and method. Rows come back in `(α, β, method)` order
/// whatever the worker count; per-point failures become Inconclusive rows.
pub fn scan_grid(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    cfg.validate()?;
    let mut methods: Vec<Method> = Method::ALL.iter().copied().filter(|m| cfg.methods.contains(m)).collect();
    if methods.is_empty() {
        methods.push(Method::Predicted);
    }
    let mut jobs = Vec::new();
    for &a in &cfg.alpha_range.values() {
        for &b in &cfg.beta_range.values() {
            for &m in &methods {
                jobs.push((a, b, m));
            }
        }
    }
    let run = || -> Vec<ScanRow> { jobs.par_iter().map(|&(a, b, m)| scan_point(cfg, a, b, m)).collect() };
    if cfg.workers == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

pub const CSV_HEADER: &str = "alpha,beta,predicted,verdict,lower,upper,rho,method,ms";

/// Renders the report in memory.
pub fn render_report(rows: &[ScanRow], format: ReportFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(invalid("rows", "report needs at least one row"));
    }
    match format {
        ReportFormat::Csv => {
            let opt = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    format_sig(r.alpha),
                    format_sig(r.beta),
                    r.predicted.as_str(),
                    r.verdict.as_str(),
                    opt(r.lower),
                    opt(r.upper),
                    opt(r.rho),
                    r.method.as_str(),
                    r.ms
                );
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| Error::Precondition(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Writes the report to `path`, or returns it when no path is given.
pub fn emit_report(rows: &[ScanRow], format: ReportFormat, path: Option<&std::path::Path>) -> std::io::Result<String> {
    let text = render_report(rows, format).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;
    if let Some(p) = path {
        std::fs::write(p, &text).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
    }
    Ok(text)
}

/// Parses a JSON report back into rows.
pub fn parse_json_report(text: &str) -> Result<Vec<ScanRow>> {
    serde_json::from_str(text).map_err(|e| invalid("report", e.to_string()))
}

/// Agreement of numerical verdicts with the predicted ones.
///
/// Rows of the `predicted` method, rows whose prediction is Unknown and rows within
/// `band` of the predicted boundary are excluded. An Inconclusive verdict counts as
/// a disagreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Agreement {
    pub compared: usize,
    pub agreed: usize,
    pub inconclusive: usize,
    pub excluded: usize,
}

impl Agreement {
    pub fn rate(&self) -> f64 {
        if self.compared == 0 {
            1.0
        } else {
            self.agreed as f64 / self.compared as f64
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "agreement {}/{} ({:.1}%), {} inconclusive, {} excluded",
            self.agreed,
            self.compared,
            100.0 * self.rate(),
            self.inconclusive,
            self.excluded
        )
    }
}

pub fn agreement(spec: &WindowSpec, rows: &[ScanRow], band: f64) -> Agreement {
    let mut out = Agreement::default();
    for r in rows.iter().filter(|r| r.method != Method::Predicted) {
        let near = Lattice::new(r.alpha, r.beta)
            .map(|l| in_boundary_band(spec, l, band))
            .unwrap_or(true);
        if near || r.predicted == Verdict::Unknown {
            out.excluded += 1;
            continue;
        }
        out.compared += 1;
        if r.verdict == r.predicted {
            out.agreed += 1;
        } else if r.verdict == Verdict::Inconclusive {
            out.inconclusive += 1;
        }
    }
    out
}
