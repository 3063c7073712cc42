use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gabor_core::criterion::{
    build_criterion_matrix, classify_predicted, criterion_singular_extremes, dominance_certificate, Truncation,
    Variant,
};
use gabor_core::frame_bounds::{estimate_bounds, zak_criterion, BoundsConfig};
use gabor_core::frame_operator::{
    frame_operator_direct_nested, frame_operator_explicit_small_params, frame_operator_general,
    frame_operator_sinc_general, frame_operator_sinc_small_alpha, lemma_sum_closed, lemma_sum_partial,
};
use gabor_core::scan::{agreement, emit_report, parse_window_config, scan_grid, ParamRange, ReportFormat, ScanConfig};
use gabor_core::{FrameEstimate, Lattice, Method, SampledFunction, WindowSpec, C64};

#[derive(Parser)]
#[command(name = "gabor-scan", version, about = "Gabor frame criteria and frame-set scans for Cauchy-kernel windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a grid of lattices and compare numerical verdicts with the predicted frame set.
    Scan(ScanArgs),
    /// Finite-section frame-bound estimate at one lattice.
    Bounds(PointArgs),
    /// Criterion matrix and dominance certificate at one lattice.
    Criterion(CriterionArgs),
    /// Compare the brute-force frame operator with the closed forms.
    FrameopCheck(FrameopArgs),
    /// Convergence table of the lattice-sum identity.
    Lemma(LemmaArgs),
    /// Zak-transform test along the hyperbola alpha * beta = 1.
    Zak(ZakArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Window config file.
    #[arg(long)]
    window: PathBuf,
    /// MIN:MAX:STEPS
    #[arg(long)]
    alpha: String,
    /// MIN:MAX:STEPS
    #[arg(long)]
    beta: String,
    /// Comma-separated subset of predicted, criterion, finite-section, zak.
    #[arg(long, default_value = "predicted,criterion,finite-section")]
    methods: String,
    /// Half the row count of the finest finite section.
    #[arg(long, default_value_t = 64)]
    trunc_n: usize,
    /// Column count of the finest criterion section.
    #[arg(long, default_value_t = 128)]
    trunc_m: usize,
    /// Sample spacing as a fraction of the fibre period.
    #[arg(long, default_value_t = 1.0 / 32.0)]
    resolution: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock milliseconds in the `ms` column.
    #[arg(long)]
    timing: bool,
    /// Boundary band excluded from the agreement summary.
    #[arg(long, default_value_t = 0.02)]
    band: f64,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 64)]
    trunc_n: usize,
    #[arg(long, default_value_t = 1.0 / 32.0)]
    resolution: f64,
}

#[derive(Args)]
struct CriterionArgs {
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Point in (0, 1/alpha) after normalising to beta = 1.
    #[arg(long, default_value_t = 0.37)]
    xi: f64,
    /// Column count of the section.
    #[arg(long, default_value_t = 64)]
    trunc_m: usize,
    /// Use the section with t < 1 only.
    #[arg(long)]
    restricted: bool,
}

#[derive(Args)]
struct FrameopArgs {
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Largest translation index |n|.
    #[arg(long, default_value_t = 1000)]
    trunc_n: u64,
    /// Largest modulation index |m|.
    #[arg(long, default_value_t = 50)]
    trunc_m: u64,
    /// Grid step of the test function.
    #[arg(long, default_value_t = 0.01)]
    resolution: f64,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// re,im
    #[arg(long, default_value = "0.25,0.5")]
    z1: String,
    /// re,im
    #[arg(long, default_value = "-0.3,0.2")]
    z2: String,
    /// Largest partial-sum cut-off.
    #[arg(long, default_value_t = 100_000)]
    max_n: u64,
}

#[derive(Args)]
struct ZakArgs {
    #[arg(long)]
    window: PathBuf,
    /// MIN:MAX:STEPS
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

enum Failure {
    Config(String),
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Scan(a) => scan(a),
        Command::Bounds(a) => bounds(a),
        Command::Criterion(a) => criterion(a),
        Command::FrameopCheck(a) => frameop_check(a),
        Command::Lemma(a) => lemma(a),
        Command::Zak(a) => zak(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_window(path: &Path) -> Result<WindowSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let spec = parse_window_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    match spec.hypothesis_margin() {
        Some(rho) => eprintln!("window: {}; margin rho = {rho:.9}", describe(&spec)),
        None => eprintln!("window: {}", describe(&spec)),
    }
    Ok(spec)
}

fn describe(spec: &WindowSpec) -> String {
    match spec {
        WindowSpec::CauchyModSum { w, terms } => format!("cauchy-mod-sum, w = {w}, {} term(s)", terms.len()),
        WindowSpec::ShiftedSinc { b, w } => format!("shifted-sinc, b = {b}, w = {w}"),
        WindowSpec::Gaussian { width } => format!("gaussian, width = {width}"),
    }
}

fn lattice(alpha: f64, beta: f64) -> Result<Lattice, Failure> {
    Lattice::new(alpha, beta).map_err(config)
}

fn parse_methods(list: &str) -> Result<Vec<Method>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Method>().map_err(config))
        .collect()
}

fn print_estimate(est: &FrameEstimate) {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.9e}")).unwrap_or_else(|| "-".into());
    println!("method     {}", est.method.as_str());
    println!("verdict    {}", est.verdict.as_str());
    println!("lower      {}", opt(est.lower));
    println!("upper      {}", opt(est.upper));
    println!("detail     {}", est.detail);
    if !est.trajectory.is_empty() {
        let t: Vec<String> = est.trajectory.iter().map(|v| format!("{v:.3e}")).collect();
        println!("trajectory {}", t.join(" "));
    }
}

fn scan(a: ScanArgs) -> Outcome {
    let spec = load_window(&a.window)?;
    let mut cfg = ScanConfig::new(
        spec.clone(),
        a.alpha.parse::<ParamRange>().map_err(config)?,
        a.beta.parse::<ParamRange>().map_err(config)?,
    );
    cfg.methods = parse_methods(&a.methods)?;
    cfg.trunc_n = a.trunc_n;
    cfg.trunc_m = a.trunc_m;
    cfg.resolution = a.resolution;
    cfg.output = a.out.clone();
    cfg.format = a.format.parse::<ReportFormat>().map_err(config)?;
    cfg.workers = a.workers;
    cfg.seed = a.seed;
    cfg.timing = a.timing;
    cfg.validate().map_err(config)?;
    let rows = scan_grid(&cfg).map_err(runtime)?;
    let text = emit_report(&rows, cfg.format, cfg.output.as_deref()).map_err(runtime)?;
    if cfg.output.is_none() {
        print!("{text}");
    }
    for r in rows.iter().filter(|r| !r.detail.is_empty() && r.detail != "boundary") {
        if r.verdict == gabor_core::Verdict::Inconclusive {
            eprintln!("({}, {}) {}: {}", r.alpha, r.beta, r.method.as_str(), r.detail);
        }
    }
    eprintln!("{}", agreement(&spec, &rows, a.band).summary_line());
    Ok(())
}

fn bounds(a: PointArgs) -> Outcome {
    let spec = load_window(&a.window)?;
    let l = lattice(a.alpha, a.beta)?;
    if a.trunc_n < 4 || !(a.resolution > 0.0 && a.resolution <= 0.5) {
        return Err(Failure::Config("need trunc-n >= 4 and resolution in (0, 0.5]".into()));
    }
    let points = (1.0 / a.resolution).round() as usize;
    let k = a.trunc_n;
    let cfg = BoundsConfig {
        levels: vec![(k / 4, (points / 4).max(1)), (k / 2, (points / 2).max(1)), (k, points)],
        ..BoundsConfig::default()
    };
    println!("predicted  {}", classify_predicted(&spec, l).as_str());
    print_estimate(&estimate_bounds(&spec, l, &cfg));
    Ok(())
}

fn criterion(a: CriterionArgs) -> Outcome {
    let spec = load_window(&a.window)?;
    let l = lattice(a.alpha, a.beta)?;
    if spec.cauchy_terms().is_none() {
        return Err(Failure::Config("the criterion needs a window P(t)/(t - iw)".into()));
    }
    let rescaled = spec.rescale(l.beta).map_err(config)?;
    let alpha = l.alpha * l.beta;
    if !(a.xi > 0.0 && a.xi < 1.0 / alpha) {
        return Err(Failure::Config(format!("xi must lie in (0, {})", 1.0 / alpha)));
    }
    let variant = if a.restricted { Variant::Restricted } else { Variant::Full };
    let mat = build_criterion_matrix(&rescaled.spec, alpha, a.xi, Truncation::centered(a.trunc_m), variant)
        .map_err(runtime)?;
    let (lo, hi) = criterion_singular_extremes(&mat).map_err(runtime)?;
    println!("normalised alpha  {alpha}");
    println!("section           {} x {}", mat.nrows(), mat.ncols());
    println!("nonzeros          {}", (0..mat.nrows()).map(|r| mat.nonzeros(r).count()).sum::<usize>());
    println!("missing pivots    {}", mat.missing_pivot_groups().len());
    println!("sigma_min         {lo:.9e}");
    println!("sigma_max         {hi:.9e}");
    match dominance_certificate(&rescaled.spec, alpha) {
        Ok(cert) => {
            println!("rho               {:.9}", cert.rho);
            println!("certificate       {}", if cert.valid { "valid" } else { "not valid" });
            if cert.valid {
                println!("lower bound       {:.9}", cert.lower_bound);
            }
        }
        Err(e) => println!("certificate       unavailable ({e})"),
    }
    println!("predicted         {}", classify_predicted(&spec, l).as_str());
    Ok(())
}

fn frameop_check(a: FrameopArgs) -> Outcome {
    let spec = load_window(&a.window)?;
    let l = lattice(a.alpha, a.beta)?;
    if spec.cauchy_terms().is_none() {
        return Err(Failure::Config("closed forms need a window P(t)/(t - iw)".into()));
    }
    if a.trunc_n < 8 || !(a.resolution > 0.0 && a.resolution <= 0.1) {
        return Err(Failure::Config("need trunc-n >= 8 and resolution in (0, 0.1]".into()));
    }
    let f = SampledFunction::symmetric(12.0, a.resolution, |t| {
        C64::new((-PI * (t - 0.3).powi(2)).exp(), 0.0) * C64::new(1.0, 0.5 * t)
    });
    let mut closed: Vec<(&str, SampledFunction)> = vec![("general", frame_operator_general(&spec, l, &f).map_err(runtime)?)];
    if let Ok(s) = frame_operator_explicit_small_params(&spec, l, &f) {
        closed.push(("small-params", s));
    }
    if let WindowSpec::ShiftedSinc { b, w } = spec {
        closed.push(("sinc", frame_operator_sinc_general(&f, w, l.alpha, l.beta, b).map_err(runtime)?));
        if b == 1.0 && l.alpha < 1.0 {
            closed.push(("sinc-small-alpha", frame_operator_sinc_small_alpha(&f, w, l.alpha, l.beta).map_err(runtime)?));
        }
    }
    let shifts: Vec<u64> = [a.trunc_n / 8, a.trunc_n / 4, a.trunc_n / 2, a.trunc_n].to_vec();
    let direct = frame_operator_direct_nested(&spec, l, &f, a.trunc_m, &shifts).map_err(runtime)?;
    let names: Vec<&str> = closed.iter().map(|(n, _)| *n).collect();
    println!("{:>8} {}", "N", names.iter().map(|n| format!("{n:>18}")).collect::<String>());
    for d in &direct {
        let errs: String = closed
            .iter()
            .map(|(_, s)| {
                let e = d.output.sub(s).map(|diff| diff.norm() / s.norm()).unwrap_or(f64::NAN);
                format!("{e:>18.6e}")
            })
            .collect();
        println!("{:>8} {errs}", d.truncation.max_shift);
    }
    for w in &direct.last().expect("at least one level").warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn parse_complex(s: &str) -> Result<C64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Failure::Config(format!("expected re,im, got `{s}`")));
    }
    let re: f64 = parts[0].parse().map_err(config)?;
    let im: f64 = parts[1].parse().map_err(config)?;
    Ok(C64::new(re, im))
}

fn lemma(a: LemmaArgs) -> Outcome {
    let (z1, z2) = (parse_complex(&a.z1)?, parse_complex(&a.z2)?);
    let closed = lemma_sum_closed(a.c, z1, z2).map_err(config)?;
    println!("closed {:.12e} {:+.12e}i", closed.re, closed.im);
    println!("{:>10} {:>14} {:>14}", "N", "error", "N * error");
    let mut n = 10;
    while n <= a.max_n {
        let err = (lemma_sum_partial(a.c, z1, z2, n) - closed).norm();
        println!("{n:>10} {err:>14.6e} {:>14.6e}", err * n as f64);
        n *= 10;
    }
    Ok(())
}

fn zak(a: ZakArgs) -> Outcome {
    let spec = load_window(&a.window)?;
    let range = a.alpha.parse::<ParamRange>().map_err(config)?;
    let format = a.format.parse::<ReportFormat>().map_err(config)?;
    let rows: Vec<_> = range
        .values()
        .into_iter()
        .map(|alpha| {
            let beta = 1.0 / alpha;
            let est = zak_criterion(&spec, alpha, &Default::default());
            let predicted = Lattice::new(alpha, beta)
                .map(|l| classify_predicted(&spec, l))
                .unwrap_or(gabor_core::Verdict::Unknown);
            gabor_core::scan::ScanRow {
                alpha,
                beta,
                predicted,
                verdict: est.verdict,
                lower: est.lower,
                upper: est.upper,
                rho: spec.hypothesis_margin(),
                method: Method::Zak,
                ms: 0,
                detail: est.detail,
            }
        })
        .collect();
    let text = emit_report(&rows, format, a.out.as_deref()).map_err(runtime)?;
    if a.out.is_none() {
        print!("{text}");
    }
    eprintln!("zak verdicts rely on the cited critical-density criterion (criterion-by-citation)");
    Ok(())
}
