mod config;
mod output;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use casual_stable::citation::{sample_field_total, simulate_field, FieldSim};
use casual_stable::convergence::{convergence_curve, exponential_transform, mean_matched_exponential};
use casual_stable::extract::validate_pgf_with;
use casual_stable::samplers::Seed;
use casual_stable::stability::{casual_stability_residual, discrete_stability_residual, solve_pn};
use casual_stable::stats::tv_distance;
use casual_stable::{Error, ExtractOptions, GridSpec, LaplaceFamily, PgfFamily, ThinningFamily};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Cell, Table};

#[derive(Parser)]
#[command(name = "casual-stable", version, about = "Stability checkers, p.g.f. validators and citation simulators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residual of the discrete or casual stability equation over a range of n.
    CheckStability(StabilityArgs),
    /// Most negative power-series coefficient of thinning p.g.f.s over a sweep.
    CheckPgf(PgfArgs),
    /// Simulates citation fields and summarizes each replicate.
    Citations(CitationArgs),
    /// Convergence of normalized sums towards a casual-stable target.
    Converge(ConvergeArgs),
}

#[derive(Args)]
struct Common {
    /// One JSON object per line instead of CSV.
    #[arg(long)]
    json: bool,
    /// Write rows here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Flat `key = value` file; flags on the command line win.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Svh,
    Ex1,
    Ex2,
    Field,
    Gamma,
    Tempered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Thinning {
    Bernoulli,
    Ex1,
    Ex2,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Thinning family; defaults to the family's natural partner.
    #[arg(long, value_enum)]
    thinning: Option<Thinning>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Check the casual (Laplace) equation; required for gamma and tempered.
    #[arg(long)]
    casual: bool,
    /// Values of n, e.g. `2..50`, `2..256:x2` or `2,3,5`.
    #[arg(long)]
    n: String,
    /// Solve for p(n) numerically instead of using `n^{-1/index}`.
    #[arg(long)]
    solve_pn: bool,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PgfArgs {
    #[arg(long, value_enum)]
    thinning: Thinning,
    /// Thinning parameters, e.g. `0.2,1/3,0.5`.
    #[arg(long)]
    p: String,
    #[arg(long, default_value = "0")]
    b: String,
    #[arg(long, default_value = "0.5")]
    kappa: String,
    #[arg(long, default_value = "1")]
    m: String,
    #[arg(long, default_value_t = 200)]
    n_max: usize,
    /// Extraction radius; chosen from n_max when omitted.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = casual_stable::extract::DEFAULT_TOL_NEG)]
    tol_neg: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CitationArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    /// Compare sampled field totals with the inverted p.g.f. (report on stderr).
    #[arg(long)]
    tv_check: bool,
    #[arg(long, default_value_t = 1_000_000)]
    tv_samples: usize,
    #[arg(long, default_value_t = 100)]
    tv_atoms: usize,
    #[arg(long, default_value_t = 8e-3)]
    tv_tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Gamma,
    Tempered,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, value_enum, default_value = "gamma")]
    target: Target,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// `mean-matched`, `exact`, or `exponential:<mean>`.
    #[arg(long, default_value = "mean-matched")]
    candidate: String,
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    #[arg(long, default_value = "2..256:x2")]
    n: String,
    #[arg(long, default_value_t = 1e-4)]
    s_min: f64,
    #[arg(long, default_value_t = 1e4)]
    s_max: f64,
    #[arg(long, default_value_t = 400)]
    s_points: usize,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    /// Exit 1: a check ran and did not pass.
    Check(String),
    /// Exit 2: invalid arguments or parameters.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Admissibility(_) | Error::Unsupported(_) | Error::InsufficientData { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::CheckStability(a) => check_stability(a),
        Command::CheckPgf(a) => check_pgf(a),
        Command::Citations(a) => citations(a),
        Command::Converge(a) => converge(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(table: &Table, common: &Common) -> Outcome {
    match &common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(common.json, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(common.json, &mut w)?;
        }
    }
    Ok(())
}

fn sweep(spec: &str, what: &str) -> Result<Vec<f64>, Failure> {
    sweep::parse_floats(spec).or_else(|e| usage(format!("--{what}: {e}")))
}

fn counts(spec: &str, what: &str) -> Result<Vec<u32>, Failure> {
    sweep::parse_counts(spec).or_else(|e| usage(format!("--{what}: {e}")))
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    v.map_or_else(|| usage(format!("--{flag} is required for this family")), Ok)
}

fn thinning_family(t: Thinning, kappa: f64, m: u32, b: f64) -> ThinningFamily {
    match t {
        Thinning::Bernoulli => ThinningFamily::Bernoulli,
        Thinning::Ex1 => ThinningFamily::Example1 { kappa, m },
        Thinning::Ex2 => ThinningFamily::Example2 { b },
    }
}

fn check_stability(a: StabilityArgs) -> Outcome {
    let ns = counts(&a.n, "n")?;
    let mut table = Table::new(&["n", "p_n", "residual", "argmax"]);
    let mut failed = Vec::new();
    let laplace = match a.family {
        Family::Gamma => Some(LaplaceFamily::Gamma { b: a.b, shape: need(a.gamma, "gamma")? }),
        Family::Tempered => {
            Some(LaplaceFamily::TemperedStable { lambda: a.lambda, alpha: need(a.alpha, "alpha")?, h: a.h })
        }
        _ => None,
    };
    if let Some(fam) = laplace {
        if !a.casual {
            return usage("gamma and tempered families need --casual");
        }
        fam.validate()?;
        let grid = GridSpec::default_s();
        for n in ns {
            let r = casual_stability_residual(&fam, n, &grid)?;
            if !r.passes(a.tol) {
                failed.push(n);
            }
            table.push(vec![n.into(), Cell::Empty, r.sup_residual.into(), r.argmax_point.into()]);
        }
    } else {
        if a.casual {
            return usage("--casual applies to the gamma and tempered families");
        }
        let fam = match a.family {
            Family::Svh => PgfFamily::SvhStable { lambda: a.lambda, alpha: need(a.alpha, "alpha")? },
            Family::Ex1 => {
                PgfFamily::Example1 { lambda: a.lambda, gamma: need(a.gamma, "gamma")?, kappa: a.kappa, m: a.m }
            }
            Family::Ex2 => PgfFamily::Example2 { lambda: a.lambda, gamma: need(a.gamma, "gamma")?, b: a.b },
            _ => PgfFamily::FieldCitations { lambda: a.lambda, p: need(a.p, "p")?, q: need(a.q, "q")? },
        };
        fam.validate()?;
        let natural = fam.natural_thinning();
        let thinning = match a.thinning {
            Some(t) => thinning_family(t, a.kappa, a.m, a.b),
            None => natural.expect("every discrete family has a natural thinning"),
        };
        if Some(thinning) != natural && !a.solve_pn {
            return usage("a non-natural thinning has no closed-form p(n); add --solve-pn");
        }
        let grid = GridSpec::default_z();
        for n in ns {
            let p = if a.solve_pn {
                solve_pn(&fam, &thinning, n)?.p
            } else {
                let index = fam.stability_index().expect("discrete families have an index");
                let p = (n as f64).powf(-1.0 / index);
                thinning.check(p)?;
                p
            };
            let r = discrete_stability_residual(&fam, &thinning, n, p, &grid)?;
            if !r.passes(a.tol) {
                failed.push(n);
            }
            table.push(vec![n.into(), p.into(), r.sup_residual.into(), r.argmax_point.into()]);
        }
    }
    emit(&table, &a.common)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("residual above {:e} at n = {failed:?}", a.tol)))
    }
}

fn check_pgf(a: PgfArgs) -> Outcome {
    let ps = sweep(&a.p, "p")?;
    type Axis<T> = Vec<Option<T>>;
    let (kappas, ms, bs): (Axis<f64>, Axis<u32>, Axis<f64>) = match a.thinning {
        Thinning::Bernoulli => (vec![None], vec![None], vec![None]),
        Thinning::Ex1 => (
            sweep(&a.kappa, "kappa")?.into_iter().map(Some).collect(),
            counts(&a.m, "m")?.into_iter().map(Some).collect(),
            vec![None],
        ),
        Thinning::Ex2 => (vec![None], vec![None], sweep(&a.b, "b")?.into_iter().map(Some).collect()),
    };
    let mut cases = Vec::new();
    for &kappa in &kappas {
        for &m in &ms {
            for &b in &bs {
                let fam = thinning_family(a.thinning, kappa.unwrap_or(0.0), m.unwrap_or(1), b.unwrap_or(0.0));
                for &p in &ps {
                    // reject inadmissible points before any output
                    fam.check(p)?;
                    cases.push((fam, kappa, m, b, p));
                }
            }
        }
    }
    let mut opts = ExtractOptions::for_degree(a.n_max).tol(a.tol_neg);
    if let Some(r) = a.radius {
        if !(r > 0.0 && r < 1.0) {
            return usage(format!("--radius must lie in (0, 1), got {r}"));
        }
        opts = opts.radius(r);
    }
    let mut table = Table::new(&[
        "thinning",
        "kappa",
        "m",
        "b",
        "p",
        "min_coefficient",
        "argmin",
        "error_bound",
        "normalization_defect",
        "pass",
    ]);
    let mut failed = Vec::new();
    for (fam, kappa, m, b, p) in cases {
        let v = validate_pgf_with(|z| fam.eval(p, z), &opts)?;
        let pass = v.passes(a.tol_neg);
        if !pass {
            failed.push(format!("{fam:?} p={p} (coefficient {:e} at {})", v.min_coefficient, v.report.argmax_point));
        }
        let name = match fam {
            ThinningFamily::Bernoulli => "bernoulli",
            ThinningFamily::Example1 { .. } => "ex1",
            ThinningFamily::Example2 { .. } => "ex2",
        };
        table.push(vec![
            name.into(),
            kappa.into(),
            m.into(),
            b.into(),
            p.into(),
            v.min_coefficient.into(),
            (v.report.argmax_point as u64).into(),
            v.error_bound.into(),
            v.normalization_defect.into(),
            pass.into(),
        ]);
    }
    emit(&table, &a.common)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join("; ")))
    }
}

fn citations(a: CitationArgs) -> Outcome {
    let base = Seed::new(a.seed);
    let mut table =
        Table::new(&["replicate", "n_scientists", "total", "mean", "median", "mode", "tail_exponent_hat", "top_share"]);
    FieldSim { lambda: a.lambda, p: a.p, q: a.q, seed: base }.validate()?;
    for i in 0..a.replicates {
        let s = simulate_field(&FieldSim { lambda: a.lambda, p: a.p, q: a.q, seed: base.child(i) })?;
        table.push(vec![
            i.into(),
            (s.n_scientists as u64).into(),
            s.total.into(),
            s.mean.into(),
            s.median.into(),
            s.mode.into(),
            s.tail_exponent_hat.into(),
            s.top_share.into(),
        ]);
    }
    emit(&table, &a.common)?;
    if !a.tv_check {
        return Ok(());
    }
    let pmf = PgfFamily::FieldCitations { lambda: a.lambda, p: a.p, q: a.q }
        .pmf_with(&ExtractOptions::for_degree(a.tv_atoms))?;
    let mut rng = Seed::with_stream(a.seed, u64::MAX).rng();
    let totals =
        (0..a.tv_samples).map(|_| sample_field_total(a.lambda, a.p, a.q, &mut rng)).collect::<Result<Vec<_>, _>>()?;
    let tv = tv_distance(&totals, &pmf, a.tv_atoms);
    eprintln!("tv_distance={} samples={} atoms=0..{}", output::fmt_float(tv), a.tv_samples, a.tv_atoms);
    if tv < a.tv_tol {
        Ok(())
    } else {
        Err(Failure::Check(format!("TV distance {tv:e} is not below {:e}", a.tv_tol)))
    }
}

fn converge(a: ConvergeArgs) -> Outcome {
    let ns = counts(&a.n, "n")?;
    let fam = match a.target {
        Target::Gamma => LaplaceFamily::Gamma { b: a.b, shape: a.gamma },
        Target::Tempered => LaplaceFamily::TemperedStable { lambda: a.lambda, alpha: a.alpha, h: a.h },
    };
    fam.validate()?;
    if !(a.s_min > 0.0 && a.s_max > a.s_min && a.s_points >= 2) {
        return usage("need 0 < s-min < s-max and at least 2 s-points");
    }
    let grid = GridSpec::log(a.s_min, a.s_max, a.s_points);
    let curve = match a.candidate.as_str() {
        "mean-matched" => convergence_curve(mean_matched_exponential(&fam)?, &fam, a.a, &ns, &grid)?,
        "exact" => convergence_curve(|s| fam.laplace(s).unwrap_or(f64::NAN), &fam, a.a, &ns, &grid)?,
        other => match other.strip_prefix("exponential:").map(sweep::parse_number) {
            Some(Ok(mean)) if mean > 0.0 => convergence_curve(exponential_transform(mean), &fam, a.a, &ns, &grid)?,
            _ => return usage(format!("unknown candidate {other:?}")),
        },
    };
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let mut table = Table::new(&["n", "condition_b", "sup_distance"]);
    for p in &curve.points {
        table.push(vec![p.n.into(), p.condition_b.into(), p.sup_distance.into()]);
    }
    emit(&table, &a.common)?;
    if curve.settles(3) {
        return Ok(());
    }
    let tail = &curve.points[curve.points.len().saturating_sub(3)..];
    let segment: Vec<String> = tail.iter().map(|p| format!("n={}: {:e}", p.n, p.sup_distance)).collect();
    Err(Failure::Check(format!("sup distance not decreasing over {}", segment.join(", "))))
}
