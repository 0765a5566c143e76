use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use finslerkit::experiments::{self, ExperimentReport, STRICT_MARGIN};
use finslerkit::finsler::{induced_distance, reverse_lagrangian};
use finslerkit::funk::{
    self, funk_lagrangian, hilbert_lagrangian, weighted_funk_lagrangian, weighted_funk_max_lagrangian,
};
use finslerkit::metric::{busemann_probe, reverse_metric, triangle_inequality_probe, TRIANGLE_TOLERANCE};
use finslerkit::sampling::{seeded_rng, unit_vector, BodySampler, PointSource};
use finslerkit::triangle::{self, normalize_unit_area, FamilyKind, TriangleA};
use finslerkit::{ConvexBody, Error, GeodesicOptions, Lagrangian, Point, ProbeReport, WeakMetric, Weight};

#[derive(Parser)]
#[command(
    name = "finslerkit",
    version,
    about = "Funk, Hilbert and weighted Funk metrics on convex bodies"
)]
struct Cli {
    /// Keep measured runtimes in reports instead of zeroing them.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form distance between two points, or samples of a metric sphere.
    Dist {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, value_enum)]
        metric: MetricKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        /// Required unless --sphere is given.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Option<Point>,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Sample the sphere of this radius around --from instead.
        #[arg(long)]
        sphere: Option<f64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize path length between two points.
    Geodesic {
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long, value_enum)]
        lagrangian: LagrangianKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Point,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[command(flatten)]
        solver: SolverArgs,
        /// `.csv` writes the path nodes, `.json` the full result.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the weak-metric axioms.
    Probe {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, value_enum)]
        metric: MetricKind,
        #[arg(long, value_enum)]
        kind: ProbeKind,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scripted experiment.
    Example {
        #[arg(long, value_enum)]
        name: ExampleName,
        #[arg(long, default_value_t = 0.5)]
        y1: f64,
        #[arg(long, default_value_t = 2.0)]
        y2: f64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,1")]
        a1: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "1,2")]
        a2: Point,
        #[arg(long, default_value_t = 4.0)]
        a: f64,
        #[arg(long, default_value_t = 9.0)]
        b: f64,
        /// Number of seeded pairs for the multi-pair experiments.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = STRICT_MARGIN)]
        margin: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search unit-area triangle pairs for an asymmetry witness.
    Triangle {
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Family::Arith)]
        kind: Family,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate the family on these A-coordinates (normalized to unit area)
        /// instead of searching.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, requires = "y")]
        x: Option<Point>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: Option<Point>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the experiment battery and write a summary CSV.
    Report {
        #[command(flatten)]
        solver: SolverArgs,
        /// Summary CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every full report as a JSON array.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct BodyArg {
    #[arg(long)]
    body: PathBuf,
}

#[derive(clap::Args)]
struct SolverArgs {
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    multistart: Option<usize>,
    #[arg(long)]
    quadrature: Option<usize>,
}

impl SolverArgs {
    fn options(&self) -> Result<GeodesicOptions, Error> {
        let d = GeodesicOptions::default();
        let opts = GeodesicOptions {
            nodes: self.nodes.unwrap_or(d.nodes),
            tolerance: self.tol.unwrap_or(d.tolerance),
            seed: self.seed.unwrap_or(d.seed),
            multistart: self.multistart.unwrap_or(d.multistart),
            quadrature_order: self.quadrature.unwrap_or(d.quadrature_order),
            ..d
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricKind {
    Funk,
    ReverseFunk,
    Hilbert,
    Arith,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum LagrangianKind {
    Funk,
    ReverseFunk,
    Hilbert,
    Arith,
    Max,
    Euclidean,
    Hyperbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeKind {
    Triangle,
    Busemann,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Remark,
    Sum,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Arith,
    Max,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Arith => FamilyKind::Arith,
            Family::Max => FamilyKind::Max,
        }
    }
}

enum Failure {
    /// Bad input; exit code 2.
    Input(String),
    /// A check ran and did not pass; exit code 1.
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    Point::parse(s).map_err(|e| e.to_string())
}

fn weight(t: f64) -> Result<Weight, Failure> {
    Ok(Weight::new(t)?)
}

fn load_body(path: &Path) -> Result<Arc<ConvexBody>, Failure> {
    ConvexBody::from_file(path)
        .map(Arc::new)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn metric(kind: MetricKind, body: &Arc<ConvexBody>, t: Weight) -> WeakMetric {
    match kind {
        MetricKind::Funk => funk::funk_metric(body.clone()),
        MetricKind::ReverseFunk => reverse_metric(&funk::funk_metric(body.clone())),
        MetricKind::Hilbert => funk::hilbert_metric(body.clone()),
        MetricKind::Arith => {
            let b = body.clone();
            WeakMetric::new("weighted_funk_arith", move |x, y| {
                funk::weighted_funk_arith(&b, t, x, y)
            })
        }
        MetricKind::Max => {
            let b = body.clone();
            WeakMetric::new("weighted_funk_max", move |x, y| funk::weighted_funk_max(&b, t, x, y))
        }
    }
}

fn lagrangian(kind: LagrangianKind, body: Option<&Path>, dim: usize, t: Weight) -> Result<Lagrangian, Failure> {
    let needs_body = || {
        body.map(load_body)
            .unwrap_or_else(|| Err(Failure::Input("this Lagrangian needs --body".into())))
    };
    Ok(match kind {
        LagrangianKind::Funk => funk_lagrangian(needs_body()?),
        LagrangianKind::ReverseFunk => reverse_lagrangian(&funk_lagrangian(needs_body()?)),
        LagrangianKind::Hilbert => hilbert_lagrangian(needs_body()?),
        LagrangianKind::Arith => weighted_funk_lagrangian(needs_body()?, t),
        LagrangianKind::Max => weighted_funk_max_lagrangian(needs_body()?, t),
        LagrangianKind::Euclidean => Lagrangian::euclidean(dim),
        LagrangianKind::Hyperbolic => Lagrangian::hyperbolic(dim)?,
    })
}

/// Writes JSON to `out` (or stdout). CSV targets are handled by the caller.
fn emit_json(value: &impl serde::Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn write_rows(path: Option<&Path>, header: &[String], rows: &[Vec<f64>]) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Failure::Input(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(f64::to_string)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Points at distance `radius` from `x` along sampled directions, found by
/// bisection on the ray. Directions along which the distance stays below
/// `radius` are skipped.
fn sphere_samples(
    d: &WeakMetric,
    body: &ConvexBody,
    x: &Point,
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>, Failure> {
    let dim = x.dim();
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::with_capacity(count);
    for k in 0..count {
        let u = if dim == 2 {
            let a = std::f64::consts::TAU * k as f64 / count as f64;
            vec![a.cos(), a.sin()]
        } else {
            unit_vector(&mut rng, dim)
        };
        let at = |r: f64| -> Vec<f64> { x.iter().zip(&u).map(|(c, ui)| c + r * ui).collect() };
        let exit = body.ray_exit(x, &u)?;
        let mut hi = if exit.is_finite() {
            exit.value() * (1.0 - 1e-8)
        } else {
            1.0
        };
        let value = |r: f64| d.eval(x, &at(r));
        if !exit.is_finite() {
            while value(hi)? < radius && hi < 1e12 {
                hi *= 2.0;
            }
        }
        if value(hi)? < radius {
            continue;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if value(mid)? < radius {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        rows.push(at(0.5 * (lo + hi)));
    }
    Ok(rows)
}

fn coordinate_header(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("x{i}")).collect()
}

fn finish_report(report: ExperimentReport, timings: bool, out: Option<&Path>) -> Result<(), Failure> {
    let report = if timings { report } else { report.without_runtime() };
    match out {
        Some(p) if is_csv(p) => {
            experiments::write_summary_csv(std::slice::from_ref(&report), File::create(p)?)?;
        }
        _ => emit_json(&report, out)?,
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("{} failed", report.name)))
    }
}

fn finish_probe(report: ProbeReport, out: Option<&Path>) -> Result<(), Failure> {
    emit_json(&report, out)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Assertion(format!(
            "{} probe residual {:e} exceeds {:e}",
            report.probe, report.max_residual, report.tolerance
        )))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Dist {
            body,
            metric: kind,
            from,
            to,
            t,
            sphere,
            samples,
            seed,
            out,
        } => {
            let b = load_body(&body.body)?;
            let d = metric(kind, &b, weight(t)?);
            if let Some(radius) = sphere {
                if !(radius > 0.0 && radius.is_finite()) || samples == 0 {
                    return Err(Failure::Input(
                        "--sphere needs a positive radius and --samples > 0".into(),
                    ));
                }
                let rows = sphere_samples(&d, &b, &from, radius, samples, seed)?;
                return match out.as_deref() {
                    Some(p) if !is_csv(p) => emit_json(&rows, Some(p)),
                    path => write_rows(path, &coordinate_header(from.dim()), &rows),
                };
            }
            let to = to.ok_or_else(|| Failure::Input("--to is required unless --sphere is given".into()))?;
            let value = d.eval(&from, &to)?;
            emit_json(&json!({ "value": value }), out.as_deref())
        }
        Command::Geodesic {
            body,
            lagrangian: kind,
            from,
            to,
            t,
            solver,
            out,
        } => {
            let f = lagrangian(kind, body.as_deref(), from.dim(), weight(t)?)?;
            let result = induced_distance(&f, &from, &to, &solver.options()?)?;
            match out.as_deref() {
                Some(p) if is_csv(p) => {
                    result.path.write_csv(File::create(p)?)?;
                    emit_json(&json!({ "length": result.length, "converged": result.converged }), None)
                }
                path => emit_json(&result, path),
            }
        }
        Command::Probe {
            body,
            metric: kind,
            kind: probe,
            t,
            count,
            seed,
            tolerance,
            out,
        } => {
            let b = load_body(&body.body)?;
            let d = metric(kind, &b, weight(t)?);
            let report = match probe {
                ProbeKind::Triangle => {
                    let mut sampler = BodySampler::new((*b).clone(), seed);
                    triangle_inequality_probe(&d, &mut sampler, count, tolerance.unwrap_or(TRIANGLE_TOLERANCE))?
                }
                ProbeKind::Busemann => {
                    let x = BodySampler::new((*b).clone(), seed).next_point();
                    let dir = unit_vector(&mut seeded_rng(seed), b.dim());
                    let exit = b.ray_exit(&x, &dir)?;
                    let reach = if exit.is_finite() { 0.5 * exit.value() } else { 1.0 };
                    let approach: Vec<Point> = (1..=count)
                        .map(|n| {
                            let s = reach / (n * n) as f64;
                            Point::new(x.iter().zip(&dir).map(|(c, u)| c + s * u).collect())
                        })
                        .collect::<Result<_, _>>()?;
                    busemann_probe(&d, &x, &approach, tolerance.unwrap_or(1e-3))?
                }
            };
            finish_probe(report, out.as_deref())
        }
        Command::Example {
            name,
            y1,
            y2,
            a1,
            a2,
            a,
            b,
            count,
            t,
            margin,
            solver,
            out,
        } => {
            let opts = solver.options()?;
            let t = weight(t)?;
            let disc = Arc::new(ConvexBody::unit_ball(2));
            let report = match name {
                ExampleName::Ex1 => experiments::run_example_1(y1, y2, &opts)?,
                ExampleName::Ex2 => experiments::run_example_2(&a1, &a2, margin, &opts)?,
                ExampleName::Ex3 => {
                    experiments::run_example_3(a, b, &experiments::plane_pairs(count, opts.seed), &opts)?
                }
                ExampleName::Ex4 => {
                    experiments::run_example_4(a, b, &experiments::plane_pairs(count, opts.seed), &opts)?
                }
                ExampleName::Remark => experiments::run_remark_counterexample()?,
                ExampleName::Sum => {
                    let pairs = experiments::body_pairs(&disc, count, opts.seed);
                    experiments::run_theorem_sum_check(disc, &pairs, t, &opts)?
                }
                ExampleName::Max => {
                    let pairs = experiments::body_pairs(&disc, count, opts.seed);
                    experiments::run_theorem_max_check(disc, &pairs, t, &opts)?
                }
            };
            finish_report(report, cli.timings, out.as_deref())
        }
        Command::Triangle {
            t,
            kind,
            count,
            seed,
            x,
            y,
            out,
        } => {
            let t = weight(t)?;
            if let (Some(x), Some(y)) = (x, y) {
                let unit = |p: &Point| -> Result<_, Failure> {
                    let c: [f64; 3] = p
                        .coords()
                        .try_into()
                        .map_err(|_| Failure::Input("triangle coordinates need three values".into()))?;
                    Ok(normalize_unit_area(TriangleA::try_from(c)?))
                };
                let (ux, uy) = (unit(&x)?, unit(&y)?);
                let d = triangle::eta_family(kind.into(), t);
                let forward = d.eval(&ux.coords(), &uy.coords())?;
                let backward = d.eval(&uy.coords(), &ux.coords())?;
                return emit_json(
                    &json!({ "t": t.value(), "kind": FamilyKind::from(kind), "X": ux, "Y": uy,
                             "forward": forward, "backward": backward, "gap": (forward - backward).abs() }),
                    out.as_deref(),
                );
            }
            let witness = triangle::asymmetry_witness(t, kind.into(), count, seed)?;
            emit_json(&json!({ "witness": witness }), out.as_deref())
        }
        Command::Report { solver, out, json } => {
            let reports: Vec<ExperimentReport> = experiments::standard_battery(&solver.options()?)?
                .into_iter()
                .map(|r| if cli.timings { r } else { r.without_runtime() })
                .collect();
            match out.as_deref() {
                Some(p) => experiments::write_summary_csv(&reports, File::create(p)?)?,
                None => experiments::write_summary_csv(&reports, io::stdout().lock())?,
            }
            if let Some(p) = json.as_deref() {
                emit_json(&reports, Some(p))?;
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Assertion(format!("failed: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("finslerkit: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("finslerkit: {msg}");
            ExitCode::from(2)
        }
    }
}
