use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyptype::balls::{convexity_classify, trace_ball_boundary};
use hyptype::geodesics::{
    ball_geodesic, halfplane_geodesic, numeric_geodesic, spiral_geodesic, weighted_length, DensityField,
    GeodesicConfig, Polyline,
};
use hyptype::verify::{
    balls_suite, halfplane_cosine_check, heron_area_check, inequality_suite, known_uniformity_constant,
    law_of_cosines_check, levelset_trace, transforms_suite, trig_suite, trig_suite_sized, uniformity_estimate,
    uniformity_suite, LevelSetConfig, PairSampler, Report, SamplerKind, SuiteConfig, UniformityBudget, SUITES,
};
use hyptype::{export, DomainSpec, EvalConfig, Evaluator, GeomError, MetricKind, Point};

#[derive(Parser)]
#[command(name = "hyptype", version, about = "Hyperbolic-type metrics, balls and numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two points.
    Dist {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        metric: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Geodesic polyline between two points.
    Geodesic {
        #[arg(long)]
        domain: String,
        /// `k` (quasihyperbolic) or `rho` (hyperbolic).
        #[arg(long, default_value = "k")]
        metric: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        /// Segments of the analytic polylines.
        #[arg(long, default_value_t = 128)]
        samples: usize,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Ray-traced metric sphere around a center.
    Ball {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        metric: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: String,
        /// Radius.
        #[arg(long = "M")]
        radius: f64,
        #[arg(long, default_value_t = 256)]
        directions: usize,
        /// Write the traced points as CSV to `--out`.
        #[arg(long)]
        trace: bool,
        /// Classify the traced sphere as strictly convex, convex or not convex.
        #[arg(long)]
        convexity: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value = "ball_trace.csv")]
        out: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Runs a verification suite and writes a TOML report; exits 1 if a
    /// strict check fails.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        /// Domain for the inequalities, uniformity and balls suites.
        #[arg(long)]
        domain: Option<String>,
        /// Pairs, samples or triples per check.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report path; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate of the uniformity constant of a planar domain.
    Uniformity {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        refine: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Punctured-plane and half-plane trigonometry for one triple.
    Trig {
        #[arg(value_enum)]
        check: TrigCheck,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Contours of k(1,z)/j(1,z) in the punctured plane.
    Levelset {
        #[arg(long = "c", value_delimiter = ',', default_values_t = [1.5, 2.0, 2.5])]
        values: Vec<f64>,
        #[arg(long, default_value_t = LevelSetConfig::default().window)]
        window: f64,
        #[arg(long, default_value_t = LevelSetConfig::default().resolution)]
        resolution: usize,
        /// CSV output path (`c,contour,x,y`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(clap::Args, Clone, Copy)]
struct NumericArgs {
    /// Grid points per axis of the numeric geodesic oracle.
    #[arg(long, default_value_t = GeodesicConfig::default().resolution)]
    resolution: usize,
    /// Segments of the relaxed numeric geodesic.
    #[arg(long, default_value_t = GeodesicConfig::default().max_segments)]
    segments: usize,
}

impl NumericArgs {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            geodesic: GeodesicConfig {
                resolution: self.resolution,
                max_segments: self.segments,
                ..Default::default()
            },
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TrigCheck {
    Cosines,
    Heron,
    Halfplane,
}

/// Exit code 2 for input errors, 1 for everything else.
struct Failure {
    code: u8,
    message: String,
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        let code = if matches!(e, GeomError::Parse(_)) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn parse_point(s: &str) -> Result<Point, Failure> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<Point, _>>()
        .map_err(|e| GeomError::Parse(format!("point {s:?}: {e}")).into())
}

fn parse_planar(s: &str) -> Result<[f64; 2], Failure> {
    match parse_point(s)?.as_slice() {
        &[a, b] => Ok([a, b]),
        _ => Err(GeomError::Parse(format!("point {s:?}: expected two coordinates")).into()),
    }
}

fn parse_domain(s: &str) -> Result<DomainSpec, Failure> {
    Ok(s.parse::<DomainSpec>()?)
}

fn parse_metric(s: &str) -> Result<MetricKind, Failure> {
    Ok(s.parse::<MetricKind>()?)
}

fn fmt_point(p: &[f64]) -> String {
    p.iter().map(|c| format!("{c:.12}")).collect::<Vec<_>>().join(",")
}

fn planar(points: &[Point]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p[0], p[1]]).collect()
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Dist {
            domain,
            metric,
            x,
            y,
            numeric,
        } => {
            let g = parse_domain(&domain)?;
            let kind = parse_metric(&metric)?;
            let (x, y) = (parse_point(&x)?, parse_point(&y)?);
            let b = Evaluator::new(kind, &g, &numeric.config())?.bracket(&x, &y)?;
            if b.is_exact() {
                println!("{:.12}", b.upper);
            } else {
                println!("[{:.12}, {:.12}]", b.lower, b.upper);
            }
        }
        Command::Geodesic {
            domain,
            metric,
            x,
            y,
            samples,
            out,
            svg,
            numeric,
        } => {
            let g = parse_domain(&domain)?;
            let kind = parse_metric(&metric)?;
            let (x, y) = (parse_point(&x)?, parse_point(&y)?);
            let cfg = numeric.config();
            let (path, density): (Polyline, DensityField) = match (kind, &g) {
                (MetricKind::Hyperbolic, DomainSpec::UnitBall(_)) => {
                    (ball_geodesic(&x, &y, samples)?.path, DensityField::HyperbolicBall)
                }
                (MetricKind::Hyperbolic | MetricKind::Quasihyperbolic, DomainSpec::HalfSpace(2)) => (
                    halfplane_geodesic(parse_planar_slice(&x)?, parse_planar_slice(&y)?, samples)?,
                    DensityField::HyperbolicHalfSpace,
                ),
                (MetricKind::Quasihyperbolic, DomainSpec::PuncturedSpace(_)) => {
                    (spiral_geodesic(&x, &y, samples)?, DensityField::Quasihyperbolic(g.clone()))
                }
                (MetricKind::Quasihyperbolic, _) => {
                    let r = numeric_geodesic(&g, &x, &y, &cfg.geodesic)?;
                    println!("bracket [{:.12}, {:.12}]", r.bracket.lower, r.bracket.upper);
                    println!("converged {}", r.converged);
                    (r.path, DensityField::Quasihyperbolic(g.clone()))
                }
                _ => {
                    return Err(GeomError::Unsupported(format!("{kind} geodesics in {g}")).into());
                }
            };
            if kind.is_closed_form_on(&g) {
                println!("distance {:.12}", Evaluator::new(kind, &g, &cfg)?.value(&x, &y)?);
            }
            let length = weighted_length(&path, &density, cfg.geodesic.quadrature_order)?;
            println!("length {length:.12}");
            println!("segments {}", path.segments());
            if let Some(p) = out {
                write_file(&p, &path.to_csv())?;
            }
            if let Some(p) = svg {
                let pts = planar(path.vertices());
                write_file(&p, &export::svg_paths(&[(&pts, false)]))?;
            }
        }
        Command::Ball {
            domain,
            metric,
            center,
            radius,
            directions,
            trace,
            convexity,
            svg,
            out,
            numeric,
        } => {
            let g = parse_domain(&domain)?;
            let kind = parse_metric(&metric)?;
            let c = parse_planar(&center)?;
            let t = trace_ball_boundary(&g, kind, &c, radius, directions, &numeric.config())?;
            let radii = t.radii();
            let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = radii.iter().copied().fold(0.0, f64::max);
            println!("points {}", t.len());
            println!("closed {}", t.is_closed());
            println!("radius_min {lo:.12}");
            println!("radius_max {hi:.12}");
            println!("max_residual {:.3e}", t.max_residual());
            if convexity {
                let class = convexity_classify(&t)?;
                println!("convexity {}", class.label());
                println!("convex {}", class.is_convex());
            }
            if trace {
                write_file(&out, &t.to_csv())?;
            }
            if let Some(p) = svg {
                write_file(&p, &t.to_svg())?;
            }
        }
        Command::Verify {
            suite,
            domain,
            budget,
            seed,
            out,
        } => {
            let default_domain = match suite.as_str() {
                "uniformity" => "punctured2",
                _ => "ball2",
            };
            let g = parse_domain(domain.as_deref().unwrap_or(default_domain))?;
            let checks = match suite.as_str() {
                "inequalities" => {
                    let mut cfg = SuiteConfig::default();
                    if let Some(b) = budget {
                        cfg.pairs = b;
                        cfg.identity_pairs = (b / 10).max(1);
                    }
                    inequality_suite(&g, &PairSampler::new(&g, SamplerKind::Mixed), seed, &cfg)?
                }
                "uniformity" => {
                    let mut b = UniformityBudget::for_domain(&g);
                    if let Some(n) = budget {
                        b.samples = n;
                    }
                    uniformity_suite(&g, b, seed, &EvalConfig::default())?
                }
                "trig" => match budget {
                    Some(n) => trig_suite_sized(n, (n / 10).max(1), 10 * n, seed)?,
                    None => trig_suite(seed)?,
                },
                "transforms" => transforms_suite(budget.unwrap_or(10_000), seed)?,
                _ => balls_suite(&g, seed, &EvalConfig::default())?,
            };
            let report = Report::new(checks);
            for c in &report.check {
                let status = if c.passed { "PASS" } else { "FAIL" };
                eprintln!(
                    "{status} {:?} {} [{}] worst_margin {:.3e} over {} samples",
                    c.level, c.name, c.domain, c.worst_margin, c.samples
                );
            }
            let text = report.to_toml();
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            if !report.strict_passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Uniformity {
            domain,
            budget,
            refine,
            seed,
        } => {
            let g = parse_domain(&domain)?;
            let mut b = UniformityBudget::for_domain(&g);
            if let Some(n) = budget {
                b.samples = n;
            }
            if let Some(n) = refine {
                b.refine_iters = n;
            }
            let e = uniformity_estimate(&g, b, seed, &EvalConfig::default())?;
            println!("estimate {:.12}", e.estimate);
            if let Some(a) = known_uniformity_constant(&g) {
                println!("constant {a:.12}");
                println!("relative_error {:.3e}", (e.estimate - a).abs() / a);
            }
            println!("witness {} {}", fmt_point(&e.witness.0), fmt_point(&e.witness.1));
        }
        Command::Trig { check, x, y, z } => {
            let (x, y, z) = (parse_planar(&x)?, parse_planar(&y)?, parse_planar(&z)?);
            match check {
                TrigCheck::Cosines => {
                    let l = law_of_cosines_check(x, y, z)?;
                    println!("kind {:?}", l.kind);
                    println!("sides {}", fmt_point(&l.sides));
                    println!("gamma {:.12}", l.gamma);
                    println!("alpha {:.12}", l.alpha);
                    println!("residual {:.3e}", l.residual);
                }
                TrigCheck::Heron => {
                    let h = heron_area_check(x, y, z)?;
                    println!("heron {:.12}", h.heron);
                    println!("area {:.12}", h.area);
                    println!("residual {:.3e}", h.residual);
                }
                TrigCheck::Halfplane => {
                    let c = halfplane_cosine_check(x, y, z)?;
                    println!("gamma {:.12}", c.gamma);
                    println!("margin {:.12}", c.margin);
                }
            }
        }
        Command::Levelset {
            values,
            window,
            resolution,
            out,
            svg,
        } => {
            let sets = levelset_trace(&values, &LevelSetConfig { window, resolution })?;
            let mut csv = String::from("c,contour,x,y\n");
            let mut paths: Vec<(Vec<[f64; 2]>, bool)> = Vec::new();
            for s in &sets {
                if s.empty {
                    println!("c {} empty", s.c);
                    continue;
                }
                println!(
                    "c {} contours {} points {} closed {} inversion_defect_cells {:.3}",
                    s.c,
                    s.contours.len(),
                    s.point_count(),
                    s.contours.iter().all(|c| c.closed),
                    s.inversion_defect()
                );
                for (i, c) in s.contours.iter().enumerate() {
                    for p in &c.points {
                        csv.push_str(&format!("{},{i},{:.12},{:.12}\n", s.c, p[0], p[1]));
                    }
                    paths.push((c.points.clone(), c.closed));
                }
            }
            if let Some(p) = out {
                write_file(&p, &csv)?;
            }
            if let Some(p) = svg {
                let refs: Vec<(&[[f64; 2]], bool)> = paths.iter().map(|(v, c)| (v.as_slice(), *c)).collect();
                write_file(&p, &export::svg_paths(&refs))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_planar_slice(p: &[f64]) -> Result<[f64; 2], Failure> {
    match p {
        &[a, b] => Ok([a, b]),
        _ => Err(GeomError::Parse(format!("expected a planar point, got {} coordinates", p.len())).into()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
