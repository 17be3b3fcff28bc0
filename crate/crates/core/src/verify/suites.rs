use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::par_map;
use super::report::{CheckLevel, Tracker, VerificationReport};
use super::sampling::{PairSampler, SamplerKind};
use super::trig::{halfplane_cosine_check, heron_area_check, law_of_cosines_check, TriangleKind};
use super::uniformity::{phi_uniform_check, uniformity_estimate, GrowthFunction, UniformityBudget};
use crate::balls::{
    convexity_classify, hyperbolic_ball_to_euclidean, inclusion_radii, j_sphere_diameter, trace_ball_boundary,
};
use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::geodesics::log_chart_inverse;
use crate::metrics::{
    cube_sampler, distance_ratio_j, quasi_constant_check, rho_ball, rho_halfspace, EvalConfig, MetricKind,
    MetricTransform,
};
use crate::point;

/// Suite names accepted by the command line.
pub const SUITES: [&str; 5] = ["inequalities", "uniformity", "trig", "transforms", "balls"];

const TOLERANCE: f64 = 1e-9;

/// `A_G` where it is known in closed form.
pub fn known_uniformity_constant(g: &DomainSpec) -> Option<f64> {
    match g {
        DomainSpec::PuncturedSpace(2) => Some(PI / 3f64.ln()),
        DomainSpec::UnitBall(_) | DomainSpec::HalfSpace(_) => Some(2.0),
        DomainSpec::Sector(s) if s.angle() <= PI => Some(1.0 / (0.5 * s.angle()).sin() + 1.0),
        _ => None,
    }
}

/// Estimate of `A_G`, compared with the known constant where there is one:
/// the estimate may not exceed it (strict when `k` is exact) and should come
/// within 5% of it (evidence). Where `k` is exact, `k ≤ A log(1 + t)` is
/// checked on `budget.samples` pairs as well.
pub fn uniformity_suite(
    g: &DomainSpec,
    budget: UniformityBudget,
    seed: u64,
    cfg: &EvalConfig,
) -> Result<Vec<VerificationReport>> {
    let name = g.to_string();
    let e = uniformity_estimate(g, budget, seed, cfg)?;
    let (x, y) = (&e.witness.0, &e.witness.1);
    let mut t = Tracker::new();
    t.observe(0.0, &[x, y]);
    let mut record = t
        .finish("uniformity_estimate", &name, CheckLevel::Report, 0.0, seed)
        .with_value("estimate", e.estimate)
        .with_value("samples", budget.samples as f64)
        .with_value("refine_iters", budget.refine_iters as f64);
    let Some(a) = known_uniformity_constant(g) else {
        return Ok(vec![record.with_note("no closed-form constant for this domain")]);
    };
    record = record
        .with_value("constant", a)
        .with_value("relative_error", (e.estimate - a).abs() / a);
    let exact = MetricKind::Quasihyperbolic.is_closed_form_on(g);
    let mut out = vec![record];

    let mut t = Tracker::new();
    t.observe(a - e.estimate, &[x, y]);
    let level = if exact { CheckLevel::Strict } else { CheckLevel::Evidence };
    out.push(t.finish("estimate_le_constant", &name, level, TOLERANCE, seed));

    let mut t = Tracker::new();
    t.observe(e.estimate - 0.95 * a, &[x, y]);
    out.push(t.finish("estimate_within_5pct", &name, CheckLevel::Evidence, 0.0, seed));

    if exact {
        out.push(phi_uniform_check(g, GrowthFunction::Log(a), budget.samples, seed, cfg)?);
    }
    Ok(out)
}

fn chart_point(rng: &mut ChaCha8Rng) -> [f64; 2] {
    log_chart_inverse([rng.gen_range(-3.0..3.0), rng.gen_range(-PI..PI)])
}

/// Law of cosines on `triangles` triangle triples and `trigons` trigon
/// triples, Heron's formula on `trigons` triangles, and the half-plane
/// cosine inequality on `halfplane` triples. Degenerate draws are redrawn.
pub fn trig_suite_sized(
    triangles: usize,
    trigons: usize,
    halfplane: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut tri, mut wrap, mut heron) = (Tracker::new(), Tracker::new(), Tracker::new());
    while tri.samples() < triangles || wrap.samples() < trigons {
        let (x, y, z) = (chart_point(&mut rng), chart_point(&mut rng), chart_point(&mut rng));
        let Ok(l) = law_of_cosines_check(x, y, z) else { continue };
        match l.kind {
            TriangleKind::Triangle if tri.samples() < triangles => {
                tri.observe(-l.residual, &[&x, &y, &z]);
                if heron.samples() < trigons {
                    let h = heron_area_check(x, y, z)?;
                    heron.observe(-h.residual, &[&x, &y, &z]);
                }
            }
            TriangleKind::Trigon if wrap.samples() < trigons => wrap.observe(-l.residual, &[&x, &y, &z]),
            _ => {}
        }
    }
    let mut half = Tracker::new();
    while half.samples() < halfplane {
        let mut p = || [rng.gen_range(-3.0..3.0), 10f64.powf(rng.gen_range(-2.0..0.5))];
        let (x, y, z) = (p(), p(), p());
        if let Ok(c) = halfplane_cosine_check(x, y, z) {
            half.observe(c.margin, &[&x, &y, &z]);
        }
    }
    Ok(vec![
        tri.finish("law_of_cosines_triangle", "punctured2", CheckLevel::Strict, TOLERANCE, seed),
        wrap.finish("law_of_cosines_trigon", "punctured2", CheckLevel::Strict, TOLERANCE, seed),
        heron.finish("heron_area", "punctured2", CheckLevel::Strict, TOLERANCE, seed),
        half.finish("halfplane_cosine", "half2", CheckLevel::Strict, TOLERANCE, seed),
    ])
}

/// [`trig_suite_sized`] with 10^3 triangles, 10^2 trigons and Heron
/// triangles, and 10^4 half-plane triples.
pub fn trig_suite(seed: u64) -> Result<Vec<VerificationReport>> {
    trig_suite_sized(1000, 100, 10_000, seed)
}

/// Quasi-triangle inequalities of `d^{1/2}` and `max(d^{1/2}, d^2)` for the
/// euclidean metric of `R^2` and the hyperbolic metric of `B^2`, on `triples`
/// triples each.
pub fn transforms_suite(triples: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let transforms = [
        ("power_0.5", MetricTransform::Power(0.5)),
        ("maxpower_0.5_2", MetricTransform::MaxPower { a: 0.5, b: 2.0 }),
    ];
    let mut out = Vec::new();
    for (label, t) in &transforms {
        let c = quasi_constant_check(t, |x, y| point::dist(x, y), cube_sampler(2, 2.0), triples, seed)?;
        out.push(quasi_report(&format!("{label}_euclidean"), "plane2", &c, seed));
        let ball = DomainSpec::UnitBall(2);
        let sampler = PairSampler::new(&ball, SamplerKind::Mixed);
        let rho = |x: &[f64], y: &[f64]| rho_ball(x, y).expect("sampled points lie in the disk");
        let c = quasi_constant_check(t, rho, |rng| sampler.point(rng), triples, seed)?;
        out.push(quasi_report(&format!("{label}_rho"), "ball2", &c, seed));
    }
    Ok(out)
}

fn quasi_report(name: &str, domain: &str, c: &crate::metrics::QuasiTriangleCheck, seed: u64) -> VerificationReport {
    let mut t = Tracker::new();
    let w: Vec<&[f64]> = c.witness.iter().map(|p| p.as_slice()).collect();
    t.observe(c.worst_margin, &w);
    let mut r = t
        .finish(name, domain, CheckLevel::Strict, TOLERANCE, seed)
        .with_value("constant", c.constant);
    r.samples = c.triples;
    r
}

/// Ball checks on `g`:
///
/// - hyperbolic balls (unit ball, half-space): 64 boundary samples of the
///   converted euclidean ball lie on the `ρ`-sphere, and between the sharp
///   inclusion radii, for `M ∈ {0.5, 1, 2}`;
/// - planar domains: ray-traced `j`-spheres of radius 1 have residual below
///   the tolerance; convexity of `j`- and (where exact) `k`-balls is reported;
/// - unit disk: the `j`-diameter of `∂B_j(0, M)` is `log(2e^M - 1)`.
pub fn balls_suite(g: &DomainSpec, seed: u64, cfg: &EvalConfig) -> Result<Vec<VerificationReport>> {
    let name = g.to_string();
    let sampler = PairSampler::new(g, SamplerKind::Uniform);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radii = [0.5, 1.0, 2.0];
    let mut out = Vec::new();

    if let DomainSpec::UnitBall(_) | DomainSpec::HalfSpace(_) = g {
        let rho = |x: &[f64], y: &[f64]| match g {
            DomainSpec::HalfSpace(_) => rho_halfspace(x, y),
            _ => rho_ball(x, y),
        };
        let (mut sphere, mut incl) = (Tracker::new(), Tracker::new());
        for _ in 0..4 {
            let x = sampler.point(&mut rng);
            let d = g.boundary_distance(&x)?;
            for &m in &radii {
                let b = hyperbolic_ball_to_euclidean(g, &x, m)?;
                let (a, big) = inclusion_radii(g, &x, m)?;
                for p in b.sphere_points(64, rng.gen()) {
                    sphere.observe(-(rho(&x, &p)? - m).abs(), &[&x, &p]);
                    let r = point::dist(&x, &p) / d;
                    incl.observe((r - a).min(big - r), &[&x, &p]);
                }
            }
        }
        out.push(sphere.finish("sphere_conversion", &name, CheckLevel::Strict, TOLERANCE, seed));
        out.push(incl.finish("inclusion_radii", &name, CheckLevel::Strict, TOLERANCE, seed));
    }

    if g.dim() == 2 {
        let x = sampler.point(&mut rng);
        let tr = trace_ball_boundary(g, MetricKind::DistanceRatio, &x, 1.0, 128, cfg)?;
        let mut t = Tracker::new();
        for (p, (&res, &ok)) in tr.points.iter().zip(tr.residuals.iter().zip(&tr.reached)) {
            t.observe(if ok { -res } else { f64::NAN }, &[&x, p]);
        }
        out.push(t.finish("j_trace_residual", &name, CheckLevel::Strict, TOLERANCE, seed));

        let mut labels = Vec::new();
        let mut kinds = vec![MetricKind::DistanceRatio];
        if MetricKind::Quasihyperbolic.is_closed_form_on(g) {
            kinds.push(MetricKind::Quasihyperbolic);
        }
        for kind in kinds {
            for &m in &radii {
                let tr = trace_ball_boundary(g, kind, &x, m, 256, cfg)?;
                let label = convexity_classify(&tr).map_or("unclassified", |c| c.label());
                labels.push(format!("{} M={m}: {label}", kind.short_name()));
            }
        }
        let mut t = Tracker::new();
        t.observe(0.0, &[&x]);
        out.push(
            t.finish("ball_convexity", &name, CheckLevel::Report, 0.0, seed)
                .with_note(labels.join("; ")),
        );
    }

    if *g == DomainSpec::UnitBall(2) {
        let mut t = Tracker::new();
        let o = [0.0, 0.0];
        for &m in &[0.1, 1.0, 10.0] {
            let tr = trace_ball_boundary(g, MetricKind::DistanceRatio, &o, m, 128, cfg)?;
            let rows: Vec<usize> = (0..tr.len()).collect();
            let far = par_map(&rows, |&i| {
                tr.points
                    .iter()
                    .filter(|q| **q != tr.points[i])
                    .map(|q| distance_ratio_j(g, &tr.points[i], q))
                    .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
            });
            let diam = far.into_iter().try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))?;
            t.observe(-(diam - j_sphere_diameter(m)?).abs(), &[&o]);
        }
        out.push(t.finish("j_sphere_diameter", &name, CheckLevel::Strict, 1e-6, seed));
    }

    if out.is_empty() {
        return Err(GeomError::Unsupported(format!("no ball checks apply to {g}")));
    }
    Ok(out)
}
