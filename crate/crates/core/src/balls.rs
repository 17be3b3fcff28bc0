//! Metric balls: euclidean descriptions of hyperbolic balls, boundary
//! traces of planar balls, convexity classification and diameters.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::export;
use crate::geodesics::Bracket;
use crate::metrics::{distance_ratio_j, EvalConfig, Evaluator, MetricKind};
use crate::point::{self, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanBall {
    pub center: Point,
    pub radius: f64,
}

impl EuclideanBall {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        point::check_finite(&center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        point::dist(&self.center, p) < self.radius
    }

    /// `count` points on the bounding sphere: evenly spaced on circles,
    /// seeded uniform samples in higher dimensions.
    pub fn sphere_points(&self, count: usize, seed: u64) -> Vec<Point> {
        let n = self.center.len();
        let on_sphere = |u: &[f64]| point::axpy(&self.center, self.radius, u);
        match n {
            1 => [1.0, -1.0].iter().cycle().take(count).map(|&s| on_sphere(&[s])).collect(),
            2 => (0..count)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / count as f64;
                    on_sphere(&[t.cos(), t.sin()])
                })
                .collect(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let r = point::norm(&u);
                    if r > 0.1 && r <= 1.0 {
                        out.push(on_sphere(&point::scale(&u, 1.0 / r)));
                    }
                }
                out
            }
        }
    }
}

fn check_ball_args(g: &DomainSpec, x: &[f64], m: f64) -> Result<()> {
    if !matches!(g, DomainSpec::UnitBall(_) | DomainSpec::HalfSpace(_)) {
        return Err(GeomError::Unsupported(format!(
            "hyperbolic balls are available on unit balls and half-spaces, not {g}"
        )));
    }
    point::check_dims(g.dim(), x)?;
    if !g.contains(x) {
        return Err(g.outside(x));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("ball radius must be positive, got {m}")));
    }
    Ok(())
}

/// The hyperbolic ball `D(x, M)` as a euclidean ball.
pub fn hyperbolic_ball_to_euclidean(g: &DomainSpec, x: &[f64], m: f64) -> Result<EuclideanBall> {
    check_ball_args(g, x, m)?;
    match g {
        DomainSpec::HalfSpace(n) => {
            let t = x[n - 1];
            let mut c = x.to_vec();
            c[n - 1] = t * m.cosh();
            EuclideanBall::new(c, t * m.sinh())
        }
        _ => {
            let t = (0.5 * m).tanh();
            let s = point::norm_sq(x);
            let den = 1.0 - s * t * t;
            EuclideanBall::new(point::scale(x, (1.0 - t * t) / den), (1.0 - s) * t / den)
        }
    }
}

/// Factors `(a, A)` with `B(x, a d) ⊂ D(x, M) ⊂ B(x, A d)`, `d = d(x, ∂G)`;
/// both are sharp.
pub fn inclusion_radii(g: &DomainSpec, x: &[f64], m: f64) -> Result<(f64, f64)> {
    check_ball_args(g, x, m)?;
    match g {
        DomainSpec::HalfSpace(_) => Ok((-(-m).exp_m1(), m.exp_m1())),
        _ => {
            let t = (0.5 * m).tanh();
            let r = point::norm(x);
            Ok(((1.0 + r) * t / (1.0 + r * t), (1.0 + r) * t / (1.0 - r * t)))
        }
    }
}

/// Boundary of a planar metric ball sampled along rays from the center.
#[derive(Debug, Clone, PartialEq)]
pub struct BallTrace {
    pub center: [f64; 2],
    pub kind: MetricKind,
    pub radius: f64,
    pub points: Vec<[f64; 2]>,
    /// `|metric(center, p) - M|` per direction.
    pub residuals: Vec<f64>,
    /// `false` where the ray left the search range before the metric reached `M`.
    pub reached: Vec<bool>,
}

impl BallTrace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.reached.iter().all(|&r| r)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .zip(&self.reached)
            .filter(|(_, &r)| r)
            .map(|(v, _)| *v)
            .fold(0.0, f64::max)
    }

    /// Euclidean distance from the center per direction.
    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|p| point::dist(p, &self.center)).collect()
    }

    pub fn to_csv(&self) -> String {
        export::points_csv(&self.points)
    }

    pub fn to_svg(&self) -> String {
        export::svg_paths(&[(&self.points, true)])
    }
}

const TRACE_STEPS: usize = 100_000;

/// First crossing of `M` along one ray: march with steps proportional to
/// the boundary distance, then bisect.
fn trace_ray(
    ev: &Evaluator,
    c: [f64; 2],
    u: [f64; 2],
    m: f64,
    frac: f64,
    cap: f64,
) -> Result<([f64; 2], f64, bool)> {
    let g = ev.domain();
    let at = |s: f64| [c[0] + s * u[0], c[1] + s * u[1]];
    // metric value, or +inf once the ray has left the domain
    let value = |s: f64| -> Result<f64> {
        let p = at(s);
        if !g.contains(&p) {
            return Ok(f64::INFINITY);
        }
        ev.value(&c, &p)
    };
    let (mut lo, mut hi) = (0.0, f64::NAN);
    for _ in 0..TRACE_STEPS {
        let d = g.boundary_distance_unchecked(&at(lo));
        let s = lo + frac * d;
        if s == lo || s > cap {
            break;
        }
        if value(s)? >= m {
            hi = s;
            break;
        }
        lo = s;
    }
    if hi.is_nan() {
        let v = value(lo)?;
        return Ok((at(lo), (v - m).abs(), false));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if value(mid)? >= m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (vl, vh) = (value(lo)?, value(hi)?);
    if (vh - m).abs() < (m - vl).abs() {
        Ok((at(hi), (vh - m).abs(), true))
    } else {
        Ok((at(lo), (m - vl).abs(), true))
    }
}

/// Traces `∂B(center, M)` in a planar domain along `directions` equally
/// spaced rays. On each ray the first crossing is taken, so for
/// disconnected balls the trace follows the component of the center.
pub fn trace_ball_boundary(
    g: &DomainSpec,
    kind: MetricKind,
    center: &[f64],
    m: f64,
    directions: usize,
    cfg: &EvalConfig,
) -> Result<BallTrace> {
    if g.dim() != 2 {
        return Err(GeomError::Unsupported(format!("ball traces need a planar domain, got {g}")));
    }
    point::check_dims(2, center)?;
    if !g.contains(center) {
        return Err(g.outside(center));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("ball radius must be positive, got {m}")));
    }
    if directions < 3 {
        return Err(GeomError::InvalidParameter("a trace needs at least 3 directions".into()));
    }
    let ev = Evaluator::new(kind, g, cfg)?;
    let c = [center[0], center[1]];
    let frac = match kind {
        MetricKind::Quasihyperbolic if !kind.is_closed_form_on(g) => 0.25,
        _ => 0.05,
    };
    let cap = 1e9 * g.boundary_distance_unchecked(center).max(1.0);
    let dirs: Vec<[f64; 2]> = (0..directions)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / directions as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(directions);
    let chunk = directions.div_ceil(workers);
    let results: Vec<Result<([f64; 2], f64, bool)>> = std::thread::scope(|s| {
        let handles: Vec<_> = dirs
            .chunks(chunk)
            .map(|part| {
                let ev = &ev;
                s.spawn(move || {
                    part.iter().map(|&u| trace_ray(ev, c, u, m, frac, cap)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trace worker panicked")).collect()
    });
    let mut trace = BallTrace {
        center: c,
        kind,
        radius: m,
        points: Vec::with_capacity(directions),
        residuals: Vec::with_capacity(directions),
        reached: Vec::with_capacity(directions),
    };
    for r in results {
        let (p, res, ok) = r?;
        trace.points.push(p);
        trace.residuals.push(res);
        trace.reached.push(ok);
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Convexity {
    StrictlyConvex,
    Convex,
    /// Three consecutive trace points turning the wrong way.
    NonConvex { witness: [[f64; 2]; 3] },
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        !matches!(self, Convexity::NonConvex { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Convexity::StrictlyConvex => "StrictlyConvex",
            Convexity::Convex => "Convex",
            Convexity::NonConvex { .. } => "NonConvex",
        }
    }
}

/// Turns with `|sin|` below this count as straight.
pub const FLAT_TOLERANCE: f64 = 1e-9;

fn self_intersects(p: &[[f64; 2]]) -> bool {
    let n = p.len();
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if crate::domain::segments_intersect(a, b, p[j], p[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

/// Signs of the turning angles of the closed trace polygon.
pub fn convexity_classify(t: &BallTrace) -> Result<Convexity> {
    if t.len() < 64 {
        return Err(GeomError::InvalidParameter(format!(
            "convexity needs at least 64 trace points, got {}",
            t.len()
        )));
    }
    if !t.is_closed() {
        return Err(GeomError::Degenerate("trace is not closed".into()));
    }
    let mut p = t.points.clone();
    p.dedup();
    if p.first() == p.last() {
        p.pop();
    }
    if self_intersects(&p) {
        return Err(GeomError::Degenerate("trace is self-intersecting".into()));
    }
    let n = p.len();
    let area: f64 = (0..n).map(|i| point::cross2(p[i], p[(i + 1) % n])).sum();
    let orient = area.signum();
    let mut all_strict = true;
    let mut worst: Option<(f64, usize)> = None;
    for i in 0..n {
        let (a, b, c) = (p[(i + n - 1) % n], p[i], p[(i + 1) % n]);
        let u = [b[0] - a[0], b[1] - a[1]];
        let v = [c[0] - b[0], c[1] - b[1]];
        let s = orient * point::cross2(u, v) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
        if s <= FLAT_TOLERANCE {
            all_strict = false;
        }
        if s < -FLAT_TOLERANCE && worst.is_none_or(|(w, _)| s < w) {
            worst = Some((s, i));
        }
    }
    Ok(match worst {
        Some((_, i)) => Convexity::NonConvex {
            witness: [p[(i + n - 1) % n], p[i], p[(i + 1) % n]],
        },
        None if all_strict => Convexity::StrictlyConvex,
        None => Convexity::Convex,
    })
}

/// `j`-diameter of `∂B_j(0, M)` in the unit ball, `log(2e^M - 1)`.
pub fn j_sphere_diameter(m: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("radius must be positive, got {m}")));
    }
    Ok((2.0 * m.exp_m1()).ln_1p())
}

/// `k`-diameter of a traced `∂B_k(x, M)`. All pairs are evaluated when `k`
/// has a closed form on `g`; otherwise each trace point is paired with its
/// `j`-farthest partner and that partner's two neighbours.
pub fn k_sphere_diameter_numeric(
    g: &DomainSpec,
    x: &[f64],
    m: f64,
    samples: usize,
    cfg: &EvalConfig,
) -> Result<Bracket> {
    let t = trace_ball_boundary(g, MetricKind::Quasihyperbolic, x, m, samples, cfg)?;
    if !t.is_closed() {
        return Err(GeomError::Degenerate("k-sphere trace did not close".into()));
    }
    let ev = Evaluator::new(MetricKind::Quasihyperbolic, g, cfg)?;
    let p = &t.points;
    let n = p.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if MetricKind::Quasihyperbolic.is_closed_form_on(g) {
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
    } else {
        for i in 0..n {
            let mut far = (i, f64::NEG_INFINITY);
            for j in 0..n {
                if j != i {
                    let v = distance_ratio_j(g, &p[i], &p[j])?;
                    if v > far.1 {
                        far = (j, v);
                    }
                }
            }
            for j in [far.0 + n - 1, far.0, far.0 + 1] {
                let j = j % n;
                if j != i {
                    pairs.push((i.min(j), i.max(j)));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
    }
    let mut out = Bracket { lower: 0.0, upper: 0.0 };
    for (i, j) in pairs {
        if p[i] == p[j] {
            continue;
        }
        let b = ev.bracket(&p[i], &p[j])?;
        out.lower = out.lower.max(b.lower);
        out.upper = out.upper.max(b.upper);
    }
    Ok(out)
}

/// Number of 4-connected components of `{z : metric(center, z) < M}` on a
/// `grid × grid` lattice. Unbounded domains use the square of half-side
/// `1.05 (e^M - 1) d(center)`, which contains every `j`-ball of radius `M`
/// (and hence every ball of a metric dominating `j`).
pub fn ball_components(
    g: &DomainSpec,
    kind: MetricKind,
    center: &[f64],
    m: f64,
    grid: usize,
    cfg: &EvalConfig,
) -> Result<usize> {
    if g.dim() != 2 {
        return Err(GeomError::Unsupported(format!("component counts need a planar domain, got {g}")));
    }
    if grid < 2 {
        return Err(GeomError::InvalidParameter("component grid needs at least 2 points per axis".into()));
    }
    let d = g.boundary_distance(center)?;
    let ev = Evaluator::new(kind, g, cfg)?;
    let (lo, hi) = g.bounding_box().unwrap_or_else(|| {
        let r = 1.05 * m.exp_m1() * d;
        ([center[0] - r, center[1] - r], [center[0] + r, center[1] + r])
    });
    let at = |i: usize, j: usize| {
        [
            lo[0] + (hi[0] - lo[0]) * i as f64 / (grid - 1) as f64,
            lo[1] + (hi[1] - lo[1]) * j as f64 / (grid - 1) as f64,
        ]
    };
    let mut inside = vec![false; grid * grid];
    for j in 0..grid {
        for i in 0..grid {
            let p = at(i, j);
            if g.contains(&p) && p.as_slice() != center {
                inside[j * grid + i] = ev.value(center, &p)? < m;
            }
        }
    }
    let mut seen = vec![false; grid * grid];
    let mut count = 0;
    for start in 0..grid * grid {
        if !inside[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let (i, j) = (k % grid, k / grid);
            let nb = [
                (i > 0).then(|| k - 1),
                (i + 1 < grid).then(|| k + 1),
                (j > 0).then(|| k - grid),
                (j + 1 < grid).then(|| k + grid),
            ];
            for q in nb.into_iter().flatten() {
                if inside[q] && !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{rho_ball, rho_halfspace};
    use std::f64::consts::LN_2;

    #[test]
    fn origin_ball_is_centered() {
        let g = DomainSpec::unit_ball(3).unwrap();
        let b = hyperbolic_ball_to_euclidean(&g, &[0.0; 3], 1.0).unwrap();
        assert_eq!(b.center, vec![0.0; 3]);
        assert!((b.radius - 0.5f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn converted_spheres_sit_at_distance_m() {
        let b2 = DomainSpec::unit_ball(2).unwrap();
        let h2 = DomainSpec::half_space(2).unwrap();
        let x = [0.3, -0.5];
        let y = [0.7, 0.2];
        for m in [0.5, 1.0, 2.0] {
            let e = hyperbolic_ball_to_euclidean(&b2, &x, m).unwrap();
            for p in e.sphere_points(64, 0) {
                assert!((rho_ball(&x, &p).unwrap() - m).abs() < 1e-9);
            }
            let e = hyperbolic_ball_to_euclidean(&h2, &y, m).unwrap();
            for p in e.sphere_points(64, 0) {
                assert!((rho_halfspace(&y, &p).unwrap() - m).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn half_space_radii_are_scale_free() {
        let h = DomainSpec::half_space(2).unwrap();
        let (a, big) = inclusion_radii(&h, &[3.0, 0.25], 1.0).unwrap();
        assert!((a - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!((big - (1f64.exp() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn bad_ball_arguments() {
        let b = DomainSpec::unit_ball(2).unwrap();
        assert!(hyperbolic_ball_to_euclidean(&b, &[0.0, 0.0], 0.0).is_err());
        assert!(hyperbolic_ball_to_euclidean(&b, &[1.0, 0.0], 1.0).is_err());
        let p = DomainSpec::punctured_space(2).unwrap();
        assert!(matches!(
            inclusion_radii(&p, &[1.0, 0.0], 1.0),
            Err(GeomError::Unsupported(_))
        ));
        assert!(j_sphere_diameter(-1.0).is_err());
    }

    #[test]
    fn j_ball_in_disk_is_round() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let m = 0.8;
        let t = trace_ball_boundary(&g, MetricKind::DistanceRatio, &[0.0, 0.0], m, 64, &EvalConfig::default())
            .unwrap();
        assert!(t.is_closed() && t.max_residual() <= 1e-9);
        let r = 1.0 - (-m).exp();
        for q in t.radii() {
            assert!((q - r).abs() < 1e-9);
        }
    }

    #[test]
    fn flat_and_reflex_traces() {
        let g = DomainSpec::punctured_space(2).unwrap();
        let cfg = EvalConfig::default();
        let t = trace_ball_boundary(&g, MetricKind::DistanceRatio, &[1.0, 0.0], LN_2, 512, &cfg).unwrap();
        assert_eq!(convexity_classify(&t).unwrap(), Convexity::Convex);
        let t = trace_ball_boundary(&g, MetricKind::DistanceRatio, &[1.0, 0.0], LN_2 + 0.1, 512, &cfg)
            .unwrap();
        assert!(!convexity_classify(&t).unwrap().is_convex());
        let disk = DomainSpec::unit_ball(2).unwrap();
        let t = trace_ball_boundary(&disk, MetricKind::Hyperbolic, &[0.2, 0.1], 1.0, 128, &cfg).unwrap();
        assert_eq!(convexity_classify(&t).unwrap(), Convexity::StrictlyConvex);
    }

    #[test]
    fn classifier_rejects_short_or_open_traces() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let cfg = EvalConfig::default();
        let t = trace_ball_boundary(&g, MetricKind::Hyperbolic, &[0.0, 0.0], 1.0, 16, &cfg).unwrap();
        assert!(convexity_classify(&t).is_err());
        let mut t = trace_ball_boundary(&g, MetricKind::Hyperbolic, &[0.0, 0.0], 1.0, 64, &cfg).unwrap();
        t.reached[3] = false;
        assert!(convexity_classify(&t).is_err());
    }

    #[test]
    fn dumbbell_j_ball_has_two_components() {
        let g = DomainSpec::polygon(vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 0.45],
            [2.0, 0.45],
            [2.0, 0.0],
            [3.0, 0.0],
            [3.0, 1.0],
            [2.0, 1.0],
            [2.0, 0.55],
            [1.0, 0.55],
            [1.0, 1.0],
            [0.0, 1.0],
        ])
        .unwrap();
        let cfg = EvalConfig::default();
        let n = ball_components(&g, MetricKind::DistanceRatio, &[0.5, 0.5], 2.0, 121, &cfg).unwrap();
        assert_eq!(n, 2);
        let n = ball_components(&g, MetricKind::DistanceRatio, &[0.5, 0.5], 1.0, 121, &cfg).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn svg_export_is_one_closed_path() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let t = trace_ball_boundary(&g, MetricKind::Hyperbolic, &[0.0, 0.0], 1.0, 32, &EvalConfig::default())
            .unwrap();
        let s = t.to_svg();
        assert_eq!(s.matches("<path").count(), 1);
        assert_eq!(t.to_csv().lines().count(), 33);
    }

    #[test]
    fn k_ball_turns_reflex_past_one() {
        let g = DomainSpec::punctured_space(2).unwrap();
        let cfg = EvalConfig::default();
        let t = trace_ball_boundary(&g, MetricKind::Quasihyperbolic, &[1.0, 0.0], 1.0, 1024, &cfg).unwrap();
        assert_eq!(convexity_classify(&t).unwrap(), Convexity::StrictlyConvex);
        let t = trace_ball_boundary(&g, MetricKind::Quasihyperbolic, &[1.0, 0.0], 1.3, 1024, &cfg).unwrap();
        assert!(!convexity_classify(&t).unwrap().is_convex());
        // every trace point lies on the chart circle of radius 0.7
        let t = trace_ball_boundary(&g, MetricKind::Quasihyperbolic, &[1.0, 0.0], 0.7, 256, &cfg).unwrap();
        for p in &t.points {
            let k = p[1].atan2(p[0]).hypot(p[0].hypot(p[1]).ln());
            assert!((k - 0.7).abs() <= 1e-9);
        }
    }

    #[test]
    fn j_diameter_matches_trace_pairs() {
        let g = DomainSpec::unit_ball(2).unwrap();
        for m in [0.1, 1.0, 3.0] {
            let t = trace_ball_boundary(&g, MetricKind::DistanceRatio, &[0.0, 0.0], m, 128, &EvalConfig::default())
                .unwrap();
            let mut best: f64 = 0.0;
            for a in &t.points {
                for b in &t.points {
                    if a != b {
                        best = best.max(distance_ratio_j(&g, a, b).unwrap());
                    }
                }
            }
            let d = j_sphere_diameter(m).unwrap();
            assert!((best - d).abs() <= 1e-6, "{best} {d}");
            assert!(d < 2.0 * m);
        }
        assert!((j_sphere_diameter(LN_2).unwrap() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn k_diameters_in_convex_domains() {
        let cfg = EvalConfig::default();
        let h = DomainSpec::half_space(2).unwrap();
        let d = k_sphere_diameter_numeric(&h, &[0.0, 1.0], 0.5, 64, &cfg).unwrap();
        assert!((d.upper - 1.0).abs() < 0.01, "{d}");
        let b = DomainSpec::unit_ball(2).unwrap();
        let d = k_sphere_diameter_numeric(&b, &[0.0, 0.0], 0.5, 32, &cfg).unwrap();
        assert!((d.upper - 1.0).abs() < 0.01, "{d}");
        assert!(d.lower <= d.upper);
    }

    #[test]
    fn traces_grow_with_radius() {
        let g = DomainSpec::sector(1.2).unwrap();
        let cfg = EvalConfig::default();
        let c = [1.0, 0.4];
        let small = trace_ball_boundary(&g, MetricKind::DistanceRatio, &c, 0.4, 64, &cfg).unwrap();
        let big = trace_ball_boundary(&g, MetricKind::DistanceRatio, &c, 0.6, 64, &cfg).unwrap();
        for (a, b) in small.radii().iter().zip(big.radii()) {
            assert!(*a < b);
        }
    }
}
