use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::par_map;
use super::report::{CheckLevel, Tracker, VerificationReport};
use super::sampling::{PairSampler, SamplerKind};
use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::metrics::{distance_ratio_j, EvalConfig, Evaluator, MetricKind};
use crate::point::{self, Point};

/// Sampling and refinement budget of [`uniformity_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityBudget {
    pub samples: usize,
    /// Pattern-search polls per refined pair.
    pub refine_iters: usize,
}

impl Default for UniformityBudget {
    fn default() -> Self {
        Self {
            samples: 4096,
            refine_iters: 200,
        }
    }
}

impl UniformityBudget {
    /// The default budget where `k` is exact or cheap (sectors), and
    /// 128 samples with 10 polls where it needs the numeric oracle.
    pub fn for_domain(g: &DomainSpec) -> Self {
        if MetricKind::Quasihyperbolic.is_closed_form_on(g) || matches!(g, DomainSpec::Sector(_)) {
            Self::default()
        } else {
            Self {
                samples: 128,
                refine_iters: 10,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformityEstimate {
    pub domain: String,
    /// Largest `k/j` found; a lower bound of `A_G` up to the accuracy of
    /// the `k` upper bound.
    pub estimate: f64,
    pub witness: (Point, Point),
    pub budget: UniformityBudget,
}

/// Coordinates on which a plain box covers the interesting part of the
/// domain: logarithmic in the distance to the boundary pieces.
#[derive(Debug, Clone)]
struct Chart {
    domain: DomainSpec,
    boxes: [(f64, f64); 2],
}

fn logistic(w: f64) -> f64 {
    1.0 / (1.0 + (-w).exp())
}

impl Chart {
    fn new(g: &DomainSpec) -> Result<Self> {
        let boxes = match g {
            DomainSpec::PuncturedSpace(2) => [(-20.0, 20.0), (-PI, PI)],
            DomainSpec::HalfSpace(2) => [(-20.0, 20.0), (-20.0, 20.0)],
            DomainSpec::Sector(_) => [(-20.0, 20.0), (-30.0, 30.0)],
            DomainSpec::UnitBall(2) | DomainSpec::PuncturedBall(2) => [(-8.0, 25.0), (-PI, PI)],
            DomainSpec::Polygon(p) => {
                let (lo, hi) = p.bounding_box();
                [(lo[0], hi[0]), (lo[1], hi[1])]
            }
            _ => {
                return Err(GeomError::Unsupported(format!(
                    "uniformity estimates need a planar domain, got {g}"
                )))
            }
        };
        Ok(Self {
            domain: g.clone(),
            boxes,
        })
    }

    /// Domain point for chart coordinates, if inside.
    fn point(&self, q: [f64; 2]) -> Option<Point> {
        let p = match &self.domain {
            DomainSpec::PuncturedSpace(_) => {
                let r = q[0].exp();
                vec![r * q[1].cos(), r * q[1].sin()]
            }
            DomainSpec::HalfSpace(_) => vec![q[0].sinh(), q[1].exp()],
            DomainSpec::Sector(s) => {
                let r = q[0].exp();
                let t = s.angle() * logistic(q[1]);
                vec![r * t.cos(), r * t.sin()]
            }
            DomainSpec::UnitBall(_) | DomainSpec::PuncturedBall(_) => {
                let r = logistic(q[0]);
                vec![r * q[1].cos(), r * q[1].sin()]
            }
            _ => q.to_vec(),
        };
        (point::check_finite(&p).is_ok() && self.domain.contains(&p)).then_some(p)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> [f64; 2] {
        [
            rng.gen_range(self.boxes[0].0..self.boxes[0].1),
            rng.gen_range(self.boxes[1].0..self.boxes[1].1),
        ]
    }

    fn scale(&self) -> [f64; 2] {
        [self.boxes[0].1 - self.boxes[0].0, self.boxes[1].1 - self.boxes[1].0]
    }
}

/// `k/j` for chart coordinates `q = (qx, qy)`; `None` outside the domain or
/// where `k` is unavailable.
fn ratio(chart: &Chart, ev: &Evaluator, q: [f64; 4]) -> Option<f64> {
    let x = chart.point([q[0], q[1]])?;
    let y = chart.point([q[2], q[3]])?;
    if x == y {
        return None;
    }
    let j = distance_ratio_j(ev.domain(), &x, &y).ok()?;
    if !(j > 0.0) {
        return None;
    }
    let k = ev.bracket(&x, &y).ok()?;
    Some(k.upper / j)
}

/// Pattern search over the four chart coordinates, with a doubling line
/// search along each successful poll direction.
fn refine(chart: &Chart, ev: &Evaluator, mut q: [f64; 4], mut best: f64, iters: usize) -> ([f64; 4], f64) {
    let s = chart.scale();
    let mut step = 1.0 / 64.0;
    for _ in 0..iters {
        let mut improved = false;
        for axis in 0..4 {
            for sign in [1.0, -1.0] {
                let mut h = sign * step * s[axis % 2];
                loop {
                    let mut c = q;
                    c[axis] += h;
                    match ratio(chart, ev, c) {
                        Some(v) if v > best => {
                            best = v;
                            q = c;
                            improved = true;
                            h *= 2.0;
                        }
                        _ => break,
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    (q, best)
}

/// Lower estimate of the uniformity constant `A_G = sup k/j` on a planar
/// domain: `samples` random pairs in log-type coordinates, then pattern
/// search from the best two pairs of every dyadic prefix of the sample.
/// Prefixes are shared between budgets, so the estimate never decreases
/// when `samples` or `refine_iters` grows.
pub fn uniformity_estimate(
    g: &DomainSpec,
    budget: UniformityBudget,
    seed: u64,
    cfg: &EvalConfig,
) -> Result<UniformityEstimate> {
    if budget.samples == 0 {
        return Err(GeomError::InvalidParameter("uniformity estimate needs samples >= 1".into()));
    }
    let chart = Chart::new(g)?;
    let ev = Evaluator::new(MetricKind::Quasihyperbolic, g, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qs: Vec<[f64; 4]> = (0..budget.samples)
        .map(|_| {
            let a = chart.draw(&mut rng);
            let b = chart.draw(&mut rng);
            [a[0], a[1], b[0], b[1]]
        })
        .collect();
    let vals: Vec<f64> = par_map(&qs, |&q| ratio(&chart, &ev, q).unwrap_or(f64::NEG_INFINITY));

    let mut starts: Vec<usize> = Vec::new();
    let mut len = budget.samples;
    loop {
        let mut idx: Vec<usize> = (0..len).collect();
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
        starts.extend(idx.into_iter().take(2).filter(|&i| vals[i].is_finite()));
        if len <= 64 {
            break;
        }
        len = len.div_ceil(2);
    }
    starts.sort_unstable();
    starts.dedup();
    if starts.is_empty() {
        return Err(GeomError::Degenerate("no sampled pair had a finite k/j ratio".into()));
    }
    let refined = par_map(&starts, |&i| refine(&chart, &ev, qs[i], vals[i], budget.refine_iters));
    let (q, estimate) = refined
        .into_iter()
        .fold(([0.0; 4], f64::NEG_INFINITY), |acc, r| if r.1 > acc.1 { r } else { acc });
    let x = chart.point([q[0], q[1]]).expect("refined pairs stay inside");
    let y = chart.point([q[2], q[3]]).expect("refined pairs stay inside");
    Ok(UniformityEstimate {
        domain: g.to_string(),
        estimate,
        witness: (x, y),
        budget,
    })
}

/// Growth functions `φ` of the φ-uniformity condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthFunction {
    /// `φ(t) = C t`.
    Linear(f64),
    /// `φ(t) = C log(1 + t)`.
    Log(f64),
}

impl GrowthFunction {
    pub fn constant(&self) -> f64 {
        match self {
            GrowthFunction::Linear(c) | GrowthFunction::Log(c) => *c,
        }
    }

    /// `φ(t) / C`.
    fn base(&self, t: f64) -> f64 {
        match self {
            GrowthFunction::Linear(_) => t,
            GrowthFunction::Log(_) => t.ln_1p(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.constant() * self.base(t)
    }
}

/// Checks `k(x,y) ≤ φ(|x-y| / min(d(x), d(y)))` on sampled pairs with the
/// upper bound of `k`. The report carries `smallest_constant`, the least
/// `C` of the same family that passes on the sample.
pub fn phi_uniform_check(
    g: &DomainSpec,
    phi: GrowthFunction,
    samples: usize,
    seed: u64,
    cfg: &EvalConfig,
) -> Result<VerificationReport> {
    let sampler = PairSampler::new(g, SamplerKind::Mixed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Point, Point)> = (0..samples).map(|_| sampler.pair(&mut rng)).collect();
    let ev = Evaluator::new(MetricKind::Quasihyperbolic, g, cfg)?;
    let ks: Vec<Result<f64>> = par_map(&pairs, |(x, y)| Ok(ev.bracket(x, y)?.upper));
    let mut t = Tracker::new();
    let mut needed: f64 = 0.0;
    for ((x, y), k) in pairs.iter().zip(ks) {
        let k = k?;
        let d = g.boundary_distance(x)?.min(g.boundary_distance(y)?);
        let s = point::dist(x, y) / d;
        t.observe(phi.eval(s) - k, &[x, y]);
        needed = needed.max(k / phi.base(s));
    }
    let label = match phi {
        GrowthFunction::Linear(_) => "phi_uniform_linear",
        GrowthFunction::Log(_) => "phi_uniform_log",
    };
    Ok(t.finish(label, &g.to_string(), CheckLevel::Strict, 1e-9, seed)
        .with_value("constant", phi.constant())
        .with_value("smallest_constant", needed))
}
