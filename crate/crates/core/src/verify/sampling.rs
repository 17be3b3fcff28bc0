use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::domain::DomainSpec;
use crate::point::{self, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    /// Uniform in the domain (within a window for unbounded domains).
    Uniform,
    /// Uniform points pulled toward their nearest boundary point by a
    /// log-uniform factor in `[1e-4, 1]`.
    BoundaryHugging,
    /// Each point is uniform or boundary-hugging with probability 1/2.
    Mixed,
}

/// Points of a domain by rejection from a box.
#[derive(Debug, Clone)]
pub struct PairSampler {
    domain: DomainSpec,
    kind: SamplerKind,
    window: f64,
}

impl PairSampler {
    pub fn new(g: &DomainSpec, kind: SamplerKind) -> Self {
        Self {
            domain: g.clone(),
            kind,
            window: 2.0,
        }
    }

    /// Half-side of the sampling box for unbounded domains (default 2).
    pub fn with_window(mut self, window: f64) -> Self {
        self.window = window;
        self
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn ranges(&self) -> Vec<(f64, f64)> {
        let n = self.domain.dim();
        let w = self.window;
        match &self.domain {
            DomainSpec::UnitBall(_) | DomainSpec::PuncturedBall(_) => vec![(-1.0, 1.0); n],
            DomainSpec::Polygon(p) => {
                let (lo, hi) = p.bounding_box();
                vec![(lo[0], hi[0]), (lo[1], hi[1])]
            }
            DomainSpec::HalfSpace(_) => {
                let mut r = vec![(-w, w); n];
                r[n - 1] = (0.0, w);
                r
            }
            _ => vec![(-w, w); n],
        }
    }

    fn uniform(&self, rng: &mut ChaCha8Rng) -> Point {
        let ranges = self.ranges();
        loop {
            let p: Point = ranges.iter().map(|&(a, b)| rng.gen_range(a..b)).collect();
            if self.domain.contains(&p) {
                return p;
            }
        }
    }

    fn hugging(&self, rng: &mut ChaCha8Rng) -> Point {
        let p = self.uniform(rng);
        let lambda = 10f64.powf(rng.gen_range(-4.0..0.0));
        let Ok(b) = self.domain.nearest_boundary_point(&p) else {
            return p;
        };
        let q = point::axpy(&b, lambda, &point::sub(&p, &b));
        if self.domain.contains(&q) {
            q
        } else {
            p
        }
    }

    pub fn point(&self, rng: &mut ChaCha8Rng) -> Point {
        match self.kind {
            SamplerKind::Uniform => self.uniform(rng),
            SamplerKind::BoundaryHugging => self.hugging(rng),
            SamplerKind::Mixed => {
                if rng.gen_bool(0.5) {
                    self.uniform(rng)
                } else {
                    self.hugging(rng)
                }
            }
        }
    }

    /// Two sampled points, redrawn until distinct.
    pub fn pair(&self, rng: &mut ChaCha8Rng) -> (Point, Point) {
        loop {
            let x = self.point(rng);
            let y = self.point(rng);
            if x != y {
                return (x, y);
            }
        }
    }
}
