use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::point::Point;

/// Transformation `d ↦ T(d)` of metric values.
#[derive(Clone)]
pub enum MetricTransform {
    /// `d^a`, `a ∈ (0, 1]`.
    Power(f64),
    /// `h ∘ d` for an increasing homeomorphism `h` of `[0, ∞)` with `h(t)/t` decreasing.
    Concave(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// `max(d^a, d^b)`, `0 < a ≤ 1 ≤ b`.
    MaxPower { a: f64, b: f64 },
}

impl fmt::Debug for MetricTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricTransform::Power(a) => write!(f, "Power({a})"),
            MetricTransform::Concave(_) => write!(f, "Concave"),
            MetricTransform::MaxPower { a, b } => write!(f, "MaxPower {{ a: {a}, b: {b} }}"),
        }
    }
}

impl MetricTransform {
    pub fn validate(&self) -> Result<()> {
        match self {
            MetricTransform::Power(a) if *a > 0.0 && *a <= 1.0 => Ok(()),
            MetricTransform::Power(a) => Err(GeomError::InvalidParameter(format!(
                "power exponent must lie in (0, 1], got {a}"
            ))),
            MetricTransform::MaxPower { a, b } if *a > 0.0 && *a <= 1.0 && *b >= 1.0 && b.is_finite() => {
                Ok(())
            }
            MetricTransform::MaxPower { a, b } => Err(GeomError::InvalidParameter(format!(
                "max-power exponents need 0 < a <= 1 <= b < inf, got a = {a}, b = {b}"
            ))),
            MetricTransform::Concave(h) => {
                if h(0.0) != 0.0 {
                    return Err(GeomError::InvalidParameter("h(0) must be 0".into()));
                }
                // spot check monotonicity of h and of h(t)/t on a log grid
                let ts: Vec<f64> = (-40..=40).map(|i| 10f64.powf(i as f64 / 8.0)).collect();
                for w in ts.windows(2) {
                    let (h0, h1) = (h(w[0]), h(w[1]));
                    if !(h1 > h0) || h1 / w[1] > h0 / w[0] * (1.0 + 1e-12) {
                        return Err(GeomError::InvalidParameter(format!(
                            "h must be increasing with h(t)/t decreasing; fails near t = {}",
                            w[0]
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, d: f64) -> f64 {
        match self {
            MetricTransform::Power(a) => d.powf(*a),
            MetricTransform::Concave(h) => h(d),
            MetricTransform::MaxPower { a, b } => d.powf(*a).max(d.powf(*b)),
        }
    }

    /// Constant `C` in `T(d)(x,y) ≤ C (T(d)(x,z) + T(d)(z,y))`.
    pub fn quasi_constant(&self) -> f64 {
        match self {
            MetricTransform::MaxPower { b, .. } => 2f64.powf(b - 1.0),
            _ => 1.0,
        }
    }
}

/// Transforms a list of metric values.
pub fn metric_transform(values: &[f64], t: &MetricTransform) -> Result<Vec<f64>> {
    t.validate()?;
    Ok(values.iter().map(|&d| t.apply(d)).collect())
}

/// Outcome of a sampled quasi-triangle check; `worst_margin` is the minimum
/// of `C (T(x,z) + T(z,y)) - T(x,y)` over the triples.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiTriangleCheck {
    pub constant: f64,
    pub triples: usize,
    pub worst_margin: f64,
    pub witness: [Point; 3],
}

impl QuasiTriangleCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.worst_margin >= -tol
    }
}

/// Samples triples from `sample` and checks the quasi-triangle inequality of
/// the transformed metric `T ∘ d` with constant [`MetricTransform::quasi_constant`].
pub fn quasi_constant_check(
    t: &MetricTransform,
    d: impl Fn(&[f64], &[f64]) -> f64,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> Point,
    triples: usize,
    seed: u64,
) -> Result<QuasiTriangleCheck> {
    t.validate()?;
    let c = t.quasi_constant();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = QuasiTriangleCheck {
        constant: c,
        triples,
        worst_margin: f64::INFINITY,
        witness: [vec![], vec![], vec![]],
    };
    for _ in 0..triples {
        let (x, y, z) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
        let lhs = t.apply(d(&x, &y));
        let rhs = c * (t.apply(d(&x, &z)) + t.apply(d(&z, &y)));
        let m = rhs - lhs;
        if m < out.worst_margin {
            out.worst_margin = m;
            out.witness = [x, y, z];
        }
    }
    Ok(out)
}

/// Uniform points in `[-r, r]^n`.
pub fn cube_sampler(n: usize, r: f64) -> impl FnMut(&mut ChaCha8Rng) -> Point {
    move |rng| (0..n).map(|_| rng.gen_range(-r..r)).collect()
}
