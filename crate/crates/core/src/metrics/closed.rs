use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::point;

fn in_ball(x: &[f64]) -> Result<()> {
    point::check_finite(x)?;
    if point::norm(x) < 1.0 {
        Ok(())
    } else {
        Err(GeomError::OutsideDomain {
            domain: format!("ball{}", x.len()),
            point: x.to_vec(),
        })
    }
}

fn in_half(x: &[f64]) -> Result<()> {
    point::check_finite(x)?;
    if !x.is_empty() && x[x.len() - 1] > 0.0 {
        Ok(())
    } else {
        Err(GeomError::OutsideDomain {
            domain: format!("half{}", x.len()),
            point: x.to_vec(),
        })
    }
}

/// Hyperbolic distance in `B^n`: `2 arsinh(|x-y| / √((1-|x|²)(1-|y|²)))`.
pub fn rho_ball(x: &[f64], y: &[f64]) -> Result<f64> {
    point::check_dims(x.len(), y)?;
    in_ball(x)?;
    in_ball(y)?;
    let (rx, ry) = (point::norm(x), point::norm(y));
    let s = ((1.0 - rx) * (1.0 + rx) * (1.0 - ry) * (1.0 + ry)).sqrt();
    Ok(2.0 * (point::dist(x, y) / s).asinh())
}

/// Hyperbolic distance in `H^n`, `arcosh(1 + |x-y|² / (2 x_n y_n))`, evaluated
/// as `2 arsinh(|x-y| / (2 √(x_n y_n)))` to keep precision for close points.
pub fn rho_halfspace(x: &[f64], y: &[f64]) -> Result<f64> {
    point::check_dims(x.len(), y)?;
    in_half(x)?;
    in_half(y)?;
    let n = x.len();
    let s = 2.0 * (x[n - 1].sqrt() * y[n - 1].sqrt());
    Ok(2.0 * (point::dist(x, y) / s).asinh())
}

/// `k_{R^n \ {0}}(x, y) = √(φ² + log²(|x|/|y|))` with `φ = ∠(x, 0, y)`.
pub fn quasihyperbolic_punctured(x: &[f64], y: &[f64]) -> Result<f64> {
    point::check_dims(x.len(), y)?;
    point::check_finite(x)?;
    point::check_finite(y)?;
    let (rx, ry) = (point::norm(x), point::norm(y));
    if rx == 0.0 || ry == 0.0 {
        return Err(GeomError::ZeroPoint);
    }
    let phi = point::angle_at(&vec![0.0; x.len()], x, y);
    Ok(phi.hypot((rx / ry).ln()))
}

fn boundary_distances(g: &DomainSpec, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    point::check_dims(g.dim(), x)?;
    point::check_dims(g.dim(), y)?;
    Ok((g.boundary_distance(x)?, g.boundary_distance(y)?))
}

/// `j_G(x, y) = log(1 + |x-y| / min(d(x), d(y)))`.
pub fn distance_ratio_j(g: &DomainSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let (dx, dy) = boundary_distances(g, x, y)?;
    Ok((point::dist(x, y) / dx.min(dy)).ln_1p())
}

/// `j̃_G(x, y) = log((1 + |x-y|/d(x)) (1 + |x-y|/d(y)))`.
pub fn distance_ratio_jtilde(g: &DomainSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let (dx, dy) = boundary_distances(g, x, y)?;
    let t = point::dist(x, y);
    Ok((t / dx).ln_1p() + (t / dy).ln_1p())
}

/// `m_{B^n}(x, y) = 2 log(1 + |x-y| / (2 min(d(x), d(y))))`. Not a metric.
pub fn m_ball(x: &[f64], y: &[f64]) -> Result<f64> {
    point::check_dims(x.len(), y)?;
    in_ball(x)?;
    in_ball(y)?;
    let d = (1.0 - point::norm(x)).min(1.0 - point::norm(y));
    Ok(2.0 * (point::dist(x, y) / (2.0 * d)).ln_1p())
}

/// `m(x, y) - m(x, z) - m(z, y)`; positive values violate the triangle inequality.
pub fn m_ball_violation(x: &[f64], z: &[f64], y: &[f64]) -> Result<f64> {
    Ok(m_ball(x, y)? - m_ball(x, z)? - m_ball(z, y)?)
}

/// Worst triangle-inequality violation of `m_{B^n}` among triples on the
/// radius `[0, 1)·e₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialViolation {
    pub x: f64,
    pub z: f64,
    pub y: f64,
    pub margin: f64,
    pub triples: usize,
}

/// Exhaustive search over radii `i / grid`, `0 ≤ i < grid`, with `x < z < y`.
pub fn m_ball_radial_violation(n: usize, grid: usize) -> Result<RadialViolation> {
    if n == 0 || grid < 3 {
        return Err(GeomError::InvalidParameter(
            "radial search needs n >= 1 and grid >= 3".into(),
        ));
    }
    let at = |t: f64| {
        let mut p = vec![0.0; n];
        p[0] = t;
        p
    };
    let r: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
    let mut best = RadialViolation {
        x: 0.0,
        z: 0.0,
        y: 0.0,
        margin: f64::NEG_INFINITY,
        triples: 0,
    };
    for i in 0..grid {
        for k in i + 1..grid {
            for l in k + 1..grid {
                let m = m_ball_violation(&at(r[i]), &at(r[k]), &at(r[l]))?;
                best.triples += 1;
                if m > best.margin {
                    best = RadialViolation {
                        x: r[i],
                        z: r[k],
                        y: r[l],
                        margin: m,
                        triples: best.triples,
                    };
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{E, FRAC_PI_2};

    fn random_in_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        loop {
            let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if point::norm(&p) < 1.0 {
                return p;
            }
        }
    }

    #[test]
    fn rho_ball_radial_values() {
        for m in [1.0, 2.0, 3.0] {
            let x = [(m / 2.0f64).tanh(), 0.0];
            assert!((rho_ball(&[0.0, 0.0], &x).unwrap() - m).abs() < 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = random_in_ball(&mut rng, 3);
            let neg: Vec<f64> = x.iter().map(|c| -c).collect();
            let a = rho_ball(&x, &neg).unwrap();
            let b = rho_ball(&[0.0; 3], &x).unwrap();
            assert!((a - 2.0 * b).abs() < 1e-12 * (1.0 + a));
        }
        assert!(rho_ball(&[1.0, 0.0], &[0.0, 0.0]).is_err());
        assert!(matches!(
            rho_ball(&[0.0, 0.0], &[0.0]),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rho_halfspace_axis_and_far_pair() {
        assert!((rho_halfspace(&[0.0, 1.0], &[0.0, 2.0]).unwrap() - 2f64.ln()).abs() < 1e-15);
        let a: f64 = 1e3;
        let v = rho_halfspace(&[-a, 1.0], &[a, 1.0]).unwrap();
        let approx = 2.0 * (2.0 * a).ln();
        assert!((v - approx).abs() / approx <= 1e-3);
        // arcosh form agrees where it is well conditioned
        let (x, y) = ([0.3, 0.7], [-1.2, 2.5]);
        let d2 = point::norm_sq(&point::sub(&x, &y));
        let ac = (1.0 + d2 / (2.0 * x[1] * y[1])).acosh();
        assert!((rho_halfspace(&x, &y).unwrap() - ac).abs() < 1e-13);
    }

    #[test]
    fn punctured_closed_form_values() {
        assert!((quasihyperbolic_punctured(&[1.0, 0.0], &[E, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (quasihyperbolic_punctured(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - FRAC_PI_2).abs() < 1e-15
        );
        assert_eq!(quasihyperbolic_punctured(&[0.0, 0.0], &[1.0, 0.0]), Err(GeomError::ZeroPoint));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let inv = |p: &[f64]| point::scale(p, 1.0 / point::norm_sq(p));
            let a = quasihyperbolic_punctured(&x, &y).unwrap();
            let b = quasihyperbolic_punctured(&inv(&x), &inv(&y)).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        }
    }

    #[test]
    fn j_and_jtilde_in_the_ball() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x = random_in_ball(&mut rng, 2);
            let r = point::norm(&x);
            let j0 = distance_ratio_j(&g, &[0.0, 0.0], &x).unwrap();
            assert!((j0 - (1.0 / (1.0 - r)).ln()).abs() < 1e-12 * (1.0 + j0));
            let jt = distance_ratio_jtilde(&g, &[0.0, 0.0], &x).unwrap();
            assert!((jt - (j0 + r.ln_1p())).abs() < 1e-12 * (1.0 + jt));
            let neg = [-x[0], -x[1]];
            let jn = distance_ratio_j(&g, &x, &neg).unwrap();
            assert!((jn - ((1.0 + r) / (1.0 - r)).ln()).abs() < 1e-12 * (1.0 + jn));
            assert!((jn - rho_ball(&x, &neg).unwrap() / 2.0).abs() < 1e-12 * (1.0 + jn));
        }
        assert_eq!(distance_ratio_jtilde(&g, &[0.2, 0.1], &[0.2, 0.1]).unwrap(), 0.0);
    }

    #[test]
    fn m_ball_examples() {
        let x = [0.4, -0.3];
        let neg = [-0.4, 0.3];
        // k(x, -x) = 2 log(1 / (1 - |x|)) through the origin
        let k = 2.0 * (1.0f64 / (1.0 - 0.5)).ln();
        assert!((m_ball(&x, &neg).unwrap() - k).abs() < 1e-15);
        assert_eq!(m_ball(&x, &x).unwrap(), 0.0);
        let v = m_ball_violation(&[0.2, 0.0], &[0.5, 0.0], &[0.8, 0.0]).unwrap();
        // direct evaluation: 2 log 2.5 - 2 log 1.3 - 2 log 1.75
        let oracle = 2.0 * (2.5f64.ln() - 1.3f64.ln() - 1.75f64.ln());
        assert!((v - oracle).abs() < 1e-14 && v > 0.0);
    }

    #[test]
    fn radial_search_finds_violation() {
        let r = m_ball_radial_violation(2, 50).unwrap();
        assert!(r.margin > 0.0);
        assert!(r.x < r.z && r.z < r.y);
    }
}
