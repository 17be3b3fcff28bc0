use std::f64::consts::PI;

use super::closed::{distance_ratio_j, quasihyperbolic_punctured, rho_halfspace};
use super::sector::SectorOracle;
use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::geodesics::{numeric_geodesic, plane_basis, Bracket, GeodesicConfig};
use crate::point;

/// `k_G(x, y)` with the default numeric configuration.
pub fn quasihyperbolic(g: &DomainSpec, x: &[f64], y: &[f64]) -> Result<Bracket> {
    quasihyperbolic_with(g, x, y, &GeodesicConfig::default())
}

/// `k_G(x, y)` as a bracket.
///
/// Exact for `R^n \ {0}`, `H^n`, the half-plane sector and radial segments
/// toward a nearest boundary point in any domain; sectors with `φ < π` use
/// the fold-and-run construction; everything else goes through the numeric
/// geodesic oracle with lower bound `j_G`. Balls of dimension above two are
/// reduced to the plane through 0, `x`, `y`.
pub fn quasihyperbolic_with(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &GeodesicConfig,
) -> Result<Bracket> {
    let j = distance_ratio_j(g, x, y)?;
    if x == y {
        return Ok(Bracket::exact(0.0));
    }
    match g {
        DomainSpec::PuncturedSpace(_) => return quasihyperbolic_punctured(x, y).map(Bracket::exact),
        DomainSpec::HalfSpace(_) => return rho_halfspace(x, y).map(Bracket::exact),
        DomainSpec::Sector(s) if s.angle() == PI => return rho_halfspace(x, y).map(Bracket::exact),
        _ => {}
    }
    if let Some(v) = radial(g, x, y) {
        return Ok(Bracket::exact(v));
    }
    match g {
        DomainSpec::Sector(s) if s.angle() < PI => {
            Ok(SectorOracle::new(s.angle()).bracket([x[0], x[1]], [y[0], y[1]], j))
        }
        DomainSpec::UnitBall(n) | DomainSpec::PuncturedBall(n) if *n > 2 => {
            let (e1, e2) = plane_basis(x, y);
            let flat = |p: &[f64]| vec![point::dot(p, &e1), point::dot(p, &e2)];
            let g2 = match g {
                DomainSpec::UnitBall(_) => DomainSpec::UnitBall(2),
                _ => DomainSpec::PuncturedBall(2),
            };
            numeric(&g2, &flat(x), &flat(y), cfg)
        }
        DomainSpec::UnitBall(1) | DomainSpec::PuncturedBall(1) => Err(GeomError::Unsupported(
            "one-dimensional balls are not handled".into(),
        )),
        _ => numeric(g, x, y, cfg),
    }
}

fn numeric(g: &DomainSpec, x: &[f64], y: &[f64], cfg: &GeodesicConfig) -> Result<Bracket> {
    let r = numeric_geodesic(g, x, y, cfg)?;
    if !r.converged {
        return Err(GeomError::NonConvergence {
            lower: r.bracket.lower,
            upper: r.bracket.upper,
        });
    }
    Ok(r.bracket)
}

/// If one point lies on the segment from the other toward a nearest
/// boundary point, `k = j = log(d(u) / d(v))`.
fn radial(g: &DomainSpec, x: &[f64], y: &[f64]) -> Option<f64> {
    let dx = g.boundary_distance_unchecked(x);
    let dy = g.boundary_distance_unchecked(y);
    let t = point::dist(x, y);
    let (du, dv) = if dx >= dy { (dx, dy) } else { (dy, dx) };
    if ((du - t) - dv).abs() <= 1e-13 * du {
        Some((du / dv).ln())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rho_ball;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ball_radial_values() {
        let g = DomainSpec::unit_ball(3).unwrap();
        let k = quasihyperbolic(&g, &[0.0; 3], &[0.9, 0.0, 0.0]).unwrap();
        assert!(k.is_exact() && (k.upper - 10f64.ln()).abs() < 1e-12);
        let k = quasihyperbolic(&g, &[0.3, 0.0, 0.0], &[0.6, 0.0, 0.0]).unwrap();
        assert!((k.upper - (0.7f64 / 0.4).ln()).abs() < 1e-12);
    }

    #[test]
    fn ball_bracket_within_rho_bounds() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = GeodesicConfig {
            resolution: 64,
            max_segments: 32,
            ..Default::default()
        };
        for _ in 0..20 {
            let x = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
            let y = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
            let k = quasihyperbolic_with(&g, &x, &y, &cfg).unwrap();
            let rho = rho_ball(&x, &y).unwrap();
            assert!(k.lower >= rho / 2.0 - 1e-12 && k.upper <= rho + 1e-9, "{k:?} {rho}");
        }
    }

    #[test]
    fn sector_bracket_against_numeric_oracle() {
        let g = DomainSpec::sector(PI / 3.0).unwrap();
        let cfg = GeodesicConfig {
            resolution: 256,
            ..Default::default()
        };
        for (x, y) in [([1.0, 0.3], [0.4, 0.5]), ([2.0, 0.1], [0.3, 0.45]), ([1.0, 0.1], [3.0, 0.2])] {
            let s = quasihyperbolic(&g, &x, &y).unwrap();
            let n = numeric_geodesic(&g, &x, &y, &cfg).unwrap();
            assert!(s.lower <= s.upper);
            assert!(s.upper <= n.bracket.upper + 1e-9, "{s:?} {:?}", n.bracket);
            assert!(n.bracket.upper - s.upper < 2e-3 * s.upper, "{s:?} {:?}", n.bracket);
        }
    }

    #[test]
    fn radial_segment_in_polygon_is_exact() {
        let g = DomainSpec::polygon(vec![[0.0, 0.0], [4.0, 0.0], [4.0, 2.0], [0.0, 2.0]]).unwrap();
        let u = [1.5, 0.8];
        let v = [1.5, 0.3];
        let k = quasihyperbolic(&g, &u, &v).unwrap();
        assert!(k.is_exact());
        assert!((k.upper - (0.8f64 / 0.3).ln()).abs() < 1e-12);
    }
}
