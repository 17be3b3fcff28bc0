//! Quasihyperbolic trigonometry of the punctured plane, computed in the
//! log chart, and the cosine inequality of the upper half-plane.

use std::f64::consts::PI;

use crate::error::{GeomError, Result};
use crate::geodesics::{chart_displacement, log_chart, qh_angle};
use crate::metrics::{quasihyperbolic_punctured, rho_halfspace};
use crate::point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleKind {
    /// The three geodesic sides do not enclose the origin.
    Triangle,
    /// The sides wind once around the origin.
    Trigon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawOfCosines {
    pub kind: TriangleKind,
    /// `k(x,z)`, `k(y,z)`, `k(x,y)`.
    pub sides: [f64; 3],
    /// Quasihyperbolic angle at `z`.
    pub gamma: f64,
    /// Euclidean angle `∠(x, 0, y)`; enters the trigon identity only.
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

const BRANCH_EPS: f64 = 1e-12;

/// Chart lifts of `x` and `y` relative to `z` and the triangle/trigon
/// decision: the sides enclose the origin iff the branch-minimal angle
/// steps from `z` differ by more than `π`.
fn lift(x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Result<([f64; 2], [f64; 2], TriangleKind)> {
    let u = chart_displacement(z, x)?;
    let v = chart_displacement(z, y)?;
    let w = chart_displacement(x, y)?;
    // a side of angular extent π has two geodesics, one on each side of 0
    for s in [u, v, w] {
        if (s[1].abs() - PI).abs() <= BRANCH_EPS {
            return Err(GeomError::Degenerate(
                "a side subtends the angle π at the origin; its geodesic is not unique".into(),
            ));
        }
    }
    let gap = (v[1] - u[1]).abs();
    if (gap - PI).abs() <= BRANCH_EPS {
        return Err(GeomError::Degenerate("the origin lies on a side".into()));
    }
    let kind = if gap > PI {
        TriangleKind::Trigon
    } else {
        TriangleKind::Triangle
    };
    Ok((u, v, kind))
}

fn as_point(p: [f64; 2]) -> Result<()> {
    log_chart(p).map(|_| ())
}

/// Evaluates `k(x,y)^2` against `k(x,z)^2 + k(y,z)^2 - 2 k(x,z) k(y,z) cos γ`,
/// minus `4π(π - α)` for a trigon.
pub fn law_of_cosines_check(x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Result<LawOfCosines> {
    for p in [x, y, z] {
        as_point(p)?;
    }
    if x == y || y == z || x == z {
        return Err(GeomError::CoincidentPoints);
    }
    let (_, _, kind) = lift(x, y, z)?;
    let k1 = quasihyperbolic_punctured(&x, &z)?;
    let k2 = quasihyperbolic_punctured(&y, &z)?;
    let k3 = quasihyperbolic_punctured(&x, &y)?;
    let gamma = qh_angle(z, x, y)?;
    let alpha = point::angle_at(&[0.0, 0.0], &x, &y);
    let mut rhs = k1 * k1 + k2 * k2 - 2.0 * k1 * k2 * gamma.cos();
    if kind == TriangleKind::Trigon {
        rhs -= 4.0 * PI * (PI - alpha);
    }
    let lhs = k3 * k3;
    Ok(LawOfCosines {
        kind,
        sides: [k1, k2, k3],
        gamma,
        alpha,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeronCheck {
    pub heron: f64,
    /// Euclidean area of the chart triangle.
    pub area: f64,
    pub residual: f64,
}

/// Heron's formula in the cancellation-free arrangement for sides
/// `a ≥ b ≥ c`.
fn heron(mut s: [f64; 3]) -> f64 {
    s.sort_by(|p, q| q.total_cmp(p));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

/// Heron area from the three `k` side lengths against the quasihyperbolic
/// area of the triangle, i.e. the euclidean area of its chart image.
pub fn heron_area_check(x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Result<HeronCheck> {
    for p in [x, y, z] {
        as_point(p)?;
    }
    if x == y || y == z || x == z {
        return Err(GeomError::CoincidentPoints);
    }
    let (u, v, kind) = lift(x, y, z)?;
    if kind == TriangleKind::Trigon {
        return Err(GeomError::Degenerate("Heron's formula needs a triangle, not a trigon".into()));
    }
    let sides = [
        quasihyperbolic_punctured(&x, &z)?,
        quasihyperbolic_punctured(&y, &z)?,
        quasihyperbolic_punctured(&x, &y)?,
    ];
    let h = heron(sides);
    let area = 0.5 * point::cross2(u, v).abs();
    Ok(HeronCheck {
        heron: h,
        area,
        residual: (h - area).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineMargin {
    /// Euclidean angle at `z` between the hyperbolic arcs toward `x` and `y`.
    pub gamma: f64,
    /// `k(x,y)^2 - (k(x,z)^2 + k(y,z)^2 - 2 k(x,z) k(y,z) cos γ)`.
    pub margin: f64,
}

/// Unit tangent at `z` of the hyperbolic geodesic from `z` toward `x`.
fn arc_tangent(z: [f64; 2], x: [f64; 2]) -> [f64; 2] {
    let chord = [x[0] - z[0], x[1] - z[1]];
    let t = if x[0] == z[0] {
        [0.0, chord[1].signum()]
    } else {
        let c = (x[0] * x[0] + x[1] * x[1] - z[0] * z[0] - z[1] * z[1]) / (2.0 * (x[0] - z[0]));
        let r = [z[0] - c, z[1]];
        let n = r[0].hypot(r[1]);
        [-r[1] / n, r[0] / n]
    };
    if t[0] * chord[0] + t[1] * chord[1] < 0.0 {
        [-t[0], -t[1]]
    } else {
        t
    }
}

/// Margin of the half-plane cosine inequality; nonnegative when it holds.
pub fn halfplane_cosine_check(x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Result<CosineMargin> {
    if x == y || y == z || x == z {
        return Err(GeomError::CoincidentPoints);
    }
    let k3 = rho_halfspace(&x, &y)?;
    let k1 = rho_halfspace(&x, &z)?;
    let k2 = rho_halfspace(&y, &z)?;
    let a = arc_tangent(z, x);
    let b = arc_tangent(z, y);
    let gamma = point::angle_at(&[0.0, 0.0], &a, &b);
    Ok(CosineMargin {
        gamma,
        margin: k3 * k3 - (k1 * k1 + k2 * k2 - 2.0 * k1 * k2 * gamma.cos()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::log_chart_inverse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric_triangle() {
        let (r, t) = (1.7f64, 0.6f64);
        let x = [r * t.cos(), r * t.sin()];
        let y = [r * t.cos(), -r * t.sin()];
        let z = [r, 0.0];
        let l = law_of_cosines_check(x, y, z).unwrap();
        assert_eq!(l.kind, TriangleKind::Triangle);
        let k = l.sides[0];
        assert!((2.0 * k * k * (1.0 - l.gamma.cos()) - l.lhs).abs() <= 1e-12);
        assert!(l.residual <= 1e-12);
    }

    #[test]
    fn trigon_around_the_origin() {
        let x = [1.0, 0.1];
        let y = [-1.0, 0.3];
        let z = [0.2, -2.0];
        let l = law_of_cosines_check(x, y, z).unwrap();
        assert_eq!(l.kind, TriangleKind::Trigon);
        assert!(l.residual <= 1e-9, "{l:?}");
        // without the correction the identity is off by 4π(π - α)
        let plain = l.rhs + 4.0 * PI * (PI - l.alpha);
        assert!((plain - l.lhs).abs() > 1.0);
    }

    #[test]
    fn chart_right_triangle_area() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].map(log_chart_inverse);
        let h = heron_area_check(pts[0], pts[1], pts[2]).unwrap();
        assert!((h.area - 0.5).abs() < 1e-15 && (h.heron - 0.5).abs() < 1e-12);
        let line = [[0.0, 0.0], [0.5, 0.25], [1.0, 0.5]].map(log_chart_inverse);
        let h = heron_area_check(line[0], line[1], line[2]).unwrap();
        assert!(h.heron < 1e-7 && h.area < 1e-15);
    }

    #[test]
    fn random_triangles_and_degenerate_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut seen = 0;
        while seen < 200 {
            let p = |rng: &mut ChaCha8Rng| log_chart_inverse([rng.gen_range(-2.0..2.0), rng.gen_range(-PI..PI)]);
            let (x, y, z) = (p(&mut rng), p(&mut rng), p(&mut rng));
            if let Ok(l) = law_of_cosines_check(x, y, z) {
                assert!(l.residual <= 1e-9);
                if l.kind == TriangleKind::Triangle {
                    assert!(heron_area_check(x, y, z).unwrap().residual <= 1e-9);
                } else {
                    assert!(heron_area_check(x, y, z).is_err());
                }
                seen += 1;
            }
        }
        assert!(law_of_cosines_check([1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]).is_err());
        assert!(law_of_cosines_check([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).is_err());
    }

    #[test]
    fn halfplane_cases() {
        // vertical line through z, opposite sides: γ = π and equality
        let c = halfplane_cosine_check([0.0, 2.0], [0.0, 0.5], [0.0, 1.0]).unwrap();
        assert!((c.gamma - PI).abs() < 1e-15 && c.margin.abs() < 1e-12);
        // right angle at i between the imaginary axis and the unit circle
        let t = 0.3f64;
        let c = halfplane_cosine_check([0.0, 2.0], [t.sin(), t.cos()], [0.0, 1.0]).unwrap();
        assert!((c.gamma - PI / 2.0).abs() < 1e-12 && c.margin >= 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let mut p = || [rng.gen_range(-2.0..2.0), rng.gen_range(0.01..2.0)];
            let c = halfplane_cosine_check(p(), p(), p()).unwrap();
            assert!(c.margin >= -1e-9, "{c:?}");
        }
    }
}
