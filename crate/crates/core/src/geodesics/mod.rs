//! Weighted path length, explicit geodesics and the log chart of the
//! punctured plane.

mod numeric;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::point::{self, Point};

pub use numeric::{numeric_geodesic, numeric_geodesic_weighted, GeodesicConfig, NumericGeodesic};

/// Closed interval known to contain a distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn exact(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lower, self.upper)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-type initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature rule mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct Rule {
    t: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    pub(crate) fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        Self {
            t: x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            w: w.iter().map(|w| 0.5 * w).collect(),
        }
    }
}

/// Ordered list of at least two points with distinct neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(GeomError::Degenerate(
                "polyline needs at least two vertices".into(),
            ));
        }
        let n = vertices[0].len();
        for v in &vertices {
            point::check_dims(n, v)?;
            point::check_finite(v)?;
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::Degenerate(
                "consecutive polyline vertices coincide".into(),
            ));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn euclidean_length(&self) -> f64 {
        self.vertices.windows(2).map(|w| point::dist(&w[0], &w[1])).sum()
    }

    /// Joins `self` and `other`, which must share the junction vertex.
    pub fn concat(&self, other: &Polyline) -> Result<Polyline> {
        if self.vertices.last() != other.vertices.first() {
            return Err(GeomError::Degenerate(
                "polylines do not share the junction vertex".into(),
            ));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Polyline::new(v)
    }

    /// `x,y[,z...]` rows under a header line.
    pub fn to_csv(&self) -> String {
        let n = self.vertices[0].len();
        let names = ["x", "y", "z"];
        let header: Vec<String> = (0..n)
            .map(|i| names.get(i).map_or(format!("x{}", i + 1), |s| s.to_string()))
            .collect();
        let mut out = header.join(",");
        out.push('\n');
        for v in &self.vertices {
            let row: Vec<String> = v.iter().map(|c| format!("{c:.12}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Positive weight `w : G → (0, ∞)` defining the length `∫ w |dz|`.
#[derive(Clone)]
pub enum DensityField {
    /// `w ≡ 1` on all of `R^n`.
    Unit,
    /// `w = 1 / d(x, ∂G)`.
    Quasihyperbolic(DomainSpec),
    /// `w = 2 / (1 - |x|²)` on the unit ball.
    HyperbolicBall,
    /// `w = 1 / x_n` on the upper half-space.
    HyperbolicHalfSpace,
    /// Arbitrary weight; points where it is not finite and positive are outside.
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for DensityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityField::Unit => write!(f, "Unit"),
            DensityField::Quasihyperbolic(g) => write!(f, "Quasihyperbolic({g})"),
            DensityField::HyperbolicBall => write!(f, "HyperbolicBall"),
            DensityField::HyperbolicHalfSpace => write!(f, "HyperbolicHalfSpace"),
            DensityField::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl DensityField {
    /// Weight at `x`, or `None` outside the domain of the field.
    pub fn eval(&self, x: &[f64]) -> Option<f64> {
        let w = match self {
            DensityField::Unit => 1.0,
            DensityField::Quasihyperbolic(g) => {
                if !g.contains(x) {
                    return None;
                }
                1.0 / g.boundary_distance_unchecked(x)
            }
            DensityField::HyperbolicBall => 2.0 / (1.0 - point::norm_sq(x)),
            DensityField::HyperbolicHalfSpace => 1.0 / x[x.len() - 1],
            DensityField::Custom(f) => f(x),
        };
        (w.is_finite() && w > 0.0).then_some(w)
    }

    /// Weight at a point already known to be inside.
    fn eval_inside(&self, x: &[f64]) -> f64 {
        match self {
            DensityField::Quasihyperbolic(g) => 1.0 / g.boundary_distance_unchecked(x),
            _ => self.eval(x).unwrap_or(f64::NAN),
        }
    }

    /// Whether the closed segment `[a, b]` lies where the field is defined.
    pub fn admits_segment(&self, a: &[f64], b: &[f64]) -> bool {
        match self {
            DensityField::Unit => true,
            DensityField::Quasihyperbolic(g) => g.segment_inside(a, b),
            DensityField::HyperbolicBall | DensityField::HyperbolicHalfSpace => {
                self.eval(a).is_some() && self.eval(b).is_some()
            }
            DensityField::Custom(_) => self.eval(a).is_some() && self.eval(b).is_some(),
        }
    }

    pub(crate) fn segment_length(&self, a: &[f64], b: &[f64], rule: &Rule) -> Option<f64> {
        if !self.admits_segment(a, b) {
            return None;
        }
        let len = point::dist(a, b);
        if let DensityField::Unit = self {
            return Some(len);
        }
        let ab = point::sub(b, a);
        let mut buf = vec![0.0; a.len()];
        let mut acc = 0.0;
        for (t, w) in rule.t.iter().zip(&rule.w) {
            for k in 0..a.len() {
                buf[k] = a[k] + t * ab[k];
            }
            let v = self.eval_inside(&buf);
            if !(v.is_finite() && v > 0.0) {
                return None;
            }
            acc += w * v;
        }
        Some(acc * len)
    }
}

/// `ℓ_w(γ) = ∫_γ w |dz|` by composite Gauss–Legendre quadrature per segment.
pub fn weighted_length(p: &Polyline, w: &DensityField, order: usize) -> Result<f64> {
    let rule = Rule::new(order);
    let mut total = 0.0;
    for s in p.vertices.windows(2) {
        total += w
            .segment_length(&s[0], &s[1], &rule)
            .ok_or(GeomError::PathExitsDomain)?;
    }
    Ok(total)
}

/// Orthonormal pair spanning a plane through 0 that contains `x` and `y`.
/// When `x`, `y` and 0 are collinear the second vector is any perpendicular.
pub fn plane_basis(x: &[f64], y: &[f64]) -> (Point, Point) {
    let n = x.len();
    let base = if point::norm(x) > 0.0 { x } else { y };
    let r = point::norm(base);
    let e1 = if r > 0.0 {
        point::scale(base, 1.0 / r)
    } else {
        point::unit(n, 0)
    };
    let other = if std::ptr::eq(base, x) { y } else { x };
    let mut e2 = point::axpy(other, -point::dot(other, &e1), &e1);
    let mut m = point::norm(&e2);
    if m <= 1e-14 * point::norm(other).max(f64::MIN_POSITIVE) || m == 0.0 {
        // pick the coordinate axis least aligned with e1
        let k = (0..n)
            .min_by(|&i, &j| e1[i].abs().total_cmp(&e1[j].abs()))
            .unwrap_or(0);
        let ek = point::unit(n, k);
        e2 = point::axpy(&ek, -point::dot(&ek, &e1), &e1);
        m = point::norm(&e2);
    }
    (e1, point::scale(&e2, 1.0 / m))
}

/// Logarithmic spiral from `x` to `y` in the plane through 0, `x`, `y`,
/// sampled with `samples` segments. `φ = 0` gives the radial segment.
pub fn spiral_geodesic(x: &[f64], y: &[f64], samples: usize) -> Result<Polyline> {
    point::check_dims(x.len(), y)?;
    if point::norm(x) == 0.0 || point::norm(y) == 0.0 {
        return Err(GeomError::ZeroPoint);
    }
    if x == y {
        return Err(GeomError::CoincidentPoints);
    }
    if samples < 1 {
        return Err(GeomError::InvalidParameter("samples must be positive".into()));
    }
    let (rx, ry) = (point::norm(x), point::norm(y));
    let phi = point::angle_at(&vec![0.0; x.len()], x, y);
    let (e1, e2) = plane_basis(x, y);
    let log_ratio = (ry / rx).ln();
    let mut v = Vec::with_capacity(samples + 1);
    v.push(x.to_vec());
    for i in 1..samples {
        let s = i as f64 / samples as f64;
        let r = rx * (s * log_ratio).exp();
        let w = s * phi;
        v.push(point::add(
            &point::scale(&e1, r * w.cos()),
            &point::scale(&e2, r * w.sin()),
        ));
    }
    v.push(y.to_vec());
    Polyline::new(v)
}

/// Hyperbolic geodesic of the unit ball: the arc through `x`, `y` orthogonal
/// to the unit sphere, or a diameter chord when 0, `x`, `y` are collinear.
#[derive(Debug, Clone, PartialEq)]
pub struct BallGeodesic {
    pub path: Polyline,
    /// Ideal endpoint beyond `x`.
    pub x_star: Point,
    /// Ideal endpoint beyond `y`.
    pub y_star: Point,
    /// Center of the circle carrying the arc; `None` for a chord through 0.
    pub center: Option<Point>,
}

pub fn ball_geodesic(x: &[f64], y: &[f64], samples: usize) -> Result<BallGeodesic> {
    let n = x.len();
    point::check_dims(n, y)?;
    let ball = DomainSpec::unit_ball(n)?;
    for p in [x, y] {
        if !ball.contains(p) {
            return Err(ball.outside(p));
        }
    }
    if x == y {
        return Err(GeomError::CoincidentPoints);
    }
    if samples < 1 {
        return Err(GeomError::InvalidParameter("samples must be positive".into()));
    }
    let (e1, e2) = plane_basis(x, y);
    let to2 = |p: &[f64]| [point::dot(p, &e1), point::dot(p, &e2)];
    let from2 = |p: [f64; 2]| point::add(&point::scale(&e1, p[0]), &point::scale(&e2, p[1]));
    let (x2, y2) = (to2(x), to2(y));
    let cross = point::cross2(x2, y2);
    let scale = point::norm(x) * point::norm(y);
    if cross.abs() <= 1e-12 * scale || scale == 0.0 {
        let u = point::scale(&point::sub(y, x), 1.0 / point::dist(x, y));
        let b = point::dot(x, &u);
        let disc = (b * b - point::norm_sq(x) + 1.0).sqrt();
        let x_star = point::axpy(x, -b - disc, &u);
        let y_star = point::axpy(x, -b + disc, &u);
        let verts = (0..=samples)
            .map(|i| {
                if i == 0 {
                    x.to_vec()
                } else if i == samples {
                    y.to_vec()
                } else {
                    point::lerp(x, y, i as f64 / samples as f64)
                }
            })
            .collect();
        return Ok(BallGeodesic {
            path: Polyline::new(verts)?,
            x_star,
            y_star,
            center: None,
        });
    }
    // 2 c·x = |x|² + 1 and 2 c·y = |y|² + 1
    let bx = 0.5 * (x2[0] * x2[0] + x2[1] * x2[1] + 1.0);
    let by = 0.5 * (y2[0] * y2[0] + y2[1] * y2[1] + 1.0);
    let c = [
        (bx * y2[1] - by * x2[1]) / cross,
        (x2[0] * by - y2[0] * bx) / cross,
    ];
    let c2 = c[0] * c[0] + c[1] * c[1];
    let radius = (c2 - 1.0).sqrt();
    let ang = |p: [f64; 2]| (p[1] - c[1]).atan2(p[0] - c[0]);
    let (tx, ty) = (ang(x2), ang(y2));
    let sweep = wrap_angle(ty - tx);
    let ends = [
        [(c[0] - radius * c[1]) / c2, (c[1] + radius * c[0]) / c2],
        [(c[0] + radius * c[1]) / c2, (c[1] - radius * c[0]) / c2],
    ];
    // x* lies behind x along the sweep direction
    let behind = |p: [f64; 2]| wrap_angle(ang(p) - tx) * sweep.signum() < 0.0;
    let (xs, ys) = if behind(ends[0]) {
        (ends[0], ends[1])
    } else {
        (ends[1], ends[0])
    };
    let verts = (0..=samples)
        .map(|i| {
            if i == 0 {
                x.to_vec()
            } else if i == samples {
                y.to_vec()
            } else {
                let t = tx + sweep * i as f64 / samples as f64;
                from2([c[0] + radius * t.cos(), c[1] + radius * t.sin()])
            }
        })
        .collect();
    Ok(BallGeodesic {
        path: Polyline::new(verts)?,
        x_star: from2(xs),
        y_star: from2(ys),
        center: Some(from2(c)),
    })
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// `z ↦ (log|z|, arg z)` with `arg ∈ (-π, π]`; the punctured-plane
/// quasihyperbolic metric is the euclidean metric of this chart up to the
/// choice of branch.
pub fn log_chart(z: [f64; 2]) -> Result<[f64; 2]> {
    if z[0] == 0.0 && z[1] == 0.0 {
        return Err(GeomError::ZeroPoint);
    }
    point::check_finite(&z)?;
    Ok([z[0].hypot(z[1]).ln(), z[1].atan2(z[0])])
}

pub fn log_chart_inverse(c: [f64; 2]) -> [f64; 2] {
    let r = c[0].exp();
    [r * c[1].cos(), r * c[1].sin()]
}

/// Chart displacement from `from` to `to` with the branch-minimal angle step.
pub fn chart_displacement(from: [f64; 2], to: [f64; 2]) -> Result<[f64; 2]> {
    let a = log_chart(from)?;
    let b = log_chart(to)?;
    Ok([b[0] - a[0], wrap_angle(b[1] - a[1])])
}

/// Quasihyperbolic distance in `R² \ {0}` through the chart.
pub fn chart_distance(x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    let d = chart_displacement(x, y)?;
    Ok(d[0].hypot(d[1]))
}

/// Quasihyperbolic angle at `z` between the geodesics toward `x` and `y`.
pub fn qh_angle(z: [f64; 2], x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    let u = chart_displacement(z, x)?;
    let v = chart_displacement(z, y)?;
    if (u[0] == 0.0 && u[1] == 0.0) || (v[0] == 0.0 && v[1] == 0.0) {
        return Err(GeomError::Degenerate(
            "vertex coincides with an endpoint in the chart".into(),
        ));
    }
    Ok(point::angle_at(&[0.0, 0.0], &u, &v))
}

/// Hyperbolic geodesic of the upper half-plane through `x` and `y`, sampled
/// with `samples` segments: a vertical segment or an arc centered on the axis.
pub fn halfplane_geodesic(x: [f64; 2], y: [f64; 2], samples: usize) -> Result<Polyline> {
    if x == y {
        return Err(GeomError::CoincidentPoints);
    }
    let h = DomainSpec::half_space(2)?;
    for p in [&x, &y] {
        if !h.contains(p) {
            return Err(h.outside(p));
        }
    }
    let verts = if x[0] == y[0] {
        let (lx, ly) = (x[1].ln(), y[1].ln());
        (0..=samples)
            .map(|i| {
                let s = i as f64 / samples as f64;
                vec![x[0], (lx + s * (ly - lx)).exp()]
            })
            .collect()
    } else {
        let c = (y[0] * y[0] + y[1] * y[1] - x[0] * x[0] - x[1] * x[1]) / (2.0 * (y[0] - x[0]));
        let r = (x[0] - c).hypot(x[1]);
        let (tx, ty) = (x[1].atan2(x[0] - c), y[1].atan2(y[0] - c));
        (0..=samples)
            .map(|i| {
                let t = tx + (ty - tx) * i as f64 / samples as f64;
                vec![c + r * t.cos(), r * t.sin()]
            })
            .collect()
    };
    let mut verts: Vec<Point> = verts;
    verts[0] = x.to_vec();
    *verts.last_mut().unwrap() = y.to_vec();
    Polyline::new(verts)
}
