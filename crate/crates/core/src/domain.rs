//! Canonical domains `G ⊊ R^n` with boundary distance, membership and
//! boundary sampling.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::mobius::ExtendedPoint;
use crate::point::{self, Point};

/// Planar angular domain `{(r, θ) : r > 0, 0 < θ < φ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    angle: f64,
}

impl Sector {
    pub fn new(angle: f64) -> Result<Self> {
        if !(angle > 0.0 && angle < TAU) {
            return Err(GeomError::InvalidParameter(format!(
                "sector angle must lie in (0, 2π), got {angle}"
            )));
        }
        Ok(Self { angle })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Polar angle of `x` measured into `[0, 2π)`.
    pub fn polar_angle(x: &[f64]) -> f64 {
        let t = x[1].atan2(x[0]);
        if t < 0.0 {
            t + TAU
        } else {
            t
        }
    }

    fn ray_dirs(&self) -> [[f64; 2]; 2] {
        [[1.0, 0.0], [self.angle.cos(), self.angle.sin()]]
    }
}

/// Simple planar polygon, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn new(mut vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeomError::InvalidParameter(
                "polygon needs at least three vertices".into(),
            ));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(GeomError::InvalidParameter(
                "non-finite polygon vertex".into(),
            ));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeomError::InvalidParameter(
                    "repeated polygon vertex".into(),
                ));
            }
        }
        let area = signed_area(&vertices);
        if area.abs() < 1e-300 {
            return Err(GeomError::InvalidParameter(
                "polygon has zero area".into(),
            ));
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if adjacent {
                    // adjacent edges may only share their common vertex
                    let shared = if j == i + 1 { b } else { a };
                    let (p, q) = if j == i + 1 { (a, d) } else { (b, c) };
                    let u = [p[0] - shared[0], p[1] - shared[1]];
                    let v = [q[0] - shared[0], q[1] - shared[1]];
                    if point::cross2(u, v) == 0.0 && u[0] * v[0] + u[1] * v[1] > 0.0 {
                        return Err(GeomError::InvalidParameter(
                            "polygon folds back onto itself".into(),
                        ));
                    }
                } else if segments_intersect(a, b, c, d) {
                    return Err(GeomError::InvalidParameter(
                        "polygon is self-intersecting".into(),
                    ));
                }
            }
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    /// Parses one `x y` pair per line. Blank lines and `#` comments are skipped;
    /// the polygon is closed implicitly.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(GeomError::Parse(format!(
                    "line {}: expected \"x y\", got {line:?}",
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    GeomError::Parse(format!("line {}: {s:?}: {e}", lineno + 1))
                })
            };
            vertices.push([parse(fields[0])?, parse(fields[1])?]);
        }
        Self::new(vertices)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeomError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges()
            .map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1]))
            .sum()
    }

    /// Even-odd ray casting; boundary points are reported by `boundary_distance`.
    fn inside_crossing(&self, x: [f64; 2]) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a[1] > x[1]) != (b[1] > x[1]) {
                let t = (x[1] - a[1]) / (b[1] - a[1]);
                if x[0] < a[0] + t * (b[0] - a[0]) {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Point on the perimeter at arc-length fraction `s ∈ [0, 1)`.
    pub fn perimeter_point(&self, s: f64) -> [f64; 2] {
        let total = self.perimeter();
        let mut target = s.rem_euclid(1.0) * total;
        for (a, b) in self.edges() {
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            if target <= len {
                let t = target / len;
                return [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            }
            target -= len;
        }
        self.vertices[0]
    }

    fn vertex_fractions(&self) -> Vec<f64> {
        let total = self.perimeter();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.vertices.len());
        for (a, b) in self.edges() {
            out.push(acc / total);
            acc += (b[0] - a[0]).hypot(b[1] - a[1]);
        }
        out
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }
}

fn signed_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| point::cross2(v[i], v[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    point::cross2([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Distance from `p` to the segment `[a, b]` and the nearest point on it.
pub(crate) fn point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> (f64, [f64; 2]) {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    ((p[0] - q[0]).hypot(p[1] - q[1]), q)
}

/// Distance from `p` to the ray `{t dir : t ≥ 0}` and the nearest point on it.
fn point_ray(p: [f64; 2], dir: [f64; 2]) -> (f64, [f64; 2]) {
    let t = p[0] * dir[0] + p[1] * dir[1];
    if t <= 0.0 {
        (p[0].hypot(p[1]), [0.0, 0.0])
    } else {
        let q = [t * dir[0], t * dir[1]];
        ((p[0] - q[0]).hypot(p[1] - q[1]), q)
    }
}

fn as2(x: &[f64]) -> [f64; 2] {
    [x[0], x[1]]
}

/// Tagged descriptor of a canonical domain.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    /// Upper half-space `{x_n > 0}`.
    HalfSpace(usize),
    UnitBall(usize),
    /// `R^n \ {0}`.
    PuncturedSpace(usize),
    /// `B^n \ {0}`.
    PuncturedBall(usize),
    Sector(Sector),
    Polygon(Polygon),
}

impl DomainSpec {
    pub fn half_space(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(DomainSpec::HalfSpace(n))
    }

    pub fn unit_ball(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(DomainSpec::UnitBall(n))
    }

    pub fn punctured_space(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(DomainSpec::PuncturedSpace(n))
    }

    pub fn punctured_ball(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(DomainSpec::PuncturedBall(n))
    }

    pub fn sector(angle: f64) -> Result<Self> {
        Ok(DomainSpec::Sector(Sector::new(angle)?))
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Ok(DomainSpec::Polygon(Polygon::new(vertices)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::HalfSpace(n)
            | DomainSpec::UnitBall(n)
            | DomainSpec::PuncturedSpace(n)
            | DomainSpec::PuncturedBall(n) => *n,
            DomainSpec::Sector(_) | DomainSpec::Polygon(_) => 2,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(
            self,
            DomainSpec::UnitBall(_) | DomainSpec::PuncturedBall(_) | DomainSpec::Polygon(_)
        )
    }

    /// Convex domains: the euclidean segment between two interior points stays inside.
    pub fn is_convex(&self) -> bool {
        match self {
            DomainSpec::HalfSpace(_) | DomainSpec::UnitBall(_) => true,
            DomainSpec::Sector(s) => s.angle <= PI,
            DomainSpec::Polygon(p) => {
                let v = p.vertices();
                let n = v.len();
                (0..n).all(|i| orient(v[i], v[(i + 1) % n], v[(i + 2) % n]) >= 0.0)
            }
            _ => false,
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        point::check_finite(x)
    }

    /// Open-set membership; boundary points are excluded.
    pub fn contains(&self, x: &[f64]) -> bool {
        if self.check_point(x).is_err() {
            return false;
        }
        match self {
            DomainSpec::HalfSpace(n) => x[n - 1] > 0.0,
            DomainSpec::UnitBall(_) => point::norm(x) < 1.0,
            DomainSpec::PuncturedSpace(_) => x.iter().any(|&c| c != 0.0),
            DomainSpec::PuncturedBall(_) => {
                let r = point::norm(x);
                r > 0.0 && r < 1.0
            }
            DomainSpec::Sector(s) => {
                if x[0] == 0.0 && x[1] == 0.0 {
                    return false;
                }
                let t = Sector::polar_angle(x);
                t > 0.0 && t < s.angle
            }
            DomainSpec::Polygon(p) => {
                p.inside_crossing(as2(x)) && self.raw_boundary_distance(x) > 0.0
            }
        }
    }

    fn raw_boundary_distance(&self, x: &[f64]) -> f64 {
        match self {
            DomainSpec::HalfSpace(n) => x[n - 1],
            DomainSpec::UnitBall(_) => 1.0 - point::norm(x),
            DomainSpec::PuncturedSpace(_) => point::norm(x),
            DomainSpec::PuncturedBall(_) => {
                let r = point::norm(x);
                r.min(1.0 - r)
            }
            DomainSpec::Sector(s) => {
                let p = as2(x);
                s.ray_dirs()
                    .iter()
                    .map(|&d| point_ray(p, d).0)
                    .fold(f64::INFINITY, f64::min)
            }
            DomainSpec::Polygon(poly) => {
                let p = as2(x);
                poly.edges()
                    .map(|(a, b)| point_segment(p, a, b).0)
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Euclidean distance `d(x, ∂G)` for `x ∈ G`.
    pub fn boundary_distance(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if !self.contains(x) {
            return Err(self.outside(x));
        }
        Ok(self.raw_boundary_distance(x))
    }

    /// Boundary distance without the membership check; callers guarantee `x ∈ G`.
    pub(crate) fn boundary_distance_unchecked(&self, x: &[f64]) -> f64 {
        self.raw_boundary_distance(x)
    }

    /// A point `z ∈ ∂G` with `|x - z| = d(x, ∂G)`.
    pub fn nearest_boundary_point(&self, x: &[f64]) -> Result<Point> {
        self.boundary_distance(x)?;
        Ok(match self {
            DomainSpec::HalfSpace(n) => {
                let mut z = x.to_vec();
                z[n - 1] = 0.0;
                z
            }
            DomainSpec::UnitBall(n) => {
                let r = point::norm(x);
                if r == 0.0 {
                    point::unit(*n, 0)
                } else {
                    point::scale(x, 1.0 / r)
                }
            }
            DomainSpec::PuncturedSpace(n) => vec![0.0; *n],
            DomainSpec::PuncturedBall(n) => {
                let r = point::norm(x);
                if r <= 0.5 {
                    vec![0.0; *n]
                } else {
                    point::scale(x, 1.0 / r)
                }
            }
            DomainSpec::Sector(s) => {
                let p = as2(x);
                let [a, b] = s.ray_dirs().map(|d| point_ray(p, d));
                let q = if a.0 <= b.0 { a.1 } else { b.1 };
                q.to_vec()
            }
            DomainSpec::Polygon(poly) => {
                let p = as2(x);
                let best = poly
                    .edges()
                    .map(|(a, b)| point_segment(p, a, b))
                    .fold((f64::INFINITY, [0.0; 2]), |acc, c| if c.0 < acc.0 { c } else { acc });
                best.1.to_vec()
            }
        })
    }

    pub(crate) fn outside(&self, x: &[f64]) -> GeomError {
        GeomError::OutsideDomain {
            domain: self.to_string(),
            point: x.to_vec(),
        }
    }

    /// Whether the closed segment `[a, b]` lies in `G` (both endpoints assumed inside).
    pub fn segment_inside(&self, a: &[f64], b: &[f64]) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        match self {
            DomainSpec::HalfSpace(_) | DomainSpec::UnitBall(_) => true,
            DomainSpec::PuncturedSpace(n) | DomainSpec::PuncturedBall(n) => {
                // distance from the origin to the segment must be positive
                let ab = point::sub(b, a);
                let len2 = point::norm_sq(&ab);
                let t = (-point::dot(a, &ab) / len2).clamp(0.0, 1.0);
                let closest = point::axpy(a, t, &ab);
                debug_assert_eq!(closest.len(), *n);
                point::norm(&closest) > 0.0
            }
            DomainSpec::Sector(s) => {
                if s.angle <= PI {
                    return true;
                }
                let far = 4.0 * (point::norm(a) + point::norm(b));
                s.ray_dirs().iter().all(|d| {
                    !segments_intersect(as2(a), as2(b), [0.0, 0.0], [far * d[0], far * d[1]])
                })
            }
            DomainSpec::Polygon(poly) => poly
                .edges()
                .all(|(c, d)| !segments_intersect(as2(a), as2(b), c, d)),
        }
    }

    /// Planar bounding box for bounded planar domains.
    pub fn bounding_box(&self) -> Option<([f64; 2], [f64; 2])> {
        match self {
            DomainSpec::UnitBall(2) | DomainSpec::PuncturedBall(2) => {
                Some(([-1.0, -1.0], [1.0, 1.0]))
            }
            DomainSpec::Polygon(p) => Some(p.bounding_box()),
            _ => None,
        }
    }

    /// The pieces `∂G` is assembled from.
    pub fn boundary_pieces(&self) -> Vec<BoundaryPiece> {
        match self {
            DomainSpec::HalfSpace(n) => vec![BoundaryPiece::Hyperplane(*n), BoundaryPiece::Infinity],
            DomainSpec::UnitBall(n) => vec![BoundaryPiece::UnitSphere(*n)],
            DomainSpec::PuncturedSpace(n) => {
                vec![BoundaryPiece::Point(vec![0.0; *n]), BoundaryPiece::Infinity]
            }
            DomainSpec::PuncturedBall(n) => vec![
                BoundaryPiece::Point(vec![0.0; *n]),
                BoundaryPiece::UnitSphere(*n),
            ],
            DomainSpec::Sector(s) => {
                let [d0, d1] = s.ray_dirs();
                vec![
                    BoundaryPiece::Point(vec![0.0, 0.0]),
                    BoundaryPiece::Infinity,
                    BoundaryPiece::Ray(d0),
                    BoundaryPiece::Ray(d1),
                ]
            }
            DomainSpec::Polygon(p) => vec![BoundaryPiece::ClosedPolyline(p.clone())],
        }
    }

    /// Deterministic boundary sample.
    ///
    /// `∞` is included exactly once for unbounded domains. `R^n \ {0}` always
    /// yields `{0, ∞}`. Polygons always include every vertex, so they return
    /// `max(count, #vertices)` points.
    pub fn boundary_sample(&self, count: usize, seed: u64) -> Result<BoundarySample> {
        if count < 2 {
            return Err(GeomError::InvalidParameter(
                "boundary sample needs count >= 2".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offset: f64 = rng.gen();
        let mut coords: Vec<BoundaryCoord> = Vec::with_capacity(count);
        let pieces = self.boundary_pieces();
        match self {
            DomainSpec::HalfSpace(n) => {
                let m = count - 1;
                for i in 0..m {
                    let u = (i as f64 + offset) / m as f64;
                    let params = if *n == 1 {
                        vec![]
                    } else if *n == 2 {
                        vec![(PI * (u - 0.5)).tan()]
                    } else {
                        let r = (0.5 * PI * u).tan();
                        let dir = random_direction(&mut rng, n - 1);
                        point::scale(&dir, r)
                    };
                    coords.push(BoundaryCoord { piece: 0, params });
                    if *n == 1 {
                        break;
                    }
                }
                coords.push(BoundaryCoord { piece: 1, params: vec![] });
            }
            DomainSpec::UnitBall(n) => {
                for p in sphere_points(*n, count, offset, &mut rng) {
                    coords.push(BoundaryCoord { piece: 0, params: p });
                }
            }
            DomainSpec::PuncturedSpace(_) => {
                coords.push(BoundaryCoord { piece: 0, params: vec![] });
                coords.push(BoundaryCoord { piece: 1, params: vec![] });
            }
            DomainSpec::PuncturedBall(n) => {
                coords.push(BoundaryCoord { piece: 0, params: vec![] });
                for p in sphere_points(*n, count - 1, offset, &mut rng) {
                    coords.push(BoundaryCoord { piece: 1, params: p });
                }
            }
            DomainSpec::Sector(_) => {
                coords.push(BoundaryCoord { piece: 0, params: vec![] });
                coords.push(BoundaryCoord { piece: 1, params: vec![] });
                let m = count.saturating_sub(2);
                for i in 0..m {
                    let piece = 2 + i % 2;
                    let k = i / 2;
                    let per_ray = m.div_ceil(2);
                    let t = (k as f64 + offset) / per_ray as f64;
                    coords.push(BoundaryCoord { piece, params: vec![t] });
                }
            }
            DomainSpec::Polygon(poly) => {
                let fr = poly.vertex_fractions();
                for f in &fr {
                    coords.push(BoundaryCoord { piece: 0, params: vec![*f] });
                }
                let m = count.saturating_sub(fr.len());
                for i in 0..m {
                    let s = (i as f64 + offset) / m as f64;
                    coords.push(BoundaryCoord { piece: 0, params: vec![s] });
                }
            }
        }
        let points = coords
            .iter()
            .map(|c| pieces[c.piece].point(&c.params))
            .collect();
        Ok(BoundarySample {
            points,
            weights: None,
            coords,
            pieces,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(GeomError::InvalidParameter("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        // Box-Muller style gaussian via two uniforms
        let v: Point = (0..n)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
            })
            .collect();
        let r = point::norm(&v);
        if r > 1e-12 {
            return point::scale(&v, 1.0 / r);
        }
    }
}

/// Low-discrepancy points on `S^{n-1}`: equally spaced angles for n = 2, a
/// Fibonacci lattice for n = 3, seeded gaussian directions above that.
fn sphere_points(n: usize, count: usize, offset: f64, rng: &mut ChaCha8Rng) -> Vec<Point> {
    match n {
        1 => [vec![1.0], vec![-1.0]].into_iter().cycle().take(count.min(2)).collect(),
        2 => (0..count)
            .map(|i| {
                let t = TAU * (i as f64 + offset) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let t = golden * i as f64 + TAU * offset;
                    let p = vec![r * t.cos(), r * t.sin(), z];
                    let s = point::norm(&p);
                    point::scale(&p, 1.0 / s)
                })
                .collect()
        }
        _ => (0..count).map(|_| random_direction(rng, n)).collect(),
    }
}

/// One smooth piece of a boundary, with a parameterization used by the
/// sup-search refinement.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPiece {
    Point(Point),
    Infinity,
    /// `S^{n-1}`; parameters are the point itself, renormalized after each move.
    UnitSphere(usize),
    /// `{x_n = 0}` in R^n; parameters are the first n-1 coordinates.
    Hyperplane(usize),
    /// `{r d : r > 0}`; parameter `t ∈ (0, 1)` with `r = t / (1 - t)`.
    Ray([f64; 2]),
    /// Polygon perimeter; parameter is the arc-length fraction, periodic.
    ClosedPolyline(Polygon),
}

impl BoundaryPiece {
    pub fn point(&self, params: &[f64]) -> ExtendedPoint {
        match self {
            BoundaryPiece::Point(p) => ExtendedPoint::Finite(p.clone()),
            BoundaryPiece::Infinity => ExtendedPoint::Infinity,
            BoundaryPiece::UnitSphere(_) => ExtendedPoint::Finite(params.to_vec()),
            BoundaryPiece::Hyperplane(_) => {
                let mut p = params.to_vec();
                p.push(0.0);
                ExtendedPoint::Finite(p)
            }
            BoundaryPiece::Ray(d) => {
                let t = params[0];
                let r = t / (1.0 - t);
                ExtendedPoint::Finite(vec![r * d[0], r * d[1]])
            }
            BoundaryPiece::ClosedPolyline(p) => {
                ExtendedPoint::Finite(p.perimeter_point(params[0]).to_vec())
            }
        }
    }

    /// Number of independent refinement directions.
    pub fn freedom(&self) -> usize {
        match self {
            BoundaryPiece::Point(_) | BoundaryPiece::Infinity => 0,
            BoundaryPiece::UnitSphere(n) => *n,
            BoundaryPiece::Hyperplane(n) => n - 1,
            BoundaryPiece::Ray(_) | BoundaryPiece::ClosedPolyline(_) => 1,
        }
    }

    /// Moves the parameters along refinement direction `axis` by `step`, or
    /// returns `None` when the move leaves the parameter range.
    pub fn perturb(&self, params: &[f64], axis: usize, step: f64) -> Option<Vec<f64>> {
        let mut p = params.to_vec();
        match self {
            BoundaryPiece::Point(_) | BoundaryPiece::Infinity => return None,
            BoundaryPiece::UnitSphere(_) => {
                p[axis] += step;
                let r = point::norm(&p);
                if r == 0.0 {
                    return None;
                }
                p = point::scale(&p, 1.0 / r);
            }
            BoundaryPiece::Hyperplane(_) => {
                let scale = 1.0 + point::norm(&p);
                p[axis] += step * scale;
            }
            BoundaryPiece::Ray(_) => {
                p[0] += step;
                if !(p[0] > 0.0 && p[0] < 1.0) {
                    return None;
                }
            }
            BoundaryPiece::ClosedPolyline(_) => {
                p[0] = (p[0] + step).rem_euclid(1.0);
            }
        }
        Some(p)
    }
}

/// Location of a sample on a boundary piece.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCoord {
    pub piece: usize,
    pub params: Vec<f64>,
}

/// Points of `∂G` (with ∞ for unbounded domains).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub points: Vec<ExtendedPoint>,
    pub weights: Option<Vec<f64>>,
    pub coords: Vec<BoundaryCoord>,
    pub pieces: Vec<BoundaryPiece>,
}

impl BoundarySample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::HalfSpace(n) => write!(f, "half{n}"),
            DomainSpec::UnitBall(n) => write!(f, "ball{n}"),
            DomainSpec::PuncturedSpace(n) => write!(f, "punctured{n}"),
            DomainSpec::PuncturedBall(n) => write!(f, "puncturedball{n}"),
            DomainSpec::Sector(s) => write!(f, "sector:{}", s.angle),
            DomainSpec::Polygon(p) => write!(f, "polygon[{}]", p.vertices.len()),
        }
    }
}

impl FromStr for DomainSpec {
    type Err = GeomError;

    /// Short names: `ball2`, `half3`, `punctured2`, `puncturedball2`,
    /// `sector:1.0472`, `polygon:path/to/vertices.txt`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(angle) = s.strip_prefix("sector:") {
            let angle = angle
                .parse::<f64>()
                .map_err(|e| GeomError::Parse(format!("sector angle {angle:?}: {e}")))?;
            return DomainSpec::sector(angle);
        }
        if let Some(path) = s.strip_prefix("polygon:") {
            return Ok(DomainSpec::Polygon(Polygon::from_file(path)?));
        }
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| GeomError::Parse(format!("unknown domain {s:?}")))?;
        let (name, n) = s.split_at(split);
        let n: usize = n
            .parse()
            .map_err(|e| GeomError::Parse(format!("domain dimension in {s:?}: {e}")))?;
        match name {
            "ball" => DomainSpec::unit_ball(n),
            "half" => DomainSpec::half_space(n),
            "punctured" => DomainSpec::punctured_space(n),
            "puncturedball" => DomainSpec::punctured_ball(n),
            _ => Err(GeomError::Parse(format!("unknown domain {s:?}"))),
        }
    }
}
