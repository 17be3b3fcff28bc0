//! Extended space `R^n ∪ {∞}`, Möbius transformations, the chordal metric and
//! the absolute (cross) ratio.

use crate::error::{GeomError, Result};
use crate::point::{self, Point};

/// A point of the extended space. The point at infinity is an explicit variant
/// so chordal and cross-ratio formulas can treat it exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedPoint {
    Finite(Point),
    Infinity,
}

impl ExtendedPoint {
    pub fn finite(coords: impl Into<Point>) -> Result<Self> {
        let coords = coords.into();
        if coords.is_empty() {
            return Err(GeomError::InvalidParameter("empty point".into()));
        }
        point::check_finite(&coords)?;
        Ok(ExtendedPoint::Finite(coords))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<&[f64]> {
        match self {
            ExtendedPoint::Finite(p) => Some(p),
            ExtendedPoint::Infinity => None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.as_finite().map(<[f64]>::len)
    }
}

impl From<Point> for ExtendedPoint {
    fn from(p: Point) -> Self {
        ExtendedPoint::Finite(p)
    }
}

impl From<&[f64]> for ExtendedPoint {
    fn from(p: &[f64]) -> Self {
        ExtendedPoint::Finite(p.to_vec())
    }
}

fn same_dim(x: &ExtendedPoint, y: &ExtendedPoint) -> Result<()> {
    match (x.dim(), y.dim()) {
        (Some(a), Some(b)) if a != b => Err(GeomError::DimensionMismatch {
            expected: a,
            found: b,
        }),
        _ => Ok(()),
    }
}

/// Chordal distance `q(x, y) = |x - y| / (sqrt(1 + |x|^2) sqrt(1 + |y|^2))`,
/// with `q(x, ∞) = 1 / sqrt(1 + |x|^2)` and `q(∞, ∞) = 0`.
pub fn chordal_distance(x: &ExtendedPoint, y: &ExtendedPoint) -> Result<f64> {
    same_dim(x, y)?;
    Ok(match (x, y) {
        (ExtendedPoint::Infinity, ExtendedPoint::Infinity) => 0.0,
        (ExtendedPoint::Finite(p), ExtendedPoint::Infinity)
        | (ExtendedPoint::Infinity, ExtendedPoint::Finite(p)) => 1.0 / point::norm(p).hypot(1.0),
        (ExtendedPoint::Finite(p), ExtendedPoint::Finite(r)) => {
            let d = point::dist(p, r);
            // divide step by step so huge coordinates do not overflow
            d / point::norm(p).hypot(1.0) / point::norm(r).hypot(1.0)
        }
    })
}

/// Stereographic projection onto the sphere `S^n(e_{n+1}/2, 1/2) ⊂ R^{n+1}`,
/// realized as the inversion in `S^n(e_{n+1}, 1)`.
pub fn stereographic_project(x: &ExtendedPoint, n: usize) -> Result<Point> {
    match x {
        ExtendedPoint::Infinity => Ok(point::unit(n + 1, n)),
        ExtendedPoint::Finite(p) => {
            if p.len() != n {
                return Err(GeomError::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            let mut lifted = p.clone();
            lifted.push(0.0);
            let en1 = point::unit(n + 1, n);
            let diff = point::sub(&lifted, &en1);
            let d2 = point::norm_sq(&diff);
            Ok(point::axpy(&en1, 1.0 / d2, &diff))
        }
    }
}

/// Inverse of [`stereographic_project`]. The north pole `e_{n+1}` maps back to ∞.
pub fn stereographic_inverse(p: &[f64]) -> Result<ExtendedPoint> {
    if p.len() < 2 {
        return Err(GeomError::InvalidParameter(
            "sphere point needs at least two coordinates".into(),
        ));
    }
    let m = p.len();
    let en1 = point::unit(m, m - 1);
    let diff = point::sub(p, &en1);
    let d2 = point::norm_sq(&diff);
    if d2 == 0.0 {
        return Ok(ExtendedPoint::Infinity);
    }
    // the inversion is an involution
    let x = point::axpy(&en1, 1.0 / d2, &diff);
    Ok(ExtendedPoint::Finite(x[..m - 1].to_vec()))
}

/// Absolute ratio `|a, b, c, d| = q(a,c) q(b,d) / (q(a,b) q(c,d))`.
///
/// All four points must be distinct. Evaluated through the chordal metric so that
/// mixed finite/infinite arguments share one code path.
pub fn absolute_ratio(
    a: &ExtendedPoint,
    b: &ExtendedPoint,
    c: &ExtendedPoint,
    d: &ExtendedPoint,
) -> Result<f64> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            same_dim(pts[i], pts[j])?;
            if pts[i] == pts[j] {
                return Err(GeomError::CoincidentPoints);
            }
        }
    }
    let qab = chordal_distance(a, b)?;
    let qcd = chordal_distance(c, d)?;
    if qab == 0.0 || qcd == 0.0 {
        return Err(GeomError::CoincidentPoints);
    }
    Ok(chordal_distance(a, c)? / qab * chordal_distance(b, d)? / qcd)
}

/// One generator of the Möbius group.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Inversion in the sphere `S^{n-1}(center, radius)`.
    Inversion { center: Point, radius: f64 },
    /// Reflection in the hyperplane `{x : x·normal = offset}`. The normal is kept
    /// unnormalized.
    Reflection { normal: Point, offset: f64 },
}

impl Generator {
    pub fn inversion(center: Point, radius: f64) -> Result<Self> {
        point::check_finite(&center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::InvalidParameter(format!(
                "inversion radius must be positive, got {radius}"
            )));
        }
        Ok(Generator::Inversion { center, radius })
    }

    pub fn reflection(normal: Point, offset: f64) -> Result<Self> {
        point::check_finite(&normal)?;
        if point::norm(&normal) == 0.0 || !offset.is_finite() {
            return Err(GeomError::InvalidParameter(
                "reflection needs a nonzero normal and a finite offset".into(),
            ));
        }
        Ok(Generator::Reflection { normal, offset })
    }

    pub fn dim(&self) -> usize {
        match self {
            Generator::Inversion { center, .. } => center.len(),
            Generator::Reflection { normal, .. } => normal.len(),
        }
    }

    pub fn apply(&self, x: &ExtendedPoint) -> ExtendedPoint {
        match (self, x) {
            (Generator::Inversion { center, .. }, ExtendedPoint::Infinity) => {
                ExtendedPoint::Finite(center.clone())
            }
            (Generator::Inversion { center, radius }, ExtendedPoint::Finite(p)) => {
                let diff = point::sub(p, center);
                let d2 = point::norm_sq(&diff);
                if d2 == 0.0 {
                    ExtendedPoint::Infinity
                } else {
                    ExtendedPoint::Finite(point::axpy(center, radius * radius / d2, &diff))
                }
            }
            (Generator::Reflection { .. }, ExtendedPoint::Infinity) => ExtendedPoint::Infinity,
            (Generator::Reflection { normal, offset }, ExtendedPoint::Finite(p)) => {
                let s = 2.0 * (point::dot(p, normal) - offset) / point::norm_sq(normal);
                ExtendedPoint::Finite(point::axpy(p, -s, normal))
            }
        }
    }
}

/// A Möbius transformation stored as a composition of generators, applied
/// left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MobiusMap {
    pub generators: Vec<Generator>,
}

impl MobiusMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        if let Some(first) = generators.first() {
            let n = first.dim();
            if let Some(bad) = generators.iter().find(|g| g.dim() != n) {
                return Err(GeomError::DimensionMismatch {
                    expected: n,
                    found: bad.dim(),
                });
            }
        }
        Ok(Self { generators })
    }

    pub fn then(mut self, g: Generator) -> Self {
        self.generators.push(g);
        self
    }

    pub fn apply(&self, x: &ExtendedPoint) -> ExtendedPoint {
        self.generators
            .iter()
            .fold(x.clone(), |acc, g| g.apply(&acc))
    }

    /// Applies the map to a finite point that must stay finite.
    pub fn apply_finite(&self, x: &[f64]) -> Result<Point> {
        match self.apply(&ExtendedPoint::Finite(x.to_vec())) {
            ExtendedPoint::Finite(p) => Ok(p),
            ExtendedPoint::Infinity => Err(GeomError::Degenerate(
                "point is mapped to infinity".into(),
            )),
        }
    }

    /// The inverse map: generators are involutions, so reverse the order.
    pub fn inverse(&self) -> Self {
        Self {
            generators: self.generators.iter().rev().cloned().collect(),
        }
    }
}

/// Mobius map `mobius_apply(m, x)`; thin alias for [`MobiusMap::apply`].
pub fn mobius_apply(m: &MobiusMap, x: &ExtendedPoint) -> ExtendedPoint {
    m.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fin(v: &[f64]) -> ExtendedPoint {
        ExtendedPoint::Finite(v.to_vec())
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Point {
        (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
    }

    #[test]
    fn chordal_basic_values() {
        let q = chordal_distance(&fin(&[0.0, 0.0]), &fin(&[1.0, 0.0])).unwrap();
        assert!((q - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let q = chordal_distance(&fin(&[0.0, 0.0]), &ExtendedPoint::Infinity).unwrap();
        assert_eq!(q, 1.0);
        assert_eq!(
            chordal_distance(&ExtendedPoint::Infinity, &ExtendedPoint::Infinity).unwrap(),
            0.0
        );
        assert!(matches!(
            chordal_distance(&fin(&[0.0]), &fin(&[0.0, 1.0])),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn chordal_equals_distance_of_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_point(&mut rng, 3, 5.0);
            let y = random_point(&mut rng, 3, 5.0);
            let q = chordal_distance(&fin(&x), &fin(&y)).unwrap();
            let px = stereographic_project(&fin(&x), 3).unwrap();
            let py = stereographic_project(&fin(&y), 3).unwrap();
            assert!((q - point::dist(&px, &py)).abs() <= 1e-12);
        }
        let x = random_point(&mut rng, 3, 5.0);
        let q = chordal_distance(&fin(&x), &ExtendedPoint::Infinity).unwrap();
        let px = stereographic_project(&fin(&x), 3).unwrap();
        let pinf = stereographic_project(&ExtendedPoint::Infinity, 3).unwrap();
        assert!((q - point::dist(&px, &pinf)).abs() <= 1e-12);
    }

    #[test]
    fn projection_lands_on_the_sphere() {
        assert_eq!(
            stereographic_project(&fin(&[0.0, 0.0]), 2).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
        assert_eq!(
            stereographic_project(&ExtendedPoint::Infinity, 2).unwrap(),
            vec![0.0, 0.0, 1.0]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let center = [0.0, 0.0, 0.5];
        for _ in 0..100 {
            let x = random_point(&mut rng, 2, 20.0);
            let p = stereographic_project(&fin(&x), 2).unwrap();
            assert!((point::dist(&p, &center) - 0.5).abs() <= 1e-12);
            let back = stereographic_inverse(&p).unwrap();
            let back = back.as_finite().unwrap();
            assert!(point::dist(back, &x) <= 1e-10 * (1.0 + point::norm(&x)));
        }
        assert_eq!(
            stereographic_inverse(&[0.0, 0.0, 1.0]).unwrap(),
            ExtendedPoint::Infinity
        );
    }

    #[test]
    fn absolute_ratio_collinear() {
        let r = absolute_ratio(&fin(&[0.0]), &fin(&[1.0]), &fin(&[2.0]), &fin(&[3.0])).unwrap();
        assert!((r - 4.0).abs() < 1e-14);
        assert_eq!(
            absolute_ratio(&fin(&[0.0]), &fin(&[0.0]), &fin(&[2.0]), &fin(&[3.0])),
            Err(GeomError::CoincidentPoints)
        );
    }

    #[test]
    fn absolute_ratio_with_infinity_is_the_limit() {
        // |a,b,c,∞| = |a-c| / |a-b| after the chordal factors cancel
        let (a, b, c) = ([0.3, -1.0], [2.0, 0.5], [-1.5, 0.25]);
        let r = absolute_ratio(&fin(&a), &fin(&b), &fin(&c), &ExtendedPoint::Infinity).unwrap();
        let expected = point::dist(&a, &c) / point::dist(&a, &b);
        assert!((r - expected).abs() < 1e-13);
        // the same limit approached with a far away finite point
        let far = [1e7, 3e7];
        let r_far = absolute_ratio(&fin(&a), &fin(&b), &fin(&c), &fin(&far)).unwrap();
        assert!((r - r_far).abs() < 1e-6);
    }

    #[test]
    fn generators_are_involutions() {
        let inv = Generator::inversion(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(inv.apply(&fin(&[2.0, 0.0])), fin(&[0.5, 0.0]));
        assert_eq!(inv.apply(&fin(&[0.0, 0.0])), ExtendedPoint::Infinity);
        assert_eq!(inv.apply(&ExtendedPoint::Infinity), fin(&[0.0, 0.0]));
        let refl = Generator::reflection(vec![3.0, 0.0], 0.0).unwrap();
        assert_eq!(refl.apply(&fin(&[1.0, 0.0])), fin(&[-1.0, 0.0]));

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let c = random_point(&mut rng, 3, 2.0);
            let r = rng.gen_range(0.2..3.0);
            let nrm = random_point(&mut rng, 3, 2.0);
            let t = rng.gen_range(-1.0..1.0);
            let x = random_point(&mut rng, 3, 4.0);
            for g in [
                Generator::inversion(c.clone(), r).unwrap(),
                Generator::reflection(nrm.clone(), t).unwrap(),
            ] {
                let m = MobiusMap::new(vec![g]).unwrap();
                let twice = m.apply(&m.apply(&fin(&x)));
                let twice = twice.as_finite().unwrap();
                assert!(point::dist(twice, &x) <= 1e-12 * (1.0 + point::norm(&x)));
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Generator::inversion(vec![0.0], 0.0).is_err());
        assert!(Generator::reflection(vec![0.0, 0.0], 1.0).is_err());
        let a = Generator::inversion(vec![0.0], 1.0).unwrap();
        let b = Generator::inversion(vec![0.0, 0.0], 1.0).unwrap();
        assert!(MobiusMap::new(vec![a, b]).is_err());
    }
}
