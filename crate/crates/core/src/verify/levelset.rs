//! Level sets of `z ↦ k(1,z)/j(1,z)` in the punctured plane by marching
//! squares.

use std::collections::HashMap;

use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::metrics::{distance_ratio_j, quasihyperbolic_punctured};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSetConfig {
    /// The grid covers `[-window, window]^2`; the default 16 encloses the
    /// level curves for `c ≥ 1.5`.
    pub window: f64,
    /// Cells per side.
    pub resolution: usize,
}

impl Default for LevelSetConfig {
    fn default() -> Self {
        Self {
            window: 16.0,
            resolution: 800,
        }
    }
}

impl LevelSetConfig {
    pub fn cell(&self) -> f64 {
        2.0 * self.window / self.resolution as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub c: f64,
    pub contours: Vec<Contour>,
    /// Grid spacing the contours were extracted at.
    pub cell: f64,
    /// No grid cell crosses the level: `c` is outside the sampled range.
    pub empty: bool,
}

impl LevelSet {
    pub fn point_count(&self) -> usize {
        self.contours.iter().map(|c| c.points.len()).sum()
    }

    /// Euclidean distance from `p` to the nearest contour segment.
    pub fn distance_to(&self, p: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        for c in &self.contours {
            let n = c.points.len();
            let segs = if c.closed { n } else { n.saturating_sub(1) };
            if n == 1 {
                best = best.min(dist(p, c.points[0]));
            }
            for i in 0..segs {
                best = best.min(segment_distance(p, c.points[i], c.points[(i + 1) % n]));
            }
        }
        best
    }

    /// Largest distance from the inverted image `p/|p|^2` of a contour point
    /// with `|p| ≥ 1` to the contours, in units of grid cells.
    pub fn inversion_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.contours {
            for &p in &c.points {
                let r2 = p[0] * p[0] + p[1] * p[1];
                if r2 >= 1.0 {
                    worst = worst.max(self.distance_to([p[0] / r2, p[1] / r2]) / self.cell);
                }
            }
        }
        worst
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = if l2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

/// `k(1,z)/j(1,z)` on `R^2 \ {0}`; 1 at `z = 1` by continuity along rays,
/// NaN at the origin.
pub fn ratio_field(z: [f64; 2]) -> f64 {
    if z == [1.0, 0.0] {
        return 1.0;
    }
    let g = DomainSpec::PuncturedSpace(2);
    match (
        quasihyperbolic_punctured(&[1.0, 0.0], &z),
        distance_ratio_j(&g, &[1.0, 0.0], &z),
    ) {
        (Ok(k), Ok(j)) if j > 0.0 => k / j,
        _ => f64::NAN,
    }
}

/// Grid edge: `(i, j, 0)` joins vertices `(i,j)`–`(i+1,j)`, `(i, j, 1)` joins
/// `(i,j)`–`(i,j+1)`.
type EdgeKey = (usize, usize, u8);

/// Contours of `ratio_field = c` for each `c > 1`.
pub fn levelset_trace(cs: &[f64], cfg: &LevelSetConfig) -> Result<Vec<LevelSet>> {
    if !(cfg.window > 0.0) || !cfg.window.is_finite() || cfg.resolution < 2 {
        return Err(GeomError::InvalidParameter(
            "level sets need a positive window and at least 2 cells per side".into(),
        ));
    }
    if let Some(c) = cs.iter().find(|c| !(**c > 1.0) || !c.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("level values must exceed 1, got {c}")));
    }
    let n = cfg.resolution;
    let h = cfg.cell();
    let coord = |i: usize| -cfg.window + i as f64 * h;
    let rows: Vec<usize> = (0..=n).collect();
    let field: Vec<Vec<f64>> = super::par_map(&rows, |&j| (0..=n).map(|i| ratio_field([coord(i), coord(j)])).collect());
    Ok(cs.iter().map(|&c| march(&field, c, n, h, &coord)).collect())
}

fn march(field: &[Vec<f64>], c: f64, n: usize, h: f64, coord: &dyn Fn(usize) -> f64) -> LevelSet {
    let f = |i: usize, j: usize| field[j][i] - c;
    let cross = |e: EdgeKey| -> [f64; 2] {
        let (i, j, dir) = e;
        let (i1, j1) = if dir == 0 { (i + 1, j) } else { (i, j + 1) };
        let (a, b) = (f(i, j), f(i1, j1));
        let t = a / (a - b);
        let p0 = [coord(i), coord(j)];
        let p1 = [coord(i1), coord(j1)];
        [p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])]
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = [f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)];
            if v.iter().any(|x| x.is_nan()) {
                continue;
            }
            let bits = v
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, x)| if *x > 0.0 { acc | (1 << k) } else { acc });
            // cell edges: bottom, right, top, left
            let e = [(i, j, 0), (i + 1, j, 1), (i, j + 1, 0), (i, j, 1)];
            let center_high = v.iter().sum::<f64>() > 0.0;
            let pairs: &[(usize, usize)] = match bits {
                0 | 15 => &[],
                1 | 14 => &[(3, 0)],
                2 | 13 => &[(0, 1)],
                3 | 12 => &[(3, 1)],
                4 | 11 => &[(1, 2)],
                6 | 9 => &[(0, 2)],
                7 | 8 => &[(2, 3)],
                5 if center_high => &[(3, 2), (0, 1)],
                5 => &[(3, 0), (1, 2)],
                10 if center_high => &[(3, 0), (1, 2)],
                _ => &[(3, 2), (0, 1)],
            };
            segments.extend(pairs.iter().map(|&(a, b)| (e[a], e[b])));
        }
    }

    let mut at: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        at.entry(a).or_default().push(s);
        at.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut contours = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut forward = vec![a, b];
        extend(&mut forward, &segments, &at, &mut used);
        let closed = forward.len() > 2 && forward.first() == forward.last();
        let keys = if closed {
            forward.pop();
            forward
        } else {
            let mut backward = vec![a];
            extend(&mut backward, &segments, &at, &mut used);
            backward.reverse();
            backward.pop();
            backward.extend(forward);
            backward
        };
        contours.push(Contour {
            points: keys.into_iter().map(cross).collect(),
            closed,
        });
    }
    LevelSet {
        c,
        empty: contours.is_empty(),
        contours,
        cell: h,
    }
}

/// Follows unused segments from the last edge of `chain`.
fn extend(chain: &mut Vec<EdgeKey>, segments: &[(EdgeKey, EdgeKey)], at: &HashMap<EdgeKey, Vec<usize>>, used: &mut [bool]) {
    loop {
        let tip = *chain.last().expect("chains are nonempty");
        let Some(&s) = at[&tip].iter().find(|&&s| !used[s]) else {
            return;
        };
        used[s] = true;
        let (a, b) = segments[s];
        chain.push(if a == tip { b } else { a });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ratio_along_the_positive_axis_is_one() {
        for r in [0.1, 0.5, 2.0, 7.0] {
            assert!((ratio_field([r, 0.0]) - 1.0).abs() < 1e-12);
        }
        assert!((ratio_field([-1.0, 0.0]) - PI / 3f64.ln()).abs() < 1e-12);
        assert!(ratio_field([0.0, 0.0]).is_nan());
    }

    #[test]
    fn contours_are_closed_and_symmetric() {
        let cfg = LevelSetConfig::default();
        let sets = levelset_trace(&[1.5, 2.0, 2.5, 2.9], &cfg).unwrap();
        for s in &sets[..3] {
            assert!(!s.empty && s.contours.iter().all(|c| c.closed), "c = {}", s.c);
            assert!(s.inversion_defect() <= 2.0, "c = {}: {}", s.c, s.inversion_defect());
            // conjugation symmetry
            let p = s.contours[0].points[0];
            assert!(s.distance_to([p[0], -p[1]]) <= s.cell);
        }
        assert!(sets[3].empty && sets[3].contours.is_empty());
        assert!(levelset_trace(&[1.0], &cfg).is_err());
    }
}
