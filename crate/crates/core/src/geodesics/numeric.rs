//! Grid Dijkstra followed by polyline relaxation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{
    ball_geodesic, halfplane_geodesic, spiral_geodesic, Bracket, DensityField, Polyline, Rule,
};
use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::point::{self, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicConfig {
    /// Grid points per axis.
    pub resolution: usize,
    /// Segment count of the final relaxed polyline.
    pub max_segments: usize,
    /// Sweep cap per relaxation level.
    pub max_sweeps: usize,
    /// Relaxation stops once a sweep improves the length by less than this.
    pub tolerance: f64,
    pub quadrature_order: usize,
    /// Also relax explicit candidate curves (straight segment, spiral,
    /// hyperbolic arc) where the domain has them.
    pub analytic_candidates: bool,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self {
            resolution: 128,
            max_segments: 128,
            max_sweeps: 2000,
            tolerance: 1e-9,
            quadrature_order: 8,
            analytic_candidates: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericGeodesic {
    pub path: Polyline,
    /// `upper` is the weighted length of `path`; `lower` is supplied by the caller.
    pub bracket: Bracket,
    /// Length of the stage-1 grid path.
    pub grid_length: f64,
    pub converged: bool,
    pub sweeps: usize,
}

/// Quasihyperbolic geodesic approximation; the lower bound is `j_G(x, y)`.
pub fn numeric_geodesic(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &GeodesicConfig,
) -> Result<NumericGeodesic> {
    let lower = crate::metrics::distance_ratio_j(g, x, y)?;
    numeric_geodesic_weighted(g, &DensityField::Quasihyperbolic(g.clone()), x, y, lower, cfg)
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Ctx<'a> {
    w: &'a DensityField,
    rule: Rule,
}

impl Ctx<'_> {
    fn seg(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        self.w.segment_length(&a, &b, &self.rule).unwrap_or(f64::INFINITY)
    }

    fn length(&self, v: &[[f64; 2]]) -> f64 {
        v.windows(2).map(|s| self.seg(s[0], s[1])).sum()
    }
}

/// Geodesic approximation for an arbitrary density on a planar domain `g`.
pub fn numeric_geodesic_weighted(
    g: &DomainSpec,
    w: &DensityField,
    x: &[f64],
    y: &[f64],
    lower: f64,
    cfg: &GeodesicConfig,
) -> Result<NumericGeodesic> {
    if g.dim() != 2 {
        return Err(GeomError::Unsupported(format!(
            "numeric geodesics need a planar domain, got {g}"
        )));
    }
    for p in [x, y] {
        point::check_dims(2, p)?;
        if !g.contains(p) || w.eval(p).is_none() {
            return Err(g.outside(p));
        }
    }
    if x == y {
        return Err(GeomError::CoincidentPoints);
    }
    if cfg.resolution < 8 || cfg.max_segments < 2 || cfg.quadrature_order == 0 {
        return Err(GeomError::InvalidParameter(
            "geodesic config needs resolution >= 8, max_segments >= 2".into(),
        ));
    }
    let ctx = Ctx {
        w,
        rule: Rule::new(cfg.quadrature_order),
    };
    let (x2, y2) = ([x[0], x[1]], [y[0], y[1]]);
    let grid_path = grid_path(g, &ctx, x2, y2, cfg)?;
    let grid_length = ctx.length(&grid_path);

    let (mut best, mut converged, mut sweeps) = multilevel(&ctx, downsample(&ctx, &grid_path), cfg);
    let mut best_len = ctx.length(&best);

    if cfg.analytic_candidates {
        for cand in candidates(g, x, y, cfg.max_segments) {
            if ctx.length(&cand) < best_len {
                let (v, c, s) = multilevel(&ctx, cand, cfg);
                let l = ctx.length(&v);
                if l < best_len {
                    best = v;
                    best_len = l;
                    converged = c;
                    sweeps = s;
                }
            }
        }
    }
    best.dedup();
    let path = Polyline::new(best.iter().map(|p| p.to_vec()).collect())?;
    Ok(NumericGeodesic {
        path,
        bracket: Bracket {
            lower,
            upper: best_len,
        },
        grid_length,
        converged,
        sweeps,
    })
}

fn grid_path(
    g: &DomainSpec,
    ctx: &Ctx,
    x: [f64; 2],
    y: [f64; 2],
    cfg: &GeodesicConfig,
) -> Result<Vec<[f64; 2]>> {
    let (lo, side) = match g.bounding_box() {
        Some((lo, hi)) => {
            let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
            let pad = 1e-3 * side;
            ([lo[0] - pad, lo[1] - pad], side + 2.0 * pad)
        }
        None => {
            let dx = g.boundary_distance_unchecked(&x);
            let dy = g.boundary_distance_unchecked(&y);
            let half = 0.5 * point::dist(&x, &y) + 2.0 * dx.max(dy);
            let m = [0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])];
            ([m[0] - half, m[1] - half], 2.0 * half)
        }
    };
    let r = cfg.resolution;
    let h = side / (r - 1) as f64;
    let at = |i: usize, j: usize| [lo[0] + i as f64 * h, lo[1] + j as f64 * h];
    let inside: Vec<bool> = (0..r * r)
        .map(|k| ctx.w.eval(&at(k % r, k / r)).is_some() && g.contains(&at(k % r, k / r)))
        .collect();
    let density: Vec<f64> = (0..r * r)
        .map(|k| {
            if inside[k] {
                ctx.w.eval(&at(k % r, k / r)).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            }
        })
        .collect();
    let convex = g.is_convex();
    let xi = r * r;
    let yi = r * r + 1;
    let pos = |k: usize| {
        if k == xi {
            x
        } else if k == yi {
            y
        } else {
            at(k % r, k / r)
        }
    };

    // links between the free endpoints and nearby grid nodes
    let attach = |p: [f64; 2]| -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        let fi = ((p[0] - lo[0]) / h).floor() as isize;
        let fj = ((p[1] - lo[1]) / h).floor() as isize;
        for reach in [2isize, 4, 8] {
            for j in fj - reach + 1..=fj + reach {
                for i in fi - reach + 1..=fi + reach {
                    if i < 0 || j < 0 || i >= r as isize || j >= r as isize {
                        continue;
                    }
                    let k = j as usize * r + i as usize;
                    if inside[k] {
                        let q = at(i as usize, j as usize);
                        if q != p && ctx.w.admits_segment(&p, &q) {
                            out.push((k, ctx.seg(p, q)));
                        }
                    }
                }
            }
            if !out.is_empty() {
                break;
            }
        }
        out
    };
    let from_x = attach(x);
    let to_y: Vec<(usize, f64)> = attach(y);
    let mut into_y = vec![f64::NAN; r * r];
    for &(k, c) in &to_y {
        into_y[k] = c;
    }

    let n = r * r + 2;
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[xi] = 0.0;
    heap.push(Entry(0.0, xi));
    if ctx.w.admits_segment(&x, &y) && point::dist(&x, &y) <= 3.0 * h {
        dist[yi] = ctx.seg(x, y);
        prev[yi] = xi;
        heap.push(Entry(dist[yi], yi));
    }
    const NB: [(isize, isize); 8] = [
        (1, 0),
        (-1, 0),
        (0, 1),
        (0, -1),
        (1, 1),
        (1, -1),
        (-1, 1),
        (-1, -1),
    ];
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == yi {
            break;
        }
        let mut relax = |v: usize, c: f64, dist: &mut Vec<f64>, heap: &mut BinaryHeap<Entry>| {
            let nd = d + c;
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = u;
                heap.push(Entry(nd, v));
            }
        };
        if u == xi {
            for &(k, c) in &from_x {
                relax(k, c, &mut dist, &mut heap);
            }
            continue;
        }
        let (i, j) = ((u % r) as isize, (u / r) as isize);
        let pu = at(i as usize, j as usize);
        for (di, dj) in NB {
            let (a, b) = (i + di, j + dj);
            if a < 0 || b < 0 || a >= r as isize || b >= r as isize {
                continue;
            }
            let v = b as usize * r + a as usize;
            if !inside[v] {
                continue;
            }
            let pv = at(a as usize, b as usize);
            if !convex && !ctx.w.admits_segment(&pu, &pv) {
                continue;
            }
            let len = h * if di != 0 && dj != 0 { std::f64::consts::SQRT_2 } else { 1.0 };
            relax(v, 0.5 * len * (density[u] + density[v]), &mut dist, &mut heap);
        }
        if into_y[u].is_finite() {
            relax(yi, into_y[u], &mut dist, &mut heap);
        }
    }
    if !dist[yi].is_finite() {
        return Err(GeomError::Resolution(format!(
            "no grid path between the endpoints at resolution {r}"
        )));
    }
    let mut path = vec![y];
    let mut k = yi;
    while prev[k] != usize::MAX {
        k = prev[k];
        path.push(pos(k));
    }
    path.reverse();
    Ok(path)
}

/// Picks about eight vertices spread evenly by weighted length, doubling
/// the count until every chord is admissible.
fn downsample(ctx: &Ctx, path: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let k = path.len() - 1;
    let mut cum = vec![0.0; k + 1];
    for i in 0..k {
        cum[i + 1] = cum[i] + ctx.seg(path[i], path[i + 1]);
    }
    let total = cum[k];
    let mut m = 8.min(k);
    loop {
        let mut idx = vec![0usize];
        for s in 1..m {
            let target = total * s as f64 / m as f64;
            let i = cum.partition_point(|&c| c < target).min(k);
            if i > *idx.last().unwrap() && i < k {
                idx.push(i);
            }
        }
        idx.push(k);
        let v: Vec<[f64; 2]> = idx.iter().map(|&i| path[i]).collect();
        if m >= k || v.windows(2).all(|s| ctx.w.admits_segment(&s[0], &s[1])) {
            return v;
        }
        m = (2 * m).min(k);
    }
}

fn subdivide(v: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(2 * v.len());
    for s in v.windows(2) {
        out.push(s[0]);
        out.push([0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])]);
    }
    out.push(*v.last().unwrap());
    out
}

/// Relaxes, then doubles the segment count, until `max_segments` is reached.
fn multilevel(ctx: &Ctx, mut v: Vec<[f64; 2]>, cfg: &GeodesicConfig) -> (Vec<[f64; 2]>, bool, usize) {
    let mut total = 0;
    loop {
        let (converged, sweeps) = relax(ctx, &mut v, cfg);
        total += sweeps;
        if v.len() - 1 >= cfg.max_segments {
            return (v, converged, total);
        }
        v = subdivide(&v);
    }
}

/// Per-vertex descent on the two adjacent segment lengths. Vertices move
/// along the normal of the chord through their neighbours (tangential
/// moves only reparametrize), by a safeguarded Newton step from finite
/// differences or, failing that, an adaptive step.
fn relax(ctx: &Ctx, v: &mut [[f64; 2]], cfg: &GeodesicConfig) -> (bool, usize) {
    let m = v.len() - 1;
    if m < 2 {
        return (true, 0);
    }
    let mut seg: Vec<f64> = (0..m).map(|i| ctx.seg(v[i], v[i + 1])).collect();
    let mut step: Vec<f64> = (0..=m)
        .map(|i| {
            if i == 0 || i == m {
                0.0
            } else {
                0.25 * point::dist(&v[i - 1], &v[i]).min(point::dist(&v[i], &v[i + 1]))
            }
        })
        .collect();
    for sweep in 1..=cfg.max_sweeps {
        let mut gain = 0.0;
        for i in 1..m {
            let chord = [v[i + 1][0] - v[i - 1][0], v[i + 1][1] - v[i - 1][1]];
            let cl = chord[0].hypot(chord[1]);
            if cl == 0.0 {
                continue;
            }
            let n = [-chord[1] / cl, chord[0] / cl];
            let p = v[i];
            let at = |t: f64| [p[0] + t * n[0], p[1] + t * n[1]];
            let local = |t: f64| ctx.seg(v[i - 1], at(t)) + ctx.seg(at(t), v[i + 1]);
            let cur = seg[i - 1] + seg[i];
            let reach = point::dist(&v[i - 1], &v[i]).min(point::dist(&v[i], &v[i + 1]));
            let hh = 1e-4 * reach.max(1e-300);
            let (fp, fm) = (local(hh), local(-hh));
            let d1 = (fp - fm) / (2.0 * hh);
            let d2 = (fp - 2.0 * cur + fm) / (hh * hh);
            if !d1.is_finite() || d1 == 0.0 {
                step[i] *= 0.5;
                continue;
            }
            let mut try_move = |t: f64, v: &mut [[f64; 2]]| {
                let q = at(t);
                let (a, b) = (ctx.seg(v[i - 1], q), ctx.seg(q, v[i + 1]));
                if a + b < cur {
                    gain += cur - (a + b);
                    v[i] = q;
                    seg[i - 1] = a;
                    seg[i] = b;
                    true
                } else {
                    false
                }
            };
            if d2 > 0.0 && d2.is_finite() {
                let t = (-d1 / d2).clamp(-0.5 * reach, 0.5 * reach);
                if try_move(t, v) {
                    step[i] = t.abs().max(step[i]).min(reach);
                    continue;
                }
            }
            for _ in 0..4 {
                if try_move(-step[i] * d1.signum(), v) {
                    step[i] = (2.0 * step[i]).min(reach);
                    break;
                }
                step[i] *= 0.5;
            }
            if step[i] < 1e-15 * reach {
                step[i] = 1e-15 * reach;
            }
        }
        if gain < cfg.tolerance {
            return (true, sweep);
        }
    }
    (false, cfg.max_sweeps)
}

fn candidates(g: &DomainSpec, x: &[f64], y: &[f64], segments: usize) -> Vec<Vec<[f64; 2]>> {
    let mut out: Vec<Vec<[f64; 2]>> = Vec::new();
    let to2 = |p: &Point| [p[0], p[1]];
    let straight: Vec<[f64; 2]> = (0..=segments)
        .map(|i| to2(&point::lerp(x, y, i as f64 / segments as f64)))
        .collect();
    out.push(straight);
    if matches!(g, DomainSpec::PuncturedSpace(_) | DomainSpec::PuncturedBall(_)) {
        if let Ok(p) = spiral_geodesic(x, y, segments) {
            out.push(p.vertices().iter().map(to2).collect());
        }
    }
    if matches!(g, DomainSpec::UnitBall(_) | DomainSpec::PuncturedBall(_)) {
        if let Ok(b) = ball_geodesic(x, y, segments) {
            out.push(b.path.vertices().iter().map(to2).collect());
        }
    }
    if let DomainSpec::HalfSpace(_) = g {
        if let Ok(p) = halfplane_geodesic([x[0], x[1]], [y[0], y[1]], segments) {
            out.push(p.vertices().iter().map(to2).collect());
        }
    }
    out
}
