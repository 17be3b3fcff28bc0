//! Boundary-pair suprema for the Apollonian and Seittenranta metrics.
//!
//! Both objectives are evaluated with euclidean distances; the chordal
//! normalization cancels in each cross ratio. Writing
//! `h(a) = log(|a-y| / |a-x|)` (with `h(∞) = 0`), the Apollonian objective
//! separates as `log|a,x,y,b| = h(a) - h(b)`, so its sup over pairs is
//! `sup h - inf h` and each side is searched independently.

use std::f64::consts::PI;

use super::closed::{distance_ratio_j, distance_ratio_jtilde, rho_ball, rho_halfspace};
use crate::domain::{BoundaryCoord, BoundarySample, DomainSpec};
use crate::error::{GeomError, Result};
use crate::geodesics::Bracket;
use crate::mobius::ExtendedPoint;
use crate::point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSearchConfig {
    /// Boundary sample size.
    pub samples: usize,
    /// Local refinement iterations per candidate.
    pub refine_iters: usize,
    /// Step multiplier after an unsuccessful refinement round, in `(0, 1)`.
    pub shrink: f64,
    pub seed: u64,
}

impl Default for SupSearchConfig {
    fn default() -> Self {
        Self {
            samples: 4096,
            refine_iters: 64,
            shrink: 0.5,
            seed: 0x5eed,
        }
    }
}

impl SupSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 || self.refine_iters == 0 || !(self.shrink > 0.0 && self.shrink < 1.0)
        {
            return Err(GeomError::InvalidParameter(
                "sup search needs samples >= 2, refine_iters >= 1, shrink in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Best boundary pair found; `value` is a lower bound of the supremum unless
/// `exact` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct SupResult {
    pub value: f64,
    pub a: ExtendedPoint,
    pub b: ExtendedPoint,
    pub exact: bool,
}

/// Reusable boundary sample for repeated searches on one domain.
#[derive(Debug, Clone)]
pub struct SupSearch {
    domain: DomainSpec,
    cfg: SupSearchConfig,
    sample: BoundarySample,
}

fn fdist(a: &ExtendedPoint, x: &[f64]) -> f64 {
    match a {
        ExtendedPoint::Finite(p) => point::dist(p, x),
        ExtendedPoint::Infinity => f64::INFINITY,
    }
}

fn h(a: &ExtendedPoint, x: &[f64], y: &[f64]) -> f64 {
    match a {
        ExtendedPoint::Finite(p) => (point::dist(p, y) / point::dist(p, x)).ln(),
        ExtendedPoint::Infinity => 0.0,
    }
}

/// `log(1 + |a,x,b,y|)` in euclidean form.
fn delta_objective(a: &ExtendedPoint, b: &ExtendedPoint, x: &[f64], y: &[f64]) -> f64 {
    let xy = point::dist(x, y);
    let ratio = match (a, b) {
        (ExtendedPoint::Finite(p), ExtendedPoint::Finite(q)) => {
            point::dist(p, q) / point::dist(p, x) * (xy / point::dist(q, y))
        }
        (ExtendedPoint::Infinity, ExtendedPoint::Finite(q)) => xy / point::dist(q, y),
        (ExtendedPoint::Finite(p), ExtendedPoint::Infinity) => xy / point::dist(p, x),
        (ExtendedPoint::Infinity, ExtendedPoint::Infinity) => 0.0,
    };
    ratio.ln_1p()
}

impl SupSearch {
    pub fn new(domain: &DomainSpec, cfg: SupSearchConfig) -> Result<Self> {
        cfg.validate()?;
        let sample = domain.boundary_sample(cfg.samples, cfg.seed)?;
        if sample.len() < 2 {
            return Err(GeomError::Degenerate(
                "boundary has fewer than two points; the metric is only a pseudometric".into(),
            ));
        }
        Ok(Self {
            domain: domain.clone(),
            cfg,
            sample,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn check(&self, x: &[f64], y: &[f64]) -> Result<()> {
        for p in [x, y] {
            point::check_dims(self.domain.dim(), p)?;
            if !self.domain.contains(p) {
                return Err(self.domain.outside(p));
            }
        }
        Ok(())
    }

    fn initial_step(&self, coord: &BoundaryCoord) -> f64 {
        let piece = &self.sample.pieces[coord.piece];
        let dim = match piece {
            crate::domain::BoundaryPiece::UnitSphere(n) => n.saturating_sub(1).max(1),
            crate::domain::BoundaryPiece::Hyperplane(n) => n.saturating_sub(1).max(1),
            _ => 1,
        };
        let n = self.sample.len() as f64;
        2.0 * PI * (1.0 / n).powf(1.0 / dim as f64)
    }

    /// Pattern search over the parameters of one boundary point. A
    /// successful poll continues along its direction with a doubling step.
    fn refine_point(
        &self,
        coord: &BoundaryCoord,
        mut best: f64,
        f: impl Fn(&ExtendedPoint) -> f64,
    ) -> (BoundaryCoord, f64) {
        let piece = &self.sample.pieces[coord.piece];
        let mut cur = coord.clone();
        let mut step = self.initial_step(coord);
        for _ in 0..self.cfg.refine_iters {
            let mut improved = false;
            for axis in 0..piece.freedom() {
                for sign in [1.0, -1.0] {
                    let mut s = sign * step;
                    while let Some(p) = piece.perturb(&cur.params, axis, s) {
                        let v = f(&piece.point(&p));
                        if !(v > best) {
                            break;
                        }
                        best = v;
                        cur.params = p;
                        improved = true;
                        s *= 2.0;
                    }
                }
            }
            if !improved {
                step *= self.cfg.shrink;
                if step < 1e-16 {
                    break;
                }
            }
        }
        (cur, best)
    }

    fn point_of(&self, c: &BoundaryCoord) -> ExtendedPoint {
        self.sample.pieces[c.piece].point(&c.params)
    }

    /// Indices of the `k` largest values.
    fn top(values: &[f64], k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
        idx.truncate(k);
        idx
    }

    /// Sampled sup of `log|a,x,y,b|` with local refinement.
    pub fn apollonian(&self, x: &[f64], y: &[f64]) -> Result<SupResult> {
        self.check(x, y)?;
        if x == y {
            return Ok(SupResult {
                value: 0.0,
                a: self.sample.points[0].clone(),
                b: self.sample.points[0].clone(),
                exact: true,
            });
        }
        let hv: Vec<f64> = self.sample.points.iter().map(|a| h(a, x, y)).collect();
        let neg: Vec<f64> = hv.iter().map(|v| -v).collect();
        let side = |vals: &[f64], sign: f64| {
            let mut best = (self.sample.coords[0].clone(), f64::NEG_INFINITY);
            for i in Self::top(vals, 4) {
                let (c, v) = self.refine_point(&self.sample.coords[i], vals[i], |p| sign * h(p, x, y));
                if v > best.1 {
                    best = (c, v);
                }
            }
            best
        };
        let (ca, va) = side(&hv, 1.0);
        let (cb, vb) = side(&neg, -1.0);
        Ok(SupResult {
            value: (va + vb).max(0.0),
            a: self.point_of(&ca),
            b: self.point_of(&cb),
            exact: false,
        })
    }

    /// Sampled sup of `log(1 + |a,x,b,y|)`, seeded with the Apollonian
    /// witness so that the result is never below the Apollonian search value.
    pub fn seittenranta(&self, x: &[f64], y: &[f64]) -> Result<SupResult> {
        self.check(x, y)?;
        if x == y {
            return Ok(SupResult {
                value: 0.0,
                a: self.sample.points[0].clone(),
                b: self.sample.points[0].clone(),
                exact: true,
            });
        }
        let pts = &self.sample.points;
        let n = pts.len();
        let best_partner = |fixed: usize, fixed_is_a: bool| -> (usize, f64) {
            let mut best = (fixed, f64::NEG_INFINITY);
            for j in 0..n {
                let v = if fixed_is_a {
                    delta_objective(&pts[fixed], &pts[j], x, y)
                } else {
                    delta_objective(&pts[j], &pts[fixed], x, y)
                };
                if v > best.1 {
                    best = (j, v);
                }
            }
            best
        };

        // starting points: sample points closest to x (as a) and to y (as b)
        let near_x: Vec<f64> = pts.iter().map(|p| -fdist(p, x)).collect();
        let near_y: Vec<f64> = pts.iter().map(|p| -fdist(p, y)).collect();
        let hv: Vec<f64> = pts.iter().map(|a| h(a, x, y)).collect();
        let neg: Vec<f64> = hv.iter().map(|v| -v).collect();
        let mut starts: Vec<(usize, bool)> = Vec::new();
        starts.extend(Self::top(&near_x, 6).into_iter().map(|i| (i, true)));
        starts.extend(Self::top(&near_y, 6).into_iter().map(|i| (i, false)));
        starts.extend(Self::top(&hv, 1).into_iter().map(|i| (i, true)));
        starts.extend(Self::top(&neg, 1).into_iter().map(|i| (i, false)));

        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        for (s, is_a) in starts {
            let (mut ia, mut ib, mut v);
            if is_a {
                ia = s;
                (ib, v) = best_partner(ia, true);
            } else {
                ib = s;
                (ia, v) = best_partner(ib, false);
            }
            for _ in 0..8 {
                let (na, va) = best_partner(ib, false);
                let (nb, vb) = best_partner(na, true);
                if vb <= v && na == ia {
                    break;
                }
                ia = na;
                ib = nb;
                v = va.max(vb);
            }
            pairs.push((ia, ib, delta_objective(&pts[ia], &pts[ib], x, y)));
        }
        pairs.sort_by(|p, q| q.2.total_cmp(&p.2));
        pairs.dedup_by(|p, q| p.0 == q.0 && p.1 == q.1);
        pairs.truncate(3);

        // Ptolemy: log|a,x,y,b| <= log(1 + |a,x,b,y|) for every pair, so the
        // Apollonian value is a lower bound here as well (the max absorbs rounding)
        let alpha = self.apollonian(x, y)?;
        let mut best = SupResult {
            value: delta_objective(&alpha.a, &alpha.b, x, y).max(alpha.value),
            a: alpha.a,
            b: alpha.b,
            exact: false,
        };
        for (ia, ib, v0) in pairs {
            let (ca, cb, v) = self.refine_pair(&self.sample.coords[ia], &self.sample.coords[ib], v0, x, y);
            if v > best.value {
                best = SupResult {
                    value: v,
                    a: self.point_of(&ca),
                    b: self.point_of(&cb),
                    exact: false,
                };
            }
        }
        Ok(best)
    }

    fn refine_pair(
        &self,
        a: &BoundaryCoord,
        b: &BoundaryCoord,
        mut best: f64,
        x: &[f64],
        y: &[f64],
    ) -> (BoundaryCoord, BoundaryCoord, f64) {
        let (mut ca, mut cb) = (a.clone(), b.clone());
        for _ in 0..4 {
            let pb = self.point_of(&cb);
            let (na, va) = self.refine_point(&ca, best, |p| delta_objective(p, &pb, x, y));
            let pa = self.point_of(&na);
            let (nb, vb) = self.refine_point(&cb, va, |p| delta_objective(&pa, p, x, y));
            let gain = vb - best;
            ca = na;
            cb = nb;
            best = vb;
            if gain < 1e-12 {
                break;
            }
        }
        (ca, cb, best)
    }
}

/// Closed forms: `ρ` on balls and half-spaces (and the half-plane sector).
fn hyperbolic_closed_form(g: &DomainSpec, x: &[f64], y: &[f64]) -> Option<Result<f64>> {
    match g {
        DomainSpec::UnitBall(_) => Some(rho_ball(x, y)),
        DomainSpec::HalfSpace(_) => Some(rho_halfspace(x, y)),
        DomainSpec::Sector(s) if s.angle() == PI => Some(rho_halfspace(x, y)),
        _ => None,
    }
}

/// `α_G(x, y)`: closed form where known, otherwise the certified lower bound
/// from [`apollonian_search`].
pub fn apollonian(g: &DomainSpec, x: &[f64], y: &[f64], cfg: &SupSearchConfig) -> Result<f64> {
    Ok(apollonian_bracket(g, x, y, cfg)?.lower)
}

/// `α_G` with an upper bound `2 j_G`.
pub fn apollonian_bracket(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &SupSearchConfig,
) -> Result<Bracket> {
    if let Some(v) = hyperbolic_closed_form(g, x, y) {
        return v.map(Bracket::exact);
    }
    if let DomainSpec::PuncturedSpace(_) = g {
        g.boundary_distance(x)?;
        g.boundary_distance(y)?;
        let v = (point::norm(x) / point::norm(y)).ln().abs();
        return Ok(Bracket::exact(v));
    }
    let lower = apollonian_search(g, x, y, cfg)?.value;
    let upper = 2.0 * distance_ratio_j(g, x, y)?;
    Ok(Bracket { lower, upper: upper.max(lower) })
}

/// Sampled search regardless of closed forms.
pub fn apollonian_search(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &SupSearchConfig,
) -> Result<SupResult> {
    SupSearch::new(g, *cfg)?.apollonian(x, y)
}

/// `δ_G(x, y)`: closed form where known, otherwise the certified lower bound
/// from [`seittenranta_search`].
pub fn seittenranta_delta(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &SupSearchConfig,
) -> Result<f64> {
    Ok(seittenranta_bracket(g, x, y, cfg)?.lower)
}

/// `δ_G` within `[max(search, j), j̃]`.
pub fn seittenranta_bracket(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &SupSearchConfig,
) -> Result<Bracket> {
    if let Some(v) = hyperbolic_closed_form(g, x, y) {
        return v.map(Bracket::exact);
    }
    if let DomainSpec::PuncturedSpace(_) = g {
        return distance_ratio_j(g, x, y).map(Bracket::exact);
    }
    let found = seittenranta_search(g, x, y, cfg)?.value;
    let upper = distance_ratio_jtilde(g, x, y)?;
    Ok(Bracket {
        lower: found,
        upper: upper.max(found),
    })
}

pub fn seittenranta_search(
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &SupSearchConfig,
) -> Result<SupResult> {
    SupSearch::new(g, *cfg)?.seittenranta(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_in(g: &DomainSpec, rng: &mut ChaCha8Rng, r: f64) -> Vec<f64> {
        loop {
            let p: Vec<f64> = (0..g.dim()).map(|_| rng.gen_range(-r..r)).collect();
            if g.contains(&p) {
                return p;
            }
        }
    }

    #[test]
    fn ball_search_reaches_rho() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let s = SupSearch::new(&g, SupSearchConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let x = random_in(&g, &mut rng, 1.0);
            let y = random_in(&g, &mut rng, 1.0);
            let rho = rho_ball(&x, &y).unwrap();
            let a = s.apollonian(&x, &y).unwrap().value;
            let d = s.seittenranta(&x, &y).unwrap().value;
            assert!(a <= rho + 1e-12 && rho - a < 1e-9, "alpha {a} rho {rho}");
            assert!(d <= rho + 1e-12 && rho - d < 1e-9, "delta {d} rho {rho}");
        }
    }

    #[test]
    fn punctured_search_matches_closed_forms() {
        let g = DomainSpec::punctured_space(2).unwrap();
        let s = SupSearch::new(&g, SupSearchConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let x = random_in(&g, &mut rng, 3.0);
            let y = random_in(&g, &mut rng, 3.0);
            let d = s.seittenranta(&x, &y).unwrap().value;
            assert!((d - distance_ratio_j(&g, &x, &y).unwrap()).abs() < 1e-12);
            let a = s.apollonian(&x, &y).unwrap().value;
            let closed = apollonian(&g, &x, &y, &SupSearchConfig::default()).unwrap();
            assert!((a - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_search_dominates_alpha_search() {
        let g = DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])
            .unwrap();
        let cfg = SupSearchConfig {
            samples: 512,
            ..Default::default()
        };
        let s = SupSearch::new(&g, cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = random_in(&g, &mut rng, 2.0);
            let y = random_in(&g, &mut rng, 2.0);
            let a = s.apollonian(&x, &y).unwrap();
            let d = s.seittenranta(&x, &y).unwrap();
            assert!(a.value <= d.value);
            assert!(a.value <= 2.0 * distance_ratio_j(&g, &x, &y).unwrap() + 1e-9);
            assert!(d.value <= distance_ratio_jtilde(&g, &x, &y).unwrap() + 1e-9);
        }
    }

    #[test]
    fn refinement_never_decreases() {
        let g = DomainSpec::sector(1.0).unwrap();
        let x = [1.0, 0.3];
        let y = [0.2, 0.1];
        let coarse = SupSearchConfig {
            samples: 64,
            refine_iters: 1,
            ..Default::default()
        };
        let fine = SupSearchConfig {
            refine_iters: 64,
            ..coarse
        };
        let a0 = apollonian_search(&g, &x, &y, &coarse).unwrap().value;
        let a1 = apollonian_search(&g, &x, &y, &fine).unwrap().value;
        assert!(a1 >= a0);
    }

    #[test]
    fn invalid_config() {
        let g = DomainSpec::unit_ball(2).unwrap();
        let bad = SupSearchConfig {
            shrink: 1.0,
            ..Default::default()
        };
        assert!(apollonian_search(&g, &[0.0, 0.0], &[0.1, 0.0], &bad).is_err());
    }
}
