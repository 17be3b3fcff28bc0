//! Quasihyperbolic distance in a convex sector `S_φ`, `φ < π`.
//!
//! The bisector splits `S_φ` into two halves. On the half nearer the ray
//! `θ = 0` the density `1/d` is the hyperbolic density of the upper
//! half-plane, and the reflection `θ ↦ φ - θ` swaps the halves isometrically.
//! Folding both points into the lower half `W = {0 < θ ≤ φ/2}`, a shortest
//! path is a hyperbolic arc to the bisector, a run along the bisector (where
//! the density is `1 / (r sin(φ/2))`), and an arc back. Points of one half
//! whose joining arc stays inside `W` are at hyperbolic distance.

use crate::geodesics::Bracket;

type C = [f64; 2];

fn rho_h(a: C, b: C) -> f64 {
    let d = (a[0] - b[0]).hypot(a[1] - b[1]);
    2.0 * (d / (2.0 * (a[1].sqrt() * b[1].sqrt()))).asinh()
}

/// Largest polar angle along the hyperbolic arc joining `a` and `b`.
fn max_arg_on_arc(a: C, b: C) -> f64 {
    let ta = a[1].atan2(a[0]);
    let tb = b[1].atan2(b[0]);
    let ends = ta.max(tb);
    if a[0] == b[0] {
        return ends;
    }
    let c = (b[0] * b[0] + b[1] * b[1] - a[0] * a[0] - a[1] * a[1]) / (2.0 * (b[0] - a[0]));
    let r = (a[0] - c).hypot(a[1]);
    if c <= r {
        // the origin sits inside the circle; the argument is monotone along the arc
        return ends;
    }
    let tangent = std::f64::consts::PI - (r / c).acos();
    let pa = a[1].atan2(a[0] - c);
    let pb = b[1].atan2(b[0] - c);
    if tangent > pa.min(pb) && tangent < pa.max(pb) {
        (r / c).asin()
    } else {
        ends
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SectorOracle {
    half: f64,
    s: f64,
    dir: C,
}

impl SectorOracle {
    pub(crate) fn new(phi: f64) -> Self {
        let half = 0.5 * phi;
        Self {
            half,
            s: half.sin(),
            dir: [half.cos(), half.sin()],
        }
    }

    fn fold(&self, z: C) -> (C, bool) {
        let t = z[1].atan2(z[0]);
        if t <= self.half {
            (z, false)
        } else {
            let r = z[0].hypot(z[1]);
            let t2 = 2.0 * self.half - t;
            ([r * t2.cos(), r * t2.sin()], true)
        }
    }

    fn arc_inside(&self, a: C, b: C) -> bool {
        max_arg_on_arc(a, b) <= self.half * (1.0 + 1e-13)
    }

    fn bisector(&self, t: f64) -> C {
        let r = t.exp();
        [r * self.dir[0], r * self.dir[1]]
    }

    /// Hyperbolic length of the arc from `z` to the bisector point `e^t`,
    /// or `∞` when the arc leaves `W`.
    fn to_bisector(&self, z: C, t: f64) -> f64 {
        let p = self.bisector(t);
        if (p[0] - z[0]).abs() <= 1e-15 * p[0].abs() && (p[1] - z[1]).abs() <= 1e-15 * p[1].abs() {
            return 0.0;
        }
        if !self.arc_inside(z, p) {
            return f64::INFINITY;
        }
        rho_h(z, p)
    }

    fn objective(&self, x: C, y: C, t: f64, u: f64) -> f64 {
        self.to_bisector(x, t) + (t - u).abs() / self.s + self.to_bisector(y, u)
    }

    /// Upper bound from the structured minimization; `lower` is the largest
    /// of `j` and the two supporting half-plane distances.
    pub(crate) fn bracket(&self, x: C, y: C, j: f64) -> Bracket {
        let phi = 2.0 * self.half;
        let rho_b = |a: C, b: C| {
            // hyperbolic distance of the half-plane bounded by the line at angle φ
            let rot = |z: C| {
                let (c, s) = (phi.cos(), phi.sin());
                [z[0] * c + z[1] * s, z[0] * s - z[1] * c]
            };
            rho_h(rot(a), rot(b))
        };
        let lower = rho_h(x, y).max(rho_b(x, y)).max(j);
        let (fx, sx) = self.fold(x);
        let (fy, sy) = self.fold(y);
        if sx == sy && self.arc_inside(fx, fy) {
            let v = rho_h(fx, fy);
            return Bracket {
                lower: lower.min(v),
                upper: v,
            };
        }
        let upper = self.minimize(fx, fy);
        Bracket {
            lower: lower.min(upper),
            upper,
        }
    }

    fn minimize(&self, x: C, y: C) -> f64 {
        let lx = x[0].hypot(x[1]).ln();
        let ly = y[0].hypot(y[1]).ln();
        let lo = lx.min(ly) - 4.0;
        let hi = lx.max(ly) + 4.0;
        let n = 800;
        let mut ts: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        ts.push(lx);
        ts.push(ly);
        ts.sort_by(f64::total_cmp);
        let gx: Vec<f64> = ts.iter().map(|&t| self.to_bisector(x, t)).collect();
        let gy: Vec<f64> = ts.iter().map(|&t| self.to_bisector(y, t)).collect();
        // env[i] = min_k gy[k] + |t_i - t_k| / s, by a two-pass distance transform
        let m = ts.len();
        let mut env: Vec<(f64, usize)> = (0..m).map(|k| (gy[k], k)).collect();
        for i in 1..m {
            let c = env[i - 1].0 + (ts[i] - ts[i - 1]) / self.s;
            if c < env[i].0 {
                env[i] = (c, env[i - 1].1);
            }
        }
        for i in (0..m - 1).rev() {
            let c = env[i + 1].0 + (ts[i + 1] - ts[i]) / self.s;
            if c < env[i].0 {
                env[i] = (c, env[i + 1].1);
            }
        }
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..m {
            let v = gx[i] + env[i].0;
            if v < best.0 {
                best = (v, ts[i], ts[env[i].1]);
            }
        }
        // pattern search in (t, u), including the diagonal directions
        let (mut v, mut t, mut u) = best;
        let mut step = (hi - lo) / n as f64;
        let dirs: [(f64, f64); 8] = [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (-1.0, -1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
        ];
        while step > 1e-14 {
            let mut moved = false;
            for (dt, du) in dirs {
                let (nt, nu) = (t + step * dt, u + step * du);
                let nv = self.objective(x, y, nt, nu);
                if nv < v {
                    v = nv;
                    t = nt;
                    u = nu;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        v
    }
}
