//! Small helpers for points of R^n stored as `Vec<f64>` / `&[f64]`.

use crate::error::{GeomError, Result};

pub type Point = Vec<f64>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    // hypot-style accumulation keeps huge coordinates finite
    a.iter().fold(0.0_f64, |acc, &x| acc.hypot(x))
}

pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Point {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.hypot(x - y))
}

pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Point {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Unit vector along the k-th axis of R^n.
pub fn unit(n: usize, k: usize) -> Point {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

pub fn check_dims(expected: usize, p: &[f64]) -> Result<()> {
    if p.len() != expected {
        return Err(GeomError::DimensionMismatch {
            expected,
            found: p.len(),
        });
    }
    Ok(())
}

pub fn check_finite(a: &[f64]) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(GeomError::InvalidParameter(format!(
            "non-finite coordinate in {a:?}"
        )))
    }
}

/// Euclidean angle at the vertex `v` between the rays towards `a` and `b`, in `[0, π]`.
///
/// Computed from the 2-plane spanned by the two rays with `atan2`, which stays
/// accurate for nearly parallel and nearly opposite rays. Exactly opposite rays
/// give exactly `π`.
pub fn angle_at(v: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let u = sub(a, v);
    let w = sub(b, v);
    let nu = norm(&u);
    let nw = norm(&w);
    if nu == 0.0 || nw == 0.0 {
        return 0.0;
    }
    let c = dot(&u, &w) / (nu * nw);
    // |u x w| via Lagrange identity on the normalized vectors, computed as |u/|u| - c w/|w||.
    let s = norm(&axpy(&scale(&u, 1.0 / nu), -c, &scale(&w, 1.0 / nw)));
    if c <= -1.0 && s == 0.0 {
        return std::f64::consts::PI;
    }
    s.atan2(c)
}

/// Signed area (z-component of the cross product) of planar vectors.
pub fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn angles() {
        assert!((angle_at(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angle_at(&[0.0, 0.0], &[2.0, 0.0], &[-3.0, 0.0]), PI);
        assert_eq!(angle_at(&[0.0, 0.0], &[2.0, 0.0], &[3.0, 0.0]), 0.0);
        let a = angle_at(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[1.0, 1e-9, 0.0]);
        assert!((a - 1e-9).abs() < 1e-20);
    }

    #[test]
    fn norm_survives_large_coordinates() {
        let p = [1e200, 1e200];
        assert!((norm(&p) / 1e200 - 2f64.sqrt()).abs() < 1e-15);
    }
}
