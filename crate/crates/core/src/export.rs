//! CSV and SVG writers for planar point lists.

use std::fmt::Write;

/// `x,y` header followed by one row per point.
pub fn points_csv(points: &[[f64; 2]]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        writeln!(out, "{:.12},{:.12}", p[0], p[1]).unwrap();
    }
    out
}

/// One `<path>` per polyline; `true` closes the path. The viewBox is
/// fitted to the data with a 5% margin and the y axis points up.
pub fn svg_paths(paths: &[(&[[f64; 2]], bool)]) -> String {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for (pts, _) in paths {
        for p in pts.iter() {
            let q = [p[0], -p[1]];
            for k in 0..2 {
                lo[k] = lo[k].min(q[k]);
                hi[k] = hi[k].max(q[k]);
            }
        }
    }
    if !lo[0].is_finite() {
        lo = [0.0, 0.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let pad = 0.05 * span;
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let px_w = 512.0;
    let px_h = (px_w * h / w).round().max(1.0);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px_w}" height="{px_h}" viewBox="{:.9} {:.9} {:.9} {:.9}">"#,
        lo[0] - pad,
        lo[1] - pad,
        w,
        h
    )
    .unwrap();
    for (pts, closed) in paths {
        if pts.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{:.9} {:.9} ", p[0], -p[1]).unwrap();
        }
        if *closed {
            d.push('Z');
        }
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            d.trim_end()
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
