use hyptype::mobius::{absolute_ratio, chordal_distance, ExtendedPoint, Generator, MobiusMap};
use hyptype::point;
use proptest::prelude::*;

fn coords(n: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, n)
}

fn generator(n: usize) -> impl Strategy<Value = Generator> {
    prop_oneof![
        (coords(n, 2.0), 0.3..2.5f64).prop_map(|(c, r)| Generator::inversion(c, r).unwrap()),
        (coords(n, 1.0), -1.0..1.0f64).prop_filter_map("zero normal", |(a, t)| {
            Generator::reflection(a, t).ok()
        }),
    ]
}

fn well_separated(pts: &[&[f64]], gens: &[Generator]) -> bool {
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            if point::dist(p, q) < 0.05 {
                return false;
            }
        }
    }
    // keep images away from inversion centers so the ratios stay well conditioned
    let mut cur: Vec<ExtendedPoint> = pts.iter().map(|p| ExtendedPoint::Finite(p.to_vec())).collect();
    for g in gens {
        if let Generator::Inversion { center, .. } = g {
            for p in &cur {
                match p.as_finite() {
                    Some(f) if point::dist(f, center) < 0.1 => return false,
                    _ => {}
                }
            }
        }
        cur = cur.iter().map(|p| g.apply(p)).collect();
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn absolute_ratio_is_mobius_invariant(
        a in coords(3, 3.0), b in coords(3, 3.0), c in coords(3, 3.0), d in coords(3, 3.0),
        gens in prop::collection::vec(generator(3), 1..5),
    ) {
        prop_assume!(well_separated(&[&a, &b, &c, &d], &gens));
        let m = MobiusMap::new(gens).unwrap();
        let pts: Vec<ExtendedPoint> = [a, b, c, d].into_iter().map(ExtendedPoint::Finite).collect();
        let before = absolute_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let img: Vec<ExtendedPoint> = pts.iter().map(|p| m.apply(p)).collect();
        let after = absolute_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap();
        prop_assert!((before - after).abs() <= 1e-10 * before.max(1.0), "{before} vs {after}");
    }

    #[test]
    fn chordal_triangle_inequality(
        x in coords(2, 50.0), y in coords(2, 50.0), z in coords(2, 50.0),
        which in 0usize..4,
    ) {
        let mut pts = vec![
            ExtendedPoint::Finite(x),
            ExtendedPoint::Finite(y),
            ExtendedPoint::Finite(z),
        ];
        if which < 3 {
            pts[which] = ExtendedPoint::Infinity;
        }
        let q = |i: usize, j: usize| chordal_distance(&pts[i], &pts[j]).unwrap();
        prop_assert!(q(0, 1) <= q(0, 2) + q(2, 1) + 1e-14);
        prop_assert!(q(0, 1) <= 2.0 + 1e-15);
    }

    #[test]
    fn inverse_map_undoes_the_map(
        x in coords(2, 5.0),
        gens in prop::collection::vec(generator(2), 1..5),
    ) {
        prop_assume!(well_separated(&[&x], &gens));
        let m = MobiusMap::new(gens).unwrap();
        let back = m.inverse().apply(&m.apply(&ExtendedPoint::Finite(x.clone())));
        let back = back.as_finite().unwrap();
        prop_assert!(point::dist(back, &x) <= 1e-9 * (1.0 + point::norm(&x)));
    }
}
