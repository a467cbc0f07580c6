use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use ehrhart_core::count::{
    count_image, count_lattice_points, count_translate, ehrhart_value, CountConfig, Method,
    TranslationFamily,
};
use ehrhart_core::ehrhart::{ehrhart_poly_interpolate, k_etp};
use ehrhart_core::fluctuation::{
    build_floor_trapezoid, check_identity, normalize_coefficients, product_identity_expansion, qp_eval,
    sequence_to_qp, FloorFactor, QpTerm, QuasiPolynomial,
};
use ehrhart_core::geometry::{tagged_hull, translate};
use ehrhart_core::json::{polytope_from_json, polytope_to_json, qp_from_json, qp_to_json};
use ehrhart_core::rational::{ceil, floor, format_rational, int, parse_rational, rat};
use ehrhart_core::{Point, Polytope, Rational};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn point(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(small_rat(), d).prop_map(Point::new)
}

// Hulls of a few small rational points in dimension 1..=3.
fn polytope() -> impl Strategy<Value = Polytope> {
    (1usize..=3)
        .prop_flat_map(|d| prop::collection::vec(point(d), 1..=5))
        .prop_map(|pts| Polytope::from_points(pts).unwrap())
}

fn integer_polytope() -> impl Strategy<Value = Polytope> {
    (1usize..=3)
        .prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-2i64..=2, d), 1..=5))
        .prop_map(|pts| Polytope::from_points(pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap())
}

// Point-in-hull by brute force over the bounding box, using the library only
// for the box itself.
fn brute_count(p: &Polytope) -> u64 {
    let d = p.dim();
    let bbox: Vec<(i64, i64)> = (0..d)
        .map(|i| {
            let xs = p.vertices().iter().map(|v| v.coords()[i].clone());
            let lo = xs.clone().min().unwrap();
            let hi = xs.max().unwrap();
            (ceil(&lo).try_into().unwrap(), floor(&hi).try_into().unwrap())
        })
        .collect();
    if bbox.iter().any(|(l, h)| l > h) {
        return 0;
    }
    let mut n = 0;
    let mut cur: Vec<i64> = bbox.iter().map(|b| b.0).collect();
    loop {
        if ehrhart_core::geometry::contains_hull(p, &Point::from_ints(&cur)).unwrap() {
            n += 1;
        }
        let mut i = 0;
        loop {
            if i == d {
                return n;
            }
            cur[i] += 1;
            if cur[i] <= bbox[i].1 {
                break;
            }
            cur[i] = bbox[i].0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_matches_brute_force(p in polytope()) {
        prop_assert_eq!(count_lattice_points(&p).unwrap(), brute_count(&p));
    }

    #[test]
    fn hull_method_agrees_with_auto(p in polytope(), w in point(3)) {
        let w = &w.coords()[..p.dim()];
        let cfg = CountConfig::default();
        let a = count_image(&p, &Rational::one(), Some(w), Method::Auto, &cfg).unwrap();
        let h = count_image(&p, &Rational::one(), Some(w), Method::Hull, &cfg).unwrap();
        prop_assert_eq!(a, h);
    }

    #[test]
    fn integer_translation_invariance(p in polytope(), z in prop::collection::vec(-5i64..=5, 3)) {
        let shifted = translate(&p, &Point::from_ints(&z[..p.dim()])).unwrap();
        prop_assert_eq!(count_lattice_points(&p).unwrap(), count_lattice_points(&shifted).unwrap());
    }

    #[test]
    fn translate_family_is_periodic(p in polytope(), den in 1u64..=5, t in -6i64..=6) {
        let dir = Point::axis(p.dim(), 0, Rational::one());
        let f = TranslationFamily::new(p, dir, den).unwrap();
        prop_assert_eq!(
            count_translate(&f, t).unwrap(),
            count_translate(&f, t + den as i64).unwrap()
        );
    }

    #[test]
    fn rational_text_round_trip(q in (-1000i64..=1000, 1i64..=1000).prop_map(|(p, q)| rat(p, q))) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn polytope_json_round_trip(p in polytope()) {
        let back = polytope_from_json(&polytope_to_json(&p)).unwrap();
        prop_assert_eq!(back.vertices(), p.vertices());
    }

    #[test]
    fn dilates_grow_when_origin_inside(p in integer_polytope()) {
        // P ∪ {0} hull contains the origin, so tP ⊂ (t+1)P.
        let mut pts = p.vertices().to_vec();
        pts.push(Point::zero(p.dim()));
        let q = Polytope::from_points(pts).unwrap();
        let vals: Vec<u64> = (0..4).map(|t| ehrhart_value(&q, t).unwrap()).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{:?}", vals);
    }

    #[test]
    fn interpolation_matches_counts(p in integer_polytope()) {
        let poly = ehrhart_poly_interpolate(&p).unwrap();
        for t in 0..=(p.dim() as u64 + 3) {
            prop_assert_eq!(poly.eval(t), int(ehrhart_value(&p, t).unwrap()));
        }
    }

    #[test]
    fn k_etp_matches_definition(p in integer_polytope(), k in 1u64..=40) {
        let got = k_etp(&p, k, Some(40)).unwrap();
        let f = |t: u64| ehrhart_value(&p, t).unwrap();
        match got {
            None => prop_assert!(f(0) >= k),
            // g = 40 means the bound cut the search short
            Some(g) => prop_assert!(g <= 40 && f(g) < k && (g == 40 || f(g + 1) >= k)),
        }
    }

    #[test]
    fn tagged_hull_counts_split(a in polytope(), b in polytope()) {
        prop_assume!(a.dim() == b.dim());
        let d = a.dim();
        let embed = |p: &Polytope, tag: i64| {
            let pts = p
                .vertices()
                .iter()
                .map(|v| {
                    let mut c = v.coords().to_vec();
                    c.push(int(tag));
                    Point::new(c)
                })
                .collect();
            Polytope::from_points(pts).unwrap()
        };
        let (ea, eb) = (embed(&a, 0), embed(&b, 1));
        let tag = |v: i64| BTreeMap::from([(d, int(v))]);
        let h = tagged_hull(vec![(tag(0), ea), (tag(1), eb)]).unwrap();
        let cfg = CountConfig::default();
        let hull = count_image(&h, &Rational::one(), None, Method::Hull, &cfg).unwrap();
        prop_assert_eq!(hull, count_lattice_points(&a).unwrap() + count_lattice_points(&b).unwrap());
    }

    #[test]
    fn identity_holds(n in 2usize..=6, seed in any::<u64>()) {
        let e = product_identity_expansion(n).unwrap();
        prop_assert_eq!(e.summands.len(), (1 << n) - 1);
        prop_assert!(check_identity(&e, 20, 1000, seed).is_ok());
    }

    #[test]
    fn sequence_qp_reproduces_values(c in prop::collection::vec(0u64..=20, 1..=6), t in 0i64..60) {
        let qp = sequence_to_qp(&c).unwrap();
        prop_assert_eq!(qp.r(), 2 * c.len());
        prop_assert_eq!(qp_eval(&qp, t), BigInt::from(c[t as usize % c.len()]));
    }

    #[test]
    fn normalization_preserves_values(
        terms in prop::collection::vec(
            (-5i64..=5, prop::collection::vec((small_rat(), small_rat()), 1..=3)),
            1..=3,
        ),
        t in 0i64..30,
    ) {
        let qp = QuasiPolynomial::new(
            terms
                .into_iter()
                .map(|(g, fs)| QpTerm {
                    gamma: BigInt::from(g),
                    factors: fs.into_iter().map(|(a, b)| FloorFactor::new(a, b)).collect(),
                })
                .collect(),
        )
        .unwrap();
        let norm = normalize_coefficients(&qp);
        prop_assert_eq!(qp_eval(&norm, t), qp_eval(&qp, t));
        prop_assert!(norm.terms.iter().all(|term| term.gamma.is_one()));
    }

    #[test]
    fn floor_trapezoid_counts(a in small_rat(), b in small_rat(), plus in any::<bool>(), n in 2u64..=6) {
        let sign = if plus { 1 } else { -1 };
        let reach = a.abs() * int(n) + b.abs();
        let g: u64 = (ceil(&reach) * BigInt::from(2) + BigInt::from(2)).try_into().unwrap();
        let p = build_floor_trapezoid(&a, &b, sign, g, n).unwrap();
        let f = TranslationFamily::new(p, Point::axis(2, 0, Rational::one()), n).unwrap();
        for t in 0..n as i64 {
            let want = BigInt::from(g) + BigInt::from(sign) * floor(&(&a * int(t) + &b));
            prop_assert_eq!(BigInt::from(count_translate(&f, t).unwrap()), want, "t = {}", t);
        }
    }

    #[test]
    fn qp_json_round_trip(c in prop::collection::vec(0u64..=20, 1..=4)) {
        let qp = sequence_to_qp(&c).unwrap();
        let back = qp_from_json(&qp_to_json(&qp)).unwrap();
        for t in 0..12 {
            prop_assert_eq!(qp_eval(&back, t), qp_eval(&qp, t));
        }
    }
}
