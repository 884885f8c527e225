//! Randomized properties. Ground truth comes from exact arithmetic, direct
//! prefix comparison, or the finite brute-force oracle.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use apartdomain::cert::{apart_from_json, apart_json, hausdorff_from_json, hausdorff_json, sharp_from_json, sharp_json, SharpAnswer};
use apartdomain::domains::finite::FiniteDomain;
use apartdomain::domains::interval::{iota_real, Interval, IntervalBasis, RealPoint};
use apartdomain::domains::lower::lower_rational;
use apartdomain::domains::seq::{iota_seq, SeqBasis, SeqPoint};
use apartdomain::finite::{FiniteOracle, FinitePoset};
use apartdomain::ideal::way_below;
use apartdomain::order::interpolate;
use apartdomain::order::rational::{q, Q};
use apartdomain::separation::{hausdorff_separated, intrinsic_apart, not_not_below, sharp_query};
use apartdomain::{BasisDescriptor, Fuel};

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn interval() -> impl Strategy<Value = Interval> {
    (rational(), 1i64..=24, 1i64..=8).prop_map(|(lo, w, d)| Interval::new(lo.clone(), lo + q(w, d)).unwrap())
}

fn real(r: &Q) -> apartdomain::ApproxElement<IntervalBasis> {
    iota_real(&RealPoint::rational(r.clone()).unwrap())
}

fn word(max: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..2, 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_prec_is_transitive(a in interval(), b in interval(), c in interval()) {
        let p = |x: &Interval, y: &Interval| IntervalBasis.prec(x, y);
        if p(&a, &b) && p(&b, &c) {
            prop_assert!(p(&a, &c));
        }
        prop_assert_eq!(p(&a, &b), a.lo < b.lo && b.hi < a.hi);
    }

    #[test]
    fn interpolant_lies_strictly_between(a in interval(), shrink in 1i64..8) {
        let step = a.width() / q(4 * shrink, 1);
        let b = Interval::new(&a.lo + &step, &a.hi - &step).unwrap();
        let c = interpolate(&IntervalBasis, &a, &b).unwrap();
        prop_assert!(IntervalBasis.prec(&a, &c) && IntervalBasis.prec(&c, &b));
    }

    #[test]
    fn rational_reals_apart_iff_different(r in rational(), s in rational()) {
        let (x, y) = (real(&r), real(&s));
        let c = intrinsic_apart(&x, &y, Fuel::new(24)).unwrap();
        prop_assert_eq!(c.is_some(), r != s);
        if let Some(c) = c {
            c.replay(&x, &y).unwrap();
            // the witness contains one value and the refuted probe misses the other
            let (mine, other) = match c.orientation {
                apartdomain::cert::Orientation::Forward => (&r, &s),
                apartdomain::cert::Orientation::Backward => (&s, &r),
            };
            prop_assert!(c.inner.member.code.contains(mine));
            prop_assert!(!c.inner.refutation.probe.contains(other));
            let back = intrinsic_apart(&y, &x, Fuel::new(24)).unwrap();
            prop_assert!(back.is_some());
        }
    }

    #[test]
    fn answers_are_stable_under_more_fuel(r in rational(), s in rational(), n in 1usize..20) {
        let (x, y) = (real(&r), real(&s));
        if let Some(c) = intrinsic_apart(&x, &y, Fuel::new(n)).unwrap() {
            prop_assert_eq!(Some(c), intrinsic_apart(&x, &y, Fuel::new(2 * n)).unwrap());
        }
        let b = Interval::new(r.clone(), r.clone() + q(1, 3)).unwrap();
        let first = way_below(&y, &b, Fuel::new(n)).unwrap();
        if !first.is_unknown() {
            prop_assert_eq!(first, way_below(&y, &b, Fuel::new(2 * n)).unwrap());
        }
    }

    #[test]
    fn certificate_json_roundtrips(r in rational(), s in rational()) {
        prop_assume!(r != s);
        let (x, y) = (real(&r), real(&s));
        let c = intrinsic_apart(&x, &y, Fuel::new(24)).unwrap().unwrap();
        let v = apart_json(&IntervalBasis, &c, ["x", "y"]);
        prop_assert_eq!(apart_from_json(&IntervalBasis, &v).unwrap(), c);
        let h = hausdorff_separated(&x, &y, Fuel::new(24)).unwrap().unwrap();
        let v = hausdorff_json(&IntervalBasis, &h, ["x", "y"]);
        prop_assert_eq!(hausdorff_from_json(&IntervalBasis, &v).unwrap(), h);
    }

    #[test]
    fn cantor_apart_iff_prefixes_differ(a in word(10), b in word(10), ta in 0u32..2, tb in 0u32..2) {
        let basis = Arc::new(SeqBasis::CANTOR);
        let (pa, pb) = (
            SeqPoint::eventually_constant(&basis, a, ta).unwrap(),
            SeqPoint::eventually_constant(&basis, b, tb).unwrap(),
        );
        let differ_at = (0..12).find(|&i| pa.at(i) != pb.at(i));
        let (x, y) = (iota_seq(&basis, &pa).unwrap(), iota_seq(&basis, &pb).unwrap());
        let c = intrinsic_apart(&x, &y, Fuel::new(16)).unwrap();
        prop_assert_eq!(c.is_some(), differ_at.is_some());
        if let (Some(c), Some(i)) = (c, differ_at) {
            c.replay(&x, &y).unwrap();
            prop_assert_eq!(c.inner.member.code.len(), i + 1);
        }
    }

    #[test]
    fn lower_rational_sharpness_matches_comparison(r in rational(), a in rational(), gap in 1i64..10) {
        let l = lower_rational(r.clone());
        let b = &a + q(gap, 7);
        let ans = sharp_query(&l, &a, &b).unwrap();
        match &ans {
            SharpAnswer::Left(_) => prop_assert!(a < r),
            SharpAnswer::Right(w) => prop_assert!(w.probe >= r && w.probe < b),
        }
        let v = sharp_json(&apartdomain::domains::lower::RationalBasis, &ans, [&a, &b], "l");
        prop_assert_eq!(sharp_from_json(&apartdomain::domains::lower::RationalBasis, &v).unwrap(), ans);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn finite_certificates_agree_with_the_oracle(seed in any::<u64>(), size in 1usize..7, density in 0.1f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poset = FinitePoset::random(&mut rng, size, density);
        let oracle = FiniteOracle::new(&poset, 12).unwrap();
        let d = Arc::new(FiniteDomain::new(poset.clone()));
        let elems = d.elements();
        for x in 0..size {
            for y in 0..size {
                let c = not_not_below(&elems[x], &elems[y], Fuel::new(size + 1)).unwrap();
                prop_assert_eq!(c.is_some(), oracle.not_not_below(x, y), "({}, {})", x, y);
                if let Some(c) = c {
                    c.replay(&elems[x], &elems[y]).unwrap();
                }
                let a = intrinsic_apart(&elems[x], &elems[y], Fuel::new(size + 1)).unwrap();
                prop_assert_eq!(a.is_some(), oracle.apart(x, y));
                let h = hausdorff_separated(&elems[x], &elems[y], Fuel::new(size + 1)).unwrap();
                prop_assert_eq!(h.is_some(), oracle.hausdorff(x, y));
            }
        }
    }
}
