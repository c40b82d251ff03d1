use cartier_core::cartier::cube_parts;
use cartier_core::{FieldSpec, Poly};
use proptest::prelude::*;

fn fields() -> Vec<FieldSpec> {
    [(2, 1), (3, 1), (3, 2), (5, 2), (2, 4)]
        .into_iter()
        .map(|(p, k)| FieldSpec::new(p, k).unwrap())
        .collect()
}

fn poly(f: &FieldSpec, idx: &[u32]) -> Poly {
    let v: Vec<u32> = idx.iter().map(|i| i % f.q()).collect();
    Poly::from_indices(f, &v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(fi in 0usize..5, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = &fields()[fi];
        let e = |v: u32| f.element(v % f.q()).unwrap();
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
        prop_assert_eq!(f.pow(f.pth_root(a), f.p() as u64), a);
    }

    #[test]
    fn text_round_trip(fi in 0usize..5, idx in prop::collection::vec(0u32..1000, 0..12)) {
        let f = &fields()[fi];
        let p = poly(f, &idx);
        prop_assert_eq!(Poly::parse(&p.to_text(), f).unwrap(), p);
    }

    #[test]
    fn division_identity(fi in 0usize..5, a in prop::collection::vec(0u32..1000, 0..12), b in prop::collection::vec(0u32..1000, 1..6)) {
        let f = &fields()[fi];
        let (a, b) = (poly(f, &a), poly(f, &b));
        prop_assume!(!b.is_zero());
        let (quo, r) = a.div_rem(&b, f).unwrap();
        prop_assert_eq!(quo.mul(&b, f).add(&r, f), a);
        prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn gcd_divides_both(fi in 0usize..5, a in prop::collection::vec(0u32..1000, 1..10), b in prop::collection::vec(0u32..1000, 1..10), c in prop::collection::vec(0u32..1000, 1..4)) {
        let f = &fields()[fi];
        let c = poly(f, &c);
        prop_assume!(!c.is_zero());
        let (a, b) = (poly(f, &a).mul(&c, f), poly(f, &b).mul(&c, f));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(&b, f);
        prop_assert!(g.is_monic());
        prop_assert!(a.rem(&g, f).unwrap().is_zero());
        prop_assert!(b.rem(&g, f).unwrap().is_zero());
        prop_assert!(g.rem(&c.monic(f), f).unwrap().is_zero());
    }

    #[test]
    fn cube_parts_recompose(k in 1u32..3, idx in prop::collection::vec(0u32..1000, 1..14)) {
        let f = FieldSpec::new(3, k).unwrap();
        let p = poly(&f, &idx);
        prop_assume!(!p.is_zero());
        prop_assert_eq!(cube_parts(&p, &f).unwrap().recompose(&f), p);
    }
}
