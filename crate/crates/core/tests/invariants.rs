mod common;

use common::{matrix, ring};
use hermkq::invariants::{
    arf, arf_bit, dickson_check, expected_zero_count, witt_classify, xi_char2_field, xi_group, zero_count,
    AbelianGroupPresentation,
};
use hermkq::{Caps, Epsilon, InvolutiveRing, QuadFormEl, RingSpec, Variant};
use proptest::prelude::*;

#[test]
fn arf_vanishes_on_hyperbolic_forms() {
    let caps = Caps::default();
    for spec in [RingSpec::fp(2), RingSpec::f4_trivial()] {
        let r = ring(spec);
        for m in 1..=3 {
            let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, m);
            assert_eq!(arf(&q, &caps).unwrap(), r.zero(), "{} m = {m}", r.name());
            assert_eq!(arf_bit(&q, &caps).unwrap(), 0);
        }
    }
}

#[test]
fn dickson_kernel_has_index_two() {
    let caps = Caps::default();
    let f2 = ring(RingSpec::fp(2));
    let f4 = ring(RingSpec::f4_trivial());
    for (r, m) in [(&f2, 1), (&f2, 2), (&f4, 1)] {
        let rep = dickson_check(&QuadFormEl::hyperbolic(r, Epsilon::Plus, m), &caps).unwrap();
        assert!(rep.passed(), "{} m = {m}: {:?}", r.name(), rep.failures());
    }
    // |O⁺₄(F4)| = 7200, so the homomorphism check needs 7200² pairs
    let rep = dickson_check(&QuadFormEl::hyperbolic(&f4, Epsilon::Plus, 2), &Caps::new(1 << 26)).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures());
    assert_eq!(rep.values["order"], 7200);
    let anisotropic = QuadFormEl::new(f2.clone(), Epsilon::Plus, matrix(&f2, 2, 2, &[1, 1, 0, 1])).unwrap();
    assert!(dickson_check(&anisotropic, &caps).unwrap().passed());
}

#[test]
fn xi_presentations_agree() {
    let caps = Caps::default();
    for spec in [RingSpec::fp(2), RingSpec::f4_trivial()] {
        let r = ring(spec);
        let a = xi_group(&r, Epsilon::Plus, &caps).unwrap();
        let b = xi_char2_field(&r, &caps).unwrap();
        assert_eq!(a.invariant_factors, b.invariant_factors, "{}", r.name());
    }
}

#[test]
fn witt_class_counts_over_f2() {
    let caps = Caps::default();
    let r = ring(RingSpec::fp(2));
    assert_eq!(witt_classify(&r, Epsilon::Plus, Variant::Min, 4, &caps).unwrap().classes.len(), 2);
    assert_eq!(witt_classify(&r, Epsilon::Plus, Variant::Max, 4, &caps).unwrap().classes.len(), 1);
}

#[test]
fn zero_counts_match_the_arf_formula() {
    let caps = Caps::default();
    let r = ring(RingSpec::fp(2));
    for m in 1..=2u32 {
        let n = 2 * m as usize;
        for w in 0..(1u32 << (n * n)).min(4096) {
            let words: Vec<u32> = (0..n * n).map(|k| (w >> k) & 1).collect();
            let q = QuadFormEl::new(r.clone(), Epsilon::Plus, matrix(&r, n, n, &words)).unwrap();
            if !q.is_nondegenerate(&caps).unwrap() {
                continue;
            }
            let bit = arf_bit(&q, &caps).unwrap();
            assert_eq!(zero_count(&q, &caps).unwrap(), expected_zero_count(2, m, bit));
        }
    }
}

proptest! {
    #[test]
    fn arf_is_invariant_under_change_of_basis(
        four in any::<bool>(),
        w in prop::collection::vec(0u32..4, 16),
        f in prop::collection::vec(0u32..4, 16),
    ) {
        let caps = Caps::default();
        let (r, n) = if four { (ring(RingSpec::f4_trivial()), 2) } else { (ring(RingSpec::fp(2)), 4) };
        let q = QuadFormEl::new(r.clone(), Epsilon::Plus, matrix(&r, n, n, &w)).unwrap();
        let f = matrix(&r, n, n, &f);
        prop_assume!(q.is_nondegenerate(&caps).unwrap());
        prop_assume!(f.invert(&r, &caps).unwrap().is_some());
        prop_assert_eq!(arf(&q.pull_back(&f), &caps).unwrap(), arf(&q, &caps).unwrap());
    }

    #[test]
    fn smith_form_factors_divide(rels in prop::collection::vec(prop::collection::vec(-12i64..12, 3), 0..5)) {
        let relations: Vec<Vec<(usize, i64)>> =
            rels.iter().map(|row| row.iter().enumerate().map(|(j, &c)| (j, c)).collect()).collect();
        let g = AbelianGroupPresentation::new(vec!["a".into(), "b".into(), "c".into()], relations.clone()).unwrap();
        let d = &g.invariant_factors;
        for k in 1..d.len() {
            if d[k - 1] != 0 && d[k] != 0 {
                prop_assert_eq!(d[k] % d[k - 1], 0);
            }
            prop_assert!(d[k - 1] != 0 || d[k] == 0);
        }
        for rel in &relations {
            prop_assert!(g.is_zero(rel));
        }
        // with three relations the order is |det| when finite
        if rels.len() == 3 {
            let m = &rels;
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            match g.order() {
                Some(o) => prop_assert_eq!(o, det.unsigned_abs() as u128),
                None => prop_assert_eq!(det, 0),
            }
        }
    }
}
