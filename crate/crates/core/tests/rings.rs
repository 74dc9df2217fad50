mod common;

use common::{ring, shipped};
use hermkq::ring::{find_split_unit, verify_involution, SignFlag};
use hermkq::{El, FiniteRing, InvolutiveRing, RingSpec};
use proptest::prelude::*;

#[test]
fn every_shipped_ring_satisfies_the_involution_axioms() {
    for r in shipped() {
        let rep = verify_involution(&r);
        assert!(rep.passed(), "{}: {:?}", r.name(), rep.violations);
    }
}

#[test]
fn split_units_split_one() {
    for r in shipped() {
        if let Some(l) = find_split_unit(&r).unwrap() {
            assert_eq!(r.add(&l, &r.conj(&l)), r.one(), "{}", r.name());
            assert!(r.is_central(l));
        }
    }
    assert!(find_split_unit(&ring(RingSpec::fp(2))).unwrap().is_none());
    assert!(find_split_unit(&ring(RingSpec::f4())).unwrap().is_some());
}

#[test]
fn composite_sizes() {
    for base in [RingSpec::fp(2), RingSpec::fp(3), RingSpec::f4()] {
        let a = ring(base.clone()).size();
        assert_eq!(ring(RingSpec::dual(base.clone(), SignFlag::Minus)).elements().count(), a * a);
        assert_eq!(ring(RingSpec::mat2(base.clone())).elements().count(), a.pow(4));
        assert_eq!(ring(RingSpec::product_op(base)).elements().count(), a * a);
    }
}

#[test]
fn fq_without_modulus_picks_an_irreducible_one() {
    let r = FiniteRing::parse_spec(r#"{"kind":"Fq","p":2,"deg":3}"#).unwrap();
    assert_eq!(r.size(), 8);
    assert!(r.is_field());
    let r = FiniteRing::parse_spec(r#"{"kind":"Fq","p":3,"deg":2,"involution":"frobenius"}"#).unwrap();
    assert!(verify_involution(&r).passed());
    assert!(FiniteRing::parse_spec(r#"{"kind":"Fq","p":2}"#).is_err());
}

#[test]
fn unknown_fields_are_rejected() {
    assert!(FiniteRing::parse_spec(r#"{"kind":"Fp","p":2,"colour":1}"#).is_err());
    assert!(FiniteRing::parse_spec("Q").is_err());
}

proptest! {
    #[test]
    fn ring_axioms_on_random_triples(idx in 0usize..11, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let r = &shipped()[idx];
        let n = r.size() as u32;
        let (a, b, c) = (El(a % n), El(b % n), El(c % n));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.conj(&r.mul(&a, &b)), r.mul(&r.conj(&b), &r.conj(&a)));
        prop_assert_eq!(r.conj(&r.conj(&a)), a);
        prop_assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
        prop_assert_eq!(r.mul(&r.one(), &a), a);
    }

    #[test]
    fn unit_inverse_is_two_sided(idx in 0usize..11, a in any::<u32>()) {
        let r = &shipped()[idx];
        let a = El(a % r.size() as u32);
        if let Some(inv) = r.unit_inverse(&a) {
            prop_assert_eq!(r.mul(&a, &inv), r.one());
            prop_assert_eq!(r.mul(&inv, &a), r.one());
        }
    }

    #[test]
    fn formatting_roundtrips(idx in 0usize..11, a in any::<u32>()) {
        let r = &shipped()[idx];
        let a = El(a % r.size() as u32);
        prop_assert_eq!(r.parse_elem(&r.format_elem(a)).unwrap(), a);
    }
}
