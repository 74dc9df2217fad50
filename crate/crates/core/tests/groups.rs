mod common;

use std::collections::HashSet;

use common::ring;
use hermkq::forms::t_image;
use hermkq::groups::{
    check_el, compose_el, enumerate_group, enumerate_unitary, inverse_el, s_group, split_section, ElMorphism,
};
use hermkq::invariants::hyperbolic_embedding;
use hermkq::linalg::all_matrices;
use hermkq::{Caps, Epsilon, FiniteRing, InvolutiveRing, Mat, Matrix, QuadFormEl, RingSpec, Variant};
use proptest::prelude::*;

/// `O^min` by trying every invertible `f` and every `γ`.
fn brute_min(q: &QuadFormEl) -> HashSet<Matrix> {
    let r = &q.ring;
    let n = q.rank();
    let caps = Caps::default();
    let images: HashSet<Matrix> = all_matrices(r, n, n).map(|g| t_image(r, q.eps, &g)).collect();
    all_matrices(r, n, n)
        .filter(|f| f.invert(r, &caps).unwrap().is_some())
        .filter(|f| images.contains(&q.pull_back(f).phi0.sub(r, &q.phi0)))
        .collect()
}

fn nondegenerate_forms(r: &FiniteRing, eps: Epsilon, n: usize) -> Vec<QuadFormEl> {
    let caps = Caps::default();
    all_matrices(r, n, n)
        .map(|m| QuadFormEl::new(r.clone(), eps, m).unwrap())
        .filter(|q| q.is_nondegenerate(&caps).unwrap())
        .collect()
}

#[test]
fn orthogonal_group_matches_brute_force_and_sits_in_the_unitary_group() {
    let caps = Caps::default();
    for spec in [RingSpec::fp(2), RingSpec::fp(3), RingSpec::zn(4)] {
        let r = ring(spec);
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            for q in nondegenerate_forms(&r, eps, 2).into_iter().step_by(3) {
                let omin = enumerate_group(Variant::Min, &q, &caps).unwrap().matrix_set();
                let omax = enumerate_unitary(&q.associated_hermitian(), &caps).unwrap().matrix_set();
                assert_eq!(omin, brute_min(&q), "{}", r.name());
                assert!(omin.is_subset(&omax));
            }
        }
    }
}

#[test]
fn split_unit_makes_min_and_max_agree() {
    let caps = Caps::default();
    for spec in [RingSpec::f4(), RingSpec::fp(3), RingSpec::zn(9)] {
        let r = ring(spec);
        assert!(r.split_unit().is_some());
        for q in nondegenerate_forms(&r, Epsilon::Plus, 2).into_iter().step_by(11).take(12) {
            let omin = enumerate_group(Variant::Min, &q, &caps).unwrap().matrix_set();
            let omax = enumerate_unitary(&q.associated_hermitian(), &caps).unwrap().matrix_set();
            assert_eq!(omin, omax, "{}", r.name());
        }
    }
}

#[test]
fn f2_hyperbolic_plane_has_a_strictly_smaller_orthogonal_group() {
    let caps = Caps::default();
    let r = ring(RingSpec::fp(2));
    let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
    let omin = enumerate_group(Variant::Min, &q, &caps).unwrap();
    let omax = enumerate_unitary(&q.associated_hermitian(), &caps).unwrap();
    assert_eq!(omin.order(), 2);
    assert_eq!(omax.order(), 6);
}

#[test]
fn kernel_action_through_the_section() {
    let caps = Caps::default();
    for spec in [RingSpec::f4(), RingSpec::fp(3)] {
        let r = ring(spec);
        let lambda = r.split_unit().unwrap();
        let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
        let phi_inv = q.associated_hermitian().inverse(&caps).unwrap().unwrap();
        let omin = enumerate_group(Variant::Min, &q, &caps).unwrap();
        let s = s_group(&q, &caps).unwrap();
        for g in omin.elements.iter().step_by(3) {
            let sg = split_section(&g.f, &q, lambda).unwrap();
            let sg_inv = inverse_el(&q, &sg, &caps).unwrap();
            let g_inv = g.f.invert(&r, &caps).unwrap().unwrap();
            for gamma in &s {
                let k = ElMorphism { f: Mat::identity(&r, 2), gamma: gamma.clone() };
                let conj = compose_el(&q, &compose_el(&q, &sg_inv, &k).unwrap(), &sg).unwrap();
                assert!(conj.f.is_identity(&r));
                let u = phi_inv.mul(&r, gamma);
                assert_eq!(phi_inv.mul(&r, &conj.gamma), g_inv.mul(&r, &u).mul(&r, &g.f));
            }
        }
    }
}

#[test]
fn rank_two_forms_over_f2_are_summands_of_hyperbolic_two() {
    let caps = Caps::default();
    let r = ring(RingSpec::fp(2));
    let h = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 2);
    for q in nondegenerate_forms(&r, Epsilon::Plus, 2) {
        let j = hyperbolic_embedding(&q);
        assert_eq!(h.pull_back(&j).phi0, q.phi0);
        // the restriction of φ_H to the image is φ_q, which is invertible, so the
        // image splits off: p = φ_q⁻¹·j*·φ_H is a left inverse of j
        let phi_h = h.associated_phi();
        let phi_q_inv = q.associated_hermitian().inverse(&caps).unwrap().unwrap();
        let p = phi_q_inv.mul(&r, &j.conj_transpose(&r)).mul(&r, &phi_h);
        assert!(p.mul(&r, &j).is_identity(&r));
    }
}

fn el_group(idx: usize) -> (QuadFormEl, Vec<ElMorphism>) {
    let spec = [RingSpec::fp(2), RingSpec::f4(), RingSpec::zn(4), RingSpec::fp(3)][idx].clone();
    let r = ring(spec);
    let eps = if idx == 3 { Epsilon::Minus } else { Epsilon::Plus };
    let q = QuadFormEl::hyperbolic(&r, eps, 1);
    let g = enumerate_group(Variant::El, &q, &Caps::default()).unwrap();
    (q, g.elements)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_preserves_the_el_predicate(idx in 0usize..4, a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let (q, els) = el_group(idx);
        let set: HashSet<&ElMorphism> = els.iter().collect();
        let (x, y, z) = (&els[a % els.len()], &els[b % els.len()], &els[c % els.len()]);
        let xy = compose_el(&q, x, y).unwrap();
        prop_assert!(check_el(&xy, &q).unwrap());
        prop_assert!(set.contains(&xy));
        let left = compose_el(&q, &xy, z).unwrap();
        let right = compose_el(&q, x, &compose_el(&q, y, z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let inv = inverse_el(&q, x, &Caps::default()).unwrap();
        prop_assert_eq!(compose_el(&q, x, &inv).unwrap(), ElMorphism::identity(&q.ring, q.rank()));
    }
}
