mod common;

use std::sync::OnceLock;

use common::{matrix, ring};
use hermkq::clauwens::{
    cup_product_unchecked, lemma1_check, lemma2_check, lemma2_shift, lemma4_recursion, linearization_soundness, linearize,
    sqrt_check, sqrt_one_plus_nu_t, AlmostHermitian, DeltaDatum, PolyQuadForm,
};
use hermkq::linalg::all_matrices;
use hermkq::{Caps, El, Epsilon, FiniteRing, InvolutiveRing, Mat, Matrix, QuadFormEl, RingSpec};
use proptest::prelude::*;

fn eps_of(minus: bool) -> Epsilon {
    if minus {
        Epsilon::Minus
    } else {
        Epsilon::Plus
    }
}

fn coeffs(r: &FiniteRing, n: usize, words: &[u32]) -> Vec<Matrix> {
    words.chunks(n * n).map(|w| matrix(r, n, n, w)).collect()
}

fn data(r: &FiniteRing, eta: Epsilon) -> Vec<DeltaDatum> {
    let mut out = DeltaDatum::all(r, eta, 1, &Caps::default()).unwrap();
    out.extend(DeltaDatum::all(r, eta, 2, &Caps::default()).unwrap());
    out
}

/// Every self-adjoint `ν` of size `n`.
fn self_adjoint(r: &FiniteRing, n: usize) -> Vec<Matrix> {
    all_matrices(r, n, n)
        .filter(|m| m.conj_transpose(r) == *m)
        .collect()
}

#[test]
fn cup_product_of_hyperbolic_is_the_kronecker_product() {
    let caps = Caps::default();
    let r = ring(RingSpec::fp(3));
    for d in data(&r, Epsilon::Plus) {
        let theta = PolyQuadForm::hyperbolic(&r, Epsilon::Minus, 1);
        let k = cup_product_unchecked(&theta, &d).unwrap();
        assert_eq!(k.eps, Epsilon::Minus);
        assert_eq!(k.phi0, theta.coeffs[0].kronecker(&r, &d.delta));
        assert!(k.is_nondegenerate(&caps).unwrap());
    }
}

#[test]
fn square_root_evaluates_correctly_at_every_scalar() {
    for (spec, lambda) in [(RingSpec::f4(), None), (RingSpec::zn(9), Some(5))] {
        let r = ring(spec);
        let lambda = lambda.map(|l| r.from_int(l));
        let scalars: Vec<El> = r.elements().filter(|t| r.conj(t) == *t && r.is_central(*t)).collect();
        for n in 1..=2 {
            for nu in self_adjoint(&r, n) {
                if nu.nilpotency_index(&r).is_none() {
                    continue;
                }
                let sq = sqrt_one_plus_nu_t(&r, &nu, lambda).unwrap();
                assert!(sqrt_check(&sq).passed(), "{}", sq.to_json());
                for t in &scalars {
                    let mut gamma = Mat::zeros(&r, n, n);
                    let mut tk = r.one();
                    for a in &sq.coeffs {
                        gamma = gamma.add(&r, &a.scale_left(&r, &tk));
                        tk = r.mul(&tk, t);
                    }
                    let lhs = gamma.conj_transpose(&r).mul(&r, &gamma);
                    let rhs = Mat::identity(&r, n).add(&r, &nu.scale_left(&r, t));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn square_root_rejects_non_nilpotent_nu() {
    let r = ring(RingSpec::f4());
    assert!(sqrt_one_plus_nu_t(&r, &Mat::identity(&r, 2), None).is_err());
}

/// Every almost hermitian `g` on `F₂³` with `ε = 1`.
fn sigmas() -> &'static Vec<AlmostHermitian> {
    static S: OnceLock<Vec<AlmostHermitian>> = OnceLock::new();
    S.get_or_init(|| {
        let r = ring(RingSpec::fp(2));
        all_matrices(&r, 3, 3)
            .filter_map(|g| AlmostHermitian::new(r.clone(), Epsilon::Plus, g, &Caps::default()).ok())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_is_nondegenerate_and_shift_invariant(
        z4 in any::<bool>(),
        minus in any::<bool>(),
        eta_minus in any::<bool>(),
        n in 1usize..=2,
        deg in 0usize..=2,
        words in prop::collection::vec(0u32..12, 24),
        zwords in prop::collection::vec(0u32..12, 24),
        pick in any::<prop::sample::Index>(),
    ) {
        let r = ring(if z4 { RingSpec::zn(4) } else { RingSpec::fp(3) });
        let eps = eps_of(minus);
        let ds = data(&r, eps_of(eta_minus));
        let d = pick.get(&ds);
        let theta = PolyQuadForm::new(r.clone(), eps, coeffs(&r, n, &words[..n * n * (deg + 1)])).unwrap();
        let rep = lemma1_check(&theta, d).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures());
        let z = coeffs(&r, n, &zwords[..n * n * (deg + 1)]);
        let rep = lemma2_check(&theta, &z, d).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures());
        // the shift leaves θ + εθ* unchanged
        let shifted = lemma2_shift(&theta, &z).unwrap();
        prop_assert_eq!(shifted.hermitian(), theta.hermitian());
    }

    #[test]
    fn linearization_is_sound_over_f3(
        minus in any::<bool>(),
        n in 1usize..=2,
        base in prop::collection::vec(0u32..3, 4),
        zwords in prop::collection::vec(0u32..3, 12),
        deg in 1usize..=2,
    ) {
        let r = ring(RingSpec::fp(3));
        let caps = Caps::default();
        let eps = eps_of(minus);
        let q = QuadFormEl::new(r.clone(), eps, matrix(&r, n, n, &base)).unwrap();
        prop_assume!(q.is_nondegenerate(&caps).unwrap());
        let constant = PolyQuadForm::new(r.clone(), eps, vec![q.phi0.clone()]).unwrap();
        let theta = lemma2_shift(&constant, &coeffs(&r, n, &zwords[..n * n * (deg + 1)])).unwrap();
        prop_assert!(theta.is_nondegenerate().unwrap());
        let lin = linearize(&theta, &caps).unwrap();
        prop_assert!(lin.passed());
        prop_assert!(lin.linear_form().degree() <= 1);
        for eta in [Epsilon::Plus, Epsilon::Minus] {
            for d in data(&r, eta).iter().step_by(7) {
                let rep = linearization_soundness(&lin, d).unwrap();
                prop_assert!(rep.passed(), "{:?}", rep.failures());
            }
        }
    }

    #[test]
    fn recursion_residual_vanishes_by_the_index(
        pick in any::<prop::sample::Index>(),
        zeta in prop::collection::vec(0u32..2, 4),
    ) {
        let r = ring(RingSpec::fp(2));
        let d = DeltaDatum::new(QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1), &Caps::default()).unwrap();
        let sigma = pick.get(sigmas());
        let out = lemma4_recursion(sigma, &d, &matrix(&r, 2, 2, &zeta), sigma.index).unwrap();
        prop_assert!(out.steps.iter().all(|s| s.low_order_vanishes && s.formal_matches));
        prop_assert!(out.residual().is_zero(&r));
        prop_assert!(out.report().passed());
    }

    #[test]
    fn poly_form_json_roundtrips(
        minus in any::<bool>(),
        n in 1usize..=3,
        deg in 0usize..=3,
        words in prop::collection::vec(0u32..4, 36),
    ) {
        let r = ring(RingSpec::f4());
        let theta = PolyQuadForm::new(r.clone(), eps_of(minus), coeffs(&r, n, &words[..n * n * (deg + 1)])).unwrap();
        prop_assert!(theta.degree() <= deg);
        prop_assert_eq!(PolyQuadForm::from_json(&theta.to_json()).unwrap(), theta);
    }
}
