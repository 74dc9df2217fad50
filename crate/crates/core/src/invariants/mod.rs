//! Γ, Λ and Ξ(A); Arf and Dickson invariants; rank-bounded Witt and
//! Grothendieck–Witt tables by orbit enumeration.

mod arf;
mod snf;
mod witt;
mod xi;

pub use arf::{arf, arf_bit, dickson, dickson_check, expected_zero_count, quadratic_value, zero_count};
pub use snf::AbelianGroupPresentation;
pub use witt::{
    forms_of_rank, gl_generators, grothendieck_witt_monoid, witt_classify, GwMonoid, Orbit, WittClass, WittTable,
};
pub use xi::{arf_retraction_check, gamma_lambda, xi_char2_field, xi_group, ArfQuotient, GammaLambda};

use crate::forms::QuadFormEl;
use crate::linalg::Mat;
use crate::ring::InvolutiveRing;
use crate::Matrix;

/// `j = [1; φ₀]`, an exact embedding of `(Aⁿ, φ₀)` into `H(Aⁿ)`:
/// `j*·[[0, 1], [0, 0]]·j = φ₀`. Its image is a direct summand whenever the
/// form is nondegenerate.
pub fn hyperbolic_embedding(q: &QuadFormEl) -> Matrix {
    let r = &q.ring;
    let n = q.rank();
    Mat::from_fn(2 * n, n, |i, j| if i < n { if i == j { r.one() } else { r.zero() } } else { *q.phi0.get(i - n, j) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{min_equal, Epsilon};
    use crate::linalg::all_matrices;
    use crate::ring::{FiniteRing, RingSpec};
    use crate::Caps;

    #[test]
    fn every_small_form_embeds_in_a_hyperbolic_module() {
        let caps = Caps::default();
        for spec in [RingSpec::fp(2), RingSpec::fp(3), RingSpec::f4()] {
            let r = FiniteRing::new(&spec).unwrap();
            for eps in [Epsilon::Plus, Epsilon::Minus] {
                for n in 1..=2 {
                    let h = QuadFormEl::hyperbolic(&r, eps, n);
                    for m in all_matrices(&r, n, n) {
                        let q = QuadFormEl::new(r.clone(), eps, m).unwrap();
                        if !q.is_nondegenerate(&caps).unwrap() {
                            continue;
                        }
                        let j = hyperbolic_embedding(&q);
                        assert_eq!(h.pull_back(&j).phi0, q.phi0);
                    }
                }
            }
        }
    }

    #[test]
    fn brute_force_embedding_search_agrees() {
        // every nondegenerate rank-1 and rank-2 form over F2 has some j with
        // j*·φ₀^H·j equal to φ₀ modulo γ − γ*, found by exhaustive search
        let caps = Caps::default();
        let r = FiniteRing::new(&RingSpec::fp(2)).unwrap();
        for n in 1..=2 {
            let h = QuadFormEl::hyperbolic(&r, Epsilon::Plus, n);
            let js: Vec<Matrix> = all_matrices(&r, 2 * n, n).collect();
            for m in all_matrices(&r, n, n) {
                let q = QuadFormEl::new(r.clone(), Epsilon::Plus, m).unwrap();
                if !q.is_nondegenerate(&caps).unwrap() {
                    continue;
                }
                let found = js.iter().any(|j| min_equal(&h.pull_back(j), &q).unwrap());
                assert!(found, "{q:?}");
                assert!(min_equal(&h.pull_back(&hyperbolic_embedding(&q)), &q).unwrap());
                assert!(!r.is_zero(&r.one()));
            }
        }
    }
}
