use serde_json::{json, Value};

use super::{
    coefficients, cup_product_unchecked, evaluate_at, kappa_matrix, lemma2_shift, poly_matrix_json, to_poly_matrix,
    AlmostHermitian, DeltaDatum, PolyMatrix, PolyQuadForm,
};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::forms::{min_equal_witness, t_image};
use crate::linalg::{is_invertible_commutative, Mat};
use crate::report::Report;
use crate::ring::{InvolutiveRing, PolyRing};
use crate::Matrix;

/// One verified step of a linearization.
#[derive(Clone, Debug, PartialEq)]
pub struct TranscriptStep {
    pub step: String,
    pub left: PolyMatrix,
    pub right: PolyMatrix,
    /// The `Z` of a `Z − εZ*` shift, for the constant elimination step.
    pub shift: Option<Vec<Matrix>>,
    pub passed: bool,
}

impl TranscriptStep {
    pub fn to_json(&self, pr: &PolyRing) -> Value {
        let mut v = json!({
            "step": self.step,
            "left-factor": poly_matrix_json(pr, &self.left),
            "right-factor": poly_matrix_json(pr, &self.right),
            "check": if self.passed { "pass" } else { "fail" },
        });
        if let Some(z) = &self.shift {
            v["shift"] = poly_matrix_json(pr, &to_poly_matrix(pr, z));
        }
        v
    }
}

/// Outcome of [`linearize`].
#[derive(Clone, Debug, PartialEq)]
pub struct Linearization {
    pub input: PolyQuadForm,
    pub steps: Vec<TranscriptStep>,
    /// Ranks of the hyperbolic summands `[[0, 1], [0, 0]]` added, in order.
    pub stabilization: Vec<usize>,
    /// `P` with `P*·(θ ⊕ H ⊕ …)·P` equal to [`Self::reduced`].
    pub conjugator: PolyMatrix,
    /// The form of degree at most one reached before the constant elimination.
    pub reduced: PolyQuadForm,
    /// `Z = εθ₀*·s`.
    pub shift: Vec<Matrix>,
    pub output: AlmostHermitian,
}

impl Linearization {
    /// `θ ⊕ H ⊕ …` with the recorded hyperbolic summands.
    pub fn stabilized_input(&self) -> Result<PolyQuadForm> {
        let r = &self.input.ring;
        self.stabilization
            .iter()
            .try_fold(self.input.clone(), |acc, &n| acc.direct_sum(&PolyQuadForm::hyperbolic(r, self.input.eps, n)))
    }

    pub fn linear_form(&self) -> PolyQuadForm {
        PolyQuadForm::linear(&self.input.ring, self.input.eps, self.output.g.clone())
    }

    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed) && self.output.identity_holds()
    }

    pub fn to_json(&self) -> Value {
        let pr = self.input.poly_ring();
        json!({
            "input": self.input.to_json(),
            "transcript": self.steps.iter().map(|s| s.to_json(&pr)).collect::<Vec<_>>(),
            "stabilization": self.stabilization,
            "almost_hermitian": self.output.to_json(),
            "output_rank": self.output.g.rows(),
        })
    }
}

/// Reduces `θ` to a linear form `g·s` by the block identity
///
/// `R*·(θ ⊕ [[0, 1], [0, 0]])·R = [[θ − θ_N s^N, 0, −s], [θ_N s^{N−1}, 0, 1], [0, 0, 0]]`
///
/// with `R = [[1, 0, 0], [(s − 1), 1, 0], [θ_N s^{N−1}, 0, 1]]`, applied until
/// the degree is at most one, followed by the shift `Z = εθ₀*·s` which turns
/// `θ₀ + θ₁s` into `(θ₁ + θ₀ + εθ₀*)·s`.
pub fn linearize(theta: &PolyQuadForm, caps: &Caps) -> Result<Linearization> {
    if !theta.is_nondegenerate()? {
        return Err(Error::Degenerate("θ + εθ* is not invertible over A[s]".into()));
    }
    let r = &theta.ring;
    let pr = theta.poly_ring();
    let eps = theta.eps;
    let mut cur = theta.clone();
    let mut conj = Mat::identity(&pr, theta.rank());
    let mut steps = Vec::new();
    let mut stabilization = Vec::new();
    while cur.degree() >= 2 {
        let top = cur.degree();
        let n = cur.rank();
        let id = Mat::identity(&pr, n);
        let zero = Mat::zeros(&pr, n, n);
        let s = pr.x();
        let s_minus_1 = pr.sub(&s, &pr.one());
        let lead = cur.coeff(top).map(|a| pr.monomial(*a, top - 1));
        let right = Mat::from_blocks(&[
            vec![id.clone(), zero.clone(), zero.clone()],
            vec![Mat::scalar(&pr, n, s_minus_1), id.clone(), zero.clone()],
            vec![lead.clone(), zero.clone(), id.clone()],
        ])?;
        let left = right.conj_transpose(&pr);
        let displayed_left = Mat::from_blocks(&[
            vec![id.clone(), Mat::scalar(&pr, n, pr.neg(&s)), lead.conj_transpose(&pr)],
            vec![zero.clone(), id.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), id.clone()],
        ])?;
        let middle = cur.direct_sum(&PolyQuadForm::hyperbolic(r, eps, n))?.to_poly_matrix();
        let product = left.mul(&pr, &middle).mul(&pr, &right);
        let truncated = to_poly_matrix(&pr, &cur.coeffs[..top]);
        let expected = Mat::from_blocks(&[
            vec![truncated, zero.clone(), Mat::scalar(&pr, n, pr.neg(&s))],
            vec![lead, zero.clone(), id],
            vec![zero.clone(), zero.clone(), zero],
        ])?;
        let next = PolyQuadForm::from_poly_matrix(r.clone(), eps, &product)?;
        let passed = product == expected && left == displayed_left && next.degree() < top;
        steps.push(TranscriptStep {
            step: format!("reduce degree {top} to {}", next.degree()),
            left,
            right: right.clone(),
            shift: None,
            passed,
        });
        if !passed {
            return Err(Error::Precondition(format!("block identity failed at degree {top}")));
        }
        conj = conj.direct_sum(&pr, &Mat::identity(&pr, 2 * n)).mul(&pr, &right);
        stabilization.push(n);
        cur = next;
    }
    let n = cur.rank();
    let t0 = cur.coeff(0);
    let t0_star = eps.apply(r, &t0.conj_transpose(r));
    let shift = vec![Mat::zeros(r, n, n), t0_star.clone()];
    let g = cur.coeff(1).add(r, &t0).add(r, &t0_star);
    if !t0.is_zero(r) {
        let shifted = lemma2_shift(&cur, &shift)?;
        let passed = shifted == PolyQuadForm::linear(r, eps, g.clone());
        let id = Mat::identity(&pr, n);
        steps.push(TranscriptStep {
            step: "eliminate constant term".into(),
            left: id.clone(),
            right: id,
            shift: Some(shift.clone()),
            passed,
        });
        if !passed {
            return Err(Error::Precondition("constant elimination failed".into()));
        }
    }
    let output = AlmostHermitian::new(r.clone(), eps, g, caps)?;
    Ok(Linearization { input: theta.clone(), steps, stabilization, conjugator: conj, reduced: cur, shift, output })
}

/// Checks that the cup-products of the input (stabilized by the recorded
/// hyperbolic summands) and of `g·s` with `δ` agree:
/// `κ(P*MP) = P(φ)*·κ(M)·P(φ)` exactly, then `Γ − εηΓ*` for the shift.
pub fn linearization_soundness(lin: &Linearization, d: &DeltaDatum) -> Result<Report> {
    let r = &lin.input.ring;
    let pr = lin.input.poly_ring();
    let stab = lin.stabilized_input()?;
    let mut rep = Report::new("linearization preserves the cup-product");
    let p = &lin.conjugator;
    let pulled = p.conj_transpose(&pr).mul(&pr, &stab.to_poly_matrix()).mul(&pr, p);
    rep.check("P*·(θ ⊕ H …)·P = reduced form over A[s]", coefficients(&pr, &pulled) == lin.reduced.coeffs);
    let k_stab = cup_product_unchecked(&stab, d)?;
    let hyper_parts = lin.stabilization.iter().fold(cup_product_unchecked(&lin.input, d)?.phi0, |acc, &n| {
        acc.direct_sum(r, &PolyQuadForm::hyperbolic(r, lin.input.eps, n).coeffs[0].kronecker(r, &d.delta))
    });
    rep.check("κ(θ ⊕ H …) = κ(θ) ⊕ (H ⊗ Δ) …", k_stab.phi0 == hyper_parts);
    let p_at = evaluate_at(r, &pr, p, &d.phi);
    rep.check("P(φ) is invertible", is_invertible_commutative(r, &p_at));
    let k_reduced = cup_product_unchecked(&lin.reduced, d)?;
    let pulled_k = k_stab.pull_back(&p_at);
    rep.check("P(φ)*·κ(θ ⊕ H …)·P(φ) = κ(reduced)", pulled_k.phi0 == k_reduced.phi0);
    let k_linear = cup_product_unchecked(&lin.linear_form(), d)?;
    let gamma = kappa_matrix(&lin.shift, d);
    let shifted = k_reduced.phi0.add(r, &t_image(r, k_reduced.eps, &gamma));
    rep.check("κ(g·s) = κ(reduced) + Γ − εηΓ*", shifted == k_linear.phi0);
    rep.check("κ(g·s) is min-equal to the pulled-back stabilized κ", min_equal_witness(&pulled_k, &k_linear)?.is_some());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Epsilon;
    use crate::ring::{FiniteRing, RingSpec};

    fn f2() -> FiniteRing {
        FiniteRing::new(&RingSpec::fp(2)).unwrap()
    }

    fn scalar(r: &FiniteRing, xs: &[i64]) -> Vec<Matrix> {
        xs.iter().map(|&x| Mat::from_fn(1, 1, |_, _| r.from_int(x))).collect()
    }

    #[test]
    fn linear_input_gives_an_empty_transcript() {
        let caps = Caps::default();
        let r = f2();
        let theta = PolyQuadForm::linear(&r, Epsilon::Plus, Mat::identity(&r, 1));
        let lin = linearize(&theta, &caps).unwrap();
        assert!(lin.steps.is_empty());
        assert_eq!(lin.output.g, Mat::identity(&r, 1));
    }

    #[test]
    fn constant_rank_one_over_f2_is_degenerate() {
        // θ = θ₀ constant of rank 1 over F2 has H = θ₀ + θ₀ = 0
        let r = f2();
        let theta = PolyQuadForm::new(r.clone(), Epsilon::Plus, scalar(&r, &[1])).unwrap();
        assert!(matches!(linearize(&theta, &Caps::default()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn constant_hyperbolic_form_is_eliminated() {
        let caps = Caps::default();
        let r = f2();
        let theta = PolyQuadForm::hyperbolic(&r, Epsilon::Plus, 1);
        let lin = linearize(&theta, &caps).unwrap();
        assert_eq!(lin.steps.len(), 1);
        let t0 = &theta.coeffs[0];
        assert_eq!(lin.output.g, t0.add(&r, &t0.transpose()));
        assert_eq!(lin.output.index, 1);
    }

    #[test]
    fn degree_two_rank_one_gives_rank_three() {
        let caps = Caps::default();
        let r = f2();
        // θ = s²: H(s) = s² + (1 + s)² = 1
        let theta = PolyQuadForm::new(r.clone(), Epsilon::Plus, scalar(&r, &[0, 0, 1])).unwrap();
        assert!(theta.is_nondegenerate().unwrap());
        let lin = linearize(&theta, &caps).unwrap();
        assert_eq!(lin.output.g.rows(), 3);
        assert!(lin.passed());
        assert_eq!(lin.stabilization, vec![1]);
        for d in DeltaDatum::all(&r, Epsilon::Plus, 2, &caps).unwrap() {
            let rep = linearization_soundness(&lin, &d).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn degree_three_over_z4_with_minus_sign() {
        let caps = Caps::default();
        let r = FiniteRing::new(&RingSpec::zn(4)).unwrap();
        let theta = crate::linalg::all_matrices(&r, 4, 1)
            .map(|c| {
                let coeffs = (0..4).map(|k| Mat::from_fn(1, 1, |_, _| *c.get(k, 0))).collect();
                PolyQuadForm::new(r.clone(), Epsilon::Minus, coeffs).unwrap()
            })
            .find(|t| t.degree() == 3 && t.is_nondegenerate().unwrap())
            .expect("a nondegenerate cubic exists");
        let lin = linearize(&theta, &caps).unwrap();
        assert_eq!(lin.stabilization, vec![1, 3]);
        assert_eq!(lin.output.g.rows(), 9);
        let data = DeltaDatum::all(&r, Epsilon::Plus, 2, &caps).unwrap();
        assert!(!data.is_empty());
        for d in data.iter().step_by(7) {
            assert!(linearization_soundness(&lin, d).unwrap().passed());
        }
    }

    #[test]
    fn transcript_serializes_with_pass_markers() {
        let caps = Caps::default();
        let r = f2();
        let theta = PolyQuadForm::new(r.clone(), Epsilon::Plus, scalar(&r, &[1, 0, 1])).unwrap();
        let v = linearize(&theta, &caps).unwrap().to_json();
        let steps = v["transcript"].as_array().unwrap();
        assert!(!steps.is_empty());
        for s in steps {
            assert_eq!(s["check"], "pass");
            assert!(s.get("left-factor").is_some() && s.get("right-factor").is_some());
        }
    }
}
