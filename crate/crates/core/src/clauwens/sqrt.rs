use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{precondition, Error, Result};
use crate::linalg::Mat;
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::Matrix;

/// `γ(t) = Σ cₖ(νt)ᵏ` with `γ(t)*γ(t) = 1 + νt`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareRoot {
    pub ring: FiniteRing,
    pub nu: Matrix,
    pub lambda: El,
    /// Least `K` with `ν^K = 0`.
    pub index: usize,
    /// `c₀ … c_{K−1}`, scalars in the subring generated by `λ`.
    pub scalars: Vec<El>,
    /// `bₙ₊₁` for each correction step.
    pub corrections: Vec<El>,
    /// `aₖ = cₖνᵏ`, the coefficient of `tᵏ`.
    pub coeffs: Vec<Matrix>,
}

impl SquareRoot {
    pub fn to_json(&self) -> Value {
        let r = &self.ring;
        json!({
            "nu": self.nu.to_json(r),
            "lambda": r.format_elem(self.lambda),
            "nilpotency_index": self.index,
            "scalars": self.scalars.iter().map(|c| r.format_elem(*c)).collect::<Vec<_>>(),
            "corrections": self.corrections.iter().map(|c| r.format_elem(*c)).collect::<Vec<_>>(),
            "coefficients": self.coeffs.iter().map(|a| a.to_json(r)).collect::<Vec<_>>(),
        })
    }
}

/// Truncated product in `A[x]/(x^k)`.
fn mul_trunc(r: &FiniteRing, a: &[El], b: &[El], k: usize) -> Vec<El> {
    let mut out = vec![r.zero(); k];
    for (i, x) in a.iter().enumerate().take(k) {
        for (j, y) in b.iter().enumerate().take(k - i) {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

/// Builds `γ₁ = 1 + λx` and `γₙ₊₁ = (1 − λbₙ₊₁xⁿ⁺¹)γₙ` in `A[x]`, `x = νt`,
/// where `bₙ₊₁` is the coefficient of `xⁿ⁺¹` in `γ̄ₙγₙ`, stopping at the
/// nilpotency index of `ν`.
pub fn sqrt_one_plus_nu_t(r: &FiniteRing, nu: &Matrix, lambda: Option<El>) -> Result<SquareRoot> {
    if !nu.is_square() {
        return Err(Error::Shape("ν must be square".into()));
    }
    if nu.conj_transpose(r) != *nu {
        return precondition("ν is not self-adjoint");
    }
    let lambda = lambda.or_else(|| r.split_unit()).ok_or_else(|| Error::NoSplitUnit(r.name()))?;
    if r.add(&lambda, &r.conj(&lambda)) != r.one() || !r.is_central(lambda) {
        return precondition(format!("{} is not a central split unit", r.format_elem(lambda)));
    }
    let k = nu.nilpotency_index(r).ok_or_else(|| Error::Precondition("ν is not nilpotent".into()))?;
    let mut gamma = vec![r.zero(); k];
    gamma[0] = r.one();
    if k > 1 {
        gamma[1] = lambda;
    }
    let mut corrections = Vec::new();
    for n in 1..k.saturating_sub(1) {
        let bar: Vec<El> = gamma.iter().map(|c| r.conj(c)).collect();
        let prod = mul_trunc(r, &bar, &gamma, k);
        let b = prod[n + 1];
        if r.conj(&b) != b {
            return precondition(format!("correction b_{} is not self-conjugate", n + 1));
        }
        let mut factor = vec![r.zero(); k];
        factor[0] = r.one();
        factor[n + 1] = r.neg(&r.mul(&lambda, &b));
        gamma = mul_trunc(r, &factor, &gamma, k);
        corrections.push(b);
    }
    let mut power = Mat::identity(r, nu.rows());
    let mut coeffs = Vec::with_capacity(k);
    for c in &gamma {
        coeffs.push(power.scale_left(r, c));
        power = power.mul(r, nu);
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|a| a.is_zero(r)) {
        coeffs.pop();
    }
    Ok(SquareRoot { ring: r.clone(), nu: nu.clone(), lambda, index: k, scalars: gamma, corrections, coeffs })
}

/// The subring generated by `a`.
fn generated_subring(r: &FiniteRing, a: El) -> BTreeSet<El> {
    let mut set: BTreeSet<El> = [r.zero(), r.one(), a].into_iter().collect();
    loop {
        let items: Vec<El> = set.iter().copied().collect();
        let before = set.len();
        for x in &items {
            set.insert(r.neg(x));
            for y in &items {
                set.insert(r.add(x, y));
                set.insert(r.mul(x, y));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// `γ*γ = 1 + νt` coefficientwise, `[aₖ, ν] = 0`, `cₖ ∈ Z[λ]`.
pub fn sqrt_check(sq: &SquareRoot) -> Report {
    let r = &sq.ring;
    let n = sq.nu.rows();
    let len = 2 * sq.coeffs.len();
    let mut product = vec![Mat::zeros(r, n, n); len];
    for (i, a) in sq.coeffs.iter().enumerate() {
        let a_star = a.conj_transpose(r);
        for (j, b) in sq.coeffs.iter().enumerate() {
            product[i + j] = product[i + j].add(r, &a_star.mul(r, b));
        }
    }
    let expected = |k: usize| match k {
        0 => Mat::identity(r, n),
        1 => sq.nu.clone(),
        _ => Mat::zeros(r, n, n),
    };
    let mut rep = Report::new(format!("γ(t)*γ(t) = 1 + νt, nilpotency index {}", sq.index));
    rep.value("degree", sq.coeffs.len() - 1);
    rep.check("γ*γ = 1 + νt", product.iter().enumerate().all(|(k, m)| *m == expected(k)) && len >= 2);
    rep.check("coefficients commute with ν", sq.coeffs.iter().all(|a| a.mul(r, &sq.nu) == sq.nu.mul(r, a)));
    let sub = generated_subring(r, sq.lambda);
    rep.check("scalars lie in the subring generated by λ", sq.scalars.iter().all(|c| sub.contains(c)));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::all_matrices;
    use crate::ring::RingSpec;

    #[test]
    fn zero_nu_gives_one() {
        let r = FiniteRing::new(&RingSpec::f4()).unwrap();
        let sq = sqrt_one_plus_nu_t(&r, &Mat::zeros(&r, 2, 2), None).unwrap();
        assert_eq!(sq.coeffs, vec![Mat::identity(&r, 2)]);
        assert!(sqrt_check(&sq).passed());
    }

    #[test]
    fn z9_example() {
        let r = FiniteRing::new(&RingSpec::zn(9)).unwrap();
        let nu = Mat::from_fn(2, 2, |i, j| if i != j { r.from_int(3) } else { r.zero() });
        let sq = sqrt_one_plus_nu_t(&r, &nu, Some(r.from_int(5))).unwrap();
        assert_eq!(sq.index, 2);
        let rep = sqrt_check(&sq);
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn every_hermitian_nilpotent_3x3_over_f4() {
        let r = FiniteRing::new(&RingSpec::f4()).unwrap();
        let w = r.parse_elem("w").unwrap();
        let mut indices = BTreeSet::new();
        for nu in all_matrices(&r, 3, 3) {
            if nu.conj_transpose(&r) != nu || nu.nilpotency_index(&r).is_none() {
                continue;
            }
            let sq = sqrt_one_plus_nu_t(&r, &nu, Some(w)).unwrap();
            indices.insert(sq.index);
            let rep = sqrt_check(&sq);
            assert!(rep.passed(), "{:?}", rep.failures());
        }
        assert!(indices.contains(&3), "{indices:?}");
    }

    #[test]
    fn preconditions() {
        let r = FiniteRing::new(&RingSpec::zn(9)).unwrap();
        let upper = Mat::from_fn(2, 2, |i, j| if i < j { r.one() } else { r.zero() });
        assert!(sqrt_one_plus_nu_t(&r, &upper, Some(r.from_int(5))).is_err());
        let id = Mat::identity(&r, 2);
        assert!(sqrt_one_plus_nu_t(&r, &id, Some(r.from_int(5))).is_err());
        let f2 = FiniteRing::new(&RingSpec::fp(2)).unwrap();
        assert!(matches!(sqrt_one_plus_nu_t(&f2, &Mat::zeros(&f2, 1, 1), None), Err(Error::NoSplitUnit(_))));
    }
}
