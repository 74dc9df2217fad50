use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::config::{pow_saturating, Caps};
use crate::error::{Error, Result};
use crate::linalg::{all_matrices, Mat};
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::Matrix;

/// The two-sided ideal generated by one element, required to square to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareZeroIdeal {
    pub generator: El,
    pub elements: BTreeSet<El>,
}

impl SquareZeroIdeal {
    pub fn new(r: &FiniteRing, generator: El) -> Self {
        let mut elements: BTreeSet<El> = [r.zero()].into_iter().collect();
        for a in r.elements() {
            for b in r.elements() {
                elements.insert(r.mul(&r.mul(&a, &generator), &b));
            }
        }
        loop {
            let items: Vec<El> = elements.iter().copied().collect();
            let before = elements.len();
            for x in &items {
                for y in &items {
                    elements.insert(r.add(x, y));
                }
            }
            if elements.len() == before {
                break;
            }
        }
        SquareZeroIdeal { generator, elements }
    }

    pub fn contains(&self, a: &El) -> bool {
        self.elements.contains(a)
    }

    pub fn contains_matrix(&self, m: &Matrix) -> bool {
        m.entries().iter().all(|a| self.contains(a))
    }

    pub fn is_square_zero(&self, r: &FiniteRing) -> bool {
        self.elements.iter().all(|x| self.elements.iter().all(|y| r.is_zero(&r.mul(x, y))))
    }
}

/// Self-adjoint idempotents `p₀`, `p₁ = p₀ + σ` with `σ` in the ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorInstance {
    pub p0: Matrix,
    pub p1: Matrix,
}

fn adjoint(r: &FiniteRing, form_inv: &Matrix, form: &Matrix, x: &Matrix) -> Matrix {
    form_inv.mul(r, &x.conj_transpose(r)).mul(r, form)
}

/// `α = 1 − p₀ − p₁ + 2p₀p₁`, with every precondition and conclusion
/// checked separately. Adjoints are taken with respect to `form`.
pub fn projector_conjugator(
    r: &FiniteRing,
    p0: &Matrix,
    p1: &Matrix,
    form: &Matrix,
    ideal: &SquareZeroIdeal,
    caps: &Caps,
) -> Result<(Matrix, Report)> {
    let n = form.rows();
    if [p0, p1].iter().any(|p| p.rows() != n || p.cols() != n) {
        return Err(Error::Shape("projectors must be square of the rank of the form".into()));
    }
    let form_inv = form.invert(r, caps)?.ok_or_else(|| Error::Degenerate("the form is not invertible".into()))?;
    let adj = |x: &Matrix| adjoint(r, &form_inv, form, x);
    let one = Mat::identity(r, n);
    let two = r.from_int(2);
    let sigma = p1.sub(r, p0);
    let alpha = one.sub(r, p0).sub(r, p1).add(r, &p0.mul(r, p1).scale_left(r, &two));

    let mut rep = Report::new("projector conjugation");
    rep.check("p0 is idempotent", p0.mul(r, p0) == *p0);
    rep.check("p1 is idempotent", p1.mul(r, p1) == *p1);
    rep.check("p0 is self-adjoint", adj(p0) == *p0);
    rep.check("p1 is self-adjoint", adj(p1) == *p1);
    rep.check("the ideal squares to zero", ideal.is_square_zero(r));
    rep.check("σ = p1 − p0 lies in the ideal", ideal.contains_matrix(&sigma));

    let sp0 = sigma.mul(r, p0);
    let p0s = p0.mul(r, &sigma);
    let s2 = sigma.mul(r, &sigma);
    rep.check("σ = p0σ + σp0", sigma == p0s.add(r, &sp0));
    rep.check("σp0σ = 0", sp0.mul(r, &sigma).is_zero(r));
    rep.check("σ² = σ²p0", s2 == s2.mul(r, p0));
    rep.check("σ²p0 = p0σ²", s2.mul(r, p0) == p0.mul(r, &s2));
    rep.check("α = 1 − σ + 2p0σ", alpha == one.sub(r, &sigma).add(r, &p0s.scale_left(r, &two)));
    rep.check("α ≡ 1 mod I", ideal.contains_matrix(&alpha.sub(r, &one)));
    rep.check("αα* = 1", alpha.mul(r, &adj(&alpha)).is_identity(r));
    rep.check("αp1 = p0α", alpha.mul(r, p1) == p0.mul(r, &alpha));
    Ok((alpha, rep))
}

/// Every instance of the preconditions on `Aⁿ` with the given form.
pub fn find_projector_instances(
    r: &FiniteRing,
    ideal: &SquareZeroIdeal,
    form: &Matrix,
    caps: &Caps,
) -> Result<Vec<ProjectorInstance>> {
    let n = form.rows();
    let form_inv = form.invert(r, caps)?.ok_or_else(|| Error::Degenerate("the form is not invertible".into()))?;
    caps.check("candidate projectors", pow_saturating(r.size() as u128, n * n))?;
    let self_adjoint_idempotent = |p: &Matrix| p.mul(r, p) == *p && adjoint(r, &form_inv, form, p) == *p;
    let projectors: Vec<Matrix> = all_matrices(r, n, n).filter(|p| self_adjoint_idempotent(p)).collect();
    let ideal_elems: Vec<El> = ideal.elements.iter().copied().collect();
    let sigmas = pow_saturating(ideal_elems.len() as u128, n * n);
    caps.check("projector pairs", sigmas.saturating_mul(projectors.len() as u128))?;
    let mut out = Vec::new();
    for p0 in &projectors {
        for code in 0..sigmas {
            let mut c = code;
            let sigma = Mat::from_fn(n, n, |_, _| {
                let v = ideal_elems[(c % ideal_elems.len() as u128) as usize];
                c /= ideal_elems.len() as u128;
                v
            });
            let p1 = p0.add(r, &sigma);
            if self_adjoint_idempotent(&p1) {
                out.push(ProjectorInstance { p0: p0.clone(), p1 });
            }
        }
    }
    Ok(out)
}

impl ProjectorInstance {
    pub fn to_json(&self, r: &FiniteRing) -> Value {
        json!({"p0": self.p0.to_json(r), "p1": self.p1.to_json(r)})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingSpec, SignFlag};

    fn m(r: &FiniteRing, rows: &[&[i64]]) -> Matrix {
        Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r.from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn equal_projectors_give_alpha_one() {
        let caps = Caps::default();
        let r = FiniteRing::new(&RingSpec::zn(4)).unwrap();
        let ideal = SquareZeroIdeal::new(&r, r.from_int(2));
        let p0 = m(&r, &[&[1, 0], &[0, 0]]);
        let (alpha, rep) = projector_conjugator(&r, &p0, &p0, &Mat::identity(&r, 2), &ideal, &caps).unwrap();
        assert!(alpha.is_identity(&r));
        assert!(rep.passed());
    }

    #[test]
    fn z4_example() {
        let caps = Caps::default();
        let r = FiniteRing::new(&RingSpec::zn(4)).unwrap();
        let ideal = SquareZeroIdeal::new(&r, r.from_int(2));
        assert_eq!(ideal.elements.len(), 2);
        let p0 = m(&r, &[&[1, 0], &[0, 0]]);
        let p1 = m(&r, &[&[1, 2], &[2, 0]]);
        let (alpha, rep) = projector_conjugator(&r, &p0, &p1, &Mat::identity(&r, 2), &ideal, &caps).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert!(!alpha.is_identity(&r));
    }

    #[test]
    fn violations_are_reported_individually() {
        let caps = Caps::default();
        let r = FiniteRing::new(&RingSpec::zn(4)).unwrap();
        let ideal = SquareZeroIdeal::new(&r, r.from_int(2));
        let p0 = m(&r, &[&[1, 0], &[0, 0]]);
        let p1 = m(&r, &[&[1, 1], &[0, 0]]);
        let (_, rep) = projector_conjugator(&r, &p0, &p1, &Mat::identity(&r, 2), &ideal, &caps).unwrap();
        let failed: Vec<&str> = rep.failures().iter().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"p1 is self-adjoint"));
        assert!(failed.contains(&"σ = p1 − p0 lies in the ideal"));
        assert!(!failed.contains(&"p1 is idempotent"));
    }

    #[test]
    fn all_instances_in_several_rings() {
        let caps = Caps::default();
        let cases = [
            (RingSpec::zn(4), "2"),
            (RingSpec::zn(9), "3"),
            (RingSpec::dual(RingSpec::fp(3), SignFlag::Minus), "e"),
            (RingSpec::dual(RingSpec::fp(2), SignFlag::Minus), "e"),
        ];
        for (spec, gen) in cases {
            let r = FiniteRing::new(&spec).unwrap();
            let ideal = SquareZeroIdeal::new(&r, r.parse_elem(gen).unwrap());
            assert!(ideal.is_square_zero(&r));
            let hyper = Mat::from_fn(2, 2, |i, j| if i != j { r.one() } else { r.zero() });
            let mut nontrivial = 0;
            for form in [Mat::identity(&r, 2), hyper] {
                let instances = find_projector_instances(&r, &ideal, &form, &caps).unwrap();
                nontrivial += instances.iter().filter(|p| p.p0 != p.p1).count();
                for inst in instances {
                    let (_, rep) = projector_conjugator(&r, &inst.p0, &inst.p1, &form, &ideal, &caps).unwrap();
                    assert!(rep.passed(), "{}: {:?}", r.name(), rep.failures());
                }
            }
            assert!(nontrivial > 0, "{}", r.name());
        }
    }
}
