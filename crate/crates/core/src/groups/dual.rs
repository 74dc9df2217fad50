use std::collections::HashSet;

use super::{compose_unchecked, enumerate_group, enumerate_unitary, ElMorphism};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::forms::{HermForm, QuadFormEl, Variant};
use crate::linalg::{all_matrices, Mat};
use crate::report::Report;
use crate::ring::{FiniteRing, InvolutiveRing, RingSpec, SignFlag};
use crate::Matrix;

/// `O^él(E) ≅ O^max(E(e))` over the dual numbers `A(e)`, `ē = −e`, via
/// `(f, γ) ↦ f·(1 + v·e)` with `v = φ⁻¹(γ − λ(f*φ₀f − φ₀))`.
pub fn dual_numbers_iso(q: &QuadFormEl, caps: &Caps) -> Result<Report> {
    let r = &q.ring;
    let lambda = r.split_unit().ok_or_else(|| Error::NoSplitUnit(r.name()))?;
    let n = q.rank();
    let h = q.associated_hermitian();
    let phi_inv = h.inverse(caps)?.ok_or_else(|| Error::Degenerate("associated φ is not invertible".into()))?;
    let d = FiniteRing::new(&RingSpec::dual(r.spec().clone(), SignFlag::Minus))?;
    let e = d.dual_e().expect("dual ring has e");
    let embed = |m: &Matrix| m.map(|&a| d.embed_base(a));
    let h_e = HermForm { ring: d.clone(), eps: q.eps, phi: embed(&h.phi) };

    let mut rep = Report::new("enlarged group over A against unitary group over A(e)");
    rep.value("dual_ring", d.name());

    let oel = enumerate_group(Variant::El, q, caps)?;
    let omax_e = enumerate_unitary(&h_e, caps)?;
    rep.value("order_el", oel.order());
    rep.value("order_max_dual", omax_e.order());

    let image_of = |m: &ElMorphism| -> Matrix {
        let kappa = m.gamma.sub(r, &q.pull_back(&m.f).phi0.sub(r, &q.phi0).scale_left(r, &lambda));
        let v = phi_inv.mul(r, &kappa);
        let one_plus = Mat::identity(&d, n).add(&d, &embed(&v).scale_right(&d, &e));
        embed(&m.f).mul(&d, &one_plus)
    };
    let images: Vec<Matrix> = oel.elements.iter().map(image_of).collect();
    let target = omax_e.matrix_set();
    rep.check("images are unitary over A(e)", images.iter().all(|m| target.contains(m)));
    let distinct: HashSet<&Matrix> = images.iter().collect();
    rep.check("map is injective", distinct.len() == images.len());
    rep.check("|O^el(E)| = |O^max(E(e))|", oel.order() == omax_e.order());
    caps.check("pairs of enlarged group elements", oel.order() as u128 * oel.order() as u128)?;
    let mut hom = true;
    for (a, ia) in oel.elements.iter().zip(&images) {
        for (b, ib) in oel.elements.iter().zip(&images) {
            hom &= image_of(&compose_unchecked(r, a, b)) == ia.mul(&d, ib);
        }
    }
    rep.check("map is a homomorphism", hom);
    rep.check(
        "(f, γ) with γ = λ(f*φ₀f − φ₀) maps to f",
        oel.elements.iter().zip(&images).all(|(m, img)| {
            let section_gamma = q.pull_back(&m.f).phi0.sub(r, &q.phi0).scale_left(r, &lambda);
            m.gamma != section_gamma || *img == embed(&m.f)
        }),
    );

    // 1 + ue is unitary exactly when u is self-adjoint.
    let mut kernel_ok = true;
    let mut self_adjoint = 0usize;
    caps.check("matrices u", crate::config::pow_saturating(r.size() as u128, n * n))?;
    for u in all_matrices(r, n, n) {
        let adj = phi_inv.mul(r, &u.conj_transpose(r)).mul(r, &h.phi);
        let g = Mat::identity(&d, n).add(&d, &embed(&u).scale_right(&d, &e));
        let unitary = g.conj_transpose(&d).mul(&d, &h_e.phi).mul(&d, &g) == h_e.phi;
        kernel_ok &= unitary == (adj == u);
        self_adjoint += usize::from(adj == u);
    }
    rep.check("1 + ue unitary ⟺ u self-adjoint", kernel_ok);
    rep.value("self_adjoint_u", self_adjoint);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Epsilon;

    #[test]
    fn iso_over_f4() {
        let r = FiniteRing::new(&RingSpec::f4()).unwrap();
        let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
        let rep = dual_numbers_iso(&q, &Caps::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.values["order_max_dual"], 288);
    }

    #[test]
    fn needs_split_unit() {
        let r = FiniteRing::new(&RingSpec::fp(2)).unwrap();
        let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
        assert!(matches!(dual_numbers_iso(&q, &Caps::default()), Err(Error::NoSplitUnit(_))));
    }
}
