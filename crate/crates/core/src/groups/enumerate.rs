use std::collections::{HashMap, HashSet};

use serde_json::json;

use super::{check_el, check_min, compose_unchecked, ElMorphism};
use crate::config::{pow_saturating, Caps};
use crate::error::{Error, Result};
use crate::forms::{t_witness, HermForm, QuadFormEl, Variant};
use crate::linalg::{solve_linear, vectors, Mat, SolveMode};
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::Matrix;

/// All elements of one of the three groups of a form, sorted.
///
/// For the `max` variant `gamma` is zero; for `min` it is the canonical
/// witness of membership; for `el` every admissible `γ` appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedGroup {
    pub variant: Variant,
    pub rank: usize,
    pub elements: Vec<ElMorphism>,
}

impl EnumeratedGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.elements.iter().map(|e| e.f.clone()).collect()
    }

    pub fn matrix_set(&self) -> HashSet<Matrix> {
        self.elements.iter().map(|e| e.f.clone()).collect()
    }

    /// Identity, closure and inverses, checked exhaustively.
    pub fn verify_axioms(&self, r: &FiniteRing, caps: &Caps) -> Result<Report> {
        let mut rep = Report::new(format!("{} group axioms", self.variant.as_str()));
        let n = self.order() as u128;
        caps.check("pairs of group elements", n * n)?;
        let id = ElMorphism::identity(r, self.rank);
        let product = |a: &ElMorphism, b: &ElMorphism| match self.variant {
            Variant::El => compose_unchecked(r, a, b),
            _ => ElMorphism { f: a.f.mul(r, &b.f), gamma: Mat::zeros(r, self.rank, self.rank) },
        };
        let key = |e: &ElMorphism| match self.variant {
            Variant::El => e.clone(),
            _ => ElMorphism { f: e.f.clone(), gamma: Mat::zeros(r, self.rank, self.rank) },
        };
        let set: HashSet<ElMorphism> = self.elements.iter().map(key).collect();
        rep.check("contains the identity", set.contains(&id));
        let mut closed = true;
        let mut inverses = true;
        for a in &self.elements {
            let mut has_inverse = false;
            for b in &self.elements {
                let p = product(a, b);
                if !set.contains(&p) {
                    closed = false;
                }
                if p == id {
                    has_inverse = true;
                }
            }
            inverses &= has_inverse;
        }
        rep.check("closed under composition", closed);
        rep.check("every element has an inverse", inverses);
        rep.value("order", self.order());
        Ok(rep)
    }
}

/// Column-by-column search for all `f` with `f*·φ·f = φ`, optionally also
/// requiring `f ∈ O^min` of the explicit form `q`.
fn search(h: &HermForm, quad: Option<&QuadFormEl>, caps: &Caps) -> Result<Vec<Matrix>> {
    let r = &h.ring;
    let n = h.rank();
    if n == 0 {
        return Ok(vec![Mat::zeros(r, 0, 0)]);
    }
    caps.check("candidate columns", pow_saturating(r.size() as u128, n))?;
    let vecs: Vec<Vec<El>> = vectors(r, n).collect();
    let conj_vecs: Vec<Vec<El>> = vecs.iter().map(|v| v.iter().map(|a| r.conj(a)).collect()).collect();
    let images: Vec<Vec<El>> = vecs.iter().map(|v| h.phi.mul(r, &Mat::column(v.clone())).entries().to_vec()).collect();
    let dot = |cv: &[El], w: &[El]| cv.iter().zip(w).fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b)));
    let lambda_tables = quad.map(|q| r.sign_tables(q.eps.is_minus()));
    // Candidates for column k: χ(v, v) = φ_kk, plus the diagonal quadratic condition.
    let per_column: Vec<Vec<usize>> = (0..n)
        .map(|k| {
            (0..vecs.len())
                .filter(|&v| dot(&conj_vecs[v], &images[v]) == *h.phi.get(k, k))
                .filter(|&v| match (quad, &lambda_tables) {
                    (Some(q), Some(t)) => {
                        let col = Mat::column(vecs[v].clone());
                        let val = *col.conj_transpose(r).mul(r, &q.phi0).mul(r, &col).get(0, 0);
                        t.lambda_witness.contains_key(&r.sub(&val, q.phi0.get(k, k)))
                    }
                    _ => true,
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        k: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        per_column: &[Vec<usize>],
        ok: &dyn Fn(&[usize], usize, usize) -> bool,
        limit: u128,
    ) -> bool {
        if k == n {
            out.push(chosen.clone());
            return (out.len() as u128) <= limit;
        }
        for &v in &per_column[k] {
            if ok(chosen, k, v) {
                chosen.push(v);
                let within = rec(k + 1, n, chosen, out, per_column, ok, limit);
                chosen.pop();
                if !within {
                    return false;
                }
            }
        }
        true
    }
    let ok = |chosen: &[usize], k: usize, v: usize| {
        chosen.iter().enumerate().all(|(i, &c)| dot(&conj_vecs[c], &images[v]) == *h.phi.get(i, k))
    };
    let mut raw = Vec::new();
    if !rec(0, n, &mut chosen, &mut raw, &per_column, &ok, caps.candidates) {
        return Err(Error::CapExceeded { what: "group elements".into(), needed: caps.candidates + 1, cap: caps.candidates });
    }
    for cols in raw {
        out.push(Mat::from_fn(n, n, |i, j| vecs[cols[j]][i]));
    }
    out.sort();
    Ok(out)
}

/// `O^max(φ)` for an arbitrary hermitian form.
pub fn enumerate_unitary(h: &HermForm, caps: &Caps) -> Result<EnumeratedGroup> {
    let r = &h.ring;
    let n = h.rank();
    let elements =
        search(h, None, caps)?.into_iter().map(|f| ElMorphism { f, gamma: Mat::zeros(r, n, n) }).collect();
    Ok(EnumeratedGroup { variant: Variant::Max, rank: n, elements })
}

/// `S(E) = {γ : γ* = εγ}`, by solving `γ − εγ* = 0`.
pub fn s_group(q: &QuadFormEl, caps: &Caps) -> Result<Vec<Matrix>> {
    let r = &q.ring;
    let n = q.rank();
    let eps = q.eps;
    let map = move |g: &Matrix| crate::forms::t_image(r, eps, g);
    solve_linear(r, n, n, &map, &Mat::zeros(r, n, n), SolveMode::All, caps)
}

/// The group of the requested variant; `max` uses the associated `φ`.
pub fn enumerate_group(variant: Variant, q: &QuadFormEl, caps: &Caps) -> Result<EnumeratedGroup> {
    let r = &q.ring;
    let n = q.rank();
    let h = q.associated_hermitian();
    match variant {
        Variant::Max => enumerate_unitary(&h, caps),
        Variant::Min => {
            let elements = search(&h, Some(q), caps)?
                .into_iter()
                .map(|f| {
                    let gamma = check_min(&f, q)?.ok_or_else(|| Error::Precondition("search returned a non-member".into()))?;
                    Ok(ElMorphism { f, gamma })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(EnumeratedGroup { variant, rank: n, elements })
        }
        Variant::El => {
            let s = s_group(q, caps)?;
            let base = search(&h, Some(q), caps)?;
            caps.check("enlarged group elements", base.len() as u128 * s.len() as u128)?;
            let mut elements = Vec::with_capacity(base.len() * s.len());
            for f in base {
                let d = q.pull_back(&f).phi0.sub(r, &q.phi0);
                let g0 = t_witness(r, q.eps, &d).ok_or_else(|| Error::Precondition("search returned a non-member".into()))?;
                for s in &s {
                    elements.push(ElMorphism { f: f.clone(), gamma: g0.add(r, s) });
                }
            }
            elements.sort();
            Ok(EnumeratedGroup { variant, rank: n, elements })
        }
    }
}

/// `1 → S(E) → O^él → O^min → 1`: surjectivity and homomorphism of the
/// projection, the kernel, the order product, and the conjugation action
/// of `O^él` on the kernel.
pub fn extension_check(q: &QuadFormEl, caps: &Caps) -> Result<Report> {
    let r = &q.ring;
    let n = q.rank();
    let mut rep = Report::new("extension S(E) → O^el → O^min");
    let omin = enumerate_group(Variant::Min, q, caps)?;
    let oel = enumerate_group(Variant::El, q, caps)?;
    let s = s_group(q, caps)?;
    rep.value("order_s", s.len());
    rep.value("order_min", omin.order());
    rep.value("order_el", oel.order());
    rep.check("enlarged group elements satisfy (S)", oel.elements.iter().all(|m| check_el(m, q).unwrap_or(false)));
    rep.absorb("O^el", oel.verify_axioms(r, caps)?);
    rep.absorb("O^min", omin.verify_axioms(r, caps)?);
    let image: HashSet<Matrix> = oel.matrix_set();
    rep.check("projection is onto O^min", image == omin.matrix_set());
    let pairs = oel.order() as u128 * oel.order() as u128;
    caps.check("pairs of enlarged group elements", pairs)?;
    let hom = oel
        .elements
        .iter()
        .all(|a| oel.elements.iter().all(|b| compose_unchecked(r, a, b).f == a.f.mul(r, &b.f)));
    rep.check("projection is a homomorphism", hom);
    let id = Mat::identity(r, n);
    let kernel: Vec<&ElMorphism> = oel.elements.iter().filter(|e| e.f == id).collect();
    let kernel_gammas: HashSet<Matrix> = kernel.iter().map(|e| e.gamma.clone()).collect();
    let s_set: HashSet<Matrix> = s.iter().cloned().collect();
    rep.check("kernel is {(1, γ) : γ* = εγ}", kernel_gammas == s_set);
    rep.check("|O^el| = |S(E)|·|O^min|", oel.order() == s.len() * omin.order());
    // (g, ζ)⁻¹ (1, γ) (g, ζ) = (1, g*γg), i.e. u ↦ g⁻¹ug on u = φ⁻¹γ.
    let h = q.associated_hermitian();
    let action = match h.inverse(caps)? {
        None => {
            rep.check_with("conjugation action on the kernel", false, "associated φ is degenerate");
            return Ok(rep);
        }
        Some(phi_inv) => {
            let mut ok = true;
            let inverses: HashMap<&ElMorphism, ElMorphism> = oel
                .elements
                .iter()
                .map(|a| Ok((a, super::inverse_el(q, a, caps)?)))
                .collect::<Result<_>>()?;
            for a in &oel.elements {
                let g_inv = &inverses[a].f;
                for k in &kernel {
                    let conj = compose_unchecked(r, &compose_unchecked(r, &inverses[a], k), a);
                    let expected = a.f.conj_transpose(r).mul(r, &k.gamma).mul(r, &a.f);
                    let u = phi_inv.mul(r, &k.gamma);
                    let u_moved = phi_inv.mul(r, &conj.gamma);
                    ok &= conj.f == id && conj.gamma == expected && u_moved == g_inv.mul(r, &u).mul(r, &a.f);
                }
            }
            ok
        }
    };
    rep.check("conjugation on the kernel is u ↦ g⁻¹ug", action);
    Ok(rep)
}

/// `s(g) = (g, λ(g*φ₀g − φ₀))`.
pub fn split_section(g: &Matrix, q: &QuadFormEl, lambda: El) -> Result<ElMorphism> {
    let r = &q.ring;
    if !r.is_split_unit(lambda) {
        return Err(Error::NoSplitUnit(format!("{} is not a split unit of {}", r.format_elem(lambda), r.name())));
    }
    if check_min(g, q)?.is_none() {
        return Err(Error::Precondition("g is not in O^min".into()));
    }
    let d = q.pull_back(g).phi0.sub(r, &q.phi0);
    Ok(ElMorphism { f: g.clone(), gamma: d.scale_left(r, &lambda) })
}

/// The section is a homomorphism splitting the projection, and it carries
/// the kernel action to `γ ↦ g*γg`.
pub fn section_check(q: &QuadFormEl, caps: &Caps) -> Result<Report> {
    let r = &q.ring;
    let lambda = r.split_unit().ok_or_else(|| Error::NoSplitUnit(r.name()))?;
    let mut rep = Report::new("split section");
    rep.value("lambda", r.format_elem(lambda));
    let omin = enumerate_group(Variant::Min, q, caps)?;
    caps.check("pairs of group elements", omin.order() as u128 * omin.order() as u128)?;
    let sections: Vec<ElMorphism> =
        omin.elements.iter().map(|g| split_section(&g.f, q, lambda)).collect::<Result<_>>()?;
    rep.check("s(g) satisfies (S)", sections.iter().all(|s| check_el(s, q).unwrap_or(false)));
    rep.check("projection ∘ s = id", sections.iter().zip(&omin.elements).all(|(s, g)| s.f == g.f));
    let n = q.rank();
    rep.check("s(1) = (1, 0)", split_section(&Mat::identity(r, n), q, lambda)? == ElMorphism::identity(r, n));
    let mut hom = true;
    for (a, sa) in omin.elements.iter().zip(&sections) {
        for (b, sb) in omin.elements.iter().zip(&sections) {
            hom &= split_section(&a.f.mul(r, &b.f), q, lambda)? == compose_unchecked(r, sa, sb);
        }
    }
    rep.check("s(gh) = s(g)·s(h)", hom);
    let s = s_group(q, caps)?;
    let mut action = true;
    for sg in &sections {
        let inv = super::inverse_el(q, sg, caps)?;
        for gamma in &s {
            let k = ElMorphism { f: Mat::identity(r, n), gamma: gamma.clone() };
            let conj = compose_unchecked(r, &compose_unchecked(r, &inv, &k), sg);
            action &= conj.gamma == sg.f.conj_transpose(r).mul(r, gamma).mul(r, &sg.f);
        }
    }
    rep.check("s(g)⁻¹(1, γ)s(g) = (1, g*γg)", action);
    rep.value("order_min", omin.order());
    rep.value("generators_checked", json!(sections.len()));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Epsilon;
    use crate::linalg::all_matrices;
    use crate::ring::RingSpec;

    fn hyp(spec: RingSpec, m: usize) -> QuadFormEl {
        QuadFormEl::hyperbolic(&FiniteRing::new(&spec).unwrap(), Epsilon::Plus, m)
    }

    #[test]
    fn orders_over_f2() {
        let caps = Caps::default();
        let q = hyp(RingSpec::fp(2), 1);
        assert_eq!(enumerate_group(Variant::Min, &q, &caps).unwrap().order(), 2);
        assert_eq!(s_group(&q, &caps).unwrap().len(), 8);
        assert_eq!(enumerate_group(Variant::El, &q, &caps).unwrap().order(), 16);
        // φ is alternating over F2, so O^max is Sp₂(F2) = GL₂(F2)
        assert_eq!(enumerate_group(Variant::Max, &q, &caps).unwrap().order(), 6);
    }

    #[test]
    fn enlarged_group_matches_brute_force() {
        let caps = Caps::default();
        let q = hyp(RingSpec::fp(2), 1);
        let r = q.ring.clone();
        let mut brute = Vec::new();
        for f in all_matrices(&r, 2, 2) {
            if f.invert(&r, &caps).unwrap().is_none() {
                continue;
            }
            for gamma in all_matrices(&r, 2, 2) {
                let m = ElMorphism { f: f.clone(), gamma };
                if check_el(&m, &q).unwrap() {
                    brute.push(m);
                }
            }
        }
        brute.sort();
        assert_eq!(brute, enumerate_group(Variant::El, &q, &caps).unwrap().elements);
    }

    #[test]
    fn min_matches_brute_force_over_f4() {
        let caps = Caps::default();
        let q = hyp(RingSpec::f4(), 1);
        let r = q.ring.clone();
        let brute: Vec<Matrix> = all_matrices(&r, 2, 2)
            .filter(|f| f.invert(&r, &caps).unwrap().is_some() && check_min(f, &q).unwrap().is_some())
            .collect();
        assert_eq!(brute, enumerate_group(Variant::Min, &q, &caps).unwrap().matrices());
        assert_eq!(brute.len(), 18);
    }

    #[test]
    fn extension_over_f2_and_f4() {
        let caps = Caps::default();
        let rep = extension_check(&hyp(RingSpec::fp(2), 1), &caps).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.values["order_el"], 16);
        let rep = extension_check(&hyp(RingSpec::f4(), 1), &caps).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.values["order_el"], 288);
    }

    #[test]
    fn rank_zero_extension_is_trivial() {
        let caps = Caps::default();
        let rep = extension_check(&hyp(RingSpec::fp(2), 0), &caps).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.values["order_el"], 1);
    }

    #[test]
    fn section_over_f4_and_missing_over_f2() {
        let caps = Caps::default();
        let rep = section_check(&hyp(RingSpec::f4(), 1), &caps).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        let q = hyp(RingSpec::fp(2), 1);
        assert!(matches!(section_check(&q, &caps), Err(Error::NoSplitUnit(_))));
        let id = Mat::identity(&q.ring, 2);
        assert!(matches!(split_section(&id, &q, q.ring.one()), Err(Error::NoSplitUnit(_))));
    }
}
