//! Unitary, orthogonal and enlarged orthogonal groups of small forms.
//!
//! A morphism of explicit quadratic forms is a pair `(f, γ)` with
//! `f*·φ₀·f = φ₀ + γ − εγ*`; pairs compose as
//! `(f, γ)·(g, ζ) = (fg, ζ + g*γg)`.

mod dual;
mod enumerate;
mod whitehead;

pub use dual::dual_numbers_iso;
pub use enumerate::{
    enumerate_group, enumerate_unitary, extension_check, s_group, section_check, split_section, EnumeratedGroup,
};
pub use whitehead::{random_invertible, whitehead_factorization, whitehead_random};

use serde_json::{json, Value};

use crate::error::{precondition, Error, Result};
use crate::forms::{t_image, t_witness, HermForm, QuadFormEl};
use crate::ring::FiniteRing;
use crate::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElMorphism {
    pub f: Matrix,
    pub gamma: Matrix,
}

impl ElMorphism {
    pub fn identity(r: &FiniteRing, n: usize) -> Self {
        ElMorphism { f: Matrix::identity(r, n), gamma: Matrix::zeros(r, n, n) }
    }

    pub fn to_json(&self, r: &FiniteRing) -> Value {
        json!({"f": self.f.to_json(r), "gamma": self.gamma.to_json(r)})
    }
}

fn check_shape(f: &Matrix, n: usize) -> Result<()> {
    if f.rows() != n || f.cols() != n {
        return Err(Error::Shape(format!("expected a {n}×{n} matrix, got {}×{}", f.rows(), f.cols())));
    }
    Ok(())
}

/// `f*·φ·f = φ`.
pub fn check_max(f: &Matrix, h: &HermForm) -> Result<bool> {
    check_shape(f, h.rank())?;
    let r = &h.ring;
    Ok(f.conj_transpose(r).mul(r, &h.phi).mul(r, f) == h.phi)
}

/// A witness `γ` with `f*·φ₀·f = φ₀ + γ − εγ*`, if any.
pub fn check_min(f: &Matrix, q: &QuadFormEl) -> Result<Option<Matrix>> {
    check_shape(f, q.rank())?;
    let r = &q.ring;
    let d = q.pull_back(f).phi0.sub(r, &q.phi0);
    Ok(t_witness(r, q.eps, &d))
}

/// Identity (S) for the pair `(f, γ)`.
pub fn check_el(m: &ElMorphism, q: &QuadFormEl) -> Result<bool> {
    check_shape(&m.f, q.rank())?;
    check_shape(&m.gamma, q.rank())?;
    let r = &q.ring;
    let lhs = q.pull_back(&m.f).phi0;
    Ok(lhs == q.phi0.add(r, &t_image(r, q.eps, &m.gamma)))
}

/// `(f, γ)·(g, ζ) = (fg, ζ + g*γg)`, after checking both factors.
pub fn compose_el(q: &QuadFormEl, a: &ElMorphism, b: &ElMorphism) -> Result<ElMorphism> {
    if !check_el(a, q)? || !check_el(b, q)? {
        return precondition("compose_el needs two morphisms of the form");
    }
    Ok(compose_unchecked(&q.ring, a, b))
}

pub(crate) fn compose_unchecked(r: &FiniteRing, a: &ElMorphism, b: &ElMorphism) -> ElMorphism {
    let pulled = b.f.conj_transpose(r).mul(r, &a.gamma).mul(r, &b.f);
    ElMorphism { f: a.f.mul(r, &b.f), gamma: b.gamma.add(r, &pulled) }
}

/// `(f, γ)⁻¹ = (f⁻¹, −(f⁻¹)*·γ·f⁻¹)`.
pub fn inverse_el(q: &QuadFormEl, a: &ElMorphism, caps: &crate::Caps) -> Result<ElMorphism> {
    let r = &q.ring;
    let inv = a.f.invert(r, caps)?.ok_or_else(|| Error::Precondition("f is not invertible".into()))?;
    let gamma = inv.conj_transpose(r).mul(r, &a.gamma).mul(r, &inv).neg(r);
    Ok(ElMorphism { f: inv, gamma })
}
