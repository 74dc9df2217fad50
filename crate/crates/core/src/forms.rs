//! ε-hermitian and ε-quadratic forms on free modules `Aⁿ`.
//!
//! Column-vector conventions throughout: the pairing is `χ(x, y) = x*·φ·y`
//! and a morphism `f` pulls a form back as `f*·φ·f`.

use serde::Serialize;
use serde_json::Value;

use crate::config::Caps;
use crate::error::{malformed, precondition, Error, Result};
use crate::linalg::{solve_linear, Mat, SolveMode};
use crate::ring::{El, FiniteRing, InvolutiveRing, RingSpec};
use crate::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            _ => malformed(format!("epsilon must be 1 or -1, got {v}")),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Epsilon::Minus
    }

    pub fn elem(self, r: &FiniteRing) -> El {
        r.from_int(self.as_i64())
    }

    pub fn times(self, other: Epsilon) -> Epsilon {
        if self == other {
            Epsilon::Plus
        } else {
            Epsilon::Minus
        }
    }

    /// `ε·M`.
    pub fn apply(self, r: &FiniteRing, m: &Matrix) -> Matrix {
        match self {
            Epsilon::Plus => m.clone(),
            Epsilon::Minus => m.neg(r),
        }
    }
}

/// Which of the three categories a form or group lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Max,
    Min,
    El,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Variant::Max),
            "min" => Ok(Variant::Min),
            "el" | "él" => Ok(Variant::El),
            other => malformed(format!("unknown variant {other:?}")),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Max => "max",
            Variant::Min => "min",
            Variant::El => "el",
        }
    }
}

/// `φ` with `φ* = εφ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermForm {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    pub phi: Matrix,
}

/// An explicit `φ₀`; its hermitian form is `φ = φ₀ + εφ₀*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFormEl {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    pub phi0: Matrix,
}

impl HermForm {
    pub fn new(ring: FiniteRing, eps: Epsilon, phi: Matrix) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::Shape(format!("form matrix is {}×{}", phi.rows(), phi.cols())));
        }
        if phi.conj_transpose(&ring) != eps.apply(&ring, &phi) {
            return precondition("φ* ≠ εφ");
        }
        Ok(HermForm { ring, eps, phi })
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn inverse(&self, caps: &Caps) -> Result<Option<Matrix>> {
        self.phi.invert(&self.ring, caps)
    }

    pub fn is_nondegenerate(&self, caps: &Caps) -> Result<bool> {
        Ok(self.inverse(caps)?.is_some())
    }

    pub fn pairing_chi(&self, x: &[El], y: &[El]) -> Result<El> {
        let n = self.rank();
        if x.len() != n || y.len() != n {
            return Err(Error::Shape(format!("vectors of length {} and {} for rank {n}", x.len(), y.len())));
        }
        let r = &self.ring;
        let v = Mat::column(x.to_vec()).conj_transpose(r).mul(r, &self.phi).mul(r, &Mat::column(y.to_vec()));
        Ok(*v.get(0, 0))
    }

    /// `f^adj = φ⁻¹·f*·φ`.
    pub fn adjoint(&self, f: &Matrix, caps: &Caps) -> Result<Matrix> {
        let inv = self.inverse(caps)?.ok_or_else(|| Error::Degenerate("φ is not invertible".into()))?;
        let r = &self.ring;
        Ok(inv.mul(r, &f.conj_transpose(r)).mul(r, &self.phi))
    }
}

impl QuadFormEl {
    pub fn new(ring: FiniteRing, eps: Epsilon, phi0: Matrix) -> Result<Self> {
        if !phi0.is_square() {
            return Err(Error::Shape(format!("form matrix is {}×{}", phi0.rows(), phi0.cols())));
        }
        Ok(QuadFormEl { ring, eps, phi0 })
    }

    /// `H(Aᵐ)`: `φ₀ = [[0, 1], [0, 0]]` in `m×m` blocks.
    pub fn hyperbolic(ring: &FiniteRing, eps: Epsilon, m: usize) -> Self {
        let phi0 = Mat::from_fn(2 * m, 2 * m, |i, j| if i < m && j == i + m { ring.one() } else { ring.zero() });
        QuadFormEl { ring: ring.clone(), eps, phi0 }
    }

    pub fn rank(&self) -> usize {
        self.phi0.rows()
    }

    /// `φ = φ₀ + εφ₀*`.
    pub fn associated_phi(&self) -> Matrix {
        let r = &self.ring;
        self.phi0.add(r, &self.eps.apply(r, &self.phi0.conj_transpose(r)))
    }

    pub fn associated_hermitian(&self) -> HermForm {
        HermForm { ring: self.ring.clone(), eps: self.eps, phi: self.associated_phi() }
    }

    pub fn is_nondegenerate(&self, caps: &Caps) -> Result<bool> {
        self.associated_hermitian().is_nondegenerate(caps)
    }

    pub fn direct_sum(&self, other: &QuadFormEl) -> Result<QuadFormEl> {
        if self.ring != other.ring || self.eps != other.eps {
            return precondition("direct sum of forms over different rings or signs");
        }
        Ok(QuadFormEl { ring: self.ring.clone(), eps: self.eps, phi0: self.phi0.direct_sum(&self.ring, &other.phi0) })
    }

    /// `ψ = φ⁻¹φ₀`, checked to satisfy `ψ + ψ^adj = 1`.
    pub fn psi_normalize(&self, caps: &Caps) -> Result<Matrix> {
        let h = self.associated_hermitian();
        let inv = h.inverse(caps)?.ok_or_else(|| Error::Degenerate("associated φ is not invertible".into()))?;
        let r = &self.ring;
        let psi = inv.mul(r, &self.phi0);
        let adj = inv.mul(r, &psi.conj_transpose(r)).mul(r, &h.phi);
        if !psi.add(r, &adj).is_identity(r) {
            return Err(Error::Precondition("ψ + ψ^adj ≠ 1".into()));
        }
        Ok(psi)
    }

    /// Canonical representative of the class of `φ₀` modulo `γ − εγ*`:
    /// zero below the diagonal, least coset representatives on it.
    pub fn min_canonical(&self) -> Matrix {
        min_canonical(&self.ring, self.eps, &self.phi0)
    }

    /// The pulled-back form `f*·φ₀·f`.
    pub fn pull_back(&self, f: &Matrix) -> QuadFormEl {
        let r = &self.ring;
        QuadFormEl { ring: r.clone(), eps: self.eps, phi0: f.conj_transpose(r).mul(r, &self.phi0).mul(r, f) }
    }
}

pub fn pairing_chi(h: &HermForm, x: &[El], y: &[El]) -> Result<El> {
    h.pairing_chi(x, y)
}

pub fn associated_hermitian(q: &QuadFormEl) -> HermForm {
    q.associated_hermitian()
}

/// Canonical representative of `phi0 + {γ − εγ*}`.
pub fn min_canonical(r: &FiniteRing, eps: Epsilon, phi0: &Matrix) -> Matrix {
    let n = phi0.rows();
    let e = eps.elem(r);
    let tables = r.sign_tables(eps.is_minus());
    let mut out = phi0.clone();
    for i in 0..n {
        for j in 0..i {
            let moved = r.mul(&e, &r.conj(phi0.get(i, j)));
            let v = r.add(out.get(j, i), &moved);
            out.set(j, i, v);
            out.set(i, j, r.zero());
        }
        let d = *out.get(i, i);
        out.set(i, i, tables.coset_rep[d.0 as usize]);
    }
    out
}

/// Some `γ` with `γ − εγ* = d`, or `None` when `d` is not of that shape.
pub fn t_witness(r: &FiniteRing, eps: Epsilon, d: &Matrix) -> Option<Matrix> {
    let n = d.rows();
    let e = eps.elem(r);
    let tables = r.sign_tables(eps.is_minus());
    let mut g = Mat::zeros(r, n, n);
    for i in 0..n {
        g.set(i, i, *tables.lambda_witness.get(d.get(i, i))?);
        for j in i + 1..n {
            // entry (j, i) is forced to be −ε·conj(entry (i, j))
            if *d.get(j, i) != r.neg(&r.mul(&e, &r.conj(d.get(i, j)))) {
                return None;
            }
            g.set(i, j, *d.get(i, j));
        }
    }
    Some(g)
}

/// `γ − εγ*`.
pub fn t_image(r: &FiniteRing, eps: Epsilon, gamma: &Matrix) -> Matrix {
    gamma.sub(r, &eps.apply(r, &gamma.conj_transpose(r)))
}

/// Whether `b.φ₀ − a.φ₀ = γ − εγ*` for some `γ`.
pub fn min_equal(a: &QuadFormEl, b: &QuadFormEl) -> Result<bool> {
    Ok(min_equal_witness(a, b)?.is_some())
}

pub fn min_equal_witness(a: &QuadFormEl, b: &QuadFormEl) -> Result<Option<Matrix>> {
    if a.ring != b.ring || a.eps != b.eps || a.rank() != b.rank() {
        return precondition("min_equal needs the same ring, sign and rank");
    }
    let r = &a.ring;
    Ok(t_witness(r, a.eps, &b.phi0.sub(r, &a.phi0)))
}

/// Some `φ₀` with `φ₀ + εφ₀* = φ`, found by solving the linear system.
pub fn is_even(h: &HermForm, caps: &Caps) -> Result<Option<Matrix>> {
    let r = &h.ring;
    let n = h.rank();
    let eps = h.eps;
    let map = move |x: &Matrix| x.add(r, &eps.apply(r, &x.conj_transpose(r)));
    Ok(solve_linear(r, n, n, &map, &h.phi, SolveMode::First, caps)?.into_iter().next())
}

/// Direct check that `φ` is even: `φ* = εφ` and each diagonal entry is some
/// `a + εā`. Returns the witness with zero lower triangle.
pub(crate) fn even_witness(r: &FiniteRing, eps: Epsilon, phi: &Matrix) -> Option<Matrix> {
    if phi.conj_transpose(r) != eps.apply(r, phi) {
        return None;
    }
    let n = phi.rows();
    // a + εā = a − (−ε)ā, i.e. membership in Λ for the opposite sign.
    let tables = r.sign_tables(!eps.is_minus());
    let mut out = Mat::zeros(r, n, n);
    for i in 0..n {
        out.set(i, i, *tables.lambda_witness.get(phi.get(i, i))?);
        for j in i + 1..n {
            out.set(i, j, *phi.get(i, j));
        }
    }
    Some(out)
}

/// `H(u) = u ⊕ (u*)⁻¹`.
pub fn hyperbolic_map(r: &FiniteRing, u: &Matrix, caps: &Caps) -> Result<Matrix> {
    let inv = u
        .conj_transpose(r)
        .invert(r, caps)?
        .ok_or_else(|| Error::Precondition("hyperbolic_map needs an invertible matrix".into()))?;
    Ok(u.direct_sum(r, &inv))
}

/// `f^adj` for a form in hyperbolic basis, `φ = [[0, 1], [ε, 0]]`:
/// `[[a, b], [c, d]] ↦ [[d*, εb*], [εc*, a*]]`.
pub fn hyperbolic_adjoint(r: &FiniteRing, eps: Epsilon, f: &Matrix) -> Matrix {
    let m = f.rows() / 2;
    let a = f.submatrix(0, 0, m, m);
    let b = f.submatrix(0, m, m, m);
    let c = f.submatrix(m, 0, m, m);
    let d = f.submatrix(m, m, m, m);
    Mat::from_blocks(&[
        vec![d.conj_transpose(r), eps.apply(r, &b.conj_transpose(r))],
        vec![eps.apply(r, &c.conj_transpose(r)), a.conj_transpose(r)],
    ])
    .expect("blocks of equal size")
}

/// A parsed form document: `{"ring":…, "epsilon":1, "variant":"el", "matrix":[[…]]}`.
#[derive(Clone, Debug)]
pub struct FormSpec {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    pub variant: Variant,
    /// `φ` for the max variant, `φ₀` otherwise.
    pub matrix: Matrix,
}

impl FormSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("form JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Malformed("form must be a JSON object".into()))?;
        for key in obj.keys() {
            if !["ring", "epsilon", "variant", "matrix"].contains(&key.as_str()) {
                return malformed(format!("unknown field {key:?} in form"));
            }
        }
        let ring_spec = RingSpec::from_json(obj.get("ring").ok_or_else(|| Error::Malformed("form needs a ring".into()))?)?;
        let ring = FiniteRing::new(&ring_spec)?;
        let eps = match obj.get("epsilon") {
            None => Epsilon::Plus,
            Some(e) => Epsilon::from_i64(e.as_i64().ok_or_else(|| Error::Malformed(format!("bad epsilon {e}")))?)?,
        };
        let variant = match obj.get("variant") {
            None => Variant::El,
            Some(s) => Variant::parse(s.as_str().ok_or_else(|| Error::Malformed(format!("bad variant {s}")))?)?,
        };
        let matrix = Mat::from_json(&ring, obj.get("matrix").ok_or_else(|| Error::Malformed("form needs a matrix".into()))?)?;
        if !matrix.is_square() {
            return Err(Error::Shape("form matrix must be square".into()));
        }
        Ok(FormSpec { ring, eps, variant, matrix })
    }

    pub fn quad(&self) -> Result<QuadFormEl> {
        match self.variant {
            Variant::Max => precondition("a max-variant form has no φ₀"),
            _ => QuadFormEl::new(self.ring.clone(), self.eps, self.matrix.clone()),
        }
    }

    pub fn herm(&self) -> Result<HermForm> {
        match self.variant {
            Variant::Max => HermForm::new(self.ring.clone(), self.eps, self.matrix.clone()),
            _ => Ok(self.quad()?.associated_hermitian()),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "ring": self.ring.spec().to_json(),
            "epsilon": self.eps.as_i64(),
            "variant": self.variant.as_str(),
            "matrix": self.matrix.to_json(&self.ring),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(spec: RingSpec) -> FiniteRing {
        FiniteRing::new(&spec).unwrap()
    }

    fn m(r: &FiniteRing, rows: &[&[i64]]) -> Matrix {
        Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r.from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn hyperbolic_plane_over_f2() {
        let r = ring(RingSpec::fp(2));
        let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
        assert_eq!(q.phi0, m(&r, &[&[0, 1], &[0, 0]]));
        let h = q.associated_hermitian();
        assert_eq!(h.phi, m(&r, &[&[0, 1], &[1, 0]]));
        assert_eq!(h.pairing_chi(&[r.one(), r.zero()], &[r.zero(), r.one()]).unwrap(), r.one());
        assert_eq!(h.pairing_chi(&[r.zero(), r.zero()], &[r.one(), r.one()]).unwrap(), r.zero());
    }

    #[test]
    fn skew_plane_over_z5() {
        let r = ring(RingSpec::zn(5));
        let q = QuadFormEl::hyperbolic(&r, Epsilon::Minus, 1);
        let h = q.associated_hermitian();
        assert_eq!(h.phi, m(&r, &[&[0, 1], &[4, 0]]));
        let e1 = [r.one(), r.zero()];
        let e2 = [r.zero(), r.one()];
        assert_eq!(h.pairing_chi(&e2, &e1).unwrap(), r.from_int(-1));
        assert_eq!(h.pairing_chi(&e1, &e2).unwrap(), r.one());
    }

    #[test]
    fn evenness() {
        let caps = Caps::default();
        let f2 = ring(RingSpec::fp(2));
        let hyp = HermForm::new(f2.clone(), Epsilon::Plus, m(&f2, &[&[0, 1], &[1, 0]])).unwrap();
        let w = is_even(&hyp, &caps).unwrap().unwrap();
        assert_eq!(w.add(&f2, &w.transpose()), hyp.phi);
        let id = HermForm::new(f2.clone(), Epsilon::Plus, m(&f2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(is_even(&id, &caps).unwrap(), None);
        let z3 = ring(RingSpec::zn(3));
        let phi = m(&z3, &[&[1, 2], &[2, 0]]);
        let h = HermForm::new(z3.clone(), Epsilon::Plus, phi.clone()).unwrap();
        let w = is_even(&h, &caps).unwrap().unwrap();
        assert_eq!(w.add(&z3, &w.transpose()), phi);
        let two_phi = phi.scale_left(&z3, &z3.from_int(2));
        assert_eq!(two_phi.add(&z3, &two_phi.transpose()), phi);
    }

    #[test]
    fn min_equal_examples() {
        let r = ring(RingSpec::fp(2));
        let q = |rows: &[&[i64]]| QuadFormEl::new(r.clone(), Epsilon::Plus, m(&r, rows)).unwrap();
        let a = q(&[&[0, 1], &[0, 0]]);
        assert!(min_equal(&a, &a).unwrap());
        assert!(min_equal(&a, &q(&[&[0, 0], &[1, 0]])).unwrap());
        assert!(!min_equal(&a, &q(&[&[1, 1], &[0, 0]])).unwrap());
    }

    #[test]
    fn hyperbolic_map_examples() {
        let caps = Caps::default();
        let z5 = ring(RingSpec::zn(5));
        let g = hyperbolic_map(&z5, &m(&z5, &[&[2]]), &caps).unwrap();
        assert_eq!(g, m(&z5, &[&[2, 0], &[0, 3]]));
        let q = QuadFormEl::hyperbolic(&z5, Epsilon::Plus, 1);
        assert_eq!(q.pull_back(&g).phi0, q.phi0);
    }

    #[test]
    fn psi_normalization() {
        let caps = Caps::default();
        let f2 = ring(RingSpec::fp(2));
        let psi = QuadFormEl::hyperbolic(&f2, Epsilon::Plus, 1).psi_normalize(&caps).unwrap();
        assert_eq!(psi, m(&f2, &[&[0, 0], &[0, 1]]));
        let zero = QuadFormEl::new(f2.clone(), Epsilon::Plus, Mat::zeros(&f2, 2, 2)).unwrap();
        assert!(matches!(zero.psi_normalize(&caps), Err(Error::Degenerate(_))));
    }

    #[test]
    fn hyperbolic_adjoint_matches_generic() {
        let caps = Caps::default();
        let f4 = ring(RingSpec::f4());
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            let h = QuadFormEl::hyperbolic(&f4, eps, 1).associated_hermitian();
            for f in crate::linalg::all_matrices(&f4, 2, 2) {
                assert_eq!(hyperbolic_adjoint(&f4, eps, &f), h.adjoint(&f, &caps).unwrap());
            }
        }
    }
}
