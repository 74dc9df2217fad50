//! Polynomial quadratic forms over `A[s]` (`s̄ = 1 − s`), the Clauwens
//! cup-product `κ = Σ θₙ ⊗ δⁿ`, and executable forms of the lemmas used to
//! reduce it to the linear case.
//!
//! Concretely, a quadratic datum is a nondegenerate η-quadratic `δ` on `Aᵐ`
//! with associated η-hermitian `Δ = δ + ηδ*` and `φ = Δ⁻¹δ`, so that
//! `φ + φ† = 1` for the adjoint `X† = Δ⁻¹X*Δ`. The cup-product is the
//! εη-quadratic form `κ = Σ θₙ ⊗ Δφⁿ` on `Aⁿ ⊗ Aᵐ` (Kronecker product, left
//! index major). Only commutative base rings are supported.

mod lemma4;
mod linearize;
mod projectors;
mod sqrt;

pub use lemma4::{lemma4_recursion, Lemma4Outcome, Lemma4Step};
pub use linearize::{linearize, linearization_soundness, Linearization, TranscriptStep};
pub use projectors::{find_projector_instances, projector_conjugator, ProjectorInstance, SquareZeroIdeal};
pub use sqrt::{sqrt_check, sqrt_one_plus_nu_t, SquareRoot};

use serde_json::{json, Value};

use crate::config::Caps;
use crate::error::{malformed, precondition, Error, Result};
use crate::forms::{min_equal_witness, Epsilon, QuadFormEl};
use crate::linalg::{det, is_invertible_commutative, Mat};
use crate::report::Report;
use crate::ring::{FiniteRing, InvolutiveRing, PolyRing, RingSpec};
use crate::Matrix;

/// A matrix over `A[s]`.
pub type PolyMatrix = Mat<Vec<crate::El>>;

fn require_commutative(r: &FiniteRing) -> Result<()> {
    if r.is_commutative() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("the cup-product needs a commutative ring, {} is not", r.name())))
    }
}

/// `Σ cₖ sᵏ` as a matrix of polynomials.
pub fn to_poly_matrix(pr: &PolyRing, coeffs: &[Matrix]) -> PolyMatrix {
    let (rows, cols) = (coeffs[0].rows(), coeffs[0].cols());
    Mat::from_fn(rows, cols, |i, j| {
        coeffs.iter().enumerate().fold(pr.zero(), |acc, (k, c)| pr.add(&acc, &pr.monomial(*c.get(i, j), k)))
    })
}

/// Coefficient matrices of a polynomial matrix, at least one.
pub fn coefficients(pr: &PolyRing, m: &PolyMatrix) -> Vec<Matrix> {
    let len = m.entries().iter().map(|p| p.len()).max().unwrap_or(0).max(1);
    (0..len).map(|k| Mat::from_fn(m.rows(), m.cols(), |i, j| pr.coeff(m.get(i, j), k))).collect()
}

/// `Σ cₖ ⊗ Xₖ` with `X₀ = base`, `Xₖ₊₁ = Xₖ·φ`.
fn substitute(r: &FiniteRing, coeffs: &[Matrix], base: &Matrix, phi: &Matrix) -> Matrix {
    let mut x = base.clone();
    let mut acc = Mat::zeros(r, coeffs[0].rows() * base.rows(), coeffs[0].cols() * base.cols());
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            x = x.mul(r, phi);
        }
        if !c.is_zero(r) {
            acc = acc.add(r, &c.kronecker(r, &x));
        }
    }
    acc
}

/// `P(φ) = Σ Pₖ ⊗ φᵏ`.
pub fn evaluate_at(r: &FiniteRing, pr: &PolyRing, p: &PolyMatrix, phi: &Matrix) -> Matrix {
    substitute(r, &coefficients(pr, p), &Mat::identity(r, phi.rows()), phi)
}

pub fn poly_matrix_json(pr: &PolyRing, m: &PolyMatrix) -> Value {
    let r = pr.base();
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter().map(|p| Value::Array(p.iter().map(|c| Value::String(r.format_elem(*c))).collect())).collect(),
                )
            })
            .collect(),
    )
}

/// `θ = Σ θₙ sⁿ`, an ε-quadratic form over `A[s]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyQuadForm {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    /// `θ₀, …, θ_N` without trailing zero coefficients (except `θ = 0`).
    pub coeffs: Vec<Matrix>,
}

impl PolyQuadForm {
    pub fn new(ring: FiniteRing, eps: Epsilon, coeffs: Vec<Matrix>) -> Result<Self> {
        let Some(first) = coeffs.first() else { return malformed("a polynomial form needs at least one coefficient") };
        let n = first.rows();
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(Error::Shape("coefficients must be square of one size".into()));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero(&ring)) {
            coeffs.pop();
        }
        Ok(PolyQuadForm { ring, eps, coeffs })
    }

    pub fn from_poly_matrix(ring: FiniteRing, eps: Epsilon, m: &PolyMatrix) -> Result<Self> {
        let pr = PolyRing::s(ring.clone());
        Self::new(ring, eps, coefficients(&pr, m))
    }

    /// `θ = g·s`.
    pub fn linear(ring: &FiniteRing, eps: Epsilon, g: Matrix) -> Self {
        let zero = Mat::zeros(ring, g.rows(), g.cols());
        Self::new(ring.clone(), eps, vec![zero, g]).expect("square")
    }

    /// `[[0, 1], [0, 0]]` in `n×n` blocks, constant in `s`.
    pub fn hyperbolic(ring: &FiniteRing, eps: Epsilon, n: usize) -> Self {
        Self::new(ring.clone(), eps, vec![QuadFormEl::hyperbolic(ring, eps, n).phi0]).expect("square")
    }

    pub fn rank(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Matrix {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Mat::zeros(&self.ring, self.rank(), self.rank()))
    }

    pub fn poly_ring(&self) -> PolyRing {
        PolyRing::s(self.ring.clone())
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix {
        to_poly_matrix(&self.poly_ring(), &self.coeffs)
    }

    pub fn direct_sum(&self, other: &PolyQuadForm) -> Result<PolyQuadForm> {
        if self.ring != other.ring || self.eps != other.eps {
            return precondition("direct sum of polynomial forms over different rings or signs");
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).direct_sum(&self.ring, &other.coeff(k))).collect();
        Self::new(self.ring.clone(), self.eps, coeffs)
    }

    /// `H(s) = θ + εθ*`, with `s̄ = 1 − s` in the conjugate.
    pub fn hermitian(&self) -> PolyMatrix {
        let pr = self.poly_ring();
        let m = self.to_poly_matrix();
        let e = pr.from_int(self.eps.as_i64());
        m.add(&pr, &m.conj_transpose(&pr).scale_left(&pr, &e))
    }

    /// `H(s)` is invertible over `A[s]`: its determinant is a unit.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        require_commutative(&self.ring)?;
        let pr = self.poly_ring();
        Ok(pr.unit_inverse(&det(&pr, &self.hermitian())).is_some())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.spec().to_json(),
            "epsilon": self.eps.as_i64(),
            "coefficients": self.coeffs.iter().map(|c| c.to_json(&self.ring)).collect::<Vec<_>>(),
        })
    }

    /// `{"ring":…, "epsilon":1, "coefficients":[θ₀, θ₁, …]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Malformed("polynomial form must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| !["ring", "epsilon", "coefficients"].contains(&k.as_str())) {
            return malformed(format!("unknown field {k:?} in polynomial form"));
        }
        let spec = RingSpec::from_json(obj.get("ring").ok_or_else(|| Error::Malformed("missing ring".into()))?)?;
        let ring = FiniteRing::new(&spec)?;
        let eps = Epsilon::from_i64(obj.get("epsilon").and_then(Value::as_i64).unwrap_or(1))?;
        let coeffs = obj
            .get("coefficients")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("missing coefficients array".into()))?
            .iter()
            .map(|c| Mat::from_json(&ring, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, eps, coeffs)
    }
}

/// A quadratic datum `δ` with `Δ = δ + ηδ*` and `φ = Δ⁻¹δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaDatum {
    pub form: QuadFormEl,
    pub delta: Matrix,
    pub delta_inv: Matrix,
    pub phi: Matrix,
}

impl DeltaDatum {
    pub fn new(form: QuadFormEl, caps: &Caps) -> Result<Self> {
        require_commutative(&form.ring)?;
        let h = form.associated_hermitian();
        let delta_inv = h.inverse(caps)?.ok_or_else(|| Error::Degenerate("δ + ηδ* is not invertible".into()))?;
        let phi = form.psi_normalize(caps)?;
        Ok(DeltaDatum { delta: h.phi, delta_inv, phi, form })
    }

    pub fn eta(&self) -> Epsilon {
        self.form.eps
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    /// `X† = Δ⁻¹X*Δ`.
    pub fn dagger(&self, x: &Matrix) -> Matrix {
        let r = &self.form.ring;
        self.delta_inv.mul(r, &x.conj_transpose(r)).mul(r, &self.delta)
    }

    /// Every nondegenerate η-quadratic `δ` on `Aᵐ`.
    pub fn all(r: &FiniteRing, eta: Epsilon, m: usize, caps: &Caps) -> Result<Vec<DeltaDatum>> {
        caps.check("δ-data", crate::config::pow_saturating(r.size() as u128, m * m))?;
        let mut out = Vec::new();
        for phi0 in crate::linalg::all_matrices(r, m, m) {
            let q = QuadFormEl::new(r.clone(), eta, phi0)?;
            if q.is_nondegenerate(caps)? {
                out.push(DeltaDatum::new(q, caps)?);
            }
        }
        Ok(out)
    }
}

/// `Σ cₖ ⊗ Δφᵏ`, the cup-product of a coefficient list with a datum.
pub fn kappa_matrix(coeffs: &[Matrix], d: &DeltaDatum) -> Matrix {
    substitute(&d.form.ring, coeffs, &d.delta, &d.phi)
}

fn same_ring(theta: &PolyQuadForm, d: &DeltaDatum) -> Result<()> {
    if theta.ring != d.form.ring {
        return precondition("θ and δ live over different rings");
    }
    require_commutative(&theta.ring)
}

/// `κ = Σ θₙ ⊗ Δφⁿ`, an εη-quadratic form of rank `n·m`.
pub fn cup_product(theta: &PolyQuadForm, d: &DeltaDatum) -> Result<QuadFormEl> {
    same_ring(theta, d)?;
    if !theta.is_nondegenerate()? {
        return Err(Error::Degenerate("θ + εθ* is not invertible over A[s]".into()));
    }
    cup_product_unchecked(theta, d)
}

/// [`cup_product`] without the nondegeneracy precondition.
pub fn cup_product_unchecked(theta: &PolyQuadForm, d: &DeltaDatum) -> Result<QuadFormEl> {
    same_ring(theta, d)?;
    QuadFormEl::new(theta.ring.clone(), theta.eps.times(d.eta()), kappa_matrix(&theta.coeffs, d))
}

/// Whether `κ + εηκ*` is invertible.
pub fn kappa_nondegenerate(theta: &PolyQuadForm, d: &DeltaDatum) -> Result<bool> {
    let k = cup_product_unchecked(theta, d)?;
    Ok(is_invertible_commutative(&k.ring, &k.associated_phi()))
}

/// `(1 ⊗ Δ)·H(φ)`, where `H(s) = θ + εθ*` is substituted coefficientwise.
pub fn hermitian_at(theta: &PolyQuadForm, d: &DeltaDatum) -> Matrix {
    let r = &theta.ring;
    let h = coefficients(&theta.poly_ring(), &theta.hermitian());
    let one_delta = Mat::identity(r, theta.rank()).kronecker(r, &d.delta);
    one_delta.mul(r, &substitute(r, &h, &Mat::identity(r, d.rank()), &d.phi))
}

/// Nondegeneracy of `κ` together with the two ways of computing `κ + εηκ*`.
pub fn lemma1_check(theta: &PolyQuadForm, d: &DeltaDatum) -> Result<Report> {
    let k = cup_product_unchecked(theta, d)?;
    let r = &theta.ring;
    let direct = k.associated_phi();
    let mut rep = Report::new("κ + εηκ* is invertible");
    let h_unit = theta.is_nondegenerate()?;
    rep.value("theta_nondegenerate", h_unit);
    rep.check("κ + εηκ* = (1 ⊗ Δ)·H(φ)", direct == hermitian_at(theta, d));
    let inv = is_invertible_commutative(r, &direct);
    if h_unit {
        rep.check("κ + εηκ* is invertible", inv);
    } else {
        rep.value("kappa_nondegenerate", inv);
    }
    Ok(rep)
}

/// `θ' = θ + Z − εZ*` for `Z = Σ σₙ sⁿ`.
pub fn lemma2_shift(theta: &PolyQuadForm, z: &[Matrix]) -> Result<PolyQuadForm> {
    if z.is_empty() || z.iter().any(|c| c.rows() != theta.rank() || c.cols() != theta.rank()) {
        return Err(Error::Shape("Z must have square coefficients of the rank of θ".into()));
    }
    let pr = theta.poly_ring();
    let zm = to_poly_matrix(&pr, z);
    let e = pr.from_int(theta.eps.as_i64());
    let shifted = theta.to_poly_matrix().add(&pr, &zm).sub(&pr, &zm.conj_transpose(&pr).scale_left(&pr, &e));
    PolyQuadForm::from_poly_matrix(theta.ring.clone(), theta.eps, &shifted)
}

/// Checks `κ' = κ + Γ − εηΓ*` with `Γ = Σ σₙ ⊗ Δφⁿ`, hence `κ ~ κ'`.
pub fn lemma2_check(theta: &PolyQuadForm, z: &[Matrix], d: &DeltaDatum) -> Result<Report> {
    let shifted = lemma2_shift(theta, z)?;
    let k = cup_product_unchecked(theta, d)?;
    let k2 = cup_product_unchecked(&shifted, d)?;
    let r = &theta.ring;
    let gamma = kappa_matrix(z, d);
    let expected = k.phi0.add(r, &crate::forms::t_image(r, k.eps, &gamma));
    let mut rep = Report::new("Z − εZ* shifts κ by Γ − εηΓ*");
    rep.check("κ' = κ + Γ − εηΓ*", k2.phi0 == expected);
    rep.check("κ and κ' are min-equal", min_equal_witness(&k, &k2)?.is_some());
    Ok(rep)
}

/// `g` with `g* = εg(1 + N)`, `N` nilpotent.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostHermitian {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    pub g: Matrix,
    pub n: Matrix,
    /// Least `k` with `Nᵏ = 0`.
    pub index: usize,
}

impl AlmostHermitian {
    pub fn new(ring: FiniteRing, eps: Epsilon, g: Matrix, caps: &Caps) -> Result<Self> {
        let g_inv = g.invert(&ring, caps)?.ok_or_else(|| Error::Degenerate("g is not invertible".into()))?;
        let r = &ring;
        let n = eps.apply(r, &g_inv.mul(r, &g.conj_transpose(r))).sub(r, &Mat::identity(r, g.rows()));
        let index = n.nilpotency_index(r).ok_or_else(|| Error::Precondition("N = εg⁻¹g* − 1 is not nilpotent".into()))?;
        let h = AlmostHermitian { ring, eps, g, n, index };
        debug_assert!(h.identity_holds());
        Ok(h)
    }

    /// `g* = εg(1 + N)`, exactly.
    pub fn identity_holds(&self) -> bool {
        let r = &self.ring;
        let one_n = Mat::identity(r, self.g.rows()).add(r, &self.n);
        self.g.conj_transpose(r) == self.eps.apply(r, &self.g.mul(r, &one_n))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": self.eps.as_i64(),
            "g": self.g.to_json(&self.ring),
            "N": self.n.to_json(&self.ring),
            "nilpotency_index": self.index,
        })
    }
}

/// Parses a datum `{"epsilon": η, "matrix": δ}` over a known ring.
pub fn delta_from_json(r: &FiniteRing, v: &Value, caps: &Caps) -> Result<DeltaDatum> {
    let obj = v.as_object().ok_or_else(|| Error::Malformed("δ must be an object".into()))?;
    if let Some(k) = obj.keys().find(|k| !["epsilon", "matrix"].contains(&k.as_str())) {
        return malformed(format!("unknown field {k:?} in δ"));
    }
    let eta = Epsilon::from_i64(obj.get("epsilon").and_then(Value::as_i64).unwrap_or(1))?;
    let m = Mat::from_json(r, obj.get("matrix").ok_or_else(|| Error::Malformed("δ needs a matrix".into()))?)?;
    DeltaDatum::new(QuadFormEl::new(r.clone(), eta, m)?, caps)
}
