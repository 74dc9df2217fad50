//! The congruence recursion for `f_p, Z_p` on `G = E ⊗ F`.
//!
//! Morphisms of the shape `Σ σNᵏ ⊗ ΔXₖ` ("form terms") and `Σ Nᵏ ⊗ Yₖ`
//! ("endomorphism terms") are tracked as truncated series `Σ νᵏXₖ` in
//! `M_m(A)[ν]/(ν^K)`, `K` the nilpotency index of `N`. Since `σ* = εσ(1 + N)`
//! gives `N*σ = σM` with `M = Σ_{i≥1} (−N)ⁱ`, the products needed reduce to
//!
//! * form · endo: `νᵃ⁺ᵇ XY`
//! * endo* · form: `Mᵇνᵃ Y†X`
//! * form*: `εη Mᵃ(1 + ν) X†`
//!
//! Every step is also computed with the explicit Kronecker matrices and the
//! two are compared.

use serde_json::{json, Value};

use super::{AlmostHermitian, DeltaDatum};
use crate::error::{precondition, Result};
use crate::linalg::Mat;
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::Matrix;

type Series = Vec<Matrix>;

struct Algebra<'a> {
    r: &'a FiniteRing,
    sigma: &'a AlmostHermitian,
    d: &'a DeltaDatum,
    k: usize,
    m: usize,
    /// `Mᵇ` for `b < K`, as scalar series.
    m_pows: Vec<Vec<El>>,
    ee: El,
}

impl<'a> Algebra<'a> {
    fn new(sigma: &'a AlmostHermitian, d: &'a DeltaDatum) -> Self {
        let r = &sigma.ring;
        let k = sigma.index;
        let m_series: Vec<El> = (0..k)
            .map(|i| match i {
                0 => r.zero(),
                _ if i % 2 == 1 => r.neg(&r.one()),
                _ => r.one(),
            })
            .collect();
        let mut m_pows = vec![unit_series(r, k)];
        for b in 1..k {
            let next = scalar_product(r, &m_pows[b - 1], &m_series);
            m_pows.push(next);
        }
        let ee = sigma.eps.times(d.eta()).elem(r);
        Algebra { r, sigma, d, k, m: d.rank(), m_pows, ee }
    }

    fn zero(&self) -> Series {
        vec![Mat::zeros(self.r, self.m, self.m); self.k]
    }

    fn lift(&self, x: Matrix) -> Series {
        let mut s = self.zero();
        s[0] = x;
        s
    }

    fn add(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(x, y)| x.add(self.r, y)).collect()
    }

    fn sub(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(x, y)| x.sub(self.r, y)).collect()
    }

    fn conv(&self, a: &Series, b: &Series) -> Series {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero(self.r) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.k - i) {
                out[i + j] = out[i + j].add(self.r, &x.mul(self.r, y));
            }
        }
        out
    }

    fn scale(&self, c: &[El], a: &Series) -> Series {
        let mut out = self.zero();
        for (i, ci) in c.iter().enumerate() {
            if self.r.is_zero(ci) {
                continue;
            }
            for (j, y) in a.iter().enumerate().take(self.k - i) {
                out[i + j] = out[i + j].add(self.r, &y.scale_left(self.r, ci));
            }
        }
        out
    }

    /// `(Σ Nᵇ ⊗ Y_b)* · (Σ σNᵃ ⊗ ΔX_a)`.
    fn endo_ct_form(&self, e: &Series, f: &Series) -> Series {
        let mut out = self.zero();
        for (b, y) in e.iter().enumerate() {
            if y.is_zero(self.r) {
                continue;
            }
            let yd = self.d.dagger(y);
            let left: Series = f.iter().map(|x| yd.mul(self.r, x)).collect();
            out = self.add(&out, &self.scale(&self.m_pows[b], &left));
        }
        out
    }

    /// `(Σ σNᵃ ⊗ ΔX_a)*`.
    fn form_ct(&self, f: &Series) -> Series {
        let r = self.r;
        let mut out = self.zero();
        for (a, x) in f.iter().enumerate() {
            if x.is_zero(r) {
                continue;
            }
            let mut c = self.m_pows[a].clone();
            for i in (1..self.k).rev() {
                c[i] = r.add(&c[i], &c[i - 1]);
            }
            let c: Vec<El> = c.iter().map(|v| r.mul(&self.ee, v)).collect();
            out = self.add(&out, &self.scale(&c, &self.lift(self.d.dagger(x))));
        }
        out
    }

    fn realize_form(&self, f: &Series) -> Matrix {
        let r = self.r;
        let mut sn = self.sigma.g.clone();
        let n = self.sigma.g.rows();
        let mut acc = Mat::zeros(r, n * self.m, n * self.m);
        for x in f {
            acc = acc.add(r, &sn.kronecker(r, &self.d.delta.mul(r, x)));
            sn = sn.mul(r, &self.sigma.n);
        }
        acc
    }

    fn realize_endo(&self, e: &Series) -> Matrix {
        let r = self.r;
        let n = self.sigma.g.rows();
        let mut np = Mat::identity(r, n);
        let mut acc = Mat::zeros(r, n * self.m, n * self.m);
        for y in e {
            acc = acc.add(r, &np.kronecker(r, y));
            np = np.mul(r, &self.sigma.n);
        }
        acc
    }
}

fn unit_series(r: &FiniteRing, k: usize) -> Vec<El> {
    (0..k).map(|i| if i == 0 { r.one() } else { r.zero() }).collect()
}

fn scalar_product(r: &FiniteRing, a: &[El], b: &[El]) -> Vec<El> {
    let k = a.len();
    let mut out = vec![r.zero(); k];
    for i in 0..k {
        for j in 0..k - i {
            out[i + j] = r.add(&out[i + j], &r.mul(&a[i], &b[j]));
        }
    }
    out
}

/// State and checks after `p` rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma4Step {
    pub p: usize,
    /// `κ_{p+1} = −[ν^{p+1}]D_p`, zero once `p + 1 ≥ K`.
    pub kappa: Matrix,
    /// `D_p = f_p*(σ ⊗ Δφ)f_p − [σ ⊗ Δ(φ + ζ − ζ†) + Z_p − εηZ_p*]`.
    pub residual: Matrix,
    /// Coefficients of `ν⁰ … νᵖ` in `D_p` vanish.
    pub low_order_vanishes: bool,
    /// The series computation agrees with the explicit matrices.
    pub formal_matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma4Outcome {
    pub sigma: AlmostHermitian,
    pub datum: DeltaDatum,
    pub zeta: Matrix,
    pub steps: Vec<Lemma4Step>,
    pub f: Matrix,
    pub z: Matrix,
}

impl Lemma4Outcome {
    pub fn index(&self) -> usize {
        self.sigma.index
    }

    pub fn residual(&self) -> &Matrix {
        &self.steps.last().expect("at least one step").residual
    }

    pub fn report(&self) -> Report {
        let r = &self.sigma.ring;
        let mut rep = Report::new(format!("f_p, Z_p recursion, nilpotency index {}", self.index()));
        rep.value("index", self.index());
        rep.value("depth", self.steps.len() - 1);
        for s in &self.steps {
            rep.check(format!("p = {}: D_p vanishes below ν^{}", s.p, s.p + 1), s.low_order_vanishes);
            rep.check(format!("p = {}: series and matrices agree", s.p), s.formal_matches);
            if s.p >= self.index() {
                rep.check(format!("p = {}: residual is 0", s.p), s.residual.is_zero(r));
            }
        }
        rep
    }

    pub fn to_json(&self) -> Value {
        let r = &self.sigma.ring;
        json!({
            "sigma": self.sigma.to_json(),
            "delta": self.datum.form.phi0.to_json(r),
            "eta": self.datum.eta().as_i64(),
            "zeta": self.zeta.to_json(r),
            "f": self.f.to_json(r),
            "Z": self.z.to_json(r),
            "residual": self.residual().to_json(r),
            "steps": self.steps.iter().map(|s| json!({
                "p": s.p,
                "kappa": s.kappa.to_json(r),
                "residual_zero": s.residual.is_zero(r),
                "low_order_vanishes": s.low_order_vanishes,
                "formal_matches": s.formal_matches,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs the recursion `f₀ = 1`, `Z₀ = −σ ⊗ Δζ`, `U = N^{p+1} ⊗ κ_{p+1}`,
/// `f_{p+1} = f_p + U`, `Z_{p+1} = Z_p + U*(σ ⊗ Δφ)` up to depth `p`.
pub fn lemma4_recursion(sigma: &AlmostHermitian, d: &DeltaDatum, zeta: &Matrix, depth: usize) -> Result<Lemma4Outcome> {
    if sigma.ring != d.form.ring {
        return precondition("σ and δ live over different rings");
    }
    if zeta.rows() != d.rank() || zeta.cols() != d.rank() {
        return precondition("ζ must be square of the rank of δ");
    }
    let r = &sigma.ring;
    let alg = Algebra::new(sigma, d);
    let base = alg.lift(d.phi.clone());
    let target = alg.lift(d.phi.add(r, zeta).sub(r, &d.dagger(zeta)));
    let mut f = alg.lift(Mat::identity(r, alg.m));
    let mut z = alg.lift(zeta.neg(r));
    let n = sigma.g.rows();
    let s_phi = sigma.g.kronecker(r, &d.delta.mul(r, &d.phi));
    let s_target = sigma.g.kronecker(r, &d.delta.mul(r, &target[0]));
    let mut steps = Vec::new();
    for p in 0..=depth {
        let z_ct: Series = alg.form_ct(&z).iter().map(|x| x.scale_left(r, &alg.ee)).collect();
        let t = alg.sub(&alg.add(&target, &z), &z_ct);
        let dp = alg.sub(&alg.endo_ct_form(&f, &alg.conv(&base, &f)), &t);
        let f_m = alg.realize_endo(&f);
        let z_m = alg.realize_form(&z);
        let z_ct = z_m.conj_transpose(r).scale_left(r, &alg.ee);
        let actual = f_m.conj_transpose(r).mul(r, &s_phi).mul(r, &f_m).sub(r, &s_target.add(r, &z_m).sub(r, &z_ct));
        debug_assert_eq!(actual.rows(), n * alg.m);
        let low_order_vanishes = dp.iter().take(p + 1).all(|x| x.is_zero(r));
        let formal_matches = alg.realize_form(&dp) == actual;
        let kappa = if p + 1 < alg.k { dp[p + 1].neg(r) } else { Mat::zeros(r, alg.m, alg.m) };
        if p < depth && p + 1 < alg.k {
            let mut u = alg.zero();
            u[p + 1] = kappa.clone();
            z = alg.add(&z, &alg.endo_ct_form(&u, &base));
            f = alg.add(&f, &u);
        }
        steps.push(Lemma4Step { p, kappa, residual: actual, low_order_vanishes, formal_matches });
    }
    Ok(Lemma4Outcome {
        sigma: sigma.clone(),
        datum: d.clone(),
        zeta: zeta.clone(),
        f: alg.realize_endo(&f),
        z: alg.realize_form(&z),
        steps,
    })
}
