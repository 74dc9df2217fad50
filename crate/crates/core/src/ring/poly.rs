use super::finite::{El, FiniteRing};
use super::InvolutiveRing;

/// How the involution acts on the polynomial variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarInvolution {
    /// `s̄ = 1 − s`.
    OneMinus,
    /// `t̄ = t`.
    Fixed,
    /// `t̄ = −t`.
    Negated,
}

/// `A[x]` over a finite ring, with the involution extended from `A` by the
/// rule on `x`. Elements are little-endian coefficient vectors without
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    base: FiniteRing,
    var: VarInvolution,
    name: char,
}

pub type Poly = Vec<El>;

impl PolyRing {
    /// `A[s]` with `s̄ = 1 − s`.
    pub fn s(base: FiniteRing) -> Self {
        PolyRing { base, var: VarInvolution::OneMinus, name: 's' }
    }

    /// `A[t]` with `t̄ = t`.
    pub fn t(base: FiniteRing) -> Self {
        PolyRing { base, var: VarInvolution::Fixed, name: 't' }
    }

    pub fn with_involution(base: FiniteRing, var: VarInvolution, name: char) -> Self {
        PolyRing { base, var, name }
    }

    pub fn base(&self) -> &FiniteRing {
        &self.base
    }

    pub fn var(&self) -> VarInvolution {
        self.var
    }

    pub fn constant(&self, a: El) -> Poly {
        self.trim(vec![a])
    }

    /// `a·x^k`.
    pub fn monomial(&self, a: El, k: usize) -> Poly {
        let mut v = vec![self.base.zero(); k + 1];
        v[k] = a;
        self.trim(v)
    }

    pub fn x(&self) -> Poly {
        self.monomial(self.base.one(), 1)
    }

    pub fn degree(&self, p: &Poly) -> Option<usize> {
        p.len().checked_sub(1)
    }

    pub fn coeff(&self, p: &Poly, k: usize) -> El {
        p.get(k).copied().unwrap_or_else(|| self.base.zero())
    }

    fn trim(&self, mut v: Poly) -> Poly {
        while v.last().is_some_and(|c| self.base.is_zero(c)) {
            v.pop();
        }
        v
    }

    /// Substitutes a base element for the variable (it must commute with the
    /// coefficients for the result to be a ring map).
    pub fn eval(&self, p: &Poly, x: &El) -> El {
        let r = &self.base;
        p.iter().rev().fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
    }

    /// `(1 − x)^k` expanded, as coefficients.
    fn one_minus_pow(&self, k: usize) -> Poly {
        let r = &self.base;
        let one_minus = self.trim(vec![r.one(), r.neg(&r.one())]);
        let mut acc = vec![r.one()];
        for _ in 0..k {
            acc = self.mul(&acc, &one_minus);
        }
        acc
    }
}

impl InvolutiveRing for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Vec::new()
    }

    fn one(&self) -> Poly {
        self.constant(self.base.one())
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let r = &self.base;
        let n = a.len().max(b.len());
        let v = (0..n).map(|i| r.add(&self.coeff(a, i), &self.coeff(b, i))).collect();
        self.trim(v)
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.iter().map(|c| self.base.neg(c)).collect()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let r = &self.base;
        let mut v = vec![r.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] = r.add(&v[i + j], &r.mul(x, y));
            }
        }
        self.trim(v)
    }

    fn conj(&self, a: &Poly) -> Poly {
        let r = &self.base;
        match self.var {
            VarInvolution::Fixed => a.iter().map(|c| r.conj(c)).collect(),
            VarInvolution::Negated => {
                a.iter().enumerate().map(|(k, c)| if k % 2 == 1 { r.neg(&r.conj(c)) } else { r.conj(c) }).collect()
            }
            VarInvolution::OneMinus => {
                let mut acc = Vec::new();
                for (k, c) in a.iter().enumerate() {
                    if r.is_zero(c) {
                        continue;
                    }
                    let term = self.mul(&self.one_minus_pow(k), &self.constant(r.conj(c)));
                    acc = self.add(&acc, &term);
                }
                acc
            }
        }
    }

    fn from_int(&self, n: i64) -> Poly {
        self.constant(self.base.from_int(n))
    }

    /// Inverse of `a₀ + (nilpotent)` in a commutative base; `None` otherwise.
    fn unit_inverse(&self, a: &Poly) -> Option<Poly> {
        let r = &self.base;
        let a0 = a.first()?;
        let inv0 = r.unit_inverse(a0)?;
        if a.len() == 1 {
            return Some(vec![inv0]);
        }
        if !r.is_commutative() || !a[1..].iter().all(|c| r.is_nilpotent(*c)) {
            return None;
        }
        // a = a₀(1 + m) with m = a₀⁻¹(a − a₀); invert the geometric series.
        let mut m = self.mul(&self.constant(inv0), a);
        m[0] = r.zero();
        let m = self.trim(m);
        let neg_m = self.neg(&m);
        let mut term = self.one();
        let mut acc = self.one();
        for _ in 0..4096 {
            term = self.mul(&term, &neg_m);
            if term.is_empty() {
                return Some(self.mul(&acc, &self.constant(inv0)));
            }
            acc = self.add(&acc, &term);
        }
        None
    }

    fn is_commutative(&self) -> bool {
        self.base.is_commutative()
    }

    fn format(&self, a: &Poly) -> String {
        let cells: Vec<String> = a.iter().map(|c| self.base.format_elem(*c)).collect();
        format!("[{}]", cells.join(","))
    }

    fn name(&self) -> String {
        format!("{}[{}]", self.base.name(), self.name)
    }
}
