use std::collections::BTreeSet;

use serde_json::json;

use super::snf::AbelianGroupPresentation;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::forms::Epsilon;
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};

/// `Γ = {a : ā = εa}`, `Λ = {b − εb̄}` and representatives of `Γ/Λ`.
///
/// Outside characteristic 2 the two sets need not nest (`Λ` consists of
/// elements with `ā = −εa`); the quotient is then `Γ/(Γ ∩ Λ)`, the image of
/// `Γ` in `A/Λ`.
#[derive(Clone, Debug)]
pub struct GammaLambda {
    pub eps: Epsilon,
    pub gamma: Vec<El>,
    pub lambda: Vec<El>,
    /// Least element of each coset of `Λ` inside `Γ`.
    pub quotient: Vec<El>,
    coset_rep: Vec<El>,
}

impl GammaLambda {
    /// Index into `quotient` of the class of `a ∈ Γ`.
    pub fn class_of(&self, a: El) -> usize {
        let rep = self.coset_rep[a.0 as usize];
        self.quotient.binary_search(&rep).expect("element of Γ")
    }

    pub fn to_json(&self, r: &FiniteRing) -> serde_json::Value {
        let f = |v: &[El]| v.iter().map(|a| r.format_elem(*a)).collect::<Vec<_>>();
        json!({
            "epsilon": self.eps.as_i64(),
            "gamma": f(&self.gamma),
            "lambda": f(&self.lambda),
            "quotient": f(&self.quotient),
        })
    }
}

pub fn gamma_lambda(r: &FiniteRing, eps: Epsilon) -> GammaLambda {
    let t = r.sign_tables(eps.is_minus());
    let quotient: BTreeSet<El> = t.gamma.iter().map(|a| t.coset_rep[a.0 as usize]).collect();
    GammaLambda {
        eps,
        gamma: t.gamma.clone(),
        lambda: t.lambda.clone(),
        quotient: quotient.into_iter().collect(),
        coset_rep: t.coset_rep.clone(),
    }
}

struct Relations {
    rows: BTreeSet<Vec<(usize, i64)>>,
}

impl Relations {
    fn new() -> Self {
        Relations { rows: BTreeSet::new() }
    }

    fn push(&mut self, terms: &[(usize, i64)]) {
        let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
        for &(g, c) in terms {
            *acc.entry(g).or_default() += c;
        }
        let row: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        if !row.is_empty() {
            self.rows.insert(row);
        }
    }
}

/// `Ξ(A)`: the quotient of `Γ/Λ ⊗_A Γ/Λ` by `a⊗b − b⊗a` and `a⊗b − a⊗bab̄`,
/// where `A` acts on the right by `γ·a = āγa` and on the left by
/// `a·γ = aγā`. Only commutative rings are supported.
pub fn xi_group(r: &FiniteRing, eps: Epsilon, caps: &Caps) -> Result<AbelianGroupPresentation> {
    if !r.is_commutative() {
        return Err(Error::Unsupported("Ξ is only computed for commutative rings".into()));
    }
    let gl = gamma_lambda(r, eps);
    let q = gl.quotient.len();
    caps.check("relations of Ξ", (q as u128).pow(3) * 2 + (r.size() * q * q) as u128 + (gl.gamma.len() as u128).pow(2))?;
    let gen = |x: usize, y: usize| x * q + y;
    let cls = |a: El| gl.class_of(a);
    let mut rels = Relations::new();
    for x in 0..q {
        for y in 0..q {
            let s = cls(r.add(&gl.quotient[x], &gl.quotient[y]));
            for z in 0..q {
                rels.push(&[(gen(s, z), 1), (gen(x, z), -1), (gen(y, z), -1)]);
                rels.push(&[(gen(z, s), 1), (gen(z, x), -1), (gen(z, y), -1)]);
            }
            rels.push(&[(gen(x, y), 1), (gen(y, x), -1)]);
        }
    }
    for a in r.elements() {
        let ab = r.conj(&a);
        for x in 0..q {
            let right = cls(r.mul(&r.mul(&ab, &gl.quotient[x]), &a));
            for y in 0..q {
                let left = cls(r.mul(&r.mul(&a, &gl.quotient[y]), &ab));
                rels.push(&[(gen(right, y), 1), (gen(x, left), -1)]);
            }
        }
    }
    for &a in &gl.gamma {
        for &b in &gl.gamma {
            let bab = r.mul(&r.mul(&b, &a), &r.conj(&b));
            rels.push(&[(gen(cls(a), cls(b)), 1), (gen(cls(a), cls(bab)), -1)]);
        }
    }
    let labels = (0..q)
        .flat_map(|x| (0..q).map(move |y| (x, y)))
        .map(|(x, y)| format!("{}⊗{}", r.format_elem(gl.quotient[x]), r.format_elem(gl.quotient[y])))
        .collect();
    AbelianGroupPresentation::new(labels, rels.rows.into_iter().collect())
}

fn require_char2_trivial_field(r: &FiniteRing) -> Result<()> {
    if !r.is_field() || r.characteristic_modulus() != 2 {
        return Err(Error::Precondition(format!("{} is not a field of characteristic 2", r.name())));
    }
    if r.elements().any(|a| r.conj(&a) != a) {
        return Err(Error::Precondition(format!("{} does not carry the trivial involution", r.name())));
    }
    Ok(())
}

/// `A ⊗_Z A` modulo `a⊗b − b⊗a`, `a⊗b − a⊗b²a` and `c²a⊗b − a⊗c²b`, for a
/// field of characteristic 2 with trivial involution.
pub fn xi_char2_field(r: &FiniteRing, caps: &Caps) -> Result<AbelianGroupPresentation> {
    require_char2_trivial_field(r)?;
    let n = r.size();
    caps.check("relations of Ξ", (n as u128).pow(3) * 4)?;
    let gen = |a: El, b: El| a.0 as usize * n + b.0 as usize;
    let mut rels = Relations::new();
    for a in r.elements() {
        for b in r.elements() {
            for c in r.elements() {
                let s = r.add(&a, &b);
                rels.push(&[(gen(s, c), 1), (gen(a, c), -1), (gen(b, c), -1)]);
                rels.push(&[(gen(c, s), 1), (gen(c, a), -1), (gen(c, b), -1)]);
                let c2 = r.mul(&c, &c);
                rels.push(&[(gen(r.mul(&c2, &a), b), 1), (gen(a, r.mul(&c2, &b)), -1)]);
            }
            rels.push(&[(gen(a, b), 1), (gen(b, a), -1)]);
            let b2a = r.mul(&r.mul(&b, &b), &a);
            rels.push(&[(gen(a, b), 1), (gen(a, b2a), -1)]);
        }
    }
    let labels = r
        .elements()
        .flat_map(|a| r.elements().map(move |b| (a, b)))
        .map(|(a, b)| format!("{}⊗{}", r.format_elem(a), r.format_elem(b)))
        .collect();
    AbelianGroupPresentation::new(labels, rels.rows.into_iter().collect())
}

/// `G = F / {a² − a}` for a field of characteristic 2.
#[derive(Clone, Debug)]
pub struct ArfQuotient {
    /// The additive subgroup `℘(F) = {a² − a}`.
    pub subgroup: Vec<El>,
    /// Least element of each coset.
    pub reps: Vec<El>,
    class: Vec<usize>,
}

impl ArfQuotient {
    pub fn new(r: &FiniteRing) -> Self {
        let sub: BTreeSet<El> = r.elements().map(|a| r.sub(&r.mul(&a, &a), &a)).collect();
        let mut class = vec![usize::MAX; r.size()];
        let mut reps = Vec::new();
        for x in r.elements() {
            if class[x.0 as usize] != usize::MAX {
                continue;
            }
            for s in &sub {
                class[r.add(&x, s).0 as usize] = reps.len();
            }
            reps.push(x);
        }
        ArfQuotient { subgroup: sub.into_iter().collect(), reps, class }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, a: El) -> usize {
        self.class[a.0 as usize]
    }
}

/// The Arf map `Ξ → G`, `a⊗b ↦ ab`, against its retraction `a ↦ 1⊗a`.
pub fn arf_retraction_check(r: &FiniteRing, caps: &Caps) -> Result<Report> {
    require_char2_trivial_field(r)?;
    let xi = xi_char2_field(r, caps)?;
    let g = ArfQuotient::new(r);
    let n = r.size();
    let gen = |a: El, b: El| a.0 as usize * n + b.0 as usize;
    // value in F of an integer combination of generators under a⊗b ↦ ab
    let arf_of = |v: &[(usize, i64)]| {
        v.iter().fold(r.zero(), |acc, &(j, c)| {
            let (a, b) = (El((j / n) as u32), El((j % n) as u32));
            r.add(&acc, &r.mul(&r.from_int(c), &r.mul(&a, &b)))
        })
    };
    let mut rep = Report::new(format!("Arf map and its retraction over {}", r.name()));
    rep.value("xi", xi.describe());
    rep.value("order_g", g.order());
    rep.check(
        "a⊗b ↦ ab kills every relation of Ξ",
        xi.relations.iter().all(|rel| g.class_of(arf_of(rel)) == g.class_of(r.zero())),
    );
    rep.check("a ↦ 1⊗a kills a² − a", g.subgroup.iter().all(|&s| xi.is_zero(&[(gen(r.one(), s), 1)])));
    rep.check(
        "a ↦ 1⊗a then a⊗b ↦ ab is the identity on G",
        g.reps.iter().all(|&a| g.class_of(arf_of(&[(gen(r.one(), a), 1)])) == g.class_of(a)),
    );
    let composite_back = r.elements().all(|a| {
        r.elements().all(|b| {
            let ab = r.mul(&a, &b);
            xi.coordinates(&[(gen(a, b), 1)]) == xi.coordinates(&[(gen(r.one(), ab), 1)])
        })
    });
    rep.check("a⊗b ↦ ab then a ↦ 1⊗a is the identity on Ξ", composite_back);
    Ok(rep)
}
