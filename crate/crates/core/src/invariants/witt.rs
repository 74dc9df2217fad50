use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use super::arf::arf_bit;
use crate::config::{pow_saturating, Caps};
use crate::error::Result;
use crate::forms::{even_witness, min_canonical, Epsilon, QuadFormEl, Variant};
use crate::linalg::{vectors, Mat};
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::Matrix;

/// One isomorphism class of nondegenerate forms of a fixed rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rank: usize,
    /// Least member of the orbit (in the variant's normal form).
    pub representative: Matrix,
    /// Number of normal-form matrices in the orbit.
    pub size: usize,
}

/// A class of forms modulo isomorphism and adding hyperbolic planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittClass {
    pub representative: Matrix,
    /// Smallest rank met in the class.
    pub min_rank: usize,
    pub arf: Option<u8>,
    /// Indices into [`WittTable::orbits`].
    pub orbits: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WittTable {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    pub variant: Variant,
    pub max_rank: usize,
    pub orbits: Vec<Orbit>,
    pub classes: Vec<WittClass>,
    lookup: Vec<HashMap<Matrix, usize>>,
}

impl WittTable {
    /// The orbit containing a given form (normalized first).
    pub fn orbit_of(&self, m: &Matrix) -> Option<usize> {
        let m = normalize(&self.ring, self.eps, self.variant, m);
        self.lookup.get(m.rows())?.get(&m).copied()
    }

    pub fn class_of_orbit(&self, orbit: usize) -> usize {
        self.classes.iter().position(|c| c.orbits.contains(&orbit)).expect("every orbit has a class")
    }

    pub fn to_json(&self) -> Value {
        let r = &self.ring;
        json!({
            "ring": r.spec().to_json(),
            "epsilon": self.eps.as_i64(),
            "variant": self.variant.as_str(),
            "max_rank": self.max_rank,
            "class_count": self.classes.len(),
            "classes": self.classes.iter().map(|c| json!({
                "representative": c.representative.to_json(r),
                "min_rank": c.min_rank,
                "arf": c.arf,
                "orbits": c.orbits.iter().map(|&i| json!({
                    "rank": self.orbits[i].rank,
                    "representative": self.orbits[i].representative.to_json(r),
                    "size": self.orbits[i].size,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_table(&self) -> String {
        let r = &self.ring;
        let mut out = format!(
            "{} ε={} {} up to rank {}: {} stable classes\n",
            r.name(),
            self.eps.as_i64(),
            self.variant.as_str(),
            self.max_rank,
            self.classes.len()
        );
        for (i, c) in self.classes.iter().enumerate() {
            let arf = c.arf.map(|a| a.to_string()).unwrap_or_else(|| "-".into());
            let ranks: Vec<String> =
                c.orbits.iter().map(|&o| format!("{}×{}", self.orbits[o].rank, self.orbits[o].size)).collect();
            out.push_str(&format!(
                "  class {i}: min rank {}, arf {arf}, rep {:?}, orbits [{}]\n",
                c.min_rank,
                c.representative.format(r),
                ranks.join(", ")
            ));
        }
        out
    }
}

/// The variant's normal form of a form matrix.
fn normalize(r: &FiniteRing, eps: Epsilon, variant: Variant, m: &Matrix) -> Matrix {
    match variant {
        Variant::Min => min_canonical(r, eps, m),
        Variant::Max | Variant::El => m.clone(),
    }
}

/// The hermitian form attached to a stored matrix.
fn hermitian_of(r: &FiniteRing, eps: Epsilon, variant: Variant, m: &Matrix) -> Matrix {
    match variant {
        Variant::Max => m.clone(),
        Variant::Min | Variant::El => m.add(r, &eps.apply(r, &m.conj_transpose(r))),
    }
}

fn hyperbolic_plane(r: &FiniteRing, eps: Epsilon, variant: Variant) -> Matrix {
    let h = QuadFormEl::hyperbolic(r, eps, 1);
    match variant {
        Variant::Max => h.associated_phi(),
        Variant::Min => h.min_canonical(),
        Variant::El => h.phi0,
    }
}

/// All nondegenerate forms of rank `n` in the variant's normal form:
/// canonical `φ₀` modulo `γ − εγ*` (min), even `φ` (max), or every `φ₀` (el).
pub fn forms_of_rank(r: &FiniteRing, eps: Epsilon, variant: Variant, n: usize, caps: &Caps) -> Result<Vec<Matrix>> {
    let upper = n * n.saturating_sub(1) / 2;
    let tables = r.sign_tables(eps.is_minus());
    let diag: Vec<El> = match variant {
        Variant::Min => {
            let mut reps = tables.coset_rep.clone();
            reps.sort();
            reps.dedup();
            reps
        }
        Variant::Max => tables.gamma.clone(),
        Variant::El => r.elements().collect(),
    };
    let e = eps.elem(r);
    let mut out = Vec::new();
    let mut push = |m: Matrix| -> Result<()> {
        if Mat::invert(&hermitian_of(r, eps, variant, &m), r, caps)?.is_some() {
            out.push(m);
        }
        Ok(())
    };
    if variant == Variant::El {
        caps.check("form matrices", pow_saturating(r.size() as u128, n * n))?;
        for m in crate::linalg::all_matrices(r, n, n) {
            push(m)?;
        }
    } else {
        caps.check(
            "form matrices",
            pow_saturating(r.size() as u128, upper).saturating_mul(pow_saturating(diag.len() as u128, n)),
        )?;
        for off in vectors(r, upper) {
            for d in odometer(&diag, n) {
                let mut m = Mat::zeros(r, n, n);
                let mut k = 0;
                for i in 0..n {
                    m.set(i, i, d[i]);
                    for j in i + 1..n {
                        m.set(i, j, off[k]);
                        if variant == Variant::Max {
                            m.set(j, i, r.mul(&e, &r.conj(&off[k])));
                        }
                        k += 1;
                    }
                }
                if variant == Variant::Max && even_witness(r, eps, &m).is_none() {
                    continue;
                }
                push(m)?;
            }
        }
    }
    out.sort();
    Ok(out)
}

fn odometer(digits: &[El], n: usize) -> impl Iterator<Item = Vec<El>> + '_ {
    let base = digits.len() as u128;
    (0..pow_saturating(base, n)).map(move |mut code| {
        let mut v = vec![El(0); n];
        for slot in v.iter_mut().rev() {
            *slot = digits[(code % base) as usize];
            code /= base;
        }
        v
    })
}

/// Elementary transvections `1 + aEᵢⱼ` (`a` in an additive basis) and unit
/// diagonals; over a finite ring these generate `GLₙ`.
pub fn gl_generators(r: &FiniteRing, n: usize) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..r.rank() {
                let mut m = Mat::identity(r, n);
                m.set(i, j, r.basis(k));
                gens.push(m);
            }
        }
    }
    let units: Vec<El> = r.elements().filter(|a| !r.is_one(a) && r.unit_inverse(a).is_some()).collect();
    for i in 0..n {
        for u in &units {
            let mut m = Mat::identity(r, n);
            m.set(i, i, *u);
            gens.push(m);
        }
    }
    gens
}

/// Orbits of `GLₙ` acting by `X ↦ f*·X·f` on a list of normal forms.
fn orbits_of(r: &FiniteRing, eps: Epsilon, variant: Variant, forms: &[Matrix], gens: &[Matrix]) -> Vec<Vec<usize>> {
    let index: HashMap<&Matrix, usize> = forms.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let adj: Vec<Matrix> = gens.iter().map(|g| g.conj_transpose(r)).collect();
    let mut seen = vec![false; forms.len()];
    let mut out = Vec::new();
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for (g, ga) in gens.iter().zip(&adj) {
                let img = normalize(r, eps, variant, &ga.mul(r, &forms[i]).mul(r, g));
                let j = index[&img];
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    queue.push_back(j);
                }
            }
        }
        orbit.sort();
        out.push(orbit);
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.0[x] = root;
        root
    }

    /// Keeps the smaller index as the root, so the result is order independent.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

struct Classification {
    orbits: Vec<Orbit>,
    /// Orbit id of each normal form, per rank.
    lookup: Vec<HashMap<Matrix, usize>>,
}

fn classify_orbits(r: &FiniteRing, eps: Epsilon, variant: Variant, max_rank: usize, caps: &Caps) -> Result<Classification> {
    let mut orbits = Vec::new();
    let mut lookup = Vec::new();
    for n in 0..=max_rank {
        let forms = forms_of_rank(r, eps, variant, n, caps)?;
        let gens = gl_generators(r, n);
        let mut map = HashMap::new();
        for orbit in orbits_of(r, eps, variant, &forms, &gens) {
            let id = orbits.len();
            for &i in &orbit {
                map.insert(forms[i].clone(), id);
            }
            orbits.push(Orbit { rank: n, representative: forms[orbit[0]].clone(), size: orbit.len() });
        }
        lookup.push(map);
    }
    Ok(Classification { orbits, lookup })
}

/// Stable classes of nondegenerate forms of rank `≤ max_rank`: isomorphism
/// orbits linked whenever one is the other plus a hyperbolic plane.
pub fn witt_classify(r: &FiniteRing, eps: Epsilon, variant: Variant, max_rank: usize, caps: &Caps) -> Result<WittTable> {
    let cl = classify_orbits(r, eps, variant, max_rank, caps)?;
    let h = hyperbolic_plane(r, eps, variant);
    let mut uf = UnionFind((0..cl.orbits.len()).collect());
    for (id, o) in cl.orbits.iter().enumerate() {
        if o.rank + 2 <= max_rank {
            let sum = normalize(r, eps, variant, &o.representative.direct_sum(r, &h));
            uf.union(id, cl.lookup[o.rank + 2][&sum]);
        }
    }
    let with_arf = variant != Variant::Max
        && r.is_field()
        && r.characteristic_modulus() == 2
        && r.elements().all(|a| r.conj(&a) == a);
    let mut classes: Vec<WittClass> = Vec::new();
    let mut root_to_class: HashMap<usize, usize> = HashMap::new();
    for id in 0..cl.orbits.len() {
        let root = uf.find(id);
        let k = *root_to_class.entry(root).or_insert_with(|| {
            classes.push(WittClass {
                representative: cl.orbits[id].representative.clone(),
                min_rank: cl.orbits[id].rank,
                arf: None,
                orbits: Vec::new(),
            });
            classes.len() - 1
        });
        classes[k].orbits.push(id);
    }
    if with_arf {
        for c in &mut classes {
            let o = &cl.orbits[c.orbits[0]];
            let q = QuadFormEl::new(r.clone(), eps, o.representative.clone())?;
            c.arf = Some(arf_bit(&q, caps)?);
        }
    }
    Ok(WittTable { ring: r.clone(), eps, variant, max_rank, orbits: cl.orbits, classes, lookup: cl.lookup })
}

/// Isomorphism classes up to `max_rank` with the partial direct-sum table.
#[derive(Clone, Debug)]
pub struct GwMonoid {
    pub ring: FiniteRing,
    pub eps: Epsilon,
    pub variant: Variant,
    pub max_rank: usize,
    pub orbits: Vec<Orbit>,
    /// `(a, b, a ⊕ b)` for every pair whose ranks sum to at most `max_rank`.
    pub sums: Vec<(usize, usize, usize)>,
    lookup: Vec<HashMap<Matrix, usize>>,
}

impl GwMonoid {
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sums.iter().find(|&&(x, y, _)| x == a && y == b).map(|&(_, _, s)| s)
    }

    /// The orbit containing a given form (normalized first).
    pub fn orbit_of(&self, m: &Matrix) -> Option<usize> {
        let m = normalize(&self.ring, self.eps, self.variant, m);
        self.lookup.get(m.rows())?.get(&m).copied()
    }

    pub fn to_json(&self) -> Value {
        let r = &self.ring;
        json!({
            "ring": r.spec().to_json(),
            "epsilon": self.eps.as_i64(),
            "variant": self.variant.as_str(),
            "max_rank": self.max_rank,
            "classes": self.orbits.iter().map(|o| json!({
                "rank": o.rank,
                "representative": o.representative.to_json(r),
                "size": o.size,
            })).collect::<Vec<_>>(),
            "sums": self.sums.iter().map(|&(a, b, s)| json!([a, b, s])).collect::<Vec<_>>(),
        })
    }
}

pub fn grothendieck_witt_monoid(
    r: &FiniteRing,
    eps: Epsilon,
    variant: Variant,
    max_rank: usize,
    caps: &Caps,
) -> Result<GwMonoid> {
    let cl = classify_orbits(r, eps, variant, max_rank, caps)?;
    let mut sums = Vec::new();
    for (a, oa) in cl.orbits.iter().enumerate() {
        for (b, ob) in cl.orbits.iter().enumerate() {
            if oa.rank + ob.rank <= max_rank {
                let s = normalize(r, eps, variant, &oa.representative.direct_sum(r, &ob.representative));
                sums.push((a, b, cl.lookup[oa.rank + ob.rank][&s]));
            }
        }
    }
    Ok(GwMonoid { ring: r.clone(), eps, variant, max_rank, orbits: cl.orbits, sums, lookup: cl.lookup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::all_matrices;
    use crate::ring::RingSpec;

    fn ring(spec: RingSpec) -> FiniteRing {
        FiniteRing::new(&spec).unwrap()
    }

    #[test]
    fn f2_min_has_two_classes_split_by_arf() {
        let r = ring(RingSpec::fp(2));
        let t = witt_classify(&r, Epsilon::Plus, Variant::Min, 4, &Caps::default()).unwrap();
        assert_eq!(t.classes.len(), 2);
        let arfs: Vec<_> = t.classes.iter().map(|c| c.arf).collect();
        assert_eq!(arfs, vec![Some(0), Some(1)]);
        assert_eq!(t.classes[0].min_rank, 0);
        assert_eq!(t.classes[1].min_rank, 2);
        // rank 2 has the hyperbolic plane and the anisotropic plane
        assert_eq!(t.orbits.iter().filter(|o| o.rank == 2).count(), 2);
    }

    #[test]
    fn f2_max_collapses_to_one_class() {
        let r = ring(RingSpec::fp(2));
        let t = witt_classify(&r, Epsilon::Plus, Variant::Max, 4, &Caps::default()).unwrap();
        assert_eq!(t.classes.len(), 1);
    }

    #[test]
    fn rank_zero_only() {
        let r = ring(RingSpec::fp(3));
        let t = witt_classify(&r, Epsilon::Plus, Variant::Min, 0, &Caps::default()).unwrap();
        assert_eq!(t.classes.len(), 1);
        assert_eq!(t.orbits.len(), 1);
    }

    #[test]
    fn hyperbolic_forms_are_in_the_zero_class() {
        let caps = Caps::default();
        for (spec, eps, variant, max_rank) in [
            (RingSpec::fp(2), Epsilon::Plus, Variant::Min, 4),
            (RingSpec::fp(3), Epsilon::Minus, Variant::Min, 4),
            (RingSpec::fp(3), Epsilon::Plus, Variant::Max, 2),
            (RingSpec::f4(), Epsilon::Plus, Variant::El, 2),
        ] {
            let r = ring(spec);
            let t = witt_classify(&r, eps, variant, max_rank, &caps).unwrap();
            let gw = grothendieck_witt_monoid(&r, eps, variant, max_rank, &caps).unwrap();
            for m in 1..=max_rank / 2 {
                let h = normalize(&r, eps, variant, &hyperbolic_plane(&r, eps, variant));
                let mut sum = Mat::zeros(&r, 0, 0);
                for _ in 0..m {
                    sum = sum.direct_sum(&r, &h);
                }
                let sum = normalize(&r, eps, variant, &sum);
                let o = t.orbit_of(&sum).unwrap();
                assert_eq!(t.class_of_orbit(o), t.class_of_orbit(0));
                assert_eq!(gw.orbit_of(&sum), Some(o));
            }
        }
    }

    #[test]
    fn generators_reach_all_of_gl2() {
        // orbits from generators agree with orbits under every invertible matrix
        let caps = Caps::default();
        for spec in [RingSpec::fp(2), RingSpec::zn(4), RingSpec::f4()] {
            let r = ring(spec);
            let forms = forms_of_rank(&r, Epsilon::Plus, Variant::Min, 2, &caps).unwrap();
            let from_gens = orbits_of(&r, Epsilon::Plus, Variant::Min, &forms, &gl_generators(&r, 2));
            let all: Vec<Matrix> = all_matrices(&r, 2, 2).filter(|m| m.invert(&r, &caps).unwrap().is_some()).collect();
            let from_all = orbits_of(&r, Epsilon::Plus, Variant::Min, &forms, &all);
            assert_eq!(from_gens, from_all);
        }
    }

    #[test]
    fn split_unit_makes_min_and_max_tables_match() {
        let caps = Caps::default();
        let r = ring(RingSpec::f4());
        let tmin = witt_classify(&r, Epsilon::Plus, Variant::Min, 2, &caps).unwrap();
        let tmax = witt_classify(&r, Epsilon::Plus, Variant::Max, 2, &caps).unwrap();
        assert_eq!(tmin.classes.len(), tmax.classes.len());
        let sizes = |t: &WittTable| t.orbits.iter().map(|o| (o.rank, o.size)).collect::<Vec<_>>();
        assert_eq!(sizes(&tmin), sizes(&tmax));
    }

    #[test]
    fn arf_is_constant_on_min_orbits() {
        let caps = Caps::default();
        let r = ring(RingSpec::fp(2));
        for n in [2, 4] {
            let forms = forms_of_rank(&r, Epsilon::Plus, Variant::Min, n, &caps).unwrap();
            for orbit in orbits_of(&r, Epsilon::Plus, Variant::Min, &forms, &gl_generators(&r, n)) {
                let bits: std::collections::HashSet<u8> = orbit
                    .iter()
                    .map(|&i| arf_bit(&QuadFormEl::new(r.clone(), Epsilon::Plus, forms[i].clone()).unwrap(), &caps).unwrap())
                    .collect();
                assert_eq!(bits.len(), 1);
            }
        }
    }

    #[test]
    fn monoid_over_f2() {
        let caps = Caps::default();
        let r = ring(RingSpec::fp(2));
        let gw = grothendieck_witt_monoid(&r, Epsilon::Plus, Variant::Min, 4, &caps).unwrap();
        let ranks: Vec<usize> = gw.orbits.iter().map(|o| o.rank).collect();
        assert_eq!(ranks, vec![0, 2, 2, 4, 4]);
        for a in 0..gw.orbits.len() {
            assert_eq!(gw.sum(0, a), Some(a));
            assert_eq!(gw.sum(a, 0), Some(a));
        }
        // H ⊕ H and A ⊕ A are the same rank-4 class
        let (h, a) = (1, 2);
        assert_eq!(gw.sum(h, h), gw.sum(a, a));
        assert_ne!(gw.sum(h, h), gw.sum(h, a));
        assert_eq!(gw.orbit_of(&gw.orbits[h].representative), Some(h));
    }

    #[test]
    fn hyperbolic_map_preserves_the_class() {
        let caps = Caps::default();
        let r = ring(RingSpec::fp(2));
        let gw = grothendieck_witt_monoid(&r, Epsilon::Plus, Variant::Min, 2, &caps).unwrap();
        let h = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
        let base = gw.orbit_of(&h.phi0).unwrap();
        for u in all_matrices(&r, 1, 1).filter(|m| m.invert(&r, &caps).unwrap().is_some()) {
            let f = crate::forms::hyperbolic_map(&r, &u, &caps).unwrap();
            assert_eq!(gw.orbit_of(&h.pull_back(&f).phi0), Some(base));
        }
    }
}
