use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::spec::{FieldInvolution, RingKind, RingSpec, SignFlag};
use super::InvolutiveRing;
use crate::error::{malformed, Error, Result};

/// Element of a [`FiniteRing`]: its index in the canonical enumeration.
///
/// Indices are mixed-radix encodings of the coordinate vector over `Z/n`,
/// so two elements are equal exactly when their indices are.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct El(pub u32);

impl fmt::Debug for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

const MUL_TABLE_LIMIT: usize = 256;
const UNARY_TABLE_LIMIT: usize = 1 << 16;
const INVERSE_TABLE_LIMIT: usize = 1024;
const SPLIT_SEARCH_LIMIT: usize = 1 << 16;

/// A finite ring with involution, stored as a `Z/n`-algebra.
#[derive(Clone)]
pub struct FiniteRing(Arc<Inner>);

struct Inner {
    spec: RingSpec,
    modulus: u32,
    rank: usize,
    size: usize,
    /// `mul_const[(i * rank + j) * rank + k]`: coefficient of `b_k` in `b_i b_j`.
    mul_const: Vec<u32>,
    /// `conj_mat[j * rank + k]`: coefficient of `b_k` in `conj(b_j)`.
    conj_mat: Vec<u32>,
    one: u32,
    base: Option<FiniteRing>,
    components: usize,
    add_tab: Option<Vec<u32>>,
    mul_tab: Option<Vec<u32>>,
    neg_tab: Option<Vec<u32>>,
    conj_tab: Option<Vec<u32>>,
    inv_tab: Option<Vec<u32>>,
    commutative: bool,
    field: bool,
    split_unit: Option<El>,
    sign_tables: [OnceLock<Arc<SignTables>>; 2],
}

/// Additive data attached to a sign `ε = ±1`.
#[derive(Debug)]
pub struct SignTables {
    /// `Γ = {a : ā = εa}` in enumeration order.
    pub gamma: Vec<El>,
    /// `Λ = {a − εā}` in enumeration order.
    pub lambda: Vec<El>,
    /// For each `x ∈ Λ`, the least `a` with `a − εā = x`.
    pub lambda_witness: HashMap<El, El>,
    /// `coset_rep[x]`: least element of `x + Λ`.
    pub coset_rep: Vec<El>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.0.spec.short_name())
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for FiniteRing {}

/// Structure data for a ring before tables are attached.
struct Algebra {
    modulus: u32,
    rank: usize,
    mul_const: Vec<u32>,
    conj_mat: Vec<u32>,
    one_digits: Vec<u32>,
}

impl FiniteRing {
    /// Builds the ring, validating the spec (primality, irreducible modulus,
    /// parity of the degree for Frobenius) and any supplied split unit.
    pub fn new(spec: &RingSpec) -> Result<Self> {
        Self::build(spec, true)
    }

    /// Builds the ring without validating the spec; used for negative controls.
    pub fn new_unchecked(spec: &RingSpec) -> Result<Self> {
        Self::build(spec, false)
    }

    pub fn parse_spec(text: &str) -> Result<Self> {
        Self::new(&RingSpec::parse(text)?)
    }

    fn build(spec: &RingSpec, validate: bool) -> Result<Self> {
        let (alg, base, components, known_field) = match &spec.kind {
            RingKind::Fp { p } => {
                if validate && !is_prime(*p) {
                    return malformed(format!("F_p needs a prime, got {p}"));
                }
                if *p < 2 {
                    return malformed("characteristic must be at least 2");
                }
                (scalar_algebra(*p), None, 1, true)
            }
            RingKind::Zn { n } => {
                if *n < 2 {
                    return malformed("Z/n needs n >= 2");
                }
                (scalar_algebra(*n), None, 1, is_prime(*n))
            }
            RingKind::Fq { p, deg, modulus, involution } => {
                (fq_algebra(*p, *deg, modulus, *involution, validate)?, None, 1, true)
            }
            RingKind::Dual { base, conj_e } => {
                let b = FiniteRing::build(base, validate)?;
                let sign = *conj_e;
                let alg = composite(&b, 2, |r, x, y| {
                    vec![r.mul(&x[0], &y[0]), r.add(&r.mul(&x[0], &y[1]), &r.mul(&x[1], &y[0]))]
                }, |r, x| {
                    let b = r.conj(&x[1]);
                    vec![r.conj(&x[0]), if sign == SignFlag::Minus { r.neg(&b) } else { b }]
                }, |r| vec![r.one(), r.zero()])?;
                (alg, Some(b), 2, false)
            }
            RingKind::Mat2 { base } => {
                let b = FiniteRing::build(base, validate)?;
                let alg = composite(&b, 4, |r, x, y| {
                    let m = |i: usize, j: usize| r.add(&r.mul(&x[2 * i], &y[j]), &r.mul(&x[2 * i + 1], &y[2 + j]));
                    vec![m(0, 0), m(0, 1), m(1, 0), m(1, 1)]
                }, |r, x| vec![r.conj(&x[3]), r.conj(&x[1]), r.conj(&x[2]), r.conj(&x[0])],
                |r| vec![r.one(), r.zero(), r.zero(), r.one()])?;
                (alg, Some(b), 4, false)
            }
            RingKind::ProductOp { base } => {
                let b = FiniteRing::build(base, validate)?;
                let alg = composite(&b, 2, |r, x, y| vec![r.mul(&x[0], &y[0]), r.mul(&y[1], &x[1])],
                    |_, x| vec![x[1], x[0]], |r| vec![r.one(), r.one()])?;
                (alg, Some(b), 2, false)
            }
            RingKind::TruncPoly { base, k, conj_t } => {
                if *k == 0 {
                    return malformed("truncation order must be at least 1");
                }
                let b = FiniteRing::build(base, validate)?;
                let k = *k;
                let sign = *conj_t;
                let alg = composite(&b, k, move |r, x, y| {
                    let mut out = vec![r.zero(); k];
                    for i in 0..k {
                        for j in 0..k - i {
                            out[i + j] = r.add(&out[i + j], &r.mul(&x[i], &y[j]));
                        }
                    }
                    out
                }, move |r, x| {
                    (0..k)
                        .map(|i| {
                            let c = r.conj(&x[i]);
                            if sign == SignFlag::Minus && i % 2 == 1 { r.neg(&c) } else { c }
                        })
                        .collect()
                }, move |r| {
                    let mut v = vec![r.zero(); k];
                    v[0] = r.one();
                    v
                })?;
                (alg, Some(b), k, false)
            }
            RingKind::PolyS { .. } => {
                return Err(Error::NotEnumerable(format!(
                    "{} is infinite; use PolyRing for polynomial arithmetic",
                    spec.short_name()
                )))
            }
        };
        let ring = Self::from_algebra(spec.clone(), alg, base, components, known_field && validate)?;
        ring.attach_split_unit(spec.split_unit.as_deref())
    }

    fn from_algebra(
        spec: RingSpec,
        alg: Algebra,
        base: Option<FiniteRing>,
        components: usize,
        known_field: bool,
    ) -> Result<Self> {
        let size = (alg.modulus as u128).checked_pow(alg.rank as u32).filter(|&s| s <= u32::MAX as u128);
        let size = match size {
            Some(s) => s as usize,
            None => return Err(Error::Unsupported(format!("{} has too many elements", spec.short_name()))),
        };
        let rank = alg.rank;
        let commutative = (0..rank).all(|i| {
            (0..rank).all(|j| {
                let a = &alg.mul_const[(i * rank + j) * rank..(i * rank + j + 1) * rank];
                let b = &alg.mul_const[(j * rank + i) * rank..(j * rank + i + 1) * rank];
                a == b
            })
        });
        let mut inner = Inner {
            spec,
            modulus: alg.modulus,
            rank,
            size,
            one: 0,
            mul_const: alg.mul_const,
            conj_mat: alg.conj_mat,
            base,
            components,
            add_tab: None,
            mul_tab: None,
            neg_tab: None,
            conj_tab: None,
            inv_tab: None,
            commutative,
            field: false,
            split_unit: None,
            sign_tables: [OnceLock::new(), OnceLock::new()],
        };
        inner.one = inner.encode(&alg.one_digits);
        if size <= UNARY_TABLE_LIMIT {
            inner.neg_tab = Some((0..size as u32).map(|a| inner.slow_neg(a)).collect());
            inner.conj_tab = Some((0..size as u32).map(|a| inner.slow_conj(a)).collect());
        }
        if size <= MUL_TABLE_LIMIT {
            let mut add = Vec::with_capacity(size * size);
            let mut mul = Vec::with_capacity(size * size);
            for a in 0..size as u32 {
                for b in 0..size as u32 {
                    add.push(inner.slow_add(a, b));
                    mul.push(inner.slow_mul(a, b));
                }
            }
            inner.add_tab = Some(add);
            inner.mul_tab = Some(mul);
        }
        let mut ring = FiniteRing(Arc::new(inner));
        if size <= INVERSE_TABLE_LIMIT {
            let one = ring.0.one;
            let mut inv = vec![u32::MAX; size];
            for a in 0..size as u32 {
                if inv[a as usize] != u32::MAX {
                    continue;
                }
                for b in 0..size as u32 {
                    if ring.raw_mul(a, b) == one && ring.raw_mul(b, a) == one {
                        inv[a as usize] = b;
                        inv[b as usize] = a;
                        break;
                    }
                }
            }
            let field = commutative && size > 1 && inv.iter().skip(1).all(|&x| x != u32::MAX);
            let inner = Arc::get_mut(&mut ring.0).expect("fresh ring is uniquely owned");
            inner.inv_tab = Some(inv);
            inner.field = field || known_field;
        } else {
            Arc::get_mut(&mut ring.0).expect("fresh ring is uniquely owned").field = known_field;
        }
        Ok(ring)
    }

    fn attach_split_unit(mut self, supplied: Option<&str>) -> Result<Self> {
        let lambda = match supplied {
            Some(text) => {
                let l = self.parse_elem(text)?;
                if !self.is_split_unit(l) {
                    return malformed(format!("supplied split unit {text:?} is not central with λ + λ̄ = 1"));
                }
                Some(l)
            }
            None if self.0.size <= SPLIT_SEARCH_LIMIT => {
                (0..self.0.size as u32).map(El).find(|&l| self.is_split_unit(l))
            }
            None => None,
        };
        Arc::get_mut(&mut self.0).expect("fresh ring is uniquely owned").split_unit = lambda;
        Ok(self)
    }

    pub(crate) fn is_split_unit(&self, l: El) -> bool {
        self.add(&l, &self.conj(&l)) == self.one() && self.is_central(l)
    }

    /// Whether `a` commutes with every basis element (hence with everything).
    pub fn is_central(&self, a: El) -> bool {
        self.0.commutative
            || (0..self.0.rank).all(|i| {
                let b = self.basis(i);
                self.mul(&a, &b) == self.mul(&b, &a)
            })
    }

    /// `Γ`, `Λ` and the cosets of `Λ` for `ε = +1` (`minus == false`) or `ε = −1`.
    pub fn sign_tables(&self, minus: bool) -> Arc<SignTables> {
        self.0.sign_tables[usize::from(minus)]
            .get_or_init(|| {
                let eps = if minus { self.neg(&self.one()) } else { self.one() };
                let mut lambda_witness = HashMap::new();
                let mut gamma = Vec::new();
                for a in self.elements() {
                    let ea = self.mul(&eps, &self.conj(&a));
                    lambda_witness.entry(self.sub(&a, &ea)).or_insert(a);
                    if ea == a {
                        gamma.push(a);
                    }
                }
                let mut lambda: Vec<El> = lambda_witness.keys().copied().collect();
                lambda.sort();
                let mut coset_rep = vec![El(u32::MAX); self.size()];
                for x in self.elements() {
                    if coset_rep[x.0 as usize].0 != u32::MAX {
                        continue;
                    }
                    // x is the least element of its coset, since smaller ones were filled.
                    for l in &lambda {
                        coset_rep[self.add(&x, l).0 as usize] = x;
                    }
                }
                Arc::new(SignTables { gamma, lambda, lambda_witness, coset_rep })
            })
            .clone()
    }

    pub fn is_nilpotent(&self, a: El) -> bool {
        let mut x = a;
        for _ in 0..=self.0.rank.max(1) * 64 {
            if x.0 == 0 {
                return true;
            }
            x = self.mul(&x, &a);
        }
        false
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn characteristic_modulus(&self) -> u32 {
        self.0.modulus
    }

    /// Rank as a free `Z/n`-module.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn is_field(&self) -> bool {
        self.0.field
    }

    pub fn split_unit(&self) -> Option<El> {
        self.0.split_unit
    }

    pub(crate) fn base(&self) -> Option<&FiniteRing> {
        self.0.base.as_ref()
    }

    /// The `i`-th `Z/n`-basis element.
    pub fn basis(&self, i: usize) -> El {
        El((self.0.modulus as u64).pow(i as u32) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = El> + Clone {
        (0..self.0.size as u32).map(El)
    }

    pub fn digits(&self, a: El) -> Vec<u32> {
        self.0.decode(a.0)
    }

    pub fn from_digits(&self, digits: &[u32]) -> El {
        El(self.0.encode(digits))
    }

    /// Splits a composite element into its base-ring components.
    pub fn split(&self, a: El) -> Vec<El> {
        let base = self.0.base.as_ref().map(|b| b.0.size as u64).unwrap_or(self.0.size as u64);
        let mut x = a.0 as u64;
        (0..self.0.components)
            .map(|_| {
                let c = x % base;
                x /= base;
                El(c as u32)
            })
            .collect()
    }

    pub fn join(&self, comps: &[El]) -> El {
        let base = self.0.base.as_ref().map(|b| b.0.size as u64).unwrap_or(self.0.size as u64);
        let mut x = 0u64;
        for c in comps.iter().rev() {
            x = x * base + c.0 as u64;
        }
        El(x as u32)
    }

    /// Embeds a base-ring element as the constant component of a composite
    /// ring (`a ↦ a + 0·e` for dual numbers).
    pub fn embed_base(&self, a: El) -> El {
        let mut comps = vec![El(0); self.0.components];
        comps[0] = a;
        self.join(&comps)
    }

    /// The dual-number generator `e` (second component equal to one).
    pub fn dual_e(&self) -> Option<El> {
        match self.0.spec.kind {
            RingKind::Dual { .. } => {
                let b = self.0.base.as_ref()?;
                Some(self.join(&[b.zero(), b.one()]))
            }
            _ => None,
        }
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        match &self.0.mul_tab {
            Some(t) => t[a as usize * self.0.size + b as usize],
            None => self.0.slow_mul(a, b),
        }
    }

    pub fn parse_elem(&self, text: &str) -> Result<El> {
        super::encode::parse(self, text)
    }

    pub fn format_elem(&self, a: El) -> String {
        super::encode::format(self, a)
    }

    /// Looks up a unit inverse by search when no table is available.
    fn search_inverse(&self, a: El) -> Option<El> {
        self.elements().find(|b| self.mul(&a, b) == self.one() && self.mul(b, &a) == self.one())
    }
}

impl Inner {
    fn decode(&self, mut x: u32) -> Vec<u32> {
        let n = self.modulus;
        (0..self.rank)
            .map(|_| {
                let d = x % n;
                x /= n;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        let n = self.modulus as u64;
        let mut x = 0u64;
        for &d in digits.iter().rev() {
            x = x * n + (d as u64 % n);
        }
        x as u32
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(p, q)| (p + q) % self.modulus).collect();
        self.encode(&s)
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self.decode(a).iter().map(|&d| (self.modulus - d) % self.modulus).collect();
        self.encode(&s)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.decode(a), self.decode(b));
        let r = self.rank;
        let n = self.modulus as u64;
        let mut acc = vec![0u64; r];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = (xi as u64 * yj as u64) % n;
                let row = &self.mul_const[(i * r + j) * r..(i * r + j + 1) * r];
                for (k, &ck) in row.iter().enumerate() {
                    if ck != 0 {
                        acc[k] = (acc[k] + c * ck as u64) % n;
                    }
                }
            }
        }
        let digits: Vec<u32> = acc.into_iter().map(|v| v as u32).collect();
        self.encode(&digits)
    }

    fn slow_conj(&self, a: u32) -> u32 {
        let x = self.decode(a);
        let r = self.rank;
        let n = self.modulus as u64;
        let mut acc = vec![0u64; r];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0 {
                continue;
            }
            for k in 0..r {
                let c = self.conj_mat[j * r + k] as u64;
                acc[k] = (acc[k] + xj as u64 * c) % n;
            }
        }
        let digits: Vec<u32> = acc.into_iter().map(|v| v as u32).collect();
        self.encode(&digits)
    }
}

impl InvolutiveRing for FiniteRing {
    type Elem = El;

    fn zero(&self) -> El {
        El(0)
    }

    fn one(&self) -> El {
        El(self.0.one)
    }

    #[inline]
    fn add(&self, a: &El, b: &El) -> El {
        match &self.0.add_tab {
            Some(t) => El(t[a.0 as usize * self.0.size + b.0 as usize]),
            None => El(self.0.slow_add(a.0, b.0)),
        }
    }

    #[inline]
    fn neg(&self, a: &El) -> El {
        match &self.0.neg_tab {
            Some(t) => El(t[a.0 as usize]),
            None => El(self.0.slow_neg(a.0)),
        }
    }

    #[inline]
    fn mul(&self, a: &El, b: &El) -> El {
        El(self.raw_mul(a.0, b.0))
    }

    #[inline]
    fn conj(&self, a: &El) -> El {
        match &self.0.conj_tab {
            Some(t) => El(t[a.0 as usize]),
            None => El(self.0.slow_conj(a.0)),
        }
    }

    fn from_int(&self, n: i64) -> El {
        let m = self.0.modulus as i64;
        let k = n.rem_euclid(m) as u32;
        let one = self.0.decode(self.0.one);
        let digits: Vec<u32> = one.iter().map(|&d| ((d as u64 * k as u64) % m as u64) as u32).collect();
        El(self.0.encode(&digits))
    }

    fn unit_inverse(&self, a: &El) -> Option<El> {
        match &self.0.inv_tab {
            Some(t) => {
                let v = t[a.0 as usize];
                (v != u32::MAX).then_some(El(v))
            }
            None => self.search_inverse(*a),
        }
    }

    fn is_commutative(&self) -> bool {
        self.0.commutative
    }

    fn format(&self, a: &El) -> String {
        self.format_elem(*a)
    }

    fn name(&self) -> String {
        self.0.spec.short_name()
    }
}

fn scalar_algebra(n: u32) -> Algebra {
    Algebra { modulus: n, rank: 1, mul_const: vec![1 % n], conj_mat: vec![1 % n], one_digits: vec![1 % n] }
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u32, p: u32) -> Option<u32> {
    (1..p).find(|&b| (a as u64 * b as u64) % p as u64 == 1)
}

/// Polynomial product modulo a monic modulus over `F_p`, little-endian.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let idx = k - deg + i;
            prod[idx] = (prod[idx] + (p as u64 - c) * m as u64) % p as u64;
        }
    }
    prod.truncate(deg);
    prod.resize(deg, 0);
    prod.into_iter().map(|v| v as u32).collect()
}

/// Whether a polynomial over `F_p` has no factor of degree between 1 and deg/2.
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        // monic divisors of degree d
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u32], monic: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let d = monic.len() - 1;
    while r.len() > d {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            for (i, &m) in monic.iter().enumerate() {
                let idx = top - d + i;
                r[idx] = (r[idx] + (p as u64 - c) * m as u64) % p as u64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|v| v as u32).collect()
}

fn fq_algebra(p: u32, deg: usize, modulus: &[u32], involution: FieldInvolution, validate: bool) -> Result<Algebra> {
    if modulus.len() != deg + 1 || deg == 0 {
        return malformed(format!("modulus must have deg + 1 = {} coefficients", deg + 1));
    }
    if validate && !is_prime(p) {
        return malformed(format!("F_q needs a prime characteristic, got {p}"));
    }
    let lead = modulus[deg] % p;
    let lead_inv = inv_mod(lead, p).ok_or_else(|| Error::Malformed("modulus leading coefficient is not a unit".into()))?;
    let monic: Vec<u32> = modulus.iter().map(|&c| ((c % p) as u64 * lead_inv as u64 % p as u64) as u32).collect();
    if validate && !is_irreducible(&monic, p) {
        return malformed("modulus is reducible");
    }
    if involution == FieldInvolution::Frobenius && deg % 2 != 0 {
        return malformed("the Frobenius involution needs an even degree");
    }
    let rank = deg;
    let basis = |i: usize| {
        let mut v = vec![0u32; rank];
        v[i] = 1;
        v
    };
    let mut mul_const = vec![0u32; rank * rank * rank];
    for i in 0..rank {
        for j in 0..rank {
            let prod = poly_mul_mod(&basis(i), &basis(j), &monic, p);
            mul_const[(i * rank + j) * rank..(i * rank + j + 1) * rank].copy_from_slice(&prod);
        }
    }
    let mut conj_mat = vec![0u32; rank * rank];
    match involution {
        FieldInvolution::Trivial => {
            for i in 0..rank {
                conj_mat[i * rank + i] = 1;
            }
        }
        FieldInvolution::Frobenius => {
            let exponent = (p as u64).pow((deg / 2) as u32);
            for i in 0..rank {
                let mut acc = basis(0);
                let b = basis(i);
                for _ in 0..exponent {
                    acc = poly_mul_mod(&acc, &b, &monic, p);
                }
                conj_mat[i * rank..(i + 1) * rank].copy_from_slice(&acc);
            }
        }
    }
    Ok(Algebra { modulus: p, rank, mul_const, conj_mat, one_digits: basis(0) })
}

/// Builds the algebra of a composite ring whose elements are `m`-tuples over
/// `base`, from component-level multiplication, involution and unit.
fn composite(
    base: &FiniteRing,
    m: usize,
    mul: impl Fn(&FiniteRing, &[El], &[El]) -> Vec<El>,
    conj: impl Fn(&FiniteRing, &[El]) -> Vec<El>,
    one: impl Fn(&FiniteRing) -> Vec<El>,
) -> Result<Algebra> {
    let br = base.rank();
    let rank = m * br;
    let n = base.characteristic_modulus();
    let basis_tuple = |idx: usize| {
        let mut t = vec![base.zero(); m];
        t[idx / br] = base.basis(idx % br);
        t
    };
    let to_digits = |t: &[El]| -> Vec<u32> { t.iter().flat_map(|&c| base.digits(c)).collect() };
    let mut mul_const = vec![0u32; rank * rank * rank];
    for i in 0..rank {
        let x = basis_tuple(i);
        for j in 0..rank {
            let y = basis_tuple(j);
            let d = to_digits(&mul(base, &x, &y));
            mul_const[(i * rank + j) * rank..(i * rank + j + 1) * rank].copy_from_slice(&d);
        }
    }
    let mut conj_mat = vec![0u32; rank * rank];
    for j in 0..rank {
        let d = to_digits(&conj(base, &basis_tuple(j)));
        conj_mat[j * rank..(j + 1) * rank].copy_from_slice(&d);
    }
    Ok(Algebra { modulus: n, rank, mul_const, conj_mat, one_digits: to_digits(&one(base)) })
}
