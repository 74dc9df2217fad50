use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::finite::{El, FiniteRing};
use super::InvolutiveRing;
use crate::error::{Error, Result};

const EXHAUSTIVE_PAIR_LIMIT: usize = 1 << 20;
const MAX_RECORDED: usize = 32;
const SPLIT_SEARCH_LIMIT: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub ring: String,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub violation_count: u64,
    /// The first few violations, in enumeration order.
    pub violations: Vec<Violation>,
}

impl InvolutionReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

struct Collector {
    count: u64,
    recorded: Vec<Violation>,
}

impl Collector {
    fn push(&mut self, ring: &FiniteRing, axiom: &'static str, els: &[El]) {
        self.count += 1;
        if self.recorded.len() < MAX_RECORDED {
            self.recorded.push(Violation { axiom, elements: els.iter().map(|&e| ring.format_elem(e)).collect() });
        }
    }
}

fn check_unary(ring: &FiniteRing, a: El, out: &mut Collector) {
    if ring.conj(&ring.conj(&a)) != a {
        out.push(ring, "conj(conj(a)) = a", &[a]);
    }
}

fn check_pair(ring: &FiniteRing, a: El, b: El, out: &mut Collector) {
    let (ca, cb) = (ring.conj(&a), ring.conj(&b));
    if ring.conj(&ring.add(&a, &b)) != ring.add(&ca, &cb) {
        out.push(ring, "conj(a+b) = conj(a)+conj(b)", &[a, b]);
    }
    if ring.conj(&ring.mul(&a, &b)) != ring.mul(&cb, &ca) {
        out.push(ring, "conj(ab) = conj(b)conj(a)", &[a, b]);
    }
}

/// Checks the involution axioms on every pair when the ring is small enough,
/// otherwise on a deterministic sample.
pub fn verify_involution(ring: &FiniteRing) -> InvolutionReport {
    if ring.size().saturating_mul(ring.size()) <= EXHAUSTIVE_PAIR_LIMIT {
        let mut out = Collector { count: 0, recorded: Vec::new() };
        if ring.conj(&ring.one()) != ring.one() {
            out.push(ring, "conj(1) = 1", &[]);
        }
        for a in ring.elements() {
            check_unary(ring, a, &mut out);
            for b in ring.elements() {
                check_pair(ring, a, b, &mut out);
            }
        }
        InvolutionReport {
            ring: ring.name(),
            exhaustive: true,
            pairs_checked: (ring.size() * ring.size()) as u64,
            violation_count: out.count,
            violations: out.recorded,
        }
    } else {
        verify_involution_sampled(ring, 1 << 16, 0)
    }
}

pub fn verify_involution_sampled(ring: &FiniteRing, samples: u64, seed: u64) -> InvolutionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Collector { count: 0, recorded: Vec::new() };
    if ring.conj(&ring.one()) != ring.one() {
        out.push(ring, "conj(1) = 1", &[]);
    }
    let n = ring.size() as u32;
    for _ in 0..samples {
        let a = El(rng.gen_range(0..n));
        let b = El(rng.gen_range(0..n));
        check_unary(ring, a, &mut out);
        check_pair(ring, a, b, &mut out);
    }
    InvolutionReport {
        ring: ring.name(),
        exhaustive: false,
        pairs_checked: samples,
        violation_count: out.count,
        violations: out.recorded,
    }
}

/// Some central `λ` with `λ + λ̄ = 1`: the supplied one if the spec carries
/// it, else the first in enumeration order.
pub fn find_split_unit(ring: &FiniteRing) -> Result<Option<El>> {
    if ring.spec().split_unit.is_none() && ring.size() > SPLIT_SEARCH_LIMIT {
        return Err(Error::NotEnumerable(format!("{} is too large to search for a split unit", ring.name())));
    }
    Ok(ring.split_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FieldInvolution, RingSpec, SignFlag};

    #[test]
    fn shipped_rings_pass() {
        for spec in [
            RingSpec::fp(2),
            RingSpec::f4(),
            RingSpec::zn(4),
            RingSpec::mat2(RingSpec::fp(2)),
            RingSpec::product_op(RingSpec::mat2(RingSpec::fp(2))),
            RingSpec::dual(RingSpec::f4(), SignFlag::Minus),
            RingSpec::trunc_poly(RingSpec::fp(3), 3, SignFlag::Minus),
        ] {
            let r = FiniteRing::new(&spec).unwrap();
            let rep = verify_involution(&r);
            assert!(rep.passed(), "{}: {:?}", r.name(), rep.violations);
        }
    }

    #[test]
    fn reducible_modulus_frobenius_is_caught() {
        let spec = RingSpec::fq(2, vec![1, 0, 1], FieldInvolution::Frobenius);
        let r = FiniteRing::new_unchecked(&spec).unwrap();
        assert!(!verify_involution(&r).passed());
    }

    #[test]
    fn split_units() {
        let f4 = FiniteRing::new(&RingSpec::f4()).unwrap();
        let l = find_split_unit(&f4).unwrap().unwrap();
        assert_eq!(f4.format_elem(l), "w");
        let z3 = FiniteRing::new(&RingSpec::zn(3)).unwrap();
        assert_eq!(z3.format_elem(find_split_unit(&z3).unwrap().unwrap()), "2");
        let f2 = FiniteRing::new(&RingSpec::fp(2)).unwrap();
        assert_eq!(find_split_unit(&f2).unwrap(), None);
    }
}
