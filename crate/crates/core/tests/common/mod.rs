#![allow(dead_code)]

use hermkq::ring::SignFlag;
use hermkq::{El, FiniteRing, Mat, Matrix, RingSpec};

pub fn ring(spec: RingSpec) -> FiniteRing {
    FiniteRing::new(&spec).unwrap()
}

/// One ring of every shipped kind.
pub fn shipped() -> Vec<FiniteRing> {
    [
        RingSpec::fp(2),
        RingSpec::fp(3),
        RingSpec::f4(),
        RingSpec::f4_trivial(),
        RingSpec::zn(4),
        RingSpec::zn(9),
        RingSpec::dual(RingSpec::fp(3), SignFlag::Minus),
        RingSpec::dual(RingSpec::f4(), SignFlag::Plus),
        RingSpec::mat2(RingSpec::fp(2)),
        RingSpec::product_op(RingSpec::fp(3)),
        RingSpec::trunc_poly(RingSpec::fp(2), 3, SignFlag::Minus),
    ]
    .into_iter()
    .map(ring)
    .collect()
}

pub fn commutative() -> Vec<FiniteRing> {
    [RingSpec::fp(2), RingSpec::fp(3), RingSpec::f4(), RingSpec::zn(4), RingSpec::zn(9)].into_iter().map(ring).collect()
}

/// A matrix from raw words reduced into the ring.
pub fn matrix(r: &FiniteRing, rows: usize, cols: usize, words: &[u32]) -> Matrix {
    Mat::from_fn(rows, cols, |i, j| El(words[i * cols + j] % r.size() as u32))
}
