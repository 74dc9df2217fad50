//! Rings with (anti)involution.
//!
//! Every finite ring shipped here is a free `Z/n`-algebra of finite rank, so
//! [`FiniteRing`] stores one table of structure constants plus the matrix of
//! the involution, whatever the ring kind. Elements are mixed-radix indices
//! into the canonical enumeration order. [`PolyRing`] covers the
//! infinite polynomial rings `A[s]` (with `s̄ = 1 − s`) and `A[t]` (`t̄ = t`).

mod checks;
mod encode;
mod finite;
mod poly;
mod spec;

pub use checks::{find_split_unit, verify_involution, verify_involution_sampled, InvolutionReport, Violation};
pub use finite::{El, FiniteRing, SignTables};
pub(crate) use finite::is_prime as finite_is_prime;
pub use poly::{PolyRing, VarInvolution};
pub use spec::{FieldInvolution, RingKind, RingSpec, SignFlag};

use std::fmt;
use std::hash::Hash;

/// A unital ring with an additive anti-automorphism of order two.
///
/// Rings are runtime values (a ring is described by a [`RingSpec`] read from
/// JSON), so arithmetic goes through the ring object rather than operator
/// overloading on the element type.
pub trait InvolutiveRing: Clone + fmt::Debug {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The involution `a ↦ ā`.
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Two-sided inverse, when `a` is a unit the ring can recognise cheaply.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_commutative(&self) -> bool;
    fn format(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}
