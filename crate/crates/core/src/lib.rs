//! Exact, rank-bounded hermitian K-theory over finite rings with involution.
//!
//! The crate works with free modules `Aⁿ` over finite rings `A` carrying an
//! anti-involution, and with three flavours of ε-quadratic structure on them:
//! hermitian forms `φ` (`max`), quadratic forms `φ₀` up to `γ − εγ*` (`min`),
//! and explicit quadratic forms with explicit morphism witnesses (`el`).
//! Everything is computed by exact arithmetic and, where a statement is
//! existential, by exhaustive search under a configurable cap.

pub mod clauwens;
pub mod config;
pub mod error;
pub mod forms;
pub mod groups;
pub mod invariants;
pub mod linalg;
pub mod report;
pub mod ring;
pub mod verify;

pub use config::Caps;
pub use error::{Error, Result};
pub use forms::{Epsilon, HermForm, QuadFormEl, Variant};
pub use linalg::Mat;
pub use ring::{El, FiniteRing, InvolutiveRing, PolyRing, RingSpec};

/// Matrices over a [`FiniteRing`].
pub type Matrix = Mat<El>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
