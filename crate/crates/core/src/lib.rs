//! Exact and interval-rigorous computations for the additive problem
//! `N = p1² + p2² + p3² + p4² + 2^ν1 + ... + 2^νk`.
//!
//! Every finite object of the circle-method argument is computed here either
//! exactly (big integers / rationals) or as an outward-rounded [`RInterval`]:
//!
//! * [`arith`]: sieving, factoring, multiplicative order of 2, Jacobi and
//!   Ramanujan sums.
//! * [`localsums`]: Gauss sums and the local densities `B(n,q)`, `𝐁(p,h)`,
//!   `𝒜_d(q,h)`, `Ω(p)` and the dyadic factor, all via residue counting.
//! * [`series`]: singular series with rigorous tails, the weights `a, b, c, κ`
//!   and the constants `c₃`, `c₄`.
//! * [`powers2`]: signed power-of-two histograms, power-sum distributions
//!   modulo `q`, `β(d)`, and the constants `c₁`, `c₂`, `c₀`.
//! * [`lemma51`]: the numerics of the lower bound for the major arcs and the
//!   final choice of the number of powers of two.
//! * [`analysis`]: singular integrals and brute-force representation counts.

pub mod analysis;
pub mod arith;
pub mod error;
pub mod interval;
pub mod lemma51;
pub mod localsums;
pub(crate) mod ntt;
pub mod powers2;
pub mod series;
#[doc(hidden)]
pub mod serde_util;

pub use arith::{ExactRational, NatStats};
pub use error::{Error, Result};
pub use interval::{CInterval, RInterval};
