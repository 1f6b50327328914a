//! Symbolic engine for the segment calculus of representations of
//! `GL_n(D)`, `D` a quaternion division algebra over a p-adic field,
//! together with a symplectic-period classifier for `n <= 4`.
//!
//! Representations are described combinatorially: a supercuspidal
//! building block (a [`support::CuspidalLabel`]) twisted along its
//! lattice of `v`-powers gives a [`segcore::Segment`]; finite multisets
//! of segments ([`segcore::Multisegment`]) parameterize irreducibles in
//! either the socle (`Z`) or quotient (`L`) presentation. On top of the
//! raw combinatorics the crate provides:
//!
//! - the partial order on multisegments generated by elementary
//!   operations, with exhaustive enumeration of the down-set ([`order`]),
//! - two-factor product decomposition and product normalization
//!   ([`decomp`]),
//! - segment-level Jacquet restriction for the shapes the orbit
//!   predicates consume ([`jacquet`]),
//! - the duality exchanging `Z` and `L` parameters ([`duality`]),
//! - the verdict engine deciding whether a representation carries a
//!   symplectic (`Sp_n(D)`-invariant) functional, with rule-by-rule
//!   citations ([`distinction`]),
//! - a plain-text grammar for expressions and support registries
//!   ([`textio`]).

pub mod decomp;
pub mod distinction;
pub mod duality;
pub mod jacquet;
pub mod order;
pub mod rules;
pub mod segcore;
pub mod support;
pub mod textio;

/// Exponents of `v` are exact rationals; denominators 1 and 2 cover all
/// classical usage but arbitrary rationals are accepted.
pub type Exp = num_rational::Rational64;

/// Convenience constructor for exponents.
pub fn exp(num: i64, den: i64) -> Exp {
    Exp::new(num, den)
}
