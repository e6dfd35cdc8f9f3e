//! Exact commutator calculus in free nilpotent groups, Schur multipliers of
//! small finite groups, and divisibility bounds on multiplier exponents.
//!
//! The toolkit has three layers:
//!
//! * **Commutator calculus** — free-group [`words`], Hall bases of basic
//!   commutators ([`hall`]), and exact arithmetic in free nilpotent groups
//!   via the collection process ([`collect`]), including the machinery that
//!   expands powers of products and powers inside commutators into basic
//!   commutators with binomial-polynomial exponents.
//! * **Finite group engines** — multiplication-table groups, integer Smith
//!   normal form, second homology through the normalized bar complex, and a
//!   2-cocycle cohomology oracle ([`group`], [`linalg`]).
//! * **Bound verification** — exact evaluation of the exponent bound
//!   `exp(G) * p^(m(k-1))` with `m = floor(log_p k)` for p-groups of class
//!   k, its comparison bounds, and the corpus runner that checks them on
//!   real groups ([`bounds`], [`corpus`], [`padic`]).
//!
//! Everything is exact integer arithmetic; no floating point comes near a
//! divisibility statement.
//!
//! ```
//! use nilmult::collect::FreeNilpotentGroup;
//! use nilmult::words::parse_word;
//!
//! let group = FreeNilpotentGroup::new(2, 2).unwrap();
//! let word = parse_word("(x1 x2)^2").unwrap();
//! let nf = group.normal_form(&word).unwrap();
//! assert_eq!(group.display_element(&nf), "x1^2 x2^2 [x2,x1]");
//! ```

pub mod bounds;
pub mod collect;
pub mod corpus;
pub mod group;
pub mod hall;
pub mod linalg;
pub mod padic;
pub mod words;

/// Every code block in the guide under `book/` runs as a doctest, keeping
/// the book and the crate in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/hall-basis.md")]
    mod hall_basis {}
    #[doc = include_str!("../../../book/src/collection.md")]
    mod collection {}
    #[doc = include_str!("../../../book/src/binomial-divisibility.md")]
    mod binomial_divisibility {}
    #[doc = include_str!("../../../book/src/multipliers.md")]
    mod multipliers {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
