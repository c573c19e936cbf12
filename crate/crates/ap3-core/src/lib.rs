//! Enumeration and verification of the lattice of "valid families" of 3-term
//! arithmetic progression patterns.
//!
//! A *triple* `(i, j, k)` with `1 <= i < j < k <= n` stands for the set of
//! increasing integer sequences `x_1 < x_2 < ... < x_n` in which `x_i, x_j,
//! x_k` form an arithmetic progression.  A set of triples is *valid* if some
//! single sequence realizes all of them simultaneously.  Validity turns out to
//! be a pairwise condition, and the family of valid sets, ordered by
//! inclusion, is a finite distributive lattice `L_n`.
//!
//! This crate models that lattice three ways and cross-checks the models
//! against each other and against closed-form counts:
//!
//! * [`triples`]: the concrete model.  Pairwise consistency testing, an exact
//!   rational feasibility oracle ([`triples::realize`]) that produces integer
//!   witness sequences, and enumeration of all valid sets.
//! * [`ap_posets`]: the index posets `P_n` and `Phi_n` whose order ideals
//!   mirror valid sets, together with the explicit bijections between them.
//! * [`tableaux`]: the equivalent lattice `M_n` of staircase-shaped
//!   semistandard Young tableaux, including the sublattice `K_n` of maximal
//!   valid sets and the splitting/gluing machinery that decomposes it.
//!
//! [`poset`] supplies the generic finite-poset engine (ideals, antichains,
//! join-irreducibles, rank polynomials, isomorphism testing) and [`formulas`]
//! the closed forms.  [`verify`] drives every closed-form-versus-enumeration
//! comparison and is what the `ap3 verify` subcommand wraps.

pub mod ap_posets;
pub mod error;
pub mod feasibility;
pub mod formulas;
pub mod poset;
pub mod tableaux;
pub mod triples;
pub mod verify;

pub use error::{Error, Result};
