//! Weight combinatorics for mod-p Hilbert modular forms.
//!
//! A weight is a pair of integer vectors indexed by the p-adic embeddings
//! of a totally real field, grouped into Frobenius orbits
//! ([`EmbeddingSet`], [`Tau`]). Entries may involve a symbolic prime and
//! one bounded auxiliary symbol ([`Coeff`], [`Context`]); comparisons are
//! then three-valued ([`Tri`]), and every decision in the crate is sound
//! with respect to all admissible instantiations.
//!
//! The crate provides:
//!
//! - partial theta and Hasse-invariant weight shifts, the slope criterion
//!   for dividing by a Hasse invariant, and greedy reduction into the
//!   minimal cone ([`theta_shift`], [`hasse_weight`], [`dk_divisibility`],
//!   [`reduce_to_min_cone`]);
//! - eigenform property propagation through those operators ([`FormExpr`],
//!   [`EigenProps`]);
//! - the derivation pipeline from a non-algebraic weight to its saturated
//!   weight, theta companions, and cofactor weight, with a verified
//!   division chain back to the input ([`reconstruct`],
//!   [`DerivationReport`]).
//!
//! Entry points for common tasks: parse a [`Context`] and [`Weight`], then
//! call [`reconstruct`]; or drive the pieces individually via
//! [`compute_m`], [`compute_m_tilde`], [`derive_kprime`], [`derive_kmu`],
//! and [`hasdiv_chain`].

pub mod coeff;
pub mod derivation;
pub mod embeddings;
pub mod error;
pub mod operators;
pub mod tri;
pub mod weight;

pub use coeff::{Assignment, AuxSymbol, Coeff, Context, PrimeSpec};
pub use derivation::{
    check_hypotheses, classify_m_prime, compute_m, compute_m_tilde, derive_kmu, derive_kprime,
    hasdiv_chain, reconstruct, reports_coherent, Case, CaseInfo, ChainStep, DerivationReport,
    HasDivChain, Hypotheses, Justification, MatchingStep, Verdict, WEIGHT_CONVENTION_NOTE,
};
pub use embeddings::{EmbeddingSet, Tau};
pub use error::{Error, Result};
pub use operators::{
    divide_hasse, dk_divisibility, hasse_weight, reduce_to_min_cone, theta_shift, EigenProps,
    Flag, FormExpr, OrderPolicy, Reduction,
};
pub use tri::Tri;
pub use weight::{in_minimal_cone, is_algebraic, Weight};
