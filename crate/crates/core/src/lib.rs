//! Decision procedure for monadic shallow linear Horn (MSLH) clause sets.
//!
//! The crate provides:
//! - [`kernel`]: terms, clauses, substitutions, unification and the
//!   KBO-based atom ordering,
//! - [`transform`]: reflexive relation splitting and the
//!   monadic/shallow/linear approximation with a provenance ledger,
//! - [`saturate`]: ordered resolution with selection as a terminating
//!   decision procedure for MSLH clause sets,
//! - [`modelbuild`]: finite model extraction from saturated sets and
//!   minimal-Herbrand-model ground queries,
//! - [`treeauto`]: bottom-up tree automata, Boolean operations, and the
//!   ADC/IG/AMC translations down to MSLH clause sets.

pub mod kernel;
pub mod modelbuild;
pub mod saturate;
pub mod text;
pub mod transform;
pub mod treeauto;

pub use kernel::{Atom, Clause, KboOrdering, Literal, Signature, Subst, Term};
