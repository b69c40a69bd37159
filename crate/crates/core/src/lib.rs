//! Kernel for Irrelevant Intensional Type Theory: a predicative dependent
//! type theory with relevant and irrelevant function spaces, a unit type,
//! weak Σ-types and a squash type.
//!
//! Terms use de Bruijn indices ([`term`]). Types are checked bidirectionally
//! ([`checker`]) and compared with a type-directed conversion algorithm
//! ([`equality`]) that ignores irrelevant arguments and equates all
//! inhabitants of the unit and squash types. Checked programs can be erased
//! internally (proofs replaced by a dummy) or externally to untyped λ-terms
//! ([`erasure`]).

pub mod checker;
pub mod diagnostic;
pub mod equality;
pub mod erasure;
pub mod eval;
pub mod program;
pub mod surface;
pub mod term;
pub mod untyped;

pub use diagnostic::{Code, Diagnostic, Span};
pub use eval::{Fuel, DEFAULT_FUEL};
pub use term::{Ann, Binding, Context, Sort, Substitution, Term};
pub use untyped::UntypedTerm;
