//! Test support for `iitt-core`: exhaustive enumeration of well-typed
//! terms, independent oracles (named substitution, a small-step untyped
//! reducer, brute-force term filtering) and the property suites built on
//! them.

pub mod enumerate;
pub mod named;
pub mod reduce;
pub mod suites;

use iitt_core::surface::{elaborate, parse, CoreItemKind, Scope};
use iitt_core::{Context, Term};

pub use enumerate::{enum_well_typed, EnumBudget, Enumerator, Fragment, Triple};
pub use named::{named_subst_oracle, Named};
pub use suites::{run_suite, Failure, SuiteReport, UnknownSuite, SUITES};

/// The golden corpus of derivability and rejection examples.
pub const GOLDEN_CORPUS: &str = include_str!("../../core/corpus/paper_examples.iitt");

/// Closed `(Γ, t, T)` triples from the corpus's definitions and checks
/// that are expected to succeed.
pub fn corpus_triples() -> Vec<(Context, Term, Term)> {
    let items = parse(GOLDEN_CORPUS).expect("corpus parses");
    let core = elaborate(&items, &Scope::new()).expect("corpus elaborates");
    core.into_iter()
        .filter_map(|item| match item.kind {
            CoreItemKind::Def { ty, body, .. } => Some((Context::empty(), body, ty)),
            CoreItemKind::Check { term, ty } => Some((Context::empty(), term, ty)),
            _ => None,
        })
        .collect()
}
