use iitt_core::checker::infer;
use iitt_core::eval::{nf_beta_eta, Fuel};
use iitt_core::term::shift;
use iitt_core::{Ann, Context, Term, UntypedTerm, DEFAULT_FUEL};
use iitt_testkit::enumerate::{brute_force_well_typed, raw_terms, Fragment};
use iitt_testkit::named::{lam, to_debruijn, var, Named};
use iitt_testkit::reduce::small_step_normalize;
use iitt_testkit::{enum_well_typed, named_subst_oracle, EnumBudget, Triple};

fn x_set0() -> Context {
    Context::empty().extend("X", Ann::Relevant, Term::sort(0))
}

#[test]
fn size_one_includes_sorts_and_variables() {
    let closed = enum_well_typed(&EnumBudget::new(1, Context::empty()));
    assert!(closed.contains(&Triple {
        ctx: Context::empty(),
        term: Term::sort(0),
        ty: Term::sort(1)
    }));
    let open = enum_well_typed(&EnumBudget::new(1, x_set0()));
    assert!(open.contains(&Triple {
        ctx: x_set0(),
        term: Term::var(0),
        ty: Term::sort(0)
    }));
}

#[test]
fn every_emitted_triple_infers() {
    for budget in [
        EnumBudget::new(5, Context::empty()),
        EnumBudget::new(4, x_set0()).fragment(Fragment::PURE),
    ] {
        for t in enum_well_typed(&budget) {
            assert_eq!(
                infer(&t.ctx, &t.term, &mut Fuel::default()).as_ref(),
                Ok(&t.ty),
                "{:?}",
                t.term
            );
        }
    }
}

#[test]
fn closed_count_matches_brute_force() {
    let budget = EnumBudget::new(4, Context::empty());
    let synthesised = enum_well_typed(&budget);
    let brute = brute_force_well_typed(
        &Context::empty(),
        4,
        budget.max_level,
        budget.fragment,
        DEFAULT_FUEL,
    );
    assert_eq!(synthesised.len(), brute.len());
    assert!(brute.len() > 50);
}

#[test]
fn enumeration_is_duplicate_free() {
    let all = enum_well_typed(&EnumBudget::new(5, x_set0()));
    let distinct: std::collections::HashSet<&Term> = all.iter().map(|t| &t.term).collect();
    assert_eq!(distinct.len(), all.len());
}

#[test]
fn raw_terms_include_ill_scoped_variables() {
    let leaves = raw_terms(1, 1, 0, Fragment::PURE);
    assert_eq!(leaves, vec![Term::sort(0), Term::var(0), Term::var(1)]);
}

#[test]
fn capture_avoidance_forces_renaming() {
    let t = lam("y", Named::UnitTy, var("x"));
    let r = named_subst_oracle(&t, "x", &var("y"));
    assert_eq!(r, lam("y'", Named::UnitTy, var("y")));
    let env = vec!["y".to_string()];
    assert_eq!(
        to_debruijn(&r, &env),
        Some(Term::lam(Ann::Relevant, Term::UnitTy, Term::var(1)))
    );
}

#[test]
fn shift_agrees_with_named_weakening() {
    // λ(_ : Unit). a, with a free at index 0 (so Var 1 under the binder)
    let t = Term::lam(Ann::Relevant, Term::UnitTy, Term::var(1));
    let named = lam("b", Named::UnitTy, var("a"));
    let env = vec!["a".to_string()];
    assert_eq!(to_debruijn(&named, &env), Some(t.clone()));
    let wider = vec!["a".to_string(), "fresh".to_string()];
    let expected = to_debruijn(&named, &wider).unwrap();
    assert_eq!(shift(&t, 1, 0), expected);
    assert_eq!(
        expected,
        Term::lam(Ann::Relevant, Term::UnitTy, Term::var(2))
    );
}

#[test]
fn normaliser_agrees_with_small_steps_on_eta() {
    use UntypedTerm::*;
    // λf. λx. f x, which contracts to λf. f
    let t = UntypedTerm::lam(UntypedTerm::lam(UntypedTerm::app(UVar(1), UVar(0))));
    let expected = UntypedTerm::lam(UVar(0));
    assert_eq!(small_step_normalize(&t, 100), Some(expected.clone()));
    assert_eq!(nf_beta_eta(&t, &mut Fuel::default()), Ok(expected));
}
