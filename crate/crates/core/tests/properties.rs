use iitt_core::eval::{whnf, Fuel};
use iitt_core::surface::{elaborate_term, parse_term, print, Scope};
use iitt_core::term::{resurrect, shift, subst, Ann, Binding, Context, Substitution, Term};
use proptest::prelude::*;

fn ann() -> impl Strategy<Value = Ann> {
    prop_oneof![Just(Ann::Relevant), Just(Ann::Irrelevant)]
}

/// Arbitrary (not necessarily well-typed) terms with free indices below 4
/// at the top level.
fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..4).prop_map(Term::var),
        (0u32..3).prop_map(Term::sort),
        Just(Term::UnitTy),
        Just(Term::UnitVal),
        Just(Term::Dummy),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            (ann(), inner.clone(), inner.clone()).prop_map(|(a, x, y)| Term::pi(a, x, y)),
            (ann(), inner.clone(), inner.clone()).prop_map(|(a, x, y)| Term::lam(a, x, y)),
            (ann(), inner.clone(), inner.clone()).prop_map(|(a, x, y)| Term::app(a, x, y)),
            (ann(), inner.clone(), inner.clone()).prop_map(|(a, x, y)| Term::sigma(a, x, y)),
            (ann(), inner.clone(), inner.clone()).prop_map(|(a, x, y)| Term::pair(a, x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::split(x, y)),
            inner.clone().prop_map(Term::sq_ty),
            inner.clone().prop_map(Term::sq_val),
            (inner.clone(), inner).prop_map(|(x, y)| Term::sq_elim(x, y)),
        ]
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    (prop::collection::vec(term(), 0..4), 0usize..3)
        .prop_map(|(terms, shift)| Substitution { terms, shift })
}

fn closed_scope(t: &Term) -> Vec<String> {
    (0..t.free_bound()).rev().map(|i| format!("v{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn identity_substitution(t in term()) {
        prop_assert_eq!(subst(&t, &Substitution::identity()), t);
    }

    #[test]
    fn substitution_composes(t in term(), s in substitution(), r in substitution()) {
        prop_assert_eq!(subst(&subst(&t, &s), &r), subst(&t, &s.compose(&r)));
    }

    #[test]
    fn shifts_add(t in term(), a in 0usize..4, b in 0usize..4, c in 0usize..3) {
        prop_assert_eq!(shift(&shift(&t, a, c), b, c), shift(&t, a + b, c));
    }

    #[test]
    fn print_round_trips(t in term()) {
        let names = closed_scope(&t);
        let printed = iitt_core::surface::print_in(&names, &t);
        let parsed = parse_term(&printed).map_err(|d| TestCaseError::fail(format!("{printed}: {d}")))?;
        let back = elaborate_term(&parsed, &Scope::new(), &names)
            .map_err(|d| TestCaseError::fail(format!("{printed}: {d}")))?;
        prop_assert_eq!(back, t, "{}", printed);
    }

    #[test]
    fn whnf_is_deterministic_and_idempotent(t in term()) {
        let once = whnf(&t, &mut Fuel::new(2000));
        prop_assert_eq!(&once, &whnf(&t, &mut Fuel::new(2000)));
        if let Ok(w) = once {
            prop_assert_eq!(whnf(&w, &mut Fuel::new(2000)), Ok(w));
        }
    }

    #[test]
    fn more_fuel_gives_the_same_answer(t in term(), f in 0u64..20) {
        if let Ok(w) = whnf(&t, &mut Fuel::new(f)) {
            prop_assert_eq!(whnf(&t, &mut Fuel::new(f + 100)), Ok(w));
        }
    }

    #[test]
    fn resurrection_is_idempotent(anns in prop::collection::vec(ann(), 0..6)) {
        let ctx = Context::from_bindings(
            anns.iter().map(|a| Binding::new("x", *a, Term::UnitTy)).collect(),
        );
        let once = resurrect(&ctx);
        prop_assert_eq!(once.len(), ctx.len());
        prop_assert!(once.bindings().iter().all(|b| b.ann == Ann::Relevant));
        prop_assert_eq!(resurrect(&once), once);
    }
}

#[test]
fn closed_printing_uses_no_placeholders() {
    let t = Term::lam(
        Ann::Relevant,
        Term::sort(0),
        Term::lam(Ann::Relevant, Term::var(0), Term::var(0)),
    );
    assert_eq!(print(&t), "fun (X : Set0) (x : X) => x");
}
