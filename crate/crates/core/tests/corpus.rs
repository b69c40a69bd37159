use iitt_core::program::{check_program, Options};
use iitt_core::surface::elaborate;
use iitt_core::surface::{elaborate_term, parse, parse_term, print, CoreItemKind, Scope};

const CORPUS: &str = include_str!("../corpus/paper_examples.iitt");

#[test]
fn corpus_checks() {
    let report = check_program(CORPUS, Options::default());
    let failures: Vec<String> = report.diagnostics().map(|d| d.to_string()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    assert!(report.outcomes.len() >= 20);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn corpus_outputs() {
    let report = check_program(CORPUS, Options::default());
    let outputs: Vec<(&str, &str)> = report
        .outcomes
        .iter()
        .filter_map(|o| o.output.as_deref().map(|s| (o.kind, s)))
        .collect();
    assert!(outputs.contains(&("infer", "Set1")));
    assert!(outputs.contains(&("erase", "λx y. y")));
    assert!(outputs.contains(&("erase", "λx y. x y")));
    assert!(outputs.contains(&("whnf", "Unit")));
}

fn terms(kind: &CoreItemKind) -> Vec<iitt_core::Term> {
    match kind {
        CoreItemKind::Def { ty, body, .. } => vec![ty.clone(), body.clone()],
        CoreItemKind::Check { term, ty } => vec![term.clone(), ty.clone()],
        CoreItemKind::Eq { lhs, rhs, ty } => vec![lhs.clone(), rhs.clone(), ty.clone()],
        CoreItemKind::Infer(t) | CoreItemKind::Whnf(t) | CoreItemKind::Erase(t) => vec![t.clone()],
        CoreItemKind::Fail(inner) => match &**inner {
            Ok(item) => terms(&item.kind),
            Err(_) => Vec::new(),
        },
    }
}

#[test]
fn corpus_round_trips_through_the_printer() {
    let items = parse(CORPUS).unwrap();
    let core = elaborate(&items, &Scope::new()).unwrap();
    let mut count = 0;
    for item in &core {
        for t in terms(&item.kind) {
            let printed = print(&t);
            let back = elaborate_term(&parse_term(&printed).unwrap(), &Scope::new(), &[])
                .unwrap_or_else(|d| panic!("{printed}: {d}"));
            assert_eq!(back, t, "{printed}");
            count += 1;
        }
    }
    assert!(count > 40);
}
