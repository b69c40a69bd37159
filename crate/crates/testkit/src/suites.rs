//! Property suites over enumerated terms.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use iitt_core::checker::{CheckError, Checker};
use iitt_core::equality::{ne_eq, tm_eq, ty_eq, EqError, EqResult};
use iitt_core::erasure::{erase_annotations, erase_external, internal_erase};
use iitt_core::eval::{is_neutral, nf_beta_eta, whnf, EvalError, Fuel};
use iitt_core::surface::print_in;
use iitt_core::term::{shift, subst, subst1};
use iitt_core::{Ann, Context, Substitution, Term};

use crate::corpus_triples;
use crate::enumerate::{brute_force_well_typed, Entry, EnumBudget, Enumerator, Fragment};
use crate::named::{named_subst_oracle, named_terms, to_debruijn, var, Named};
use crate::reduce::small_step_normalize;

/// Every suite `run_suite` knows, in the order `iitt test` runs them.
pub const SUITES: &[&str] = &[
    "per",
    "subject-reduction",
    "oracle",
    "irrelevance",
    "consistency-smoke",
    "internal-erasure",
    "substitution",
    "uniqueness",
    "type-unicity",
    "injectivity",
    "enum-completeness",
    "named-subst",
    "untyped-nf",
];

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

/// A violated property, with the term that shows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// Size of the reproducing term.
    pub size: usize,
    pub term: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub max_size: usize,
    pub cases: usize,
    /// At most [`MAX_REPORTED`] failures, smallest first.
    pub failures: Vec<Failure>,
    pub failure_count: usize,
    /// Operations on well-typed inputs that ran out of fuel.
    pub fuel_exhausted: usize,
    pub elapsed: Duration,
}

pub const MAX_REPORTED: usize = 10;

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.fuel_exhausted == 0
    }

    pub fn minimal_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

/// The default size bound of a suite.
pub fn default_size(name: &str) -> Option<usize> {
    Some(match name {
        "per" | "subject-reduction" | "internal-erasure" | "injectivity" => 5,
        "oracle" | "consistency-smoke" => 7,
        "irrelevance" | "substitution" | "uniqueness" | "type-unicity" | "enum-completeness" => 4,
        "named-subst" | "untyped-nf" => 6,
        _ => return None,
    })
}

/// Runs suite `name` with terms up to `max_size` nodes (the suite default
/// when `None`) and `fuel` steps per kernel call.
pub fn run_suite(
    name: &str,
    max_size: Option<usize>,
    fuel: u64,
) -> Result<SuiteReport, UnknownSuite> {
    let default = default_size(name).ok_or_else(|| UnknownSuite(name.to_string()))?;
    let size = max_size.unwrap_or(default);
    let start = Instant::now();
    let mut tally = match name {
        "per" => per(size, fuel),
        "subject-reduction" => subject_reduction(size, fuel),
        "oracle" => oracle(size, fuel),
        "irrelevance" => irrelevance(size, fuel),
        "consistency-smoke" => consistency(size, fuel),
        "internal-erasure" => erasure(size, fuel),
        "substitution" => substitution(size, fuel),
        "uniqueness" => uniqueness(size, fuel),
        "type-unicity" => unicity(size, fuel),
        "injectivity" => injectivity(size, fuel),
        "enum-completeness" => completeness(size, fuel),
        "named-subst" => named_subst(size),
        "untyped-nf" => untyped_nf(size, fuel),
        _ => unreachable!("checked by default_size"),
    };
    tally
        .failures
        .sort_by(|a, b| (a.size, &a.term, &a.message).cmp(&(b.size, &b.term, &b.message)));
    let failure_count = tally.failures.len();
    tally.failures.truncate(MAX_REPORTED);
    Ok(SuiteReport {
        name: name.to_string(),
        max_size: size,
        cases: tally.cases,
        failures: tally.failures,
        failure_count,
        fuel_exhausted: tally.fuel_exhausted,
        elapsed: start.elapsed(),
    })
}

/// The contexts the suites enumerate in.
pub fn base_contexts() -> Vec<Context> {
    let x = Context::empty().extend("X", Ann::Relevant, Term::sort(0));
    vec![
        Context::empty(),
        x.clone(),
        x.extend("x", Ann::Relevant, Term::var(0)),
        Context::empty()
            .extend("U", Ann::Relevant, Term::sort(0))
            .extend("u", Ann::Irrelevant, Term::var(0)),
    ]
}

/// Prints `ctx ⊢ t`.
pub fn show(ctx: &Context, t: &Term) -> String {
    let names = ctx.names();
    let mut parts = Vec::new();
    for (k, b) in ctx.bindings().iter().enumerate() {
        let sep = if b.ann.is_irrelevant() { "÷" } else { ":" };
        parts.push(format!(
            "{} {sep} {}",
            names[k],
            print_in(&names[..k], &b.ty)
        ));
    }
    format!("{} ⊢ {}", parts.join(", "), print_in(&names, t))
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<Failure>,
    fuel_exhausted: usize,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.fuel_exhausted += other.fuel_exhausted;
        self
    }

    fn fail(&mut self, ctx: &Context, t: &Term, message: impl Into<String>) {
        self.failures.push(Failure {
            size: t.size(),
            term: show(ctx, t),
            message: message.into(),
        });
    }

    /// `Some(accepted)`, or `None` after counting an exhausted budget.
    fn eq<T>(&mut self, r: EqResult<T>) -> Option<bool> {
        match r {
            Ok(_) => Some(true),
            Err(EqError::Rejected(_)) => Some(false),
            Err(EqError::FuelExhausted) => {
                self.fuel_exhausted += 1;
                None
            }
        }
    }

    /// `Some(result)` unless the error is an exhausted budget.
    fn check<T>(&mut self, r: Result<T, CheckError>) -> Option<Result<T, CheckError>> {
        match r {
            Err(CheckError::FuelExhausted) => {
                self.fuel_exhausted += 1;
                None
            }
            r => Some(r),
        }
    }

    /// Reduction of the well-typed `t`; any error is recorded.
    fn eval<T>(&mut self, r: Result<T, EvalError>, ctx: &Context, t: &Term) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(EvalError::FuelExhausted) => {
                self.fuel_exhausted += 1;
                None
            }
            Err(e) => {
                self.fail(ctx, t, format!("reduction failed: {e}"));
                None
            }
        }
    }
}

fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    items
        .par_iter()
        .map(|item| {
            let mut t = Tally::default();
            f(item, &mut t);
            t
        })
        .reduce(Tally::default, Tally::merge)
}

/// Enumerates in every context in parallel. Enumeration budget failures
/// are reported through the tally.
fn enumerate(
    contexts: &[Context],
    size: usize,
    frag: Fragment,
    fuel: u64,
) -> (Vec<(Context, Vec<Entry>)>, Tally) {
    let results: Vec<(Context, Vec<Entry>, usize)> = contexts
        .par_iter()
        .map(|ctx| {
            let mut e = Enumerator::new(1, frag).with_fuel(fuel);
            let all = e.up_to(ctx, size);
            (ctx.clone(), all, e.fuel_exhausted())
        })
        .collect();
    let mut tally = Tally::default();
    let mut out = Vec::new();
    for (ctx, all, exhausted) in results {
        tally.fuel_exhausted += exhausted;
        out.push((ctx, all));
    }
    (out, tally)
}

struct Case<'a> {
    ctx: &'a Context,
    entry: &'a Entry,
}

fn cases(enumerated: &[(Context, Vec<Entry>)]) -> Vec<Case<'_>> {
    enumerated
        .iter()
        .flat_map(|(ctx, all)| all.iter().map(move |entry| Case { ctx, entry }))
        .collect()
}

/// Terms of one context grouped by their inferred type, in first-seen order.
fn by_type<'a>(ctx: &'a Context, all: &'a [Entry]) -> Vec<(&'a Context, &'a Term, Vec<&'a Term>)> {
    let mut index: HashMap<&Term, usize> = HashMap::new();
    let mut groups: Vec<(&Context, &Term, Vec<&Term>)> = Vec::new();
    for e in all {
        let k = *index.entry(&e.ty).or_insert_with(|| {
            groups.push((ctx, &e.ty, Vec::new()));
            groups.len() - 1
        });
        groups[k].2.push(&e.term);
    }
    groups
}

fn larger<'a>(a: &'a Term, b: &'a Term) -> &'a Term {
    if a.size() >= b.size() {
        a
    } else {
        b
    }
}

fn per(size: usize, fuel: u64) -> Tally {
    let (enumerated, mut tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    let groups: Vec<_> = enumerated
        .iter()
        .flat_map(|(ctx, all)| by_type(ctx, all))
        .collect();
    for (ctx, ty, terms) in groups {
        let n = terms.len();
        // accepted[i][j] as bit rows
        let words = n.div_ceil(64);
        let rows: Vec<(Vec<u64>, Tally)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                let mut t = Tally::default();
                for j in 0..n {
                    if t.eq(tm_eq(ctx, terms[i], terms[j], ty, &mut Fuel::new(fuel))) == Some(true)
                    {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                (row, t)
            })
            .collect();
        let acc = |i: usize, j: usize| rows[i].0[j / 64] >> (j % 64) & 1 == 1;
        for (_, t) in &rows {
            tally.fuel_exhausted += t.fuel_exhausted;
        }
        tally.cases += n * n;
        for i in 0..n {
            if !acc(i, i) {
                tally.fail(ctx, terms[i], "not reflexive");
            }
            for j in 0..n {
                if acc(i, j) && !acc(j, i) {
                    tally.fail(
                        ctx,
                        larger(terms[i], terms[j]),
                        format!(
                            "not symmetric: {} ~ {}",
                            print_in(&ctx.names(), terms[i]),
                            print_in(&ctx.names(), terms[j])
                        ),
                    );
                }
            }
            // i ~ j and j ~ k imply i ~ k, row by row
            for j in 0..n {
                if i == j || !acc(i, j) {
                    continue;
                }
                for w in 0..words {
                    let missing = rows[j].0[w] & !rows[i].0[w];
                    if missing != 0 {
                        let k = w * 64 + missing.trailing_zeros() as usize;
                        tally.fail(
                            ctx,
                            larger(terms[i], terms[k]),
                            format!(
                                "not transitive: {} ~ {} ~ {}",
                                print_in(&ctx.names(), terms[i]),
                                print_in(&ctx.names(), terms[j]),
                                print_in(&ctx.names(), terms[k])
                            ),
                        );
                        break;
                    }
                }
            }
        }
    }
    tally
}

fn subject_reduction(size: usize, fuel: u64) -> Tally {
    let (enumerated, tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    let checker = Checker::strict();
    tally.merge(par_tally(&cases(&enumerated), |c, t| {
        let (ctx, term, ty) = (c.ctx, &c.entry.term, &c.entry.ty);
        t.cases += 1;
        if let Some(Err(e)) = t.check(checker.check_is_type(ctx, ty, &mut Fuel::new(fuel))) {
            t.fail(ctx, term, format!("inferred type is not a type: {e}"));
        }
        let Some(w) = t.eval(whnf(term, &mut Fuel::new(fuel)), ctx, term) else {
            return;
        };
        match t.check(checker.check(ctx, &w, ty, Ann::Relevant.into(), &mut Fuel::new(fuel))) {
            Some(Err(e)) => {
                t.fail(
                    ctx,
                    term,
                    format!("weak head normal form does not check: {e}"),
                );
                return;
            }
            None => return,
            Some(Ok(())) => {}
        }
        if t.eq(tm_eq(ctx, term, &w, ty, &mut Fuel::new(fuel))) == Some(false) {
            t.fail(ctx, term, "not equal to its weak head normal form");
        }
    }))
}

/// Contexts of the relevant-only fragment.
fn pure_contexts() -> Vec<Context> {
    base_contexts().into_iter().take(3).collect()
}

fn oracle(size: usize, fuel: u64) -> Tally {
    let (enumerated, mut tally) = enumerate(&pure_contexts(), size, Fragment::PURE, fuel);
    for (ctx, all) in &enumerated {
        for (ctx, ty, terms) in by_type(ctx, all) {
            let normal: Vec<Option<_>> = terms
                .par_iter()
                .map(|t| nf_beta_eta(&erase_annotations(t), &mut Fuel::new(fuel)).ok())
                .collect();
            tally.fuel_exhausted += normal.iter().filter(|n| n.is_none()).count();
            let n = terms.len();
            let rows: Vec<Tally> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut t = Tally::default();
                    for j in 0..n {
                        t.cases += 1;
                        let (Some(a), Some(b)) = (&normal[i], &normal[j]) else {
                            continue;
                        };
                        let Some(accepted) =
                            t.eq(tm_eq(ctx, terms[i], terms[j], ty, &mut Fuel::new(fuel)))
                        else {
                            continue;
                        };
                        if accepted != (a == b) {
                            t.fail(
                                ctx,
                                larger(terms[i], terms[j]),
                                format!(
                                    "equality {} but normal forms {}: {} vs {}",
                                    if accepted { "accepts" } else { "rejects" },
                                    if a == b { "agree" } else { "differ" },
                                    print_in(&ctx.names(), terms[i]),
                                    print_in(&ctx.names(), terms[j]),
                                ),
                            );
                        }
                    }
                    t
                })
                .collect();
            for r in rows {
                tally = tally.merge(r);
            }
        }
    }
    tally
}

fn irrelevance(size: usize, fuel: u64) -> Tally {
    let mut contexts = base_contexts();
    // a neutral function with an irrelevant argument
    contexts.push(
        Context::empty()
            .extend("U", Ann::Relevant, Term::sort(0))
            .extend(
                "f",
                Ann::Relevant,
                Term::pi(Ann::Irrelevant, Term::var(0), Term::var(1)),
            ),
    );
    let (enumerated, mut tally) = enumerate(&contexts, size, Fragment::FULL, fuel);
    let resurrected: Vec<Context> = contexts.iter().map(Context::resurrect).collect();
    let (args, arg_tally) = enumerate(&resurrected, size, Fragment::FULL, fuel);
    tally = tally.merge(arg_tally);
    for ((ctx, all), (rctx, args)) in enumerated.iter().zip(&args) {
        let funs: Vec<&Entry> = all
            .iter()
            .filter(|e| matches!(e.head, Term::Pi(Ann::Irrelevant, ..)))
            .collect();
        let per_fun = par_tally(&funs, |f, t| {
            let Term::Pi(_, dom, cod) = &f.head else {
                unreachable!()
            };
            let fitting: Vec<&Entry> = args
                .iter()
                .filter(|u| t.eq(ty_eq(rctx, &u.ty, dom, &mut Fuel::new(fuel))) == Some(true))
                .collect();
            for u in &fitting {
                let lhs = Term::app(Ann::Irrelevant, f.term.clone(), u.term.clone());
                let at = subst1(cod, &u.term);
                for v in &fitting {
                    t.cases += 1;
                    let rhs = Term::app(Ann::Irrelevant, f.term.clone(), v.term.clone());
                    if t.eq(tm_eq(ctx, &lhs, &rhs, &at, &mut Fuel::new(fuel))) == Some(false) {
                        t.fail(
                            ctx,
                            larger(&lhs, &rhs),
                            format!(
                                "irrelevant arguments distinguished: {}",
                                print_in(&ctx.names(), &rhs)
                            ),
                        );
                    }
                    if erase_external(&lhs) != erase_external(&rhs) {
                        t.fail(ctx, larger(&lhs, &rhs), "erasures differ");
                    }
                }
            }
        });
        tally = tally.merge(per_fun);
    }
    tally
}

fn consistency(size: usize, fuel: u64) -> Tally {
    let ctx = base_contexts()[1].clone();
    let (enumerated, tally) = enumerate(std::slice::from_ref(&ctx), size, Fragment::FULL, fuel);
    let x = Term::var(0);
    tally.merge(par_tally(&cases(&enumerated), |c, t| {
        t.cases += 1;
        if t.eq(ty_eq(c.ctx, &c.entry.ty, &x, &mut Fuel::new(fuel))) == Some(true) {
            t.fail(c.ctx, &c.entry.term, "inhabits the type variable");
        }
    }))
}

fn erasure(size: usize, fuel: u64) -> Tally {
    let (enumerated, tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    let mut triples: Vec<(Context, Term, Term)> = cases(&enumerated)
        .into_iter()
        .map(|c| (c.ctx.clone(), c.entry.term.clone(), c.entry.ty.clone()))
        .collect();
    triples.extend(corpus_triples());
    let permissive = Checker::permissive();
    tally.merge(par_tally(&triples, |(ctx, term, ty), t| {
        t.cases += 1;
        let erased = match t.check(internal_erase(ctx, term, ty, &mut Fuel::new(fuel))) {
            Some(Ok(e)) => e,
            Some(Err(e)) => return t.fail(ctx, term, format!("erasure failed: {e}")),
            None => return,
        };
        let mode = Ann::Relevant.into();
        if let Some(Err(e)) =
            t.check(permissive.check(ctx, &erased, ty, mode, &mut Fuel::new(fuel)))
        {
            return t.fail(ctx, term, format!("erasure does not re-check: {e}"));
        }
        match t.check(internal_erase(ctx, &erased, ty, &mut Fuel::new(fuel))) {
            Some(Ok(twice)) if twice != erased => t.fail(ctx, term, "erasure is not idempotent"),
            Some(Err(e)) => t.fail(ctx, term, format!("erasing the erasure failed: {e}")),
            _ => {}
        }
        if t.eq(tm_eq(ctx, term, &erased, ty, &mut Fuel::new(fuel))) == Some(false) {
            t.fail(ctx, term, "erasure is not equal to the original");
        }
    }))
}

/// Source contexts of the substitution suite, all of length at most two.
fn small_contexts() -> Vec<Context> {
    let mut out = base_contexts();
    out.push(
        Context::empty()
            .extend("x", Ann::Relevant, Term::UnitTy)
            .extend("y", Ann::Irrelevant, Term::UnitTy),
    );
    out.push(
        Context::empty()
            .extend("X", Ann::Relevant, Term::sort(0))
            .extend("p", Ann::Relevant, Term::sq_ty(Term::var(0))),
    );
    out
}

/// Every `Γ ⊢ σ : Δ` with components of size at most `size`: a well-typed
/// (irrelevantly where the binding is irrelevant) term in `Γ` for each
/// binding of `Δ`, at the binding's type under the substitution so far.
fn substitutions(
    target: &Context,
    source: &Context,
    size: usize,
    e: &mut Enumerator,
    fuel: u64,
    tally: &mut Tally,
) -> Vec<Substitution> {
    let mut partial: Vec<Vec<Term>> = vec![Vec::new()];
    let relevant = e.up_to(target, size);
    let irrelevant = e.up_to(&target.resurrect(), size);
    for b in source.bindings() {
        let (pool, ctx) = match b.ann {
            Ann::Relevant => (&relevant, target.clone()),
            Ann::Irrelevant => (&irrelevant, target.resurrect()),
        };
        let mut next = Vec::new();
        for terms in &partial {
            let sigma = Substitution {
                terms: terms.iter().rev().cloned().collect(),
                shift: target.len(),
            };
            let want = subst(&b.ty, &sigma);
            for u in pool {
                if tally.eq(ty_eq(&ctx, &u.ty, &want, &mut Fuel::new(fuel))) == Some(true) {
                    let mut t = terms.clone();
                    t.push(u.term.clone());
                    next.push(t);
                }
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|terms| Substitution {
            terms: terms.into_iter().rev().collect(),
            shift: target.len(),
        })
        .collect()
}

fn substitution(size: usize, fuel: u64) -> Tally {
    let sources = small_contexts();
    let targets = base_contexts();
    let (judgements, mut tally) = enumerate(&sources, size, Fragment::FULL, fuel);
    let checker = Checker::strict();
    let component_size = size.min(3);
    for target in &targets {
        let mut e = Enumerator::new(1, Fragment::FULL).with_fuel(fuel);
        for (source, all) in &judgements {
            let sigmas = substitutions(target, source, component_size, &mut e, fuel, &mut tally);
            let work: Vec<(&Substitution, &Entry)> = sigmas
                .iter()
                .flat_map(|s| all.iter().map(move |j| (s, j)))
                .collect();
            tally = tally.merge(par_tally(&work, |(sigma, j), t| {
                t.cases += 1;
                let term = subst(&j.term, sigma);
                let ty = subst(&j.ty, sigma);
                if let Some(Err(err)) = t.check(checker.check(
                    target,
                    &term,
                    &ty,
                    Ann::Relevant.into(),
                    &mut Fuel::new(fuel),
                )) {
                    t.fail(
                        source,
                        &j.term,
                        format!(
                            "substituted into {} does not check: {err}",
                            show(target, &term)
                        ),
                    );
                }
            }));
        }
        tally.fuel_exhausted += e.fuel_exhausted();
    }
    tally
}

fn uniqueness(size: usize, fuel: u64) -> Tally {
    let (enumerated, mut tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    for (ctx, all) in &enumerated {
        let mut neutrals = Vec::new();
        for e in all {
            if let Some(w) = tally.eval(whnf(&e.term, &mut Fuel::new(fuel)), ctx, &e.term) {
                if is_neutral(&w) {
                    neutrals.push(w);
                }
            }
        }
        neutrals.sort_by_key(Term::size);
        neutrals.dedup();
        tally = tally.merge(par_tally(&neutrals, |n, t| {
            let mut seen: Option<Term> = None;
            for m in &neutrals {
                t.cases += 1;
                match ne_eq(ctx, n, m, &mut Fuel::new(fuel)) {
                    Ok(ty) => match &seen {
                        Some(first) if *first != ty => t.fail(
                            ctx,
                            n,
                            format!(
                                "two inferred types: {} and {}",
                                print_in(&ctx.names(), first),
                                print_in(&ctx.names(), &ty)
                            ),
                        ),
                        Some(_) => {}
                        None => seen = Some(ty),
                    },
                    Err(EqError::FuelExhausted) => t.fuel_exhausted += 1,
                    Err(EqError::Rejected(_)) => {}
                }
            }
        }));
    }
    tally
}

fn unicity(size: usize, fuel: u64) -> Tally {
    let (enumerated, mut tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    let checker = Checker::strict();
    for (ctx, all) in &enumerated {
        let mut types: Vec<&Term> = all
            .iter()
            .filter(|e| matches!(e.head, Term::Sort(_)))
            .map(|e| &e.term)
            .collect();
        types.extend(all.iter().map(|e| &e.ty));
        types.sort_by_key(|t| t.size());
        types.dedup();
        tally = tally.merge(par_tally(all, |e, t| {
            t.cases += 1;
            match t.check(checker.infer(ctx, &e.term, &mut Fuel::new(fuel))) {
                Some(Ok(again)) if again != e.ty => {
                    return t.fail(ctx, &e.term, "inference is not deterministic")
                }
                Some(Err(err)) => return t.fail(ctx, &e.term, format!("stopped inferring: {err}")),
                _ => {}
            }
            // Pairs carry no type annotation, so a pair checks against every
            // Σ its components fit, dependent or not. Unicity is asked of
            // the annotated terms only.
            if contains_pair(&e.term) {
                return;
            }
            for other in &types {
                t.cases += 1;
                let mode = Ann::Relevant.into();
                let Some(checks) =
                    t.check(checker.check(ctx, &e.term, other, mode, &mut Fuel::new(fuel)))
                else {
                    continue;
                };
                if checks.is_ok()
                    && t.eq(ty_eq(ctx, &e.ty, other, &mut Fuel::new(fuel))) == Some(false)
                {
                    t.fail(
                        ctx,
                        &e.term,
                        format!("also checks against {}", print_in(&ctx.names(), other)),
                    );
                }
            }
        }));
    }
    tally
}

fn contains_pair(t: &Term) -> bool {
    match t {
        Term::Pair(..) => true,
        Term::Sort(_) | Term::Var(_) | Term::UnitTy | Term::UnitVal | Term::Dummy => false,
        Term::SqTy(a) | Term::SqVal(a) => contains_pair(a),
        Term::Pi(_, a, b)
        | Term::Lam(_, a, b)
        | Term::App(_, a, b)
        | Term::Sigma(_, a, b)
        | Term::Split(a, b)
        | Term::SqElim(a, b) => contains_pair(a) || contains_pair(b),
    }
}

fn injectivity(size: usize, fuel: u64) -> Tally {
    let (enumerated, mut tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    for (ctx, all) in &enumerated {
        let mut pis: Vec<(Term, Term)> = Vec::new();
        for e in all.iter().filter(|e| matches!(e.head, Term::Sort(_))) {
            if let Some(w) = tally.eval(whnf(&e.term, &mut Fuel::new(fuel)), ctx, &e.term) {
                if matches!(w, Term::Pi(..)) {
                    pis.push((e.term.clone(), w));
                }
            }
        }
        tally = tally.merge(par_tally(&pis, |(orig, a), t| {
            let Term::Pi(ann, dom, cod) = a else {
                unreachable!()
            };
            for (_, b) in &pis {
                let Term::Pi(ann2, dom2, cod2) = b else {
                    unreachable!()
                };
                t.cases += 1;
                if t.eq(ty_eq(ctx, a, b, &mut Fuel::new(fuel))) != Some(true) {
                    continue;
                }
                let inner = ctx.extend("x", *ann, (**dom).clone());
                let parts = ann == ann2
                    && t.eq(ty_eq(ctx, dom, dom2, &mut Fuel::new(fuel))) != Some(false)
                    && t.eq(ty_eq(&inner, cod, cod2, &mut Fuel::new(fuel))) != Some(false);
                if !parts {
                    t.fail(
                        ctx,
                        orig,
                        format!(
                            "equal to {} but the parts differ",
                            print_in(&ctx.names(), b)
                        ),
                    );
                }
            }
        }));
    }
    tally
}

fn completeness(size: usize, fuel: u64) -> Tally {
    let mut tally = Tally::default();
    let results: Vec<(Context, Vec<Term>, Vec<Term>, usize)> = base_contexts()
        .into_par_iter()
        .map(|ctx| {
            let budget = EnumBudget::new(size, ctx.clone());
            let mut e = Enumerator::new(budget.max_level, budget.fragment).with_fuel(fuel);
            let synthesised: Vec<Term> = e.up_to(&ctx, size).into_iter().map(|e| e.term).collect();
            let brute = brute_force_well_typed(&ctx, size, budget.max_level, budget.fragment, fuel);
            (ctx, synthesised, brute, e.fuel_exhausted())
        })
        .collect();
    for (ctx, synthesised, brute, exhausted) in results {
        tally.fuel_exhausted += exhausted;
        tally.cases += brute.len();
        let mut sorted = synthesised.clone();
        sorted.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        let before = sorted.len();
        sorted.dedup();
        if sorted.len() != before {
            tally.fail(&ctx, &Term::UnitTy, "the enumerator emitted a duplicate");
        }
        let synth: std::collections::HashSet<&Term> = synthesised.iter().collect();
        let raw: std::collections::HashSet<&Term> = brute.iter().collect();
        for t in brute.iter().filter(|t| !synth.contains(t)) {
            tally.fail(&ctx, t, "well-typed but not enumerated");
        }
        for t in synthesised.iter().filter(|t| !raw.contains(t)) {
            tally.fail(&ctx, t, "enumerated but rejected by brute force");
        }
    }
    tally
}

fn named_subst(size: usize) -> Tally {
    // x is index 0, y index 1 and z index 2 of the free context.
    let env: Vec<String> = ["z", "y", "x"].iter().map(|s| s.to_string()).collect();
    let outer = &env[..2];
    let replacements: Vec<Named> = vec![
        var("y"),
        var("z"),
        Named::UnitVal,
        crate::named::app(var("y"), var("z")),
        crate::named::lam("x", Named::UnitTy, var("y")),
        crate::named::lam("y", var("y"), var("y")),
    ];
    let terms = named_terms(&["x", "y"], size);
    par_tally(&terms, |t, tally| {
        let db = to_debruijn(t, &env).expect("alphabet is in scope");
        for u in &replacements {
            tally.cases += 1;
            let expected = to_debruijn(&named_subst_oracle(t, "x", u), outer);
            let actual = subst1(&db, &to_debruijn(u, outer).expect("in scope"));
            if expected.as_ref() != Some(&actual) {
                tally.fail(
                    &Context::empty(),
                    &db,
                    format!("substitution disagrees with {u:?}"),
                );
            }
        }
        // weakening below the innermost variable
        tally.cases += 1;
        let mut wider = env.clone();
        wider.push("fresh".to_string());
        if to_debruijn(t, &wider).as_ref() != Some(&shift(&db, 1, 0)) {
            tally.fail(&Context::empty(), &db, "shift disagrees with weakening");
        }
    })
}

fn untyped_nf(size: usize, fuel: u64) -> Tally {
    let (enumerated, tally) = enumerate(&base_contexts(), size, Fragment::FULL, fuel);
    tally.merge(par_tally(&cases(&enumerated), |c, t| {
        t.cases += 1;
        for u in [
            erase_annotations(&c.entry.term),
            erase_external(&c.entry.term),
        ] {
            let Some(kernel) = t.eval(nf_beta_eta(&u, &mut Fuel::new(fuel)), c.ctx, &c.entry.term)
            else {
                continue;
            };
            if small_step_normalize(&u, fuel as usize).as_ref() != Some(&kernel) {
                t.fail(
                    c.ctx,
                    &c.entry.term,
                    format!("normal forms disagree on {u}"),
                );
            }
        }
    }))
}
