//! Exhaustive enumeration of well-typed terms.
//!
//! Terms are synthesised bottom-up by the typing rules: each node is built
//! from already-enumerated subterms in the contexts the rule asks for, and
//! every candidate is then run through the checker. A raw generator that
//! ignores typing is kept as an oracle for completeness.

use std::collections::HashMap;
use std::rc::Rc;

use iitt_core::checker::{CheckError, Checker};
use iitt_core::equality::{ty_eq, EqError};
use iitt_core::eval::{whnf, Fuel};
use iitt_core::{Ann, Context, Term, DEFAULT_FUEL};

/// Which constructs the enumerator may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fragment {
    pub irrelevance: bool,
    pub unit: bool,
    pub sigma: bool,
    pub squash: bool,
}

impl Fragment {
    /// Every construct of the language except the dummy.
    pub const FULL: Fragment = Fragment {
        irrelevance: true,
        unit: true,
        sigma: true,
        squash: true,
    };

    /// Sorts, variables and relevant Π, λ and application only.
    pub const PURE: Fragment = Fragment {
        irrelevance: false,
        unit: false,
        sigma: false,
        squash: false,
    };

    fn anns(self) -> &'static [Ann] {
        if self.irrelevance {
            &[Ann::Relevant, Ann::Irrelevant]
        } else {
            &[Ann::Relevant]
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnumBudget {
    /// Largest term size (node count) emitted.
    pub max_size: usize,
    /// Largest level of a sort literal.
    pub max_level: u32,
    pub base: Context,
    pub fragment: Fragment,
}

impl EnumBudget {
    pub fn new(max_size: usize, base: Context) -> Self {
        EnumBudget {
            max_size,
            max_level: 1,
            base,
            fragment: Fragment::FULL,
        }
    }

    pub fn fragment(mut self, fragment: Fragment) -> Self {
        self.fragment = fragment;
        self
    }

    pub fn max_level(mut self, level: u32) -> Self {
        self.max_level = level;
        self
    }
}

/// `ctx ⊢ term : ty`, with `ty` as returned by inference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub ctx: Context,
    pub term: Term,
    pub ty: Term,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub term: Term,
    pub ty: Term,
    /// Weak head normal form of `ty`.
    pub head: Term,
}

impl Entry {
    fn is_type(&self) -> bool {
        matches!(self.head, Term::Sort(_))
    }
}

/// Memoising enumerator. Results are keyed by context and exact size.
pub struct Enumerator {
    max_level: u32,
    fragment: Fragment,
    fuel: u64,
    checker: Checker,
    memo: HashMap<(Context, usize), Rc<Vec<Entry>>>,
    fuel_exhausted: usize,
}

impl Enumerator {
    pub fn new(max_level: u32, fragment: Fragment) -> Self {
        Enumerator {
            max_level,
            fragment,
            fuel: DEFAULT_FUEL,
            checker: Checker::strict(),
            memo: HashMap::new(),
            fuel_exhausted: 0,
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    /// Number of candidates abandoned because a budget ran out.
    pub fn fuel_exhausted(&self) -> usize {
        self.fuel_exhausted
    }

    /// All well-typed terms of exactly `size` nodes in `ctx`.
    pub fn terms(&mut self, ctx: &Context, size: usize) -> Rc<Vec<Entry>> {
        let key = (ctx.clone(), size);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = Rc::new(self.generate(ctx, size));
        self.memo.insert(key, out.clone());
        out
    }

    /// All well-typed terms of size `1..=max` in `ctx`, smallest first.
    pub fn up_to(&mut self, ctx: &Context, max: usize) -> Vec<Entry> {
        (1..=max)
            .flat_map(|n| self.terms(ctx, n).as_ref().clone())
            .collect()
    }

    fn types(&mut self, ctx: &Context, size: usize) -> Vec<Term> {
        self.terms(ctx, size)
            .iter()
            .filter(|e| e.is_type())
            .map(|e| e.term.clone())
            .collect()
    }

    fn admit(&mut self, ctx: &Context, t: Term, out: &mut Vec<Entry>) {
        let mut fuel = Fuel::new(self.fuel);
        let ty = match self.checker.infer(ctx, &t, &mut fuel) {
            Ok(ty) => ty,
            Err(CheckError::FuelExhausted) => {
                self.fuel_exhausted += 1;
                return;
            }
            Err(_) => return,
        };
        match whnf(&ty, &mut fuel) {
            Ok(head) => out.push(Entry { term: t, ty, head }),
            Err(_) => self.fuel_exhausted += 1,
        }
    }

    fn convertible(&mut self, ctx: &Context, a: &Term, b: &Term) -> bool {
        match ty_eq(ctx, a, b, &mut Fuel::new(self.fuel)) {
            Ok(()) => true,
            Err(EqError::FuelExhausted) => {
                self.fuel_exhausted += 1;
                false
            }
            Err(EqError::Rejected(_)) => false,
        }
    }

    fn generate(&mut self, ctx: &Context, n: usize) -> Vec<Entry> {
        let mut out = Vec::new();
        let frag = self.fragment;
        if n == 0 {
            return out;
        }
        if n == 1 {
            for k in 0..=self.max_level {
                self.admit(ctx, Term::sort(k), &mut out);
            }
            for i in 0..ctx.len() {
                self.admit(ctx, Term::var(i), &mut out);
            }
            if frag.unit {
                self.admit(ctx, Term::UnitTy, &mut out);
                self.admit(ctx, Term::UnitVal, &mut out);
            }
            return out;
        }

        if frag.squash {
            for a in self.types(ctx, n - 1) {
                self.admit(ctx, Term::sq_ty(a), &mut out);
            }
            let rctx = ctx.resurrect();
            for e in self.terms(&rctx, n - 1).iter() {
                self.admit(ctx, Term::sq_val(e.term.clone()), &mut out);
            }
        }

        for a in 1..n - 1 {
            let b = n - 1 - a;
            for &ann in frag.anns() {
                for dom in self.types(ctx, a) {
                    let inner = ctx.extend("x", ann, dom.clone());
                    for cod in self.types(&inner, b) {
                        self.admit(ctx, Term::pi(ann, dom.clone(), cod.clone()), &mut out);
                        if frag.sigma {
                            self.admit(ctx, Term::sigma(ann, dom.clone(), cod), &mut out);
                        }
                    }
                    for body in self.terms(&inner, b).iter() {
                        self.admit(
                            ctx,
                            Term::lam(ann, dom.clone(), body.term.clone()),
                            &mut out,
                        );
                    }
                }
            }

            let heads = self.terms(ctx, a);
            for f in heads.iter() {
                match &f.head {
                    Term::Pi(ann, dom, _) => {
                        let actx = ctx.resurrect_if(*ann);
                        for u in self.terms(&actx, b).iter() {
                            if self.convertible(&actx, &u.ty, dom) {
                                self.admit(
                                    ctx,
                                    Term::app(*ann, f.term.clone(), u.term.clone()),
                                    &mut out,
                                );
                            }
                        }
                    }
                    Term::Sigma(ann, dom, cod) if frag.sigma => {
                        let inner = ctx.extend("x", *ann, (**dom).clone()).extend(
                            "y",
                            Ann::Relevant,
                            (**cod).clone(),
                        );
                        for body in self.terms(&inner, b).iter() {
                            self.admit(
                                ctx,
                                Term::split(f.term.clone(), body.term.clone()),
                                &mut out,
                            );
                        }
                    }
                    Term::SqTy(payload) if frag.squash => {
                        let inner = ctx.extend("x", Ann::Irrelevant, (**payload).clone());
                        for body in self.terms(&inner, b).iter() {
                            self.admit(
                                ctx,
                                Term::sq_elim(f.term.clone(), body.term.clone()),
                                &mut out,
                            );
                        }
                    }
                    _ => {}
                }
            }

            if frag.sigma {
                for &ann in frag.anns() {
                    let fctx = ctx.resurrect_if(ann);
                    let firsts = self.terms(&fctx, a);
                    let seconds = self.terms(ctx, b);
                    for u in firsts.iter() {
                        for v in seconds.iter() {
                            self.admit(
                                ctx,
                                Term::pair(ann, u.term.clone(), v.term.clone()),
                                &mut out,
                            );
                        }
                    }
                }
            }
        }
        out
    }
}

/// Every well-typed term of the budget's base context, smallest first.
pub fn enum_well_typed(budget: &EnumBudget) -> Vec<Triple> {
    let mut e = Enumerator::new(budget.max_level, budget.fragment);
    e.up_to(&budget.base, budget.max_size)
        .into_iter()
        .map(|entry| Triple {
            ctx: budget.base.clone(),
            term: entry.term,
            ty: entry.ty,
        })
        .collect()
}

/// All raw terms of exactly `size` nodes over `scope` free variables,
/// well-typed or not. Variable indices range one past the scope so that
/// ill-scoped terms are generated too. The dummy is left out: the strict
/// checker rejects it everywhere.
pub fn raw_terms(scope: usize, size: usize, max_level: u32, frag: Fragment) -> Vec<Term> {
    let mut memo = HashMap::new();
    raw(scope, size, max_level, frag, &mut memo)
        .as_ref()
        .clone()
}

fn raw(
    scope: usize,
    n: usize,
    max_level: u32,
    frag: Fragment,
    memo: &mut HashMap<(usize, usize), Rc<Vec<Term>>>,
) -> Rc<Vec<Term>> {
    if let Some(hit) = memo.get(&(scope, n)) {
        return hit.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.extend((0..=max_level).map(Term::sort));
        out.extend((0..=scope).map(Term::var));
        if frag.unit {
            out.push(Term::UnitTy);
            out.push(Term::UnitVal);
        }
    } else if n > 1 {
        if frag.squash {
            for t in raw(scope, n - 1, max_level, frag, memo).iter() {
                out.push(Term::sq_ty(t.clone()));
                out.push(Term::sq_val(t.clone()));
            }
        }
        for a in 1..n - 1 {
            let b = n - 1 - a;
            let left = raw(scope, a, max_level, frag, memo);
            let flat = raw(scope, b, max_level, frag, memo);
            let under1 = raw(scope + 1, b, max_level, frag, memo);
            let under2 = raw(scope + 2, b, max_level, frag, memo);
            for l in left.iter() {
                for &ann in frag.anns() {
                    for r in under1.iter() {
                        out.push(Term::pi(ann, l.clone(), r.clone()));
                        out.push(Term::lam(ann, l.clone(), r.clone()));
                        if frag.sigma {
                            out.push(Term::sigma(ann, l.clone(), r.clone()));
                        }
                    }
                    for r in flat.iter() {
                        out.push(Term::app(ann, l.clone(), r.clone()));
                        if frag.sigma {
                            out.push(Term::pair(ann, l.clone(), r.clone()));
                        }
                    }
                }
                if frag.sigma {
                    for r in under2.iter() {
                        out.push(Term::split(l.clone(), r.clone()));
                    }
                }
                if frag.squash {
                    for r in under1.iter() {
                        out.push(Term::sq_elim(l.clone(), r.clone()));
                    }
                }
            }
        }
    }
    let out = Rc::new(out);
    memo.insert((scope, n), out.clone());
    out
}

/// The brute-force oracle: raw terms of size `1..=max` that infer in `ctx`.
pub fn brute_force_well_typed(
    ctx: &Context,
    max: usize,
    max_level: u32,
    frag: Fragment,
    fuel: u64,
) -> Vec<Term> {
    let checker = Checker::strict();
    (1..=max)
        .flat_map(|n| raw_terms(ctx.len(), n, max_level, frag))
        .filter(|t| checker.infer(ctx, t, &mut Fuel::new(fuel)).is_ok())
        .collect()
}
