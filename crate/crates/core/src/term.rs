//! Core terms with de Bruijn indices, contexts, substitution and sort arithmetic.
//!
//! Index 0 refers to the innermost binder. Binders: the codomain of `Pi` and
//! `Sigma`, the body of `Lam` and `SqElim` bind one variable; the body of
//! `Split` binds two (index 1 is the first component, index 0 the second).

use std::fmt;

/// A universe `Set k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(pub u32);

impl Sort {
    pub fn level(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Set{}", self.0)
    }
}

/// `Set k : Set (k+1)`.
pub fn sort_axiom(k: u32) -> u32 {
    k + 1
}

/// Sort of a function (or pair) type whose domain lives in `Set i` and
/// codomain in `Set j`.
pub fn sort_rule(i: u32, j: u32) -> u32 {
    i.max(j)
}

/// Relevance annotation. `Relevant` is written `:`, `Irrelevant` is `÷`.
///
/// The derived order `Relevant < Irrelevant` is the weakening order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ann {
    Relevant,
    Irrelevant,
}

impl Ann {
    pub fn is_irrelevant(self) -> bool {
        self == Ann::Irrelevant
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Sort(Sort),
    Pi(Ann, Box<Term>, Box<Term>),
    Var(usize),
    Lam(Ann, Box<Term>, Box<Term>),
    App(Ann, Box<Term>, Box<Term>),
    UnitTy,
    UnitVal,
    Sigma(Ann, Box<Term>, Box<Term>),
    Pair(Ann, Box<Term>, Box<Term>),
    Split(Box<Term>, Box<Term>),
    SqTy(Box<Term>),
    SqVal(Box<Term>),
    SqElim(Box<Term>, Box<Term>),
    /// Placeholder for an erased proof.
    Dummy,
}

impl Term {
    pub fn sort(k: u32) -> Term {
        Term::Sort(Sort(k))
    }

    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn pi(ann: Ann, dom: Term, cod: Term) -> Term {
        Term::Pi(ann, Box::new(dom), Box::new(cod))
    }

    /// Non-dependent relevant function type; `cod` is given in the outer scope.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi(Ann::Relevant, dom, shift(&cod, 1, 0))
    }

    pub fn lam(ann: Ann, dom: Term, body: Term) -> Term {
        Term::Lam(ann, Box::new(dom), Box::new(body))
    }

    pub fn app(ann: Ann, f: Term, u: Term) -> Term {
        Term::App(ann, Box::new(f), Box::new(u))
    }

    pub fn sigma(ann: Ann, dom: Term, cod: Term) -> Term {
        Term::Sigma(ann, Box::new(dom), Box::new(cod))
    }

    pub fn pair(ann: Ann, fst: Term, snd: Term) -> Term {
        Term::Pair(ann, Box::new(fst), Box::new(snd))
    }

    pub fn split(scrut: Term, body: Term) -> Term {
        Term::Split(Box::new(scrut), Box::new(body))
    }

    pub fn sq_ty(inner: Term) -> Term {
        Term::SqTy(Box::new(inner))
    }

    pub fn sq_val(inner: Term) -> Term {
        Term::SqVal(Box::new(inner))
    }

    pub fn sq_elim(scrut: Term, body: Term) -> Term {
        Term::SqElim(Box::new(scrut), Box::new(body))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Sort(_) | Term::Var(_) | Term::UnitTy | Term::UnitVal | Term::Dummy => 1,
            Term::SqTy(a) | Term::SqVal(a) => 1 + a.size(),
            Term::Pi(_, a, b)
            | Term::Lam(_, a, b)
            | Term::App(_, a, b)
            | Term::Sigma(_, a, b)
            | Term::Pair(_, a, b)
            | Term::Split(a, b)
            | Term::SqElim(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Whether index `i` (relative to the root of `self`) occurs free.
    pub fn has_free(&self, i: usize) -> bool {
        match self {
            Term::Var(j) => *j == i,
            Term::Sort(_) | Term::UnitTy | Term::UnitVal | Term::Dummy => false,
            Term::SqTy(a) | Term::SqVal(a) => a.has_free(i),
            Term::App(_, a, b) | Term::Pair(_, a, b) => a.has_free(i) || b.has_free(i),
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::Sigma(_, a, b) | Term::SqElim(a, b) => {
                a.has_free(i) || b.has_free(i + 1)
            }
            Term::Split(a, b) => a.has_free(i) || b.has_free(i + 2),
        }
    }

    /// Smallest `n` such that every free index is `< n`.
    pub fn free_bound(&self) -> usize {
        fn go(t: &Term, depth: usize) -> usize {
            match t {
                Term::Var(j) => {
                    if *j >= depth {
                        j - depth + 1
                    } else {
                        0
                    }
                }
                Term::Sort(_) | Term::UnitTy | Term::UnitVal | Term::Dummy => 0,
                Term::SqTy(a) | Term::SqVal(a) => go(a, depth),
                Term::App(_, a, b) | Term::Pair(_, a, b) => go(a, depth).max(go(b, depth)),
                Term::Pi(_, a, b)
                | Term::Lam(_, a, b)
                | Term::Sigma(_, a, b)
                | Term::SqElim(a, b) => go(a, depth).max(go(b, depth + 1)),
                Term::Split(a, b) => go(a, depth).max(go(b, depth + 2)),
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.free_bound() == 0
    }
}

/// Rebuilds `t`, replacing every free variable `Var(depth + j)` met under
/// `depth` binders by `f(j, depth)`.
fn map_free(t: &Term, depth: usize, f: &mut dyn FnMut(usize, usize) -> Term) -> Term {
    let mut go = |x: &Term, d: usize| Box::new(map_free(x, d, f));
    match t {
        Term::Var(i) if *i >= depth => f(i - depth, depth),
        Term::Var(_) | Term::Sort(_) | Term::UnitTy | Term::UnitVal | Term::Dummy => t.clone(),
        Term::Pi(a, x, y) => Term::Pi(*a, go(x, depth), go(y, depth + 1)),
        Term::Lam(a, x, y) => Term::Lam(*a, go(x, depth), go(y, depth + 1)),
        Term::App(a, x, y) => Term::App(*a, go(x, depth), go(y, depth)),
        Term::Sigma(a, x, y) => Term::Sigma(*a, go(x, depth), go(y, depth + 1)),
        Term::Pair(a, x, y) => Term::Pair(*a, go(x, depth), go(y, depth)),
        Term::Split(x, y) => Term::Split(go(x, depth), go(y, depth + 2)),
        Term::SqTy(x) => Term::SqTy(go(x, depth)),
        Term::SqVal(x) => Term::SqVal(go(x, depth)),
        Term::SqElim(x, y) => Term::SqElim(go(x, depth), go(y, depth + 1)),
    }
}

/// Adds `by` to every free index `>= cutoff`.
pub fn shift(t: &Term, by: usize, cutoff: usize) -> Term {
    if by == 0 {
        return t.clone();
    }
    map_free(t, cutoff, &mut |j, d| Term::Var(j + by + d))
}

/// Removes the `n` innermost free variables, lowering the rest. Fails when
/// one of them occurs.
pub fn strengthen(t: &Term, n: usize) -> Option<Term> {
    if (0..n).any(|i| t.has_free(i)) {
        return None;
    }
    Some(map_free(t, 0, &mut |j, d| Term::Var(j - n + d)))
}

/// Parallel substitution: index `i < terms.len()` maps to `terms[i]`, every
/// other index `i` maps to `Var(i - terms.len() + shift)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub terms: Vec<Term>,
    pub shift: usize,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution {
            terms: Vec::new(),
            shift: 0,
        }
    }

    /// `[u/0]` with the remaining indices lowered by one.
    pub fn single(u: Term) -> Self {
        Substitution {
            terms: vec![u],
            shift: 0,
        }
    }

    /// Weakening by `n`.
    pub fn weaken(n: usize) -> Self {
        Substitution {
            terms: Vec::new(),
            shift: n,
        }
    }

    pub fn lookup(&self, i: usize) -> Term {
        match self.terms.get(i) {
            Some(t) => t.clone(),
            None => Term::Var(i - self.terms.len() + self.shift),
        }
    }

    /// The substitution that applies `self` first and then `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let len = self.terms.len();
        let total = len + then.terms.len().saturating_sub(self.shift);
        let terms = (0..total).map(|i| subst(&self.lookup(i), then)).collect();
        // Indices past `total` fall through both tails.
        let shift = total - len + self.shift - then.terms.len() + then.shift;
        Substitution { terms, shift }
    }
}

pub fn subst(t: &Term, sigma: &Substitution) -> Term {
    if sigma.terms.is_empty() && sigma.shift == 0 {
        return t.clone();
    }
    map_free(t, 0, &mut |j, d| shift(&sigma.lookup(j), d, 0))
}

/// Instantiates the outermost dangling index 0 of a binder body with `u`.
pub fn subst1(t: &Term, u: &Term) -> Term {
    subst(t, &Substitution::single(u.clone()))
}

/// Instantiates a two-variable body (as in `Split`): index 1 by `first`,
/// index 0 by `second`.
pub fn subst2(t: &Term, first: &Term, second: &Term) -> Term {
    subst(
        t,
        &Substitution {
            terms: vec![second.clone(), first.clone()],
            shift: 0,
        },
    )
}

/// Syntactic identity. Binders are nameless, so this is α-equivalence.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binding {
    /// Used for printing only.
    pub name_hint: String,
    pub ann: Ann,
    pub ty: Term,
}

impl Binding {
    pub fn new(name_hint: impl Into<String>, ann: Ann, ty: Term) -> Self {
        Binding {
            name_hint: name_hint.into(),
            ann,
            ty,
        }
    }
}

/// A typing context. The innermost binding is last; each binding's type is
/// scoped over the bindings before it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    bindings: Vec<Binding>,
}

impl Context {
    pub fn empty() -> Self {
        Context::default()
    }

    pub fn from_bindings(bindings: Vec<Binding>) -> Self {
        Context { bindings }
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    /// Context extended by one binding, `ty` scoped over `self`.
    pub fn extend(&self, name_hint: impl Into<String>, ann: Ann, ty: Term) -> Context {
        let mut bindings = self.bindings.clone();
        bindings.push(Binding::new(name_hint, ann, ty));
        Context { bindings }
    }

    /// The raw binding for de Bruijn index `i`, type unshifted.
    pub fn binding(&self, i: usize) -> Option<&Binding> {
        self.bindings
            .len()
            .checked_sub(i + 1)
            .map(|k| &self.bindings[k])
    }

    /// Annotation and type of index `i`, the type shifted into the scope of
    /// the whole context.
    pub fn lookup(&self, i: usize) -> Option<(Ann, Term)> {
        self.binding(i).map(|b| (b.ann, shift(&b.ty, i + 1, 0)))
    }

    /// Turns every irrelevant binding relevant.
    pub fn resurrect(&self) -> Context {
        Context {
            bindings: self
                .bindings
                .iter()
                .map(|b| Binding {
                    ann: Ann::Relevant,
                    ..b.clone()
                })
                .collect(),
        }
    }

    /// `resurrect` when `ann` is irrelevant, otherwise a copy.
    pub fn resurrect_if(&self, ann: Ann) -> Context {
        match ann {
            Ann::Irrelevant => self.resurrect(),
            Ann::Relevant => self.clone(),
        }
    }

    /// Name hints, outermost first.
    pub fn names(&self) -> Vec<String> {
        self.bindings.iter().map(|b| b.name_hint.clone()).collect()
    }
}

pub fn resurrect(ctx: &Context) -> Context {
    ctx.resurrect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ann::*;

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&Term::var(0), 1, 0), Term::var(1));
        let bound = Term::lam(Relevant, Term::UnitTy, Term::var(0));
        assert_eq!(shift(&bound, 1, 0), bound);
        let free = Term::lam(Relevant, Term::UnitTy, Term::var(1));
        assert_eq!(
            shift(&free, 1, 0),
            Term::lam(Relevant, Term::UnitTy, Term::var(2))
        );
        assert_eq!(shift(&Term::var(0), 3, 1), Term::var(0));
    }

    #[test]
    fn subst1_examples() {
        assert_eq!(subst1(&Term::var(0), &Term::UnitVal), Term::UnitVal);
        assert_eq!(subst1(&Term::var(1), &Term::UnitVal), Term::var(0));
        let id = Term::lam(Relevant, Term::UnitTy, Term::var(0));
        let t = Term::app(Relevant, Term::var(0), id.clone());
        let f = Term::var(5);
        assert_eq!(subst1(&t, &f), Term::app(Relevant, Term::var(5), id));
    }

    #[test]
    fn subst_under_binder_shifts_replacement() {
        // (fun (y : Unit) => x)[z/x] where z is index 3 in the outer scope
        let t = Term::lam(Relevant, Term::UnitTy, Term::var(1));
        assert_eq!(
            subst1(&t, &Term::var(3)),
            Term::lam(Relevant, Term::UnitTy, Term::var(4))
        );
    }

    #[test]
    fn subst2_orders_components() {
        let body = Term::pair(Relevant, Term::var(1), Term::var(0));
        assert_eq!(
            subst2(&body, &Term::UnitTy, &Term::UnitVal),
            Term::pair(Relevant, Term::UnitTy, Term::UnitVal)
        );
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(alpha_eq(
            &Term::lam(Relevant, Term::UnitTy, Term::var(0)),
            &Term::lam(Relevant, Term::UnitTy, Term::var(0))
        ));
        assert!(!alpha_eq(&Term::var(0), &Term::var(1)));
        assert!(!alpha_eq(
            &Term::pi(Relevant, Term::sort(0), Term::var(0)),
            &Term::pi(Irrelevant, Term::sort(0), Term::var(0))
        ));
    }

    #[test]
    fn resurrect_examples() {
        let ctx = Context::empty()
            .extend("x", Irrelevant, Term::sort(0))
            .extend("y", Relevant, Term::var(0));
        let r = ctx.resurrect();
        assert_eq!(r.len(), 2);
        assert!(r.bindings().iter().all(|b| b.ann == Relevant));
        assert_eq!(r.bindings()[1].ty, Term::var(0));
        assert_eq!(r.resurrect(), r);
        let rel = Context::empty().extend("x", Relevant, Term::UnitTy);
        assert_eq!(rel.resurrect(), rel);
    }

    #[test]
    fn sort_arithmetic() {
        assert_eq!(sort_axiom(0), 1);
        assert_eq!(sort_axiom(3), 4);
        for k in 0..=64 {
            assert!(sort_axiom(k) > k);
        }
        assert_eq!(sort_rule(0, 0), 0);
        assert_eq!(sort_rule(1, 0), 1);
        for i in 0..=8 {
            for j in 0..=8 {
                assert_eq!(sort_rule(i, j), sort_rule(j, i));
            }
        }
    }

    #[test]
    fn lookup_shifts_types() {
        let ctx = Context::empty()
            .extend("X", Relevant, Term::sort(0))
            .extend("x", Relevant, Term::var(0));
        assert_eq!(ctx.lookup(0), Some((Relevant, Term::var(1))));
        assert_eq!(ctx.lookup(1), Some((Relevant, Term::sort(0))));
        assert_eq!(ctx.lookup(2), None);
    }

    #[test]
    fn strengthen_drops_unused() {
        assert_eq!(strengthen(&Term::var(2), 2), Some(Term::var(0)));
        assert_eq!(strengthen(&Term::var(1), 2), None);
        let t = Term::pi(Relevant, Term::var(3), Term::var(0));
        assert_eq!(
            strengthen(&t, 1),
            Some(Term::pi(Relevant, Term::var(2), Term::var(0)))
        );
    }

    #[test]
    fn compose_matches_sequential_application() {
        let sigma = Substitution {
            terms: vec![Term::var(2), Term::UnitVal],
            shift: 1,
        };
        let tau = Substitution {
            terms: vec![Term::sort(0), Term::var(0), Term::var(4)],
            shift: 3,
        };
        let comp = sigma.compose(&tau);
        for i in 0..10 {
            let t = Term::var(i);
            assert_eq!(
                subst(&subst(&t, &sigma), &tau),
                subst(&t, &comp),
                "index {i}"
            );
        }
    }
}
