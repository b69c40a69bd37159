//! Algorithmic equality.
//!
//! Three mutually recursive judgements, each with a variant for weak head
//! normal forms:
//!
//! - type equality ([`ty_eq`], [`ty_eq_whnf`]);
//! - structural equality of neutrals, which also infers their type
//!   ([`ne_eq`], [`ne_eq_whnf`]);
//! - type-directed equality ([`tm_eq`], [`tm_eq_whnf`]), which η-expands at
//!   Π-types and accepts any two inhabitants of `Unit` and `Sq A`.
//!
//! All of them assume well-typed input. On ill-typed input they still
//! terminate, thanks to fuel, but the answer is unspecified.

use std::fmt;

use thiserror::Error;

use crate::checker::{hint, show, CheckError, Checker};
use crate::eval::{is_neutral, whnf, EvalError, Fuel};
use crate::surface::print_in;
use crate::term::{alpha_eq, shift, strengthen, subst1, Ann, Context, Term};

/// Why two terms were found unequal: the innermost failing comparison and
/// the path of judgements leading to it, outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub reason: Reason,
    pub trail: Vec<&'static str>,
}

/// The innermost failure. Terms are kept rather than printed, since most
/// rejections are never displayed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    Message(String),
    /// Two heads that no rule relates, with the context's names.
    Differ {
        names: Vec<String>,
        lhs: Term,
        rhs: Term,
    },
}

impl Mismatch {
    pub fn message(&self) -> String {
        match &self.reason {
            Reason::Message(m) => m.clone(),
            Reason::Differ { names, lhs, rhs } => format!(
                "`{}` and `{}` differ",
                print_in(names, lhs),
                print_in(names, rhs)
            ),
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message())?;
        if !self.trail.is_empty() {
            write!(f, " [in {}]", self.trail.join(" > "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqError {
    #[error("{0}")]
    Rejected(Mismatch),
    #[error("equality check ran out of fuel")]
    FuelExhausted,
}

/// `Ok(())` means accepted.
pub type EqResult<T = ()> = Result<T, EqError>;

impl From<EvalError> for EqError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::FuelExhausted => EqError::FuelExhausted,
            other => reject(other.to_string()),
        }
    }
}

impl From<CheckError> for EqError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::FuelExhausted => EqError::FuelExhausted,
            other => reject(other.to_string()),
        }
    }
}

fn reject(message: impl Into<String>) -> EqError {
    EqError::Rejected(Mismatch {
        reason: Reason::Message(message.into()),
        trail: Vec::new(),
    })
}

fn differ(ctx: &Context, a: &Term, b: &Term) -> EqError {
    EqError::Rejected(Mismatch {
        reason: Reason::Differ {
            names: ctx.names(),
            lhs: a.clone(),
            rhs: b.clone(),
        },
        trail: Vec::new(),
    })
}

trait Within<T> {
    fn within(self, step: &'static str) -> EqResult<T>;
}

impl<T> Within<T> for EqResult<T> {
    fn within(self, step: &'static str) -> EqResult<T> {
        self.map_err(|e| match e {
            EqError::Rejected(mut m) => {
                m.trail.insert(0, step);
                EqError::Rejected(m)
            }
            other => other,
        })
    }
}

/// `Δ ⊢ T ⟺ T′` for well-formed types.
pub fn ty_eq(ctx: &Context, a: &Term, b: &Term, fuel: &mut Fuel) -> EqResult {
    let a = whnf(a, fuel)?;
    let b = whnf(b, fuel)?;
    ty_eq_whnf(ctx, &a, &b, fuel)
}

/// Type equality for weak head normal forms.
pub fn ty_eq_whnf(ctx: &Context, a: &Term, b: &Term, fuel: &mut Fuel) -> EqResult {
    match (a, b) {
        (Term::Sort(i), Term::Sort(j)) if i == j => Ok(()),
        (Term::UnitTy, Term::UnitTy) => Ok(()),
        (Term::Pi(x, u, t), Term::Pi(y, u2, t2))
        | (Term::Sigma(x, u, t), Term::Sigma(y, u2, t2))
            if x == y =>
        {
            ty_eq(ctx, u, u2, fuel).within("domain")?;
            // The codomains are compared under a relevant binding, which
            // is harmless for irrelevant ones: their variable never heads
            // a neutral.
            let inner = ctx.extend(hint(u), Ann::Relevant, (**u).clone());
            ty_eq(&inner, t, t2, fuel).within("codomain")
        }
        (Term::SqTy(x), Term::SqTy(y)) => ty_eq(ctx, x, y, fuel).within("squash"),
        _ if is_neutral(a) && is_neutral(b) => ne_eq(ctx, a, b, fuel).map(|_| ()),
        _ => Err(differ(ctx, a, b)),
    }
}

/// `Δ ⊢ n ⇄ n′ : T`: compares two neutrals and returns the type of the
/// left one.
pub fn ne_eq(ctx: &Context, n: &Term, n2: &Term, fuel: &mut Fuel) -> EqResult<Term> {
    match (n, n2) {
        (Term::Var(i), Term::Var(j)) if i == j => match ctx.lookup(*i) {
            Some((Ann::Relevant, ty)) => Ok(ty),
            Some((Ann::Irrelevant, _)) => Err(reject(format!(
                "{} is an irrelevant variable",
                show(ctx, n)
            ))),
            None => Err(reject(format!("unbound variable #{i}"))),
        },
        (Term::App(a, f, u), Term::App(b, g, v)) if a == b => {
            let fty = ne_eq_whnf(ctx, f, g, fuel).within("function")?;
            let Term::Pi(pa, dom, cod) = &fty else {
                return Err(reject(format!(
                    "{} has non-function type {}",
                    show(ctx, f),
                    show(ctx, &fty)
                )));
            };
            if pa != a {
                return Err(reject("relevance of application and function type differ"));
            }
            if *a == Ann::Relevant {
                tm_eq(ctx, u, v, dom, fuel).within("argument")?;
            }
            Ok(subst1(cod, u))
        }
        (Term::Split(p, body), Term::Split(q, body2)) => {
            let pty = ne_eq_whnf(ctx, p, q, fuel).within("split scrutinee")?;
            let Term::Sigma(ann, dom, cod) = pty else {
                return Err(reject(format!("{} is not a pair", show(ctx, p))));
            };
            let inner = ctx
                .extend(hint(&dom), ann, *dom)
                .extend("y", Ann::Relevant, *cod);
            let ty = body_type(&inner, body, 2, fuel)?;
            tm_eq(&inner, body, body2, &shift(&ty, 2, 0), fuel).within("split body")?;
            Ok(ty)
        }
        (Term::SqElim(s, body), Term::SqElim(s2, body2)) => {
            // All inhabitants of a squash type are equal, so the scrutinees
            // only need to agree on their type.
            let a = squash_payload(ctx, s, fuel)?;
            let a2 = squash_payload(ctx, s2, fuel)?;
            ty_eq(ctx, &a, &a2, fuel).within("squash scrutinee")?;
            let inner = ctx.extend(hint(&a), Ann::Irrelevant, a);
            let ty = body_type(&inner, body, 1, fuel)?;
            tm_eq(&inner, body, body2, &shift(&ty, 1, 0), fuel).within("squash body")?;
            Ok(ty)
        }
        _ => Err(differ(ctx, n, n2)),
    }
}

fn squash_payload(ctx: &Context, s: &Term, fuel: &mut Fuel) -> EqResult<Term> {
    match ne_eq_whnf(ctx, s, s, fuel)? {
        Term::SqTy(a) => Ok(*a),
        other => Err(reject(format!(
            "{} has type {}, not a squash type",
            show(ctx, s),
            show(ctx, &other)
        ))),
    }
}

/// Type of an eliminator body, outside its `n` pattern variables.
fn body_type(inner: &Context, body: &Term, n: usize, fuel: &mut Fuel) -> EqResult<Term> {
    let ty = Checker::permissive().infer(inner, body, fuel)?;
    if let Some(t) = strengthen(&ty, n) {
        return Ok(t);
    }
    strengthen(&whnf(&ty, fuel)?, n)
        .ok_or_else(|| reject("eliminator body type depends on its pattern variables"))
}

/// `Δ ⊢ n ⟷ n′ : A`: structural equality with the type in whnf.
pub fn ne_eq_whnf(ctx: &Context, n: &Term, n2: &Term, fuel: &mut Fuel) -> EqResult<Term> {
    let ty = ne_eq(ctx, n, n2, fuel)?;
    Ok(whnf(&ty, fuel)?)
}

/// `Δ ⊢ t ⟺ t′ : T`.
pub fn tm_eq(ctx: &Context, t: &Term, t2: &Term, ty: &Term, fuel: &mut Fuel) -> EqResult {
    let ty = whnf(ty, fuel)?;
    tm_eq_whnf(ctx, t, t2, &ty, fuel)
}

/// Type-directed equality at a type in whnf.
pub fn tm_eq_whnf(ctx: &Context, t: &Term, t2: &Term, ty: &Term, fuel: &mut Fuel) -> EqResult {
    match ty {
        Term::Pi(ann, dom, cod) => {
            let inner = ctx.extend(hint(dom), *ann, (**dom).clone());
            let lhs = Term::app(*ann, shift(t, 1, 0), Term::var(0));
            let rhs = Term::app(*ann, shift(t2, 1, 0), Term::var(0));
            tm_eq(&inner, &lhs, &rhs, cod, fuel).within("function body")
        }
        Term::Sort(_) => ty_eq(ctx, t, t2, fuel),
        Term::UnitTy | Term::SqTy(_) => Ok(()),
        Term::Sigma(ann, dom, cod) => {
            let a = whnf(t, fuel)?;
            let b = whnf(t2, fuel)?;
            match (&a, &b) {
                (Term::Pair(x, u, v), Term::Pair(y, u2, v2)) if x == ann && y == ann => {
                    match ann {
                        Ann::Relevant => tm_eq(ctx, u, u2, dom, fuel).within("first component")?,
                        Ann::Irrelevant => {
                            tm_eq_irr(ctx, u, u2, dom, fuel).within("first component")?
                        }
                    }
                    tm_eq(ctx, v, v2, &subst1(cod, u), fuel).within("second component")
                }
                _ if is_neutral(&a) && is_neutral(&b) => ne_eq(ctx, &a, &b, fuel).map(|_| ()),
                _ => Err(differ(ctx, &a, &b)),
            }
        }
        _ if is_neutral(ty) => {
            let a = whnf(t, fuel)?;
            let b = whnf(t2, fuel)?;
            if is_neutral(&a) && is_neutral(&b) {
                // The inferred type is known to be `ty` for well-typed
                // input, so it is not compared.
                ne_eq(ctx, &a, &b, fuel).map(|_| ())
            } else {
                Err(differ(ctx, &a, &b))
            }
        }
        _ => Err(reject(format!("{} is not a type", show(ctx, ty)))),
    }
}

/// `Δ ⊢ n ⇄ n′ ÷ A`: each side is related to itself in `⌜Δ⌝`, at the same
/// type. The two sides are never compared with each other.
pub fn ne_eq_irr(ctx: &Context, n: &Term, n2: &Term, fuel: &mut Fuel) -> EqResult<Term> {
    let r = ctx.resurrect();
    let a = ne_eq_whnf(&r, n, n, fuel).within("left side")?;
    let b = ne_eq_whnf(&r, n2, n2, fuel).within("right side")?;
    if alpha_eq(&a, &b) {
        Ok(a)
    } else {
        Err(reject(format!(
            "irrelevant sides have types {} and {}",
            show(&r, &a),
            show(&r, &b)
        )))
    }
}

/// Irrelevant equality of arbitrary terms at `ty`: each side is related to
/// itself in `⌜Δ⌝`. The dummy counts as related to itself.
pub fn tm_eq_irr(ctx: &Context, t: &Term, t2: &Term, ty: &Term, fuel: &mut Fuel) -> EqResult {
    let r = ctx.resurrect();
    for side in [t, t2] {
        if *side != Term::Dummy {
            tm_eq(&r, side, side, ty, fuel)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ann::*;

    fn f() -> Fuel {
        Fuel::default()
    }

    fn accepted(r: EqResult) -> bool {
        r.is_ok()
    }

    #[test]
    fn sorts() {
        let c = Context::empty();
        assert!(accepted(ty_eq(
            &c,
            &Term::sort(0),
            &Term::sort(0),
            &mut f()
        )));
        assert!(!accepted(ty_eq_whnf(
            &c,
            &Term::sort(0),
            &Term::sort(1),
            &mut f()
        )));
        let r = Term::pi(Relevant, Term::sort(0), Term::sort(0));
        let i = Term::pi(Irrelevant, Term::sort(0), Term::sort(0));
        assert!(!accepted(ty_eq(&c, &r, &i, &mut f())));
        assert!(accepted(tm_eq(
            &c,
            &Term::sort(0),
            &Term::sort(0),
            &Term::sort(1),
            &mut f()
        )));
    }

    #[test]
    fn beta_in_types() {
        let c = Context::empty().extend("X", Relevant, Term::sort(0));
        let id = Term::lam(Relevant, Term::sort(0), Term::var(0));
        let lhs = Term::app(Relevant, id, Term::var(0));
        assert!(accepted(ty_eq(&c, &lhs, &Term::var(0), &mut f())));
    }

    #[test]
    fn unit_church_numerals_coincide() {
        let c = Context::empty();
        let uu = Term::arrow(Term::UnitTy, Term::UnitTy);
        let zero = Term::lam(
            Relevant,
            uu.clone(),
            Term::lam(Relevant, Term::UnitTy, Term::var(0)),
        );
        let one = Term::lam(
            Relevant,
            uu.clone(),
            Term::lam(
                Relevant,
                Term::UnitTy,
                Term::app(Relevant, Term::var(1), Term::var(0)),
            ),
        );
        let ty = Term::arrow(uu, Term::arrow(Term::UnitTy, Term::UnitTy));
        assert!(accepted(tm_eq(&c, &zero, &one, &ty, &mut f())));
    }

    #[test]
    fn eta() {
        // U : Set0, f : U -> U ⊢ f = fun (x : U) => f x
        let c = Context::empty()
            .extend("U", Relevant, Term::sort(0))
            .extend("f", Relevant, Term::arrow(Term::var(0), Term::var(0)));
        let expanded = Term::lam(
            Relevant,
            Term::var(1),
            Term::app(Relevant, Term::var(1), Term::var(0)),
        );
        let ty = Term::arrow(Term::var(1), Term::var(1));
        assert!(accepted(tm_eq(&c, &Term::var(0), &expanded, &ty, &mut f())));
    }

    fn irr_ctx() -> Context {
        // U : Set0, u : U, v : U, f : [x : U] -> U
        Context::empty()
            .extend("U", Relevant, Term::sort(0))
            .extend("u", Relevant, Term::var(0))
            .extend("v", Relevant, Term::var(1))
            .extend(
                "f",
                Relevant,
                Term::pi(Irrelevant, Term::var(2), Term::var(3)),
            )
    }

    #[test]
    fn irrelevant_arguments_are_ignored() {
        let c = irr_ctx();
        let fu = Term::app(Irrelevant, Term::var(0), Term::var(2));
        let fv = Term::app(Irrelevant, Term::var(0), Term::var(1));
        assert_eq!(ne_eq(&c, &fu, &fv, &mut f()), Ok(Term::var(3)));
        assert!(accepted(tm_eq(&c, &fu, &fv, &Term::var(3), &mut f())));
    }

    #[test]
    fn variables() {
        let c = irr_ctx();
        assert_eq!(
            ne_eq(&c, &Term::var(2), &Term::var(2), &mut f()),
            Ok(Term::var(3))
        );
        assert!(ne_eq(&c, &Term::var(2), &Term::var(1), &mut f()).is_err());
    }

    #[test]
    fn resurrected_structural_equality() {
        let c = Context::empty()
            .extend("U", Relevant, Term::sort(0))
            .extend("x", Irrelevant, Term::var(0))
            .extend("y", Irrelevant, Term::var(1));
        assert_eq!(
            ne_eq_irr(&c, &Term::var(1), &Term::var(0), &mut f()),
            Ok(Term::var(2))
        );
        assert!(ne_eq(&c, &Term::var(1), &Term::var(1), &mut f()).is_err());
        // an out-of-scope side is not self-related
        assert!(ne_eq_irr(&c, &Term::var(1), &Term::var(7), &mut f()).is_err());
    }

    #[test]
    fn squash_and_sigma() {
        let c = irr_ctx();
        let sq = |t| Term::sq_val(t);
        assert!(accepted(tm_eq(
            &c,
            &sq(Term::var(2)),
            &sq(Term::var(1)),
            &Term::sq_ty(Term::var(3)),
            &mut f()
        )));
        let sig = Term::sigma(Irrelevant, Term::var(3), Term::UnitTy);
        let p = |t| Term::pair(Irrelevant, t, Term::UnitVal);
        assert!(accepted(tm_eq(
            &c,
            &p(Term::var(2)),
            &p(Term::var(1)),
            &sig,
            &mut f()
        )));
        assert!(accepted(tm_eq(
            &c,
            &p(Term::var(2)),
            &p(Term::Dummy),
            &sig,
            &mut f()
        )));
        let rsig = Term::sigma(Relevant, Term::var(3), Term::UnitTy);
        let rp = |t| Term::pair(Relevant, t, Term::UnitVal);
        assert!(!accepted(tm_eq(
            &c,
            &rp(Term::var(2)),
            &rp(Term::var(1)),
            &rsig,
            &mut f()
        )));
    }

    #[test]
    fn weak_sigma_beta() {
        let c = irr_ctx();
        let split = Term::split(
            Term::pair(Relevant, Term::var(2), Term::var(1)),
            Term::var(1),
        );
        assert!(accepted(tm_eq(
            &c,
            &split,
            &Term::var(2),
            &Term::var(3),
            &mut f()
        )));
    }

    #[test]
    fn out_of_fuel() {
        let c = Context::empty();
        let x = Term::var(0);
        let w = Term::lam(Relevant, Term::UnitTy, Term::app(Relevant, x.clone(), x));
        let omega = Term::app(Relevant, w.clone(), w);
        assert_eq!(
            ty_eq(&c, &omega, &Term::UnitTy, &mut Fuel::new(50)),
            Err(EqError::FuelExhausted)
        );
    }
}
