//! Bidirectional type checking.
//!
//! Abstractions carry their domain, so every term without a dummy is
//! inferable. Checking mode exists for the dummy `irr`, for irrelevant
//! positions, and for sharper diagnostics.

use thiserror::Error;

use crate::diagnostic::Code;
use crate::equality::{self, EqError};
use crate::eval::{whnf, EvalError, Fuel};
use crate::surface::print_in;
use crate::term::{shift, sort_axiom, sort_rule, strengthen, subst1, Ann, Context, Sort, Term};

/// Whether an obligation is `Γ ⊢ t : T` or `Γ ⊢ t ÷ T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Relevant,
    Irrelevant,
}

impl From<Ann> for CheckMode {
    fn from(ann: Ann) -> Self {
        match ann {
            Ann::Relevant => CheckMode::Relevant,
            Ann::Irrelevant => CheckMode::Irrelevant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("{rule}: {message}")]
    Type { rule: &'static str, message: String },
    #[error("{0}")]
    Dummy(String),
    #[error("out of fuel")]
    FuelExhausted,
}

impl CheckError {
    pub fn code(&self) -> Code {
        match self {
            CheckError::Type { .. } => Code::Type,
            CheckError::Dummy(_) => Code::Dummy,
            CheckError::FuelExhausted => Code::Fuel,
        }
    }

    fn ty(rule: &'static str, message: impl Into<String>) -> Self {
        CheckError::Type {
            rule,
            message: message.into(),
        }
    }
}

impl From<EvalError> for CheckError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::FuelExhausted => CheckError::FuelExhausted,
            other => CheckError::ty("eval", other.to_string()),
        }
    }
}

fn conv_error(e: EqError) -> CheckError {
    match e {
        EqError::FuelExhausted => CheckError::FuelExhausted,
        EqError::Rejected(m) => CheckError::ty("conv", m.to_string()),
    }
}

pub(crate) fn show(ctx: &Context, t: &Term) -> String {
    format!("`{}`", print_in(&ctx.names(), t))
}

/// Name hint for a binder over `dom`.
pub(crate) fn hint(dom: &Term) -> &'static str {
    if matches!(dom, Term::Sort(_)) {
        "X"
    } else {
        "x"
    }
}

/// The typing rules. `allow_dummy` admits `irr` in irrelevant positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Checker {
    pub allow_dummy: bool,
}

impl Checker {
    pub fn strict() -> Self {
        Checker { allow_dummy: false }
    }

    pub fn permissive() -> Self {
        Checker { allow_dummy: true }
    }

    pub fn infer(&self, ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Term, CheckError> {
        match t {
            Term::Var(i) => match ctx.lookup(*i) {
                None => Err(CheckError::ty("var", format!("unbound variable #{i}"))),
                Some((Ann::Irrelevant, _)) => Err(CheckError::ty(
                    "var",
                    format!(
                        "{} is irrelevant and cannot be used in a relevant position",
                        show(ctx, t)
                    ),
                )),
                Some((Ann::Relevant, ty)) => Ok(ty),
            },
            Term::Sort(s) => {
                if s.0 == u32::MAX {
                    return Err(CheckError::ty("sort", "universe level overflow"));
                }
                Ok(Term::sort(sort_axiom(s.0)))
            }
            Term::Pi(ann, dom, cod) | Term::Sigma(ann, dom, cod) => {
                let s1 = self.check_is_type(ctx, dom, fuel)?;
                let s2 =
                    self.check_is_type(&ctx.extend(hint(dom), *ann, (**dom).clone()), cod, fuel)?;
                Ok(Term::sort(sort_rule(s1.0, s2.0)))
            }
            Term::Lam(ann, dom, body) => {
                self.check_is_type(ctx, dom, fuel)?;
                let inner = ctx.extend(hint(dom), *ann, (**dom).clone());
                let cod = self.infer(&inner, body, fuel)?;
                self.check_is_type(&inner, &cod, fuel)?;
                Ok(Term::pi(*ann, (**dom).clone(), cod))
            }
            Term::App(ann, f, u) => {
                let fty = self.infer(ctx, f, fuel)?;
                match whnf(&fty, fuel)? {
                    Term::Pi(a, dom, cod) if a == *ann => {
                        self.check(ctx, u, &dom, (*ann).into(), fuel)?;
                        Ok(subst1(&cod, u))
                    }
                    Term::Pi(..) => Err(CheckError::ty(
                        "app",
                        format!(
                            "relevance mismatch: {} has type {}",
                            show(ctx, f),
                            show(ctx, &fty)
                        ),
                    )),
                    _ => Err(CheckError::ty(
                        "app",
                        format!(
                            "{} is applied but has non-function type {}",
                            show(ctx, f),
                            show(ctx, &fty)
                        ),
                    )),
                }
            }
            Term::UnitTy => Ok(Term::sort(0)),
            Term::UnitVal => Ok(Term::UnitTy),
            Term::Pair(ann, u, v) => {
                let dom = self.infer(&ctx.resurrect_if(*ann), u, fuel)?;
                let cod = self.infer(ctx, v, fuel)?;
                let sigma = Term::sigma(*ann, dom, shift(&cod, 1, 0));
                self.check_is_type(ctx, &sigma, fuel)?;
                Ok(sigma)
            }
            Term::Split(p, body) => {
                let inner = self.split_context(ctx, p, fuel)?;
                let ty = self.infer(&inner, body, fuel)?;
                self.lower(&inner, &ty, 2, "split", fuel)
            }
            Term::SqTy(a) => Ok(Term::Sort(self.check_is_type(ctx, a, fuel)?)),
            Term::SqVal(u) => {
                let a = self.infer(&ctx.resurrect(), u, fuel)?;
                self.check_is_type(ctx, &a, fuel)?;
                Ok(Term::sq_ty(a))
            }
            Term::SqElim(s, body) => {
                let inner = self.sq_context(ctx, s, fuel)?;
                let ty = self.infer(&inner, body, fuel)?;
                self.lower(&inner, &ty, 1, "sq-elim", fuel)
            }
            Term::Dummy => Err(CheckError::Dummy(
                "the type of `irr` cannot be inferred".into(),
            )),
        }
    }

    /// `Γ.x⋆U.y:T` for a scrutinee `p : Σ⋆(x:U).T`.
    fn split_context(
        &self,
        ctx: &Context,
        p: &Term,
        fuel: &mut Fuel,
    ) -> Result<Context, CheckError> {
        let pty = self.infer(ctx, p, fuel)?;
        match whnf(&pty, fuel)? {
            Term::Sigma(ann, dom, cod) => {
                Ok(ctx
                    .extend(hint(&dom), ann, *dom)
                    .extend("y", Ann::Relevant, *cod))
            }
            _ => Err(CheckError::ty(
                "split",
                format!(
                    "{} has type {}, not a Σ-type",
                    show(ctx, p),
                    show(ctx, &pty)
                ),
            )),
        }
    }

    /// `Γ.x÷A` for a scrutinee `s : Sq A`.
    fn sq_context(&self, ctx: &Context, s: &Term, fuel: &mut Fuel) -> Result<Context, CheckError> {
        let sty = self.infer(ctx, s, fuel)?;
        match whnf(&sty, fuel)? {
            Term::SqTy(a) => Ok(ctx.extend(hint(&a), Ann::Irrelevant, *a)),
            _ => Err(CheckError::ty(
                "sq-elim",
                format!(
                    "{} has type {}, not a squash type",
                    show(ctx, s),
                    show(ctx, &sty)
                ),
            )),
        }
    }

    /// Moves the type of an eliminator body out of the `n` pattern variables.
    fn lower(
        &self,
        inner: &Context,
        ty: &Term,
        n: usize,
        rule: &'static str,
        fuel: &mut Fuel,
    ) -> Result<Term, CheckError> {
        if let Some(t) = strengthen(ty, n) {
            return Ok(t);
        }
        if let Some(t) = strengthen(&whnf(ty, fuel)?, n) {
            return Ok(t);
        }
        Err(CheckError::ty(
            rule,
            format!(
                "the type {} of the body depends on the pattern variables",
                show(inner, ty)
            ),
        ))
    }

    /// `Γ ⊢ t : T` or, in irrelevant mode, `⌜Γ⌝ ⊢ t : T`. `T` must be a type.
    pub fn check(
        &self,
        ctx: &Context,
        t: &Term,
        ty: &Term,
        mode: CheckMode,
        fuel: &mut Fuel,
    ) -> Result<(), CheckError> {
        match mode {
            CheckMode::Relevant => self.check_in(ctx, t, ty, false, fuel),
            CheckMode::Irrelevant => self.check_in(&ctx.resurrect(), t, ty, true, fuel),
        }
    }

    fn check_in(
        &self,
        ctx: &Context,
        t: &Term,
        ty: &Term,
        irr: bool,
        fuel: &mut Fuel,
    ) -> Result<(), CheckError> {
        match t {
            Term::Dummy => {
                return if irr && self.allow_dummy {
                    Ok(())
                } else if irr {
                    Err(CheckError::Dummy(
                        "`irr` is not permitted in this mode".into(),
                    ))
                } else {
                    Err(CheckError::Dummy(
                        "`irr` may only stand in an irrelevant position".into(),
                    ))
                };
            }
            Term::Lam(ann, dom, body) => {
                if let Term::Pi(pann, pdom, pcod) = whnf(ty, fuel)? {
                    if pann != *ann {
                        return Err(CheckError::ty(
                            "lam",
                            format!(
                                "relevance of {} does not match expected type {}",
                                show(ctx, t),
                                show(ctx, ty)
                            ),
                        ));
                    }
                    self.check_is_type(ctx, dom, fuel)?;
                    equality::ty_eq(ctx, dom, &pdom, fuel).map_err(conv_error)?;
                    let inner = ctx.extend(hint(dom), *ann, (**dom).clone());
                    return self.check_in(&inner, body, &pcod, irr, fuel);
                }
            }
            Term::Pair(ann, u, v) => {
                if let Term::Sigma(sann, dom, cod) = whnf(ty, fuel)? {
                    if sann == *ann {
                        match ann {
                            Ann::Relevant => self.check_in(ctx, u, &dom, irr, fuel)?,
                            Ann::Irrelevant => {
                                self.check_in(&ctx.resurrect(), u, &dom, true, fuel)?
                            }
                        }
                        return self.check_in(ctx, v, &subst1(&cod, u), irr, fuel);
                    }
                }
            }
            Term::SqVal(u) => {
                if let Term::SqTy(a) = whnf(ty, fuel)? {
                    return self.check_in(&ctx.resurrect(), u, &a, true, fuel);
                }
            }
            Term::Split(p, body) => {
                let inner = self.split_context(ctx, p, fuel)?;
                return self.check_in(&inner, body, &shift(ty, 2, 0), irr, fuel);
            }
            Term::SqElim(s, body) => {
                let inner = self.sq_context(ctx, s, fuel)?;
                return self.check_in(&inner, body, &shift(ty, 1, 0), irr, fuel);
            }
            _ => {}
        }
        let inferred = self.infer(ctx, t, fuel)?;
        match equality::ty_eq(ctx, &inferred, ty, fuel) {
            Ok(()) => Ok(()),
            Err(EqError::FuelExhausted) => Err(CheckError::FuelExhausted),
            Err(EqError::Rejected(m)) => Err(CheckError::ty(
                "conv",
                format!(
                    "{} has type {} but {} was expected ({m})",
                    show(ctx, t),
                    show(ctx, &inferred),
                    show(ctx, ty)
                ),
            )),
        }
    }

    /// `Γ ⊢ T : s`, returning `s`.
    pub fn check_is_type(
        &self,
        ctx: &Context,
        t: &Term,
        fuel: &mut Fuel,
    ) -> Result<Sort, CheckError> {
        let ty = self.infer(ctx, t, fuel)?;
        match whnf(&ty, fuel)? {
            Term::Sort(s) => Ok(s),
            _ => Err(CheckError::ty(
                "type",
                format!(
                    "{} is not a type; it has type {}",
                    show(ctx, t),
                    show(ctx, &ty)
                ),
            )),
        }
    }

    /// Each binding's type is a type over the bindings before it.
    pub fn check_context(&self, ctx: &Context, fuel: &mut Fuel) -> Result<(), CheckError> {
        for k in 0..ctx.len() {
            let prefix = Context::from_bindings(ctx.bindings()[..k].to_vec());
            self.check_is_type(&prefix, &ctx.bindings()[k].ty, fuel)?;
        }
        Ok(())
    }
}

pub fn infer(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Term, CheckError> {
    Checker::strict().infer(ctx, t, fuel)
}

pub fn check(
    ctx: &Context,
    t: &Term,
    ty: &Term,
    mode: CheckMode,
    fuel: &mut Fuel,
) -> Result<(), CheckError> {
    Checker::strict().check(ctx, t, ty, mode, fuel)
}

pub fn check_is_type(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Sort, CheckError> {
    Checker::strict().check_is_type(ctx, t, fuel)
}

pub fn check_context(ctx: &Context, fuel: &mut Fuel) -> Result<(), CheckError> {
    Checker::strict().check_context(ctx, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ann::*;

    fn f() -> Fuel {
        Fuel::default()
    }

    fn u_ctx() -> Context {
        Context::empty().extend("U", Relevant, Term::sort(0))
    }

    #[test]
    fn sorts_and_pi() {
        assert_eq!(
            infer(&Context::empty(), &Term::sort(0), &mut f()),
            Ok(Term::sort(1))
        );
        let pi = Term::pi(Relevant, Term::sort(0), Term::sort(0));
        assert_eq!(infer(&Context::empty(), &pi, &mut f()), Ok(Term::sort(1)));
        assert_eq!(
            check_is_type(&Context::empty(), &Term::sort(2), &mut f()),
            Ok(Sort(3))
        );
        assert_eq!(
            check_is_type(&Context::empty(), &Term::UnitTy, &mut f()),
            Ok(Sort(0))
        );
        assert!(check_is_type(&Context::empty(), &Term::UnitVal, &mut f()).is_err());
    }

    #[test]
    fn irrelevant_eta_expansion() {
        let fty = Term::pi(Irrelevant, Term::var(0), Term::var(1));
        let ctx = u_ctx().extend("f", Relevant, fty.clone());
        let t = Term::lam(
            Irrelevant,
            Term::var(1),
            Term::app(Irrelevant, Term::var(1), Term::var(0)),
        );
        let expected = Term::pi(Irrelevant, Term::var(1), Term::var(2));
        assert_eq!(infer(&ctx, &t, &mut f()), Ok(expected));
    }

    #[test]
    fn irrelevant_identity_is_rejected() {
        let t = Term::lam(Irrelevant, Term::sort(0), Term::var(0));
        let err = infer(&Context::empty(), &t, &mut f()).unwrap_err();
        assert_eq!(err.code(), Code::Type);
    }

    #[test]
    fn irrelevant_type_quantification_is_ill_formed() {
        let t = Term::pi(
            Irrelevant,
            Term::sort(0),
            Term::pi(Relevant, Term::var(0), Term::var(1)),
        );
        assert!(infer(&Context::empty(), &t, &mut f()).is_err());
    }

    #[test]
    fn resurrection_in_irrelevant_mode() {
        let ctx = u_ctx().extend("u", Irrelevant, Term::var(0));
        let ty = Term::var(1);
        assert!(check(&ctx, &Term::var(0), &ty, CheckMode::Irrelevant, &mut f()).is_ok());
        assert!(check(&ctx, &Term::var(0), &ty, CheckMode::Relevant, &mut f()).is_err());
    }

    #[test]
    fn dummy_needs_irrelevant_mode_and_permission() {
        let ctx = Context::empty();
        let p = Checker::permissive();
        assert!(p
            .check(
                &ctx,
                &Term::Dummy,
                &Term::UnitTy,
                CheckMode::Irrelevant,
                &mut f()
            )
            .is_ok());
        let e = p
            .check(
                &ctx,
                &Term::Dummy,
                &Term::UnitTy,
                CheckMode::Relevant,
                &mut f(),
            )
            .unwrap_err();
        assert_eq!(e.code(), Code::Dummy);
        assert!(check(
            &ctx,
            &Term::Dummy,
            &Term::UnitTy,
            CheckMode::Irrelevant,
            &mut f()
        )
        .is_err());
        assert_eq!(
            infer(&ctx, &Term::Dummy, &mut f()).unwrap_err().code(),
            Code::Dummy
        );
    }

    #[test]
    fn contexts() {
        assert!(check_context(&Context::empty(), &mut f()).is_ok());
        let good = u_ctx().extend("x", Relevant, Term::var(0));
        assert!(check_context(&good, &mut f()).is_ok());
        let bad = Context::empty().extend("x", Relevant, Term::UnitVal);
        assert!(check_context(&bad, &mut f()).is_err());
    }

    #[test]
    fn conversion_through_beta() {
        // X : Set0, x : (fun (Y : Set0) => Y) X ⊢ x : X
        let id = Term::lam(Relevant, Term::sort(0), Term::var(0));
        let ctx = Context::empty()
            .extend("X", Relevant, Term::sort(0))
            .extend("x", Relevant, Term::app(Relevant, id, Term::var(0)));
        assert!(check(
            &ctx,
            &Term::var(0),
            &Term::var(1),
            CheckMode::Relevant,
            &mut f()
        )
        .is_ok());
    }

    #[test]
    fn weak_sigma_and_squash() {
        let ctx = Context::empty();
        let pair = Term::pair(Relevant, Term::UnitVal, Term::UnitVal);
        let sigma = Term::sigma(Relevant, Term::UnitTy, Term::UnitTy);
        assert_eq!(infer(&ctx, &pair, &mut f()), Ok(sigma));
        let split = Term::split(pair, Term::var(1));
        assert_eq!(infer(&ctx, &split, &mut f()), Ok(Term::UnitTy));
        let sq = Term::sq_val(Term::UnitVal);
        assert_eq!(infer(&ctx, &sq, &mut f()), Ok(Term::sq_ty(Term::UnitTy)));
        // the bound payload is irrelevant
        assert!(infer(&ctx, &Term::sq_elim(sq.clone(), Term::var(0)), &mut f()).is_err());
        let back = Term::sq_elim(sq, Term::sq_val(Term::var(0)));
        assert_eq!(infer(&ctx, &back, &mut f()), Ok(Term::sq_ty(Term::UnitTy)));
    }

    #[test]
    fn split_body_type_must_not_mention_components() {
        // X : Set0, p : Σ(x:X).X ⊢ let (a, b) = p in a : X
        let ctx = Context::empty()
            .extend("X", Relevant, Term::sort(0))
            .extend(
                "p",
                Relevant,
                Term::sigma(Relevant, Term::var(0), Term::var(1)),
            );
        let t = Term::split(Term::var(0), Term::var(1));
        assert_eq!(infer(&ctx, &t, &mut f()), Ok(Term::var(1)));
    }
}
