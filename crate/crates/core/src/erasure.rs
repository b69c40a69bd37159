//! Erasure of irrelevant subterms.
//!
//! Internal erasure stays inside the theory: proofs in irrelevant positions
//! are replaced by the dummy `irr`, and the result still type-checks (with
//! the dummy permitted). External erasure leaves the theory and produces an
//! untyped λ-term with irrelevant abstractions and applications deleted.

use crate::checker::{hint, CheckError, Checker};
use crate::eval::{whnf, Fuel};
use crate::term::{shift, subst1, Ann, Context, Term};
use crate::untyped::UntypedTerm;

/// Replaces irrelevant arguments of the checked `Γ ⊢ t : T` by `irr`.
///
/// The walk follows the checker. Arguments of irrelevant applications are
/// always replaced; irrelevant pair components and squash payloads are
/// replaced where the pair or `sq` is checked against a known type. In an
/// inferred position their type is needed to rebuild the Σ or squash type,
/// so they are kept and only erased inside.
pub fn internal_erase(
    ctx: &Context,
    t: &Term,
    ty: &Term,
    fuel: &mut Fuel,
) -> Result<Term, CheckError> {
    Internal {
        checker: Checker::permissive(),
    }
    .check(ctx, t, ty, fuel)
}

struct Internal {
    checker: Checker,
}

impl Internal {
    fn check(
        &self,
        ctx: &Context,
        t: &Term,
        ty: &Term,
        fuel: &mut Fuel,
    ) -> Result<Term, CheckError> {
        match t {
            Term::Lam(ann, dom, body) => {
                if let Term::Pi(_, _, cod) = whnf(ty, fuel)? {
                    let inner = ctx.extend(hint(dom), *ann, (**dom).clone());
                    return Ok(Term::lam(
                        *ann,
                        self.infer(ctx, dom, fuel)?,
                        self.check(&inner, body, &cod, fuel)?,
                    ));
                }
            }
            Term::Pair(ann, u, v) => {
                if let Term::Sigma(sann, dom, cod) = whnf(ty, fuel)? {
                    if sann == *ann {
                        let first = match ann {
                            Ann::Irrelevant => Term::Dummy,
                            Ann::Relevant => self.check(ctx, u, &dom, fuel)?,
                        };
                        let second = self.check(ctx, v, &subst1(&cod, u), fuel)?;
                        return Ok(Term::pair(*ann, first, second));
                    }
                }
            }
            Term::SqVal(_) => {
                if let Term::SqTy(_) = whnf(ty, fuel)? {
                    return Ok(Term::sq_val(Term::Dummy));
                }
            }
            Term::Split(p, body) => {
                let (p2, inner) = self.split(ctx, p, fuel)?;
                let body = self.check(&inner, body, &shift(ty, 2, 0), fuel)?;
                return Ok(Term::split(p2, body));
            }
            Term::SqElim(s, body) => {
                let (s2, inner) = self.sq_elim(ctx, s, fuel)?;
                let body = self.check(&inner, body, &shift(ty, 1, 0), fuel)?;
                return Ok(Term::sq_elim(s2, body));
            }
            _ => {}
        }
        self.infer(ctx, t, fuel)
    }

    fn infer(&self, ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Term, CheckError> {
        Ok(match t {
            Term::Var(_) | Term::Sort(_) | Term::UnitTy | Term::UnitVal | Term::Dummy => t.clone(),
            Term::Pi(ann, dom, cod) | Term::Sigma(ann, dom, cod) | Term::Lam(ann, dom, cod) => {
                let inner = ctx.extend(hint(dom), *ann, (**dom).clone());
                let dom2 = self.infer(ctx, dom, fuel)?;
                let cod2 = self.infer(&inner, cod, fuel)?;
                match t {
                    Term::Pi(..) => Term::pi(*ann, dom2, cod2),
                    Term::Sigma(..) => Term::sigma(*ann, dom2, cod2),
                    _ => Term::lam(*ann, dom2, cod2),
                }
            }
            Term::App(Ann::Irrelevant, f, _) => {
                Term::app(Ann::Irrelevant, self.infer(ctx, f, fuel)?, Term::Dummy)
            }
            Term::App(Ann::Relevant, f, u) => {
                let fty = self.checker.infer(ctx, f, fuel)?;
                let f2 = self.infer(ctx, f, fuel)?;
                let u2 = match whnf(&fty, fuel)? {
                    Term::Pi(_, dom, _) => self.check(ctx, u, &dom, fuel)?,
                    _ => self.infer(ctx, u, fuel)?,
                };
                Term::app(Ann::Relevant, f2, u2)
            }
            Term::Pair(ann, u, v) => Term::pair(
                *ann,
                self.infer(&ctx.resurrect_if(*ann), u, fuel)?,
                self.infer(ctx, v, fuel)?,
            ),
            Term::SqTy(a) => Term::sq_ty(self.infer(ctx, a, fuel)?),
            Term::SqVal(u) => Term::sq_val(self.infer(&ctx.resurrect(), u, fuel)?),
            Term::Split(p, body) => {
                let (p2, inner) = self.split(ctx, p, fuel)?;
                Term::split(p2, self.infer(&inner, body, fuel)?)
            }
            Term::SqElim(s, body) => {
                let (s2, inner) = self.sq_elim(ctx, s, fuel)?;
                Term::sq_elim(s2, self.infer(&inner, body, fuel)?)
            }
        })
    }

    fn split(
        &self,
        ctx: &Context,
        p: &Term,
        fuel: &mut Fuel,
    ) -> Result<(Term, Context), CheckError> {
        let pty = self.checker.infer(ctx, p, fuel)?;
        let inner = match whnf(&pty, fuel)? {
            Term::Sigma(ann, dom, cod) => {
                ctx.extend(hint(&dom), ann, *dom)
                    .extend("y", Ann::Relevant, *cod)
            }
            _ => {
                return Err(CheckError::Type {
                    rule: "split",
                    message: "scrutinee is not a pair".into(),
                })
            }
        };
        Ok((self.infer(ctx, p, fuel)?, inner))
    }

    fn sq_elim(
        &self,
        ctx: &Context,
        s: &Term,
        fuel: &mut Fuel,
    ) -> Result<(Term, Context), CheckError> {
        let sty = self.checker.infer(ctx, s, fuel)?;
        let inner = match whnf(&sty, fuel)? {
            Term::SqTy(a) => ctx.extend(hint(&a), Ann::Irrelevant, *a),
            _ => {
                return Err(CheckError::Type {
                    rule: "sq-elim",
                    message: "scrutinee is not squashed".into(),
                })
            }
        };
        Ok((self.infer(ctx, s, fuel)?, inner))
    }
}

/// Extracts the untyped program from a checked term.
///
/// Irrelevant λs and irrelevant applications are deleted, types and squash
/// values become `*`, and a squash eliminator becomes its body. Free
/// variables of `t` are assumed to be kept.
pub fn erase_external(t: &Term) -> UntypedTerm {
    External { kept: Vec::new() }.go(t)
}

struct External {
    /// One entry per enclosing binder, innermost last: whether it survives.
    kept: Vec<bool>,
}

impl External {
    fn under(&mut self, keep: &[bool], t: &Term) -> UntypedTerm {
        self.kept.extend_from_slice(keep);
        let r = self.go(t);
        self.kept.truncate(self.kept.len() - keep.len());
        r
    }

    fn var(&self, i: usize) -> UntypedTerm {
        let n = self.kept.len();
        if i >= n {
            let surviving = self.kept.iter().filter(|k| **k).count();
            return UntypedTerm::UVar(i - n + surviving);
        }
        if !self.kept[n - 1 - i] {
            return UntypedTerm::UDummy;
        }
        UntypedTerm::UVar(self.kept[n - i..].iter().filter(|k| **k).count())
    }

    fn go(&mut self, t: &Term) -> UntypedTerm {
        use UntypedTerm as U;
        match t {
            Term::Var(i) => self.var(*i),
            Term::Sort(_)
            | Term::Pi(..)
            | Term::Sigma(..)
            | Term::UnitTy
            | Term::SqTy(_)
            | Term::SqVal(_)
            | Term::Dummy => U::UDummy,
            Term::UnitVal => U::UUnit,
            Term::Lam(Ann::Relevant, _, body) => U::lam(self.under(&[true], body)),
            Term::Lam(Ann::Irrelevant, _, body) => self.under(&[false], body),
            Term::App(Ann::Relevant, f, u) => U::app(self.go(f), self.go(u)),
            Term::App(Ann::Irrelevant, f, _) => self.go(f),
            Term::Pair(Ann::Relevant, u, v) => U::pair(self.go(u), self.go(v)),
            Term::Pair(Ann::Irrelevant, _, v) => U::pair(U::UDummy, self.go(v)),
            Term::Split(p, body) => U::split(self.go(p), self.under(&[true, true], body)),
            Term::SqElim(_, body) => self.under(&[false], body),
        }
    }
}

/// Drops domains and annotations only. Irrelevant λs and applications stay,
/// and types remain data, so on the relevant fragment the result can be
/// compared by untyped βη-normalisation.
pub fn erase_annotations(t: &Term) -> UntypedTerm {
    use UntypedTerm as U;
    let b = |x: &Term| Box::new(erase_annotations(x));
    match t {
        Term::Var(i) => U::UVar(*i),
        Term::Sort(s) => U::USort(s.0),
        Term::Pi(a, dom, cod) => U::UPi(*a, b(dom), b(cod)),
        Term::Sigma(a, dom, cod) => U::USigma(*a, b(dom), b(cod)),
        Term::Lam(_, _, body) => U::ULam(b(body)),
        Term::App(_, f, u) => U::UApp(b(f), b(u)),
        Term::UnitTy => U::UUnitTy,
        Term::UnitVal => U::UUnit,
        Term::Pair(_, u, v) => U::UPair(b(u), b(v)),
        Term::Split(p, body) => U::USplit(b(p), b(body)),
        Term::SqTy(a) => U::USqTy(b(a)),
        Term::SqVal(_) | Term::Dummy => U::UDummy,
        Term::SqElim(s, body) => U::UApp(Box::new(U::ULam(b(body))), b(s)),
    }
}
