//! Weak head evaluation.
//!
//! Evaluation is only guaranteed to terminate on well-typed terms, so every
//! entry point takes a [`Fuel`] budget that is charged once per reduction
//! step (β for functions, and the pair and squash eliminator rules).

use thiserror::Error;

use crate::term::{subst1, subst2, Ann, Term};
use crate::untyped::{ulower, usubst, UntypedTerm};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Remaining reduction steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(steps: u64) -> Self {
        Fuel { remaining: steps }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn tick(&mut self) -> Result<(), EvalError> {
        match self.remaining.checked_sub(1) {
            Some(r) => {
                self.remaining = r;
                Ok(())
            }
            None => Err(EvalError::FuelExhausted),
        }
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation ran out of fuel")]
    FuelExhausted,
    /// An eliminator met a value of the wrong shape; only possible for
    /// ill-typed input.
    #[error("cannot eliminate {found} with {eliminator}")]
    IllShaped {
        eliminator: &'static str,
        found: &'static str,
    },
}

/// Shape of a term with respect to weak head normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhnfView<'a> {
    Sort(u32),
    Pi(Ann, &'a Term, &'a Term),
    Lam(Ann, &'a Term, &'a Term),
    UnitTy,
    UnitVal,
    Sigma(Ann, &'a Term, &'a Term),
    Pair(Ann, &'a Term, &'a Term),
    SqTy(&'a Term),
    SqVal(&'a Term),
    Dummy,
    /// A variable under a spine of eliminations.
    Neutral {
        head: usize,
    },
    NotWhnf,
}

pub fn view(t: &Term) -> WhnfView<'_> {
    match t {
        Term::Sort(s) => WhnfView::Sort(s.0),
        Term::Pi(a, x, y) => WhnfView::Pi(*a, x, y),
        Term::Lam(a, x, y) => WhnfView::Lam(*a, x, y),
        Term::UnitTy => WhnfView::UnitTy,
        Term::UnitVal => WhnfView::UnitVal,
        Term::Sigma(a, x, y) => WhnfView::Sigma(*a, x, y),
        Term::Pair(a, x, y) => WhnfView::Pair(*a, x, y),
        Term::SqTy(x) => WhnfView::SqTy(x),
        Term::SqVal(x) => WhnfView::SqVal(x),
        Term::Dummy => WhnfView::Dummy,
        Term::Var(_) | Term::App(..) | Term::Split(..) | Term::SqElim(..) => {
            match neutral_head(t) {
                Some(head) => WhnfView::Neutral { head },
                None => WhnfView::NotWhnf,
            }
        }
    }
}

/// Head variable of a neutral term.
pub fn neutral_head(t: &Term) -> Option<usize> {
    match t {
        Term::Var(i) => Some(*i),
        Term::App(_, f, _) => neutral_head(f),
        Term::Split(p, _) | Term::SqElim(p, _) => neutral_head(p),
        _ => None,
    }
}

pub fn is_neutral(t: &Term) -> bool {
    neutral_head(t).is_some()
}

pub fn is_whnf(t: &Term) -> bool {
    view(t) != WhnfView::NotWhnf
}

enum Frame {
    App(Ann, Term),
    Split(Term),
    SqElim(Term),
}

impl Frame {
    fn plug(self, head: Term) -> Term {
        match self {
            Frame::App(a, u) => Term::app(a, head, u),
            Frame::Split(v) => Term::split(head, v),
            Frame::SqElim(v) => Term::sq_elim(head, v),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Frame::App(..) => "application",
            Frame::Split(_) => "pair split",
            Frame::SqElim(_) => "squash elimination",
        }
    }
}

fn shape_name(t: &Term) -> &'static str {
    match t {
        Term::Sort(_) => "a sort",
        Term::Pi(..) => "a function type",
        Term::Lam(..) => "a function",
        Term::UnitTy => "the unit type",
        Term::UnitVal => "the unit value",
        Term::Sigma(..) => "a pair type",
        Term::Pair(..) => "a pair",
        Term::SqTy(_) => "a squash type",
        Term::SqVal(_) => "a squashed value",
        Term::Dummy => "an erased proof",
        Term::Var(_) | Term::App(..) | Term::Split(..) | Term::SqElim(..) => "a neutral term",
    }
}

/// Weak head normal form of `t`. Terms already in whnf are returned unchanged.
pub fn whnf(t: &Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    // Iterative so that long reduction sequences do not grow the stack.
    let mut spine: Vec<Frame> = Vec::new();
    let mut head = t.clone();
    loop {
        head = match (head, spine.pop()) {
            (Term::App(a, f, u), top) => {
                spine.extend(top);
                spine.push(Frame::App(a, *u));
                *f
            }
            (Term::Split(p, v), top) => {
                spine.extend(top);
                spine.push(Frame::Split(*v));
                *p
            }
            (Term::SqElim(p, v), top) => {
                spine.extend(top);
                spine.push(Frame::SqElim(*v));
                *p
            }
            (Term::Lam(_, _, body), Some(Frame::App(_, u))) => {
                fuel.tick()?;
                subst1(&body, &u)
            }
            (Term::Pair(_, a, b), Some(Frame::Split(v))) => {
                fuel.tick()?;
                subst2(&v, &a, &b)
            }
            (Term::SqVal(a), Some(Frame::SqElim(v))) => {
                fuel.tick()?;
                subst1(&v, &a)
            }
            (h, None) => return Ok(h),
            (h @ Term::Var(_), Some(top)) => {
                let mut acc = top.plug(h);
                while let Some(fr) = spine.pop() {
                    acc = fr.plug(acc);
                }
                return Ok(acc);
            }
            (h, Some(top)) => {
                return Err(EvalError::IllShaped {
                    eliminator: top.name(),
                    found: shape_name(&h),
                })
            }
        };
    }
}

/// Applies a whnf `f` to `u`: β-reduces a λ and continues to whnf, or builds
/// the neutral application.
pub fn app_active(f: Term, ann: Ann, u: Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    match f {
        Term::Lam(_, _, body) => {
            fuel.tick()?;
            whnf(&subst1(&body, &u), fuel)
        }
        n if is_neutral(&n) => Ok(Term::app(ann, n, u)),
        other => Err(EvalError::IllShaped {
            eliminator: "application",
            found: shape_name(&other),
        }),
    }
}

/// Full β-normal form of an untyped term followed by maximal η-contraction.
///
/// Used as an oracle by tests; the checker never calls it.
pub fn nf_beta_eta(t: &UntypedTerm, fuel: &mut Fuel) -> Result<UntypedTerm, EvalError> {
    let nf = nf_beta(t, fuel)?;
    Ok(eta_contract(&nf))
}

enum UFrame {
    App(UntypedTerm),
    Split(UntypedTerm),
}

fn whnf_untyped(t: &UntypedTerm, fuel: &mut Fuel) -> Result<UntypedTerm, EvalError> {
    let mut spine: Vec<UFrame> = Vec::new();
    let mut head = t.clone();
    loop {
        head = match (head, spine.pop()) {
            (UntypedTerm::UApp(f, u), top) => {
                spine.extend(top);
                spine.push(UFrame::App(*u));
                *f
            }
            (UntypedTerm::USplit(p, b), top) => {
                spine.extend(top);
                spine.push(UFrame::Split(*b));
                *p
            }
            (UntypedTerm::ULam(b), Some(UFrame::App(u))) => {
                fuel.tick()?;
                usubst(&b, &[u])
            }
            (UntypedTerm::UPair(a, b), Some(UFrame::Split(v))) => {
                fuel.tick()?;
                usubst(&v, &[*b, *a])
            }
            (h, top) => {
                // Stuck: rebuild the spine.
                let mut acc = h;
                for fr in top.into_iter().chain(std::iter::from_fn(|| spine.pop())) {
                    acc = match fr {
                        UFrame::App(u) => UntypedTerm::app(acc, u),
                        UFrame::Split(v) => UntypedTerm::split(acc, v),
                    };
                }
                return Ok(acc);
            }
        };
    }
}

fn nf_beta(t: &UntypedTerm, fuel: &mut Fuel) -> Result<UntypedTerm, EvalError> {
    use UntypedTerm::*;
    let h = whnf_untyped(t, fuel)?;
    Ok(match h {
        ULam(b) => ULam(Box::new(nf_beta(&b, fuel)?)),
        UApp(f, u) => UApp(Box::new(nf_beta(&f, fuel)?), Box::new(nf_beta(&u, fuel)?)),
        USplit(p, b) => USplit(Box::new(nf_beta(&p, fuel)?), Box::new(nf_beta(&b, fuel)?)),
        UPair(a, b) => UPair(Box::new(nf_beta(&a, fuel)?), Box::new(nf_beta(&b, fuel)?)),
        UPi(ann, a, b) => UPi(
            ann,
            Box::new(nf_beta(&a, fuel)?),
            Box::new(nf_beta(&b, fuel)?),
        ),
        USigma(ann, a, b) => USigma(
            ann,
            Box::new(nf_beta(&a, fuel)?),
            Box::new(nf_beta(&b, fuel)?),
        ),
        USqTy(a) => USqTy(Box::new(nf_beta(&a, fuel)?)),
        atom @ (UVar(_) | UUnit | UDummy | USort(_) | UUnitTy) => atom,
    })
}

fn eta_contract(t: &UntypedTerm) -> UntypedTerm {
    use UntypedTerm::*;
    match t {
        ULam(b) => {
            let b = eta_contract(b);
            match b {
                UApp(f, x) if *x == UVar(0) && !f.has_free(0) => ulower(&f),
                b => ULam(Box::new(b)),
            }
        }
        UApp(a, b) => UntypedTerm::app(eta_contract(a), eta_contract(b)),
        UPair(a, b) => UntypedTerm::pair(eta_contract(a), eta_contract(b)),
        USplit(a, b) => UntypedTerm::split(eta_contract(a), eta_contract(b)),
        UPi(ann, a, b) => UPi(*ann, Box::new(eta_contract(a)), Box::new(eta_contract(b))),
        USigma(ann, a, b) => USigma(*ann, Box::new(eta_contract(a)), Box::new(eta_contract(b))),
        USqTy(a) => USqTy(Box::new(eta_contract(a))),
        UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ann::*;

    fn fuel() -> Fuel {
        Fuel::default()
    }

    #[test]
    fn whnf_of_whnf_is_identity() {
        assert_eq!(whnf(&Term::sort(3), &mut fuel()), Ok(Term::sort(3)));
        let lam = Term::lam(Relevant, Term::UnitTy, Term::var(0));
        assert_eq!(whnf(&lam, &mut fuel()), Ok(lam));
        assert_eq!(whnf(&Term::Dummy, &mut fuel()), Ok(Term::Dummy));
    }

    #[test]
    fn beta_step() {
        let t = Term::app(
            Relevant,
            Term::lam(Relevant, Term::UnitTy, Term::var(0)),
            Term::UnitVal,
        );
        let mut f = fuel();
        assert_eq!(whnf(&t, &mut f), Ok(Term::UnitVal));
        assert_eq!(f.remaining(), DEFAULT_FUEL - 1);
    }

    #[test]
    fn neutral_application_is_whnf() {
        let t = Term::app(Relevant, Term::var(0), Term::UnitVal);
        assert_eq!(whnf(&t, &mut fuel()), Ok(t.clone()));
        assert!(is_neutral(&t));
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        let delta = Term::lam(
            Relevant,
            Term::UnitTy,
            Term::app(Relevant, Term::var(0), Term::var(0)),
        );
        let omega = Term::app(Relevant, delta.clone(), delta);
        let mut f = Fuel::new(10_000);
        assert_eq!(whnf(&omega, &mut f), Err(EvalError::FuelExhausted));
        assert_eq!(f.remaining(), 0);
    }

    #[test]
    fn app_active_cases() {
        let id = Term::lam(Relevant, Term::UnitTy, Term::var(0));
        assert_eq!(
            app_active(id, Relevant, Term::UnitVal, &mut fuel()),
            Ok(Term::UnitVal)
        );
        assert_eq!(
            app_active(Term::var(0), Irrelevant, Term::UnitVal, &mut fuel()),
            Ok(Term::app(Irrelevant, Term::var(0), Term::UnitVal))
        );
        assert!(matches!(
            app_active(Term::sort(0), Relevant, Term::UnitVal, &mut fuel()),
            Err(EvalError::IllShaped { .. })
        ));
    }

    #[test]
    fn eliminator_rules() {
        // let (x, y) = ((), Set0) in (y, x)
        let t = Term::split(
            Term::pair(Relevant, Term::UnitVal, Term::sort(0)),
            Term::pair(Relevant, Term::var(0), Term::var(1)),
        );
        assert_eq!(
            whnf(&t, &mut fuel()),
            Ok(Term::pair(Relevant, Term::sort(0), Term::UnitVal))
        );
        // let sq x = sq () in f [x]  with f free at index 0 outside
        let s = Term::sq_elim(
            Term::sq_val(Term::UnitVal),
            Term::app(Irrelevant, Term::var(1), Term::var(0)),
        );
        assert_eq!(
            whnf(&s, &mut fuel()),
            Ok(Term::app(Irrelevant, Term::var(0), Term::UnitVal))
        );
    }

    #[test]
    fn neutral_scrutinee_blocks() {
        let t = Term::split(Term::var(0), Term::var(1));
        assert_eq!(whnf(&t, &mut fuel()), Ok(t.clone()));
        assert!(matches!(view(&t), WhnfView::Neutral { head: 0 }));
        let s = Term::app(
            Relevant,
            Term::sq_elim(
                Term::var(2),
                Term::lam(Relevant, Term::UnitTy, Term::var(0)),
            ),
            Term::UnitVal,
        );
        assert_eq!(whnf(&s, &mut fuel()), Ok(s.clone()));
    }

    #[test]
    fn reduction_under_spine() {
        // ((fun (x : Unit) => fun (y : Unit) => x) ()) () --> ()
        let k = Term::lam(
            Relevant,
            Term::UnitTy,
            Term::lam(Relevant, Term::UnitTy, Term::var(1)),
        );
        let t = Term::app(
            Relevant,
            Term::app(Relevant, k, Term::UnitVal),
            Term::var(7),
        );
        assert_eq!(whnf(&t, &mut fuel()), Ok(Term::UnitVal));
    }

    #[test]
    fn untyped_normal_forms() {
        use crate::untyped::UntypedTerm as U;
        let f = U::UVar(0);
        // λx. f x  -->  f
        let eta = U::lam(U::app(U::UVar(1), U::UVar(0)));
        assert_eq!(nf_beta_eta(&eta, &mut fuel()), Ok(f));
        // (λx.x)(λy.y)  -->  λy.y
        let id = U::lam(U::UVar(0));
        assert_eq!(
            nf_beta_eta(&U::app(id.clone(), id.clone()), &mut fuel()),
            Ok(id.clone())
        );
        // λf.λx. f x  -->  λf. f  -->  λ.0 (the identity)
        let one = U::lam(U::lam(U::app(U::UVar(1), U::UVar(0))));
        assert_eq!(nf_beta_eta(&one, &mut fuel()), Ok(id));
        // λx. x x is not an η-redex
        let dup = U::lam(U::app(U::UVar(0), U::UVar(0)));
        assert_eq!(nf_beta_eta(&dup, &mut fuel()), Ok(dup.clone()));
        let omega = U::app(dup.clone(), dup);
        assert_eq!(
            nf_beta_eta(&omega, &mut Fuel::new(1000)),
            Err(EvalError::FuelExhausted)
        );
    }

    #[test]
    fn ill_shaped_elimination() {
        let t = Term::app(Relevant, Term::sort(0), Term::UnitVal);
        assert!(matches!(
            whnf(&t, &mut fuel()),
            Err(EvalError::IllShaped { .. })
        ));
        let s = Term::split(Term::UnitVal, Term::var(0));
        assert!(matches!(
            whnf(&s, &mut fuel()),
            Err(EvalError::IllShaped { .. })
        ));
    }
}
