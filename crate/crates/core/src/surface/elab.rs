//! Name resolution from surface syntax to de Bruijn core terms.

use std::collections::{HashMap, HashSet};

use super::{Item, ItemKind, SurfaceKind, SurfaceTerm};
use crate::diagnostic::{Code, Diagnostic, Span};
use crate::term::Term;

/// Global names visible to elaboration. Definitions are transparent: a
/// reference elaborates to the (closed) body.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    defs: HashMap<String, Term>,
    order: Vec<String>,
    failed: HashSet<String>,
}

impl Scope {
    pub fn new() -> Self {
        Scope::default()
    }

    pub fn define(&mut self, name: impl Into<String>, body: Term) {
        let name = name.into();
        self.failed.remove(&name);
        if !self.defs.contains_key(&name) {
            self.order.push(name.clone());
        }
        self.defs.insert(name, body);
    }

    /// Records a definition that did not check, so later references get a
    /// precise diagnostic instead of an unknown-name error.
    pub fn mark_failed(&mut self, name: impl Into<String>) {
        self.failed.insert(name.into());
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.defs.get(name)
    }

    /// Defined names in definition order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreItem {
    pub span: Span,
    pub kind: CoreItemKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreItemKind {
    Def {
        name: String,
        ty: Term,
        body: Term,
    },
    Check {
        term: Term,
        ty: Term,
    },
    Infer(Term),
    Eq {
        lhs: Term,
        rhs: Term,
        ty: Term,
    },
    Whnf(Term),
    Erase(Term),
    /// The wrapped item, or the diagnostic its elaboration produced.
    Fail(Box<Result<CoreItem, Diagnostic>>),
}

impl CoreItemKind {
    pub fn label(&self) -> &'static str {
        match self {
            CoreItemKind::Def { .. } => "def",
            CoreItemKind::Check { .. } => "check",
            CoreItemKind::Infer(_) => "infer",
            CoreItemKind::Eq { .. } => "eq",
            CoreItemKind::Whnf(_) => "whnf",
            CoreItemKind::Erase(_) => "erase",
            CoreItemKind::Fail(_) => "fail",
        }
    }
}

struct Elab<'a> {
    scope: &'a Scope,
    locals: Vec<String>,
}

impl Elab<'_> {
    fn under<T>(&mut self, names: &[&str], f: impl FnOnce(&mut Self) -> T) -> T {
        for n in names {
            self.locals.push((*n).to_string());
        }
        let r = f(self);
        self.locals.truncate(self.locals.len() - names.len());
        r
    }

    fn term(&mut self, t: &SurfaceTerm) -> Result<Term, Diagnostic> {
        Ok(match &t.kind {
            SurfaceKind::Var(name) => {
                if let Some(pos) = self.locals.iter().rposition(|n| n == name && name != "_") {
                    Term::Var(self.locals.len() - 1 - pos)
                } else if let Some(body) = self.scope.get(name) {
                    body.clone()
                } else if self.scope.failed.contains(name) {
                    return Err(Diagnostic::error(
                        Code::Type,
                        t.span,
                        format!("`{name}` refers to a definition that failed to check"),
                    ));
                } else {
                    return Err(Diagnostic::error(
                        Code::Scope,
                        t.span,
                        format!("unknown identifier `{name}`"),
                    ));
                }
            }
            SurfaceKind::Sort(k) => Term::sort(*k),
            SurfaceKind::UnitTy => Term::UnitTy,
            SurfaceKind::UnitVal => Term::UnitVal,
            SurfaceKind::Dummy => Term::Dummy,
            SurfaceKind::Pi(a, x, dom, cod) => {
                let dom = self.term(dom)?;
                let cod = self.under(&[x], |e| e.term(cod))?;
                Term::pi(*a, dom, cod)
            }
            SurfaceKind::Lam(a, x, dom, body) => {
                let dom = self.term(dom)?;
                let body = self.under(&[x], |e| e.term(body))?;
                Term::lam(*a, dom, body)
            }
            SurfaceKind::Sigma(a, x, dom, cod) => {
                let dom = self.term(dom)?;
                let cod = self.under(&[x], |e| e.term(cod))?;
                Term::sigma(*a, dom, cod)
            }
            SurfaceKind::App(a, f, u) => Term::app(*a, self.term(f)?, self.term(u)?),
            SurfaceKind::Pair(a, u, v) => Term::pair(*a, self.term(u)?, self.term(v)?),
            SurfaceKind::Split(x, y, p, body) => {
                let p = self.term(p)?;
                let body = self.under(&[x, y], |e| e.term(body))?;
                Term::split(p, body)
            }
            SurfaceKind::SqTy(a) => Term::sq_ty(self.term(a)?),
            SurfaceKind::SqVal(a) => Term::sq_val(self.term(a)?),
            SurfaceKind::SqElim(x, s, body) => {
                let s = self.term(s)?;
                let body = self.under(&[x], |e| e.term(body))?;
                Term::sq_elim(s, body)
            }
        })
    }
}

/// Resolves names in `t`. `locals` are bound variables, outermost first.
pub fn elaborate_term(
    t: &SurfaceTerm,
    scope: &Scope,
    locals: &[String],
) -> Result<Term, Diagnostic> {
    Elab {
        scope,
        locals: locals.to_vec(),
    }
    .term(t)
}

/// Elaborates one item in `scope`. Does not extend the scope.
pub fn elaborate_item(item: &Item, scope: &Scope) -> Result<CoreItem, Diagnostic> {
    let mut e = Elab {
        scope,
        locals: Vec::new(),
    };
    let kind = match &item.kind {
        ItemKind::Def { name, ty, body } => CoreItemKind::Def {
            name: name.clone(),
            ty: e.term(ty)?,
            body: e.term(body)?,
        },
        ItemKind::Check { term, ty } => CoreItemKind::Check {
            term: e.term(term)?,
            ty: e.term(ty)?,
        },
        ItemKind::Infer(t) => CoreItemKind::Infer(e.term(t)?),
        ItemKind::Eq { lhs, rhs, ty } => CoreItemKind::Eq {
            lhs: e.term(lhs)?,
            rhs: e.term(rhs)?,
            ty: e.term(ty)?,
        },
        ItemKind::Whnf(t) => CoreItemKind::Whnf(e.term(t)?),
        ItemKind::Erase(t) => CoreItemKind::Erase(e.term(t)?),
        ItemKind::Fail(inner) => CoreItemKind::Fail(Box::new(elaborate_item(inner, scope))),
    };
    Ok(CoreItem {
        span: item.span,
        kind,
    })
}

/// Elaborates a sequence of items, bringing each `def` into scope for the
/// items after it (without checking it). Definitions under `#fail` are not
/// brought into scope.
pub fn elaborate(items: &[Item], scope: &Scope) -> Result<Vec<CoreItem>, Diagnostic> {
    let mut scope = scope.clone();
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let core = elaborate_item(item, &scope)?;
        if let CoreItemKind::Def { name, body, .. } = &core.kind {
            scope.define(name.clone(), body.clone());
        }
        out.push(core);
    }
    Ok(out)
}
