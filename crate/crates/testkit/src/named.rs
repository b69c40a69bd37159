//! Terms with named variables and textbook capture-avoiding substitution.
//!
//! This is deliberately written without reference to the de Bruijn
//! machinery in the kernel so it can serve as an oracle for it.

use std::collections::BTreeSet;

use iitt_core::{Ann, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Named {
    Var(String),
    Sort(u32),
    UnitTy,
    UnitVal,
    Dummy,
    Pi(Ann, String, Box<Named>, Box<Named>),
    Lam(Ann, String, Box<Named>, Box<Named>),
    App(Ann, Box<Named>, Box<Named>),
    Sigma(Ann, String, Box<Named>, Box<Named>),
    Pair(Ann, Box<Named>, Box<Named>),
    /// `let (x, y) = p in b`
    Split(Box<Named>, String, String, Box<Named>),
    SqTy(Box<Named>),
    SqVal(Box<Named>),
    /// `let sq x = s in b`
    SqElim(Box<Named>, String, Box<Named>),
}

use Named::*;

pub fn var(x: &str) -> Named {
    Var(x.to_string())
}

pub fn lam(x: &str, dom: Named, body: Named) -> Named {
    Lam(Ann::Relevant, x.to_string(), Box::new(dom), Box::new(body))
}

pub fn app(f: Named, u: Named) -> Named {
    App(Ann::Relevant, Box::new(f), Box::new(u))
}

impl Named {
    pub fn size(&self) -> usize {
        match self {
            Var(_) | Sort(_) | UnitTy | UnitVal | Dummy => 1,
            SqTy(a) | SqVal(a) => 1 + a.size(),
            Pi(_, _, a, b)
            | Lam(_, _, a, b)
            | Sigma(_, _, a, b)
            | App(_, a, b)
            | Pair(_, a, b)
            | Split(a, _, _, b)
            | SqElim(a, _, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        fn under(
            bound: &mut Vec<String>,
            names: &[&String],
            body: &Named,
            out: &mut BTreeSet<String>,
        ) {
            bound.extend(names.iter().map(|s| (*s).clone()));
            body.collect_free(bound, out);
            bound.truncate(bound.len() - names.len());
        }
        match self {
            Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Sort(_) | UnitTy | UnitVal | Dummy => {}
            SqTy(a) | SqVal(a) => a.collect_free(bound, out),
            App(_, a, b) | Pair(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Pi(_, x, a, b) | Lam(_, x, a, b) | Sigma(_, x, a, b) => {
                a.collect_free(bound, out);
                under(bound, &[x], b, out);
            }
            Split(p, x, y, b) => {
                p.collect_free(bound, out);
                under(bound, &[x, y], b, out);
            }
            SqElim(s, x, b) => {
                s.collect_free(bound, out);
                under(bound, &[x], b, out);
            }
        }
    }
}

fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

fn rename(t: &Named, from: &str, to: &str) -> Named {
    named_subst_oracle(t, from, &var(to))
}

/// Capture-avoiding substitution `t[x := u]`.
pub fn named_subst_oracle(t: &Named, x: &str, u: &Named) -> Named {
    let fv_u = u.free_vars();
    let go = |t: &Named| Box::new(named_subst_oracle(t, x, u));
    // A body under binder `y`: stop at shadowing, rename on capture.
    let binder = |y: &String, body: &Named| -> (String, Box<Named>) {
        if y == x {
            return (y.clone(), Box::new(body.clone()));
        }
        if fv_u.contains(y) && body.free_vars().contains(x) {
            let mut avoid = fv_u.clone();
            avoid.extend(body.free_vars());
            avoid.insert(x.to_string());
            let y2 = fresh(y, &avoid);
            let body = rename(body, y, &y2);
            return (y2, Box::new(named_subst_oracle(&body, x, u)));
        }
        (y.clone(), Box::new(named_subst_oracle(body, x, u)))
    };
    match t {
        Var(y) if y == x => u.clone(),
        Var(_) | Sort(_) | UnitTy | UnitVal | Dummy => t.clone(),
        SqTy(a) => SqTy(go(a)),
        SqVal(a) => SqVal(go(a)),
        App(ann, a, b) => App(*ann, go(a), go(b)),
        Pair(ann, a, b) => Pair(*ann, go(a), go(b)),
        Pi(ann, y, a, b) => {
            let (y, b) = binder(y, b);
            Pi(*ann, y, go(a), b)
        }
        Lam(ann, y, a, b) => {
            let (y, b) = binder(y, b);
            Lam(*ann, y, go(a), b)
        }
        Sigma(ann, y, a, b) => {
            let (y, b) = binder(y, b);
            Sigma(*ann, y, go(a), b)
        }
        SqElim(s, y, b) => {
            let (y, b) = binder(y, b);
            SqElim(go(s), y, b)
        }
        Split(p, y, z, b) => {
            let p = go(p);
            if y == x || z == x {
                return Split(p, y.clone(), z.clone(), b.clone());
            }
            let mut avoid = fv_u.clone();
            avoid.extend(b.free_vars());
            avoid.insert(x.to_string());
            let mut body = (**b).clone();
            let (mut y2, mut z2) = (y.clone(), z.clone());
            if body.free_vars().contains(x) {
                // When the names coincide the second binder owns every
                // occurrence, and the first only needs a new name.
                if fv_u.contains(z) {
                    z2 = fresh(z, &avoid);
                    avoid.insert(z2.clone());
                    body = rename(&body, z, &z2);
                }
                if fv_u.contains(y) {
                    y2 = fresh(y, &avoid);
                    if y != z {
                        body = rename(&body, y, &y2);
                    }
                }
            }
            Split(p, y2, z2, Box::new(named_subst_oracle(&body, x, u)))
        }
    }
}

/// Converts to de Bruijn form. `env` lists the free variables, outermost
/// first. Returns `None` if a free variable is missing from `env`.
pub fn to_debruijn(t: &Named, env: &[String]) -> Option<Term> {
    let mut scope = env.to_vec();
    db(t, &mut scope)
}

fn db(t: &Named, scope: &mut Vec<String>) -> Option<Term> {
    fn under(scope: &mut Vec<String>, names: &[&String], body: &Named) -> Option<Term> {
        scope.extend(names.iter().map(|s| (*s).clone()));
        let r = db(body, scope);
        scope.truncate(scope.len() - names.len());
        r
    }
    Some(match t {
        Var(x) => {
            let pos = scope.iter().rposition(|y| y == x)?;
            Term::var(scope.len() - 1 - pos)
        }
        Sort(k) => Term::sort(*k),
        UnitTy => Term::UnitTy,
        UnitVal => Term::UnitVal,
        Dummy => Term::Dummy,
        SqTy(a) => Term::sq_ty(db(a, scope)?),
        SqVal(a) => Term::sq_val(db(a, scope)?),
        App(ann, a, b) => Term::app(*ann, db(a, scope)?, db(b, scope)?),
        Pair(ann, a, b) => Term::pair(*ann, db(a, scope)?, db(b, scope)?),
        Pi(ann, x, a, b) => {
            let a = db(a, scope)?;
            Term::pi(*ann, a, under(scope, &[x], b)?)
        }
        Lam(ann, x, a, b) => {
            let a = db(a, scope)?;
            Term::lam(*ann, a, under(scope, &[x], b)?)
        }
        Sigma(ann, x, a, b) => {
            let a = db(a, scope)?;
            Term::sigma(*ann, a, under(scope, &[x], b)?)
        }
        Split(p, x, y, b) => {
            let p = db(p, scope)?;
            Term::split(p, under(scope, &[x, y], b)?)
        }
        SqElim(s, x, b) => {
            let s = db(s, scope)?;
            Term::sq_elim(s, under(scope, &[x], b)?)
        }
    })
}

/// Converts from de Bruijn form, naming free variables by `env` (outermost
/// first) and binders `b0`, `b1`, ... by depth.
pub fn from_debruijn(t: &Term, env: &[String]) -> Named {
    let mut scope = env.to_vec();
    named(t, &mut scope)
}

fn named(t: &Term, scope: &mut Vec<String>) -> Named {
    fn bind(scope: &mut Vec<String>, k: usize, body: &Term) -> (Vec<String>, Box<Named>) {
        let names: Vec<String> = (0..k).map(|i| format!("b{}", scope.len() + i)).collect();
        scope.extend(names.iter().cloned());
        let r = named(body, scope);
        scope.truncate(scope.len() - k);
        (names, Box::new(r))
    }
    match t {
        Term::Var(i) => match scope.len().checked_sub(i + 1) {
            Some(k) => Var(scope[k].clone()),
            None => Var(format!("free{}", i - scope.len())),
        },
        Term::Sort(s) => Sort(s.level()),
        Term::UnitTy => UnitTy,
        Term::UnitVal => UnitVal,
        Term::Dummy => Dummy,
        Term::SqTy(a) => SqTy(Box::new(named(a, scope))),
        Term::SqVal(a) => SqVal(Box::new(named(a, scope))),
        Term::App(ann, a, b) => App(*ann, Box::new(named(a, scope)), Box::new(named(b, scope))),
        Term::Pair(ann, a, b) => Pair(*ann, Box::new(named(a, scope)), Box::new(named(b, scope))),
        Term::Pi(ann, a, b) => {
            let a = Box::new(named(a, scope));
            let (mut xs, b) = bind(scope, 1, b);
            Pi(*ann, xs.remove(0), a, b)
        }
        Term::Lam(ann, a, b) => {
            let a = Box::new(named(a, scope));
            let (mut xs, b) = bind(scope, 1, b);
            Lam(*ann, xs.remove(0), a, b)
        }
        Term::Sigma(ann, a, b) => {
            let a = Box::new(named(a, scope));
            let (mut xs, b) = bind(scope, 1, b);
            Sigma(*ann, xs.remove(0), a, b)
        }
        Term::Split(p, b) => {
            let p = Box::new(named(p, scope));
            let (mut xs, b) = bind(scope, 2, b);
            let y = xs.pop().unwrap();
            let x = xs.pop().unwrap();
            Split(p, x, y, b)
        }
        Term::SqElim(s, b) => {
            let s = Box::new(named(s, scope));
            let (mut xs, b) = bind(scope, 1, b);
            SqElim(s, xs.remove(0), b)
        }
    }
}

/// All named terms of exactly `size` nodes whose variables and binders
/// come from `alphabet`. Leaves are variables and `Unit`; nodes are
/// relevant λ, application, `Sq`, split and squash elimination.
pub fn named_terms(alphabet: &[&str], size: usize) -> Vec<Named> {
    let mut table: Vec<Vec<Named>> = vec![Vec::new(); size + 1];
    for n in 1..=size {
        let mut out = Vec::new();
        if n == 1 {
            out.extend(alphabet.iter().map(|x| var(x)));
            out.push(UnitTy);
        } else {
            for t in &table[n - 1] {
                out.push(SqTy(Box::new(t.clone())));
            }
            for a in 1..n - 1 {
                let b = n - 1 - a;
                for l in &table[a] {
                    for r in &table[b] {
                        out.push(app(l.clone(), r.clone()));
                        for x in alphabet {
                            out.push(lam(x, l.clone(), r.clone()));
                            out.push(SqElim(
                                Box::new(l.clone()),
                                x.to_string(),
                                Box::new(r.clone()),
                            ));
                            for y in alphabet {
                                out.push(Split(
                                    Box::new(l.clone()),
                                    x.to_string(),
                                    y.to_string(),
                                    Box::new(r.clone()),
                                ));
                            }
                        }
                    }
                }
            }
        }
        table[n] = out;
    }
    table.into_iter().flatten().collect()
}
