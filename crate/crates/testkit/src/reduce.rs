//! A naive small-step reducer for untyped terms.
//!
//! Leftmost-outermost β (and pair) contraction one redex at a time, then
//! η-contraction one redex at a time. It has its own shifting and
//! substitution so it can be used to cross-check the kernel's normaliser.

use iitt_core::UntypedTerm::{self, *};

fn shift(t: &UntypedTerm, by: isize, cutoff: usize) -> UntypedTerm {
    let go = |t: &UntypedTerm, c| Box::new(shift(t, by, c));
    match t {
        UVar(i) if *i >= cutoff => UVar((*i as isize + by) as usize),
        UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => t.clone(),
        ULam(b) => ULam(go(b, cutoff + 1)),
        UApp(a, b) => UApp(go(a, cutoff), go(b, cutoff)),
        UPair(a, b) => UPair(go(a, cutoff), go(b, cutoff)),
        USplit(a, b) => USplit(go(a, cutoff), go(b, cutoff + 2)),
        UPi(ann, a, b) => UPi(*ann, go(a, cutoff), go(b, cutoff + 1)),
        USigma(ann, a, b) => USigma(*ann, go(a, cutoff), go(b, cutoff + 1)),
        USqTy(a) => USqTy(go(a, cutoff)),
    }
}

/// Replaces index `j` by `u` (which lives outside all binders of `t`) and
/// lowers the indices above `j`.
fn replace(t: &UntypedTerm, j: usize, u: &UntypedTerm) -> UntypedTerm {
    let go = |t: &UntypedTerm, k| Box::new(replace(t, j + k, u));
    match t {
        UVar(i) if *i == j => shift(u, j as isize, 0),
        UVar(i) if *i > j => UVar(i - 1),
        UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => t.clone(),
        ULam(b) => ULam(go(b, 1)),
        UApp(a, b) => UApp(go(a, 0), go(b, 0)),
        UPair(a, b) => UPair(go(a, 0), go(b, 0)),
        USplit(a, b) => USplit(go(a, 0), go(b, 2)),
        UPi(ann, a, b) => UPi(*ann, go(a, 0), go(b, 1)),
        USigma(ann, a, b) => USigma(*ann, go(a, 0), go(b, 1)),
        USqTy(a) => USqTy(go(a, 0)),
    }
}

fn occurs(t: &UntypedTerm, j: usize) -> bool {
    match t {
        UVar(i) => *i == j,
        UUnit | UDummy | USort(_) | UUnitTy => false,
        ULam(b) => occurs(b, j + 1),
        UApp(a, b) | UPair(a, b) => occurs(a, j) || occurs(b, j),
        USplit(a, b) => occurs(a, j) || occurs(b, j + 2),
        UPi(_, a, b) | USigma(_, a, b) => occurs(a, j) || occurs(b, j + 1),
        USqTy(a) => occurs(a, j),
    }
}

/// Applies `step` to the leftmost subterm where it fires.
fn leftmost(
    t: &UntypedTerm,
    step: &dyn Fn(&UntypedTerm) -> Option<UntypedTerm>,
) -> Option<UntypedTerm> {
    if let Some(r) = step(t) {
        return Some(r);
    }
    let two =
        |a: &UntypedTerm, b: &UntypedTerm, mk: &dyn Fn(UntypedTerm, UntypedTerm) -> UntypedTerm| {
            leftmost(a, step)
                .map(|a2| mk(a2, b.clone()))
                .or_else(|| leftmost(b, step).map(|b2| mk(a.clone(), b2)))
        };
    match t {
        UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => None,
        ULam(b) => leftmost(b, step).map(UntypedTerm::lam),
        USqTy(a) => leftmost(a, step).map(|a| USqTy(Box::new(a))),
        UApp(a, b) => two(a, b, &UntypedTerm::app),
        UPair(a, b) => two(a, b, &UntypedTerm::pair),
        USplit(a, b) => two(a, b, &UntypedTerm::split),
        UPi(ann, a, b) => two(a, b, &|a, b| UPi(*ann, Box::new(a), Box::new(b))),
        USigma(ann, a, b) => two(a, b, &|a, b| USigma(*ann, Box::new(a), Box::new(b))),
    }
}

fn beta(t: &UntypedTerm) -> Option<UntypedTerm> {
    match t {
        UApp(f, u) => match &**f {
            ULam(b) => Some(replace(b, 0, u)),
            _ => None,
        },
        USplit(p, body) => match &**p {
            // index 1 is the first component, index 0 the second
            UPair(a, b) => Some(replace(&replace(body, 0, &shift(b, 1, 0)), 0, a)),
            _ => None,
        },
        _ => None,
    }
}

fn eta(t: &UntypedTerm) -> Option<UntypedTerm> {
    match t {
        ULam(b) => match &**b {
            UApp(f, x) if **x == UVar(0) && !occurs(f, 0) => Some(shift(f, -1, 0)),
            _ => None,
        },
        _ => None,
    }
}

/// One leftmost-outermost β step.
pub fn beta_step(t: &UntypedTerm) -> Option<UntypedTerm> {
    leftmost(t, &beta)
}

/// β-normalises in at most `max_steps` steps, then η-contracts to a fixed
/// point. `None` if the step budget runs out.
pub fn small_step_normalize(t: &UntypedTerm, max_steps: usize) -> Option<UntypedTerm> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some(next) = beta_step(&cur) {
        steps += 1;
        if steps > max_steps {
            return None;
        }
        cur = next;
    }
    while let Some(next) = leftmost(&cur, &eta) {
        cur = next;
    }
    Some(cur)
}
