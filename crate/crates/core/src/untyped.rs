//! Untyped λ-terms produced by erasure.

use std::fmt;

use crate::term::Ann;

/// An untyped term with de Bruijn indices.
///
/// `ULam` binds one variable, `USplit` binds two (index 1 is the first
/// component). External erasure never produces the type-former variants
/// (`USort`, `UPi`, `USigma`, `UUnitTy`, `USqTy`); they only appear in
/// annotation-only erasure, where types remain ordinary relevant data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UntypedTerm {
    UVar(usize),
    ULam(Box<UntypedTerm>),
    UApp(Box<UntypedTerm>, Box<UntypedTerm>),
    UUnit,
    UPair(Box<UntypedTerm>, Box<UntypedTerm>),
    USplit(Box<UntypedTerm>, Box<UntypedTerm>),
    UDummy,
    USort(u32),
    UPi(Ann, Box<UntypedTerm>, Box<UntypedTerm>),
    USigma(Ann, Box<UntypedTerm>, Box<UntypedTerm>),
    UUnitTy,
    USqTy(Box<UntypedTerm>),
}

use UntypedTerm::*;

impl UntypedTerm {
    pub fn lam(body: UntypedTerm) -> Self {
        ULam(Box::new(body))
    }

    pub fn app(f: UntypedTerm, u: UntypedTerm) -> Self {
        UApp(Box::new(f), Box::new(u))
    }

    pub fn pair(a: UntypedTerm, b: UntypedTerm) -> Self {
        UPair(Box::new(a), Box::new(b))
    }

    pub fn split(p: UntypedTerm, body: UntypedTerm) -> Self {
        USplit(Box::new(p), Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => 1,
            ULam(b) | USqTy(b) => 1 + b.size(),
            UApp(a, b) | UPair(a, b) | USplit(a, b) | UPi(_, a, b) | USigma(_, a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn has_free(&self, i: usize) -> bool {
        match self {
            UVar(j) => *j == i,
            UUnit | UDummy | USort(_) | UUnitTy => false,
            ULam(b) => b.has_free(i + 1),
            USqTy(b) => b.has_free(i),
            UApp(a, b) | UPair(a, b) => a.has_free(i) || b.has_free(i),
            USplit(a, b) => a.has_free(i) || b.has_free(i + 2),
            UPi(_, a, b) | USigma(_, a, b) => a.has_free(i) || b.has_free(i + 1),
        }
    }

    /// Whether `UDummy` ever occurs as the function of an application.
    pub fn has_dummy_head(&self) -> bool {
        match self {
            UApp(f, u) => matches!(**f, UDummy) || f.has_dummy_head() || u.has_dummy_head(),
            ULam(b) | USqTy(b) => b.has_dummy_head(),
            UPair(a, b) | USplit(a, b) | UPi(_, a, b) | USigma(_, a, b) => {
                a.has_dummy_head() || b.has_dummy_head()
            }
            UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => false,
        }
    }
}

fn map_free(
    t: &UntypedTerm,
    depth: usize,
    f: &mut dyn FnMut(usize, usize) -> UntypedTerm,
) -> UntypedTerm {
    let mut go = |x: &UntypedTerm, d: usize| Box::new(map_free(x, d, f));
    match t {
        UVar(i) if *i >= depth => f(i - depth, depth),
        UVar(_) | UUnit | UDummy | USort(_) | UUnitTy => t.clone(),
        ULam(b) => ULam(go(b, depth + 1)),
        UApp(a, b) => UApp(go(a, depth), go(b, depth)),
        UPair(a, b) => UPair(go(a, depth), go(b, depth)),
        USplit(a, b) => USplit(go(a, depth), go(b, depth + 2)),
        UPi(ann, a, b) => UPi(*ann, go(a, depth), go(b, depth + 1)),
        USigma(ann, a, b) => USigma(*ann, go(a, depth), go(b, depth + 1)),
        USqTy(a) => USqTy(go(a, depth)),
    }
}

pub fn ushift(t: &UntypedTerm, by: usize, cutoff: usize) -> UntypedTerm {
    if by == 0 {
        return t.clone();
    }
    map_free(t, cutoff, &mut |j, d| UVar(j + by + d))
}

/// Replaces indices `0..values.len()` by `values` and lowers the rest.
pub fn usubst(t: &UntypedTerm, values: &[UntypedTerm]) -> UntypedTerm {
    let n = values.len();
    map_free(t, 0, &mut |j, d| match values.get(j) {
        Some(v) => ushift(v, d, 0),
        None => UVar(j - n + d),
    })
}

/// Lowers every free index by one; index 0 must not occur.
pub fn ulower(t: &UntypedTerm) -> UntypedTerm {
    map_free(t, 0, &mut |j, d| UVar(j - 1 + d))
}

/// Printing style for untyped terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrintStyle {
    #[default]
    Named,
    DeBruijn,
}

/// Renders `t` with free variables named by `free` (outermost first).
pub fn print_untyped(t: &UntypedTerm, style: PrintStyle, free: &[String]) -> String {
    let mut names: Vec<String> = free.to_vec();
    let mut out = String::new();
    write_term(t, style, &mut names, 0, &mut out);
    out
}

fn fresh(names: &[String], base: &str) -> String {
    if !names.iter().any(|n| n == base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !names.iter().any(|n| n == c))
        .expect("unbounded supply")
}

const BASES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

fn binder_name(names: &[String]) -> String {
    match BASES.iter().find(|b| !names.iter().any(|n| n == *b)) {
        Some(b) => b.to_string(),
        None => fresh(names, BASES[0]),
    }
}

// prec: 0 = top (lambda allowed), 1 = application function, 2 = argument
fn write_term(
    t: &UntypedTerm,
    style: PrintStyle,
    names: &mut Vec<String>,
    prec: u8,
    out: &mut String,
) {
    let var = |i: usize, names: &Vec<String>| -> String {
        match style {
            PrintStyle::DeBruijn => i.to_string(),
            PrintStyle::Named => names
                .len()
                .checked_sub(i + 1)
                .map(|k| names[k].clone())
                .unwrap_or_else(|| format!("#{i}")),
        }
    };
    match t {
        UVar(i) => out.push_str(&var(*i, names)),
        UUnit => out.push_str("()"),
        UDummy => out.push('*'),
        USort(k) => out.push_str(&format!("Set{k}")),
        UUnitTy => out.push_str("Unit"),
        ULam(_) => {
            if prec > 0 {
                out.push('(');
            }
            let mut cur = t;
            let mut pushed = 0;
            out.push('λ');
            let mut first = true;
            while let ULam(b) = cur {
                match style {
                    PrintStyle::Named => {
                        let n = binder_name(names);
                        if !first {
                            out.push(' ');
                        }
                        out.push_str(&n);
                        names.push(n);
                    }
                    PrintStyle::DeBruijn => {
                        if !first {
                            out.push_str(" λ");
                        }
                        names.push(String::new());
                    }
                }
                first = false;
                pushed += 1;
                cur = b;
            }
            out.push_str(match style {
                PrintStyle::Named => ". ",
                PrintStyle::DeBruijn => " ",
            });
            write_term(cur, style, names, 0, out);
            names.truncate(names.len() - pushed);
            if prec > 0 {
                out.push(')');
            }
        }
        UApp(f, u) => {
            if prec > 1 {
                out.push('(');
            }
            write_term(f, style, names, 1, out);
            out.push(' ');
            write_term(u, style, names, 2, out);
            if prec > 1 {
                out.push(')');
            }
        }
        UPair(a, b) => {
            out.push('(');
            write_term(a, style, names, 0, out);
            out.push_str(", ");
            write_term(b, style, names, 0, out);
            out.push(')');
        }
        USplit(p, body) => {
            if prec > 0 {
                out.push('(');
            }
            out.push_str("let (");
            let x = binder_name(names);
            names.push(x.clone());
            let y = binder_name(names);
            names.push(y.clone());
            match style {
                PrintStyle::Named => out.push_str(&format!("{x}, {y}")),
                PrintStyle::DeBruijn => out.push_str("_, _"),
            }
            names.truncate(names.len() - 2);
            out.push_str(") = ");
            write_term(p, style, names, 0, out);
            out.push_str(" in ");
            names.push(x);
            names.push(y);
            write_term(body, style, names, 0, out);
            names.truncate(names.len() - 2);
            if prec > 0 {
                out.push(')');
            }
        }
        UPi(ann, a, b) | USigma(ann, a, b) => {
            if prec > 0 {
                out.push('(');
            }
            let x = binder_name(names);
            let (open, close) = match ann {
                Ann::Relevant => ('(', ')'),
                Ann::Irrelevant => ('[', ']'),
            };
            let kw = if matches!(t, USigma(..)) { "Sig " } else { "" };
            out.push_str(kw);
            out.push(open);
            out.push_str(&x);
            out.push_str(" : ");
            write_term(a, style, names, 0, out);
            out.push(close);
            out.push_str(if kw.is_empty() { " -> " } else { ". " });
            names.push(x);
            write_term(b, style, names, 0, out);
            names.pop();
            if prec > 0 {
                out.push(')');
            }
        }
        USqTy(a) => {
            if prec > 1 {
                out.push('(');
            }
            out.push_str("Sq ");
            write_term(a, style, names, 2, out);
            if prec > 1 {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for UntypedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_untyped(self, PrintStyle::Named, &[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_church_numerals() {
        let zero = UntypedTerm::lam(UntypedTerm::lam(UVar(0)));
        let one = UntypedTerm::lam(UntypedTerm::lam(UntypedTerm::app(UVar(1), UVar(0))));
        assert_eq!(print_untyped(&zero, PrintStyle::Named, &[]), "λx y. y");
        assert_eq!(print_untyped(&one, PrintStyle::Named, &[]), "λx y. x y");
        assert_eq!(print_untyped(&one, PrintStyle::DeBruijn, &[]), "λ λ 1 0");
    }

    #[test]
    fn application_parenthesization() {
        let t = UntypedTerm::app(
            UVar(0),
            UntypedTerm::app(UVar(0), UntypedTerm::lam(UVar(0))),
        );
        assert_eq!(
            print_untyped(&t, PrintStyle::Named, &["f".into()]),
            "f (f (λx. x))"
        );
    }

    #[test]
    fn substitution_lowers() {
        let t = UntypedTerm::app(UVar(0), UVar(2));
        assert_eq!(usubst(&t, &[UUnit]), UntypedTerm::app(UUnit, UVar(1)));
        assert!(UntypedTerm::app(UDummy, UUnit).has_dummy_head());
    }
}
