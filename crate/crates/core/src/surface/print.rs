//! Pretty-printer. Output re-parses and elaborates to the printed term.

use crate::term::{Ann, Term};

const TYPE_NAMES: [&str; 6] = ["X", "Y", "Z", "A", "B", "C"];
const TERM_NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

fn is_reserved(name: &str) -> bool {
    matches!(
        name,
        "fun" | "let" | "in" | "sq" | "Sq" | "Sig" | "Unit" | "irr" | "def" | "_"
    ) || name
        .strip_prefix("Set")
        .is_some_and(|l| l.is_empty() || l.chars().all(|c| c.is_ascii_digit()))
}

fn fresh(base: &str, taken: &[String]) -> String {
    let free = |c: &str| !is_reserved(c) && !taken.iter().any(|n| n == c);
    if free(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| free(c))
        .expect("unbounded supply")
}

/// Makes context names distinct and printable, keeping the first
/// occurrence of each.
pub fn unique_names(names: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(names.len());
    for n in names {
        let base = if n.is_empty() || n == "_" {
            "x"
        } else {
            n.as_str()
        };
        let name = fresh(base, &out);
        out.push(name);
    }
    out
}

struct Printer {
    names: Vec<String>,
    out: String,
}

impl Printer {
    fn binder_name(&self, dom: &Term) -> String {
        let pool = if matches!(dom, Term::Sort(_)) {
            &TYPE_NAMES
        } else {
            &TERM_NAMES
        };
        let base = pool
            .iter()
            .find(|b| !self.names.iter().any(|n| n == *b))
            .copied()
            .unwrap_or(pool[0]);
        fresh(base, &self.names)
    }

    fn var(&mut self, i: usize) {
        let name = self
            .names
            .len()
            .checked_sub(i + 1)
            .map(|k| self.names[k].clone())
            .unwrap_or_else(|| format!("#{i}"));
        self.out.push_str(&name);
    }

    fn binder(&mut self, ann: Ann, name: &str, dom: &Term) {
        let (open, close) = match ann {
            Ann::Relevant => ('(', ')'),
            Ann::Irrelevant => ('[', ']'),
        };
        self.out.push(open);
        self.out.push_str(name);
        self.out.push_str(" : ");
        self.term(dom, 0);
        self.out.push(close);
    }

    /// Prints `body` with `names` bound.
    fn under(&mut self, names: &[String], body: &Term, prec: u8) {
        self.names.extend(names.iter().cloned());
        self.term(body, prec);
        self.names.truncate(self.names.len() - names.len());
    }

    // prec 0: anything; 1: application head or arrow domain; 2: argument
    fn term(&mut self, t: &Term, prec: u8) {
        let paren = |p: &mut Printer, needed: bool, f: &mut dyn FnMut(&mut Printer)| {
            if needed {
                p.out.push('(');
            }
            f(p);
            if needed {
                p.out.push(')');
            }
        };
        match t {
            Term::Sort(s) => self.out.push_str(&s.to_string()),
            Term::Var(i) => self.var(*i),
            Term::UnitTy => self.out.push_str("Unit"),
            Term::UnitVal => self.out.push_str("()"),
            Term::Dummy => self.out.push_str("irr"),
            Term::Pi(ann, dom, cod) => paren(self, prec > 0, &mut |p| {
                if *ann == Ann::Relevant && !cod.has_free(0) {
                    p.term(dom, 1);
                    p.out.push_str(" -> ");
                    let x = p.binder_name(dom);
                    p.under(&[x], cod, 0);
                } else {
                    let x = p.binder_name(dom);
                    p.binder(*ann, &x, dom);
                    p.out.push_str(" -> ");
                    p.under(&[x], cod, 0);
                }
            }),
            Term::Lam(..) => paren(self, prec > 0, &mut |p| {
                p.out.push_str("fun ");
                let mut cur = t;
                let mut bound = Vec::new();
                let mut first = true;
                while let Term::Lam(ann, dom, body) = cur {
                    if !first {
                        p.out.push(' ');
                    }
                    first = false;
                    let x = p.binder_name(dom);
                    p.binder(*ann, &x, dom);
                    p.names.push(x.clone());
                    bound.push(x);
                    cur = body;
                }
                p.out.push_str(" => ");
                p.term(cur, 0);
                p.names.truncate(p.names.len() - bound.len());
            }),
            Term::App(ann, f, u) => paren(self, prec > 1, &mut |p| {
                p.term(f, 1);
                match ann {
                    Ann::Relevant => {
                        p.out.push(' ');
                        p.term(u, 2);
                    }
                    Ann::Irrelevant => {
                        p.out.push_str(" [");
                        p.term(u, 0);
                        p.out.push(']');
                    }
                }
            }),
            Term::Sigma(ann, dom, cod) => paren(self, prec > 0, &mut |p| {
                p.out.push_str("Sig ");
                let x = p.binder_name(dom);
                p.binder(*ann, &x, dom);
                p.out.push_str(". ");
                p.under(&[x], cod, 0);
            }),
            Term::Pair(ann, a, b) => {
                self.out.push('(');
                match ann {
                    Ann::Relevant => self.term(a, 0),
                    Ann::Irrelevant => {
                        self.out.push('[');
                        self.term(a, 0);
                        self.out.push(']');
                    }
                }
                self.out.push_str(", ");
                self.term(b, 0);
                self.out.push(')');
            }
            Term::Split(scrut, body) => paren(self, prec > 0, &mut |p| {
                let x = p.binder_name(&Term::UnitVal);
                p.names.push(x.clone());
                let y = p.binder_name(&Term::UnitVal);
                p.names.pop();
                p.out.push_str(&format!("let ({x}, {y}) = "));
                p.term(scrut, 0);
                p.out.push_str(" in ");
                p.under(&[x.clone(), y.clone()], body, 0);
            }),
            Term::SqTy(a) => paren(self, prec > 1, &mut |p| {
                p.out.push_str("Sq ");
                p.term(a, 2);
            }),
            Term::SqVal(a) => paren(self, prec > 1, &mut |p| {
                p.out.push_str("sq ");
                p.term(a, 2);
            }),
            Term::SqElim(scrut, body) => paren(self, prec > 0, &mut |p| {
                let x = p.binder_name(&Term::UnitVal);
                p.out.push_str(&format!("let sq {x} = "));
                p.term(scrut, 0);
                p.out.push_str(" in ");
                p.under(std::slice::from_ref(&x), body, 0);
            }),
        }
    }
}

/// Prints a closed term.
pub fn print(t: &Term) -> String {
    print_in(&[], t)
}

/// Prints `t` whose free variables are named by `names` (outermost first).
pub fn print_in(names: &[String], t: &Term) -> String {
    let mut p = Printer {
        names: unique_names(names),
        out: String::new(),
    };
    p.term(t, 0);
    p.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{elaborate_term, parse_term, Scope};

    fn roundtrip(t: &Term) {
        let s = print(t);
        let back = elaborate_term(&parse_term(&s).unwrap(), &Scope::new(), &[]).unwrap();
        assert_eq!(&back, t, "printed as {s}");
    }

    #[test]
    fn prints_irrelevant_lambda() {
        assert_eq!(
            print(&Term::lam(Ann::Irrelevant, Term::UnitTy, Term::UnitVal)),
            "fun [x : Unit] => ()"
        );
    }

    #[test]
    fn minimal_parentheses() {
        let f = Term::var(0);
        let app = Term::app(
            Ann::Relevant,
            Term::app(Ann::Relevant, f.clone(), Term::UnitVal),
            Term::app(Ann::Relevant, f, Term::UnitVal),
        );
        assert_eq!(print_in(&["f".into()], &app), "f () (f ())");
        let arr = Term::arrow(
            Term::arrow(Term::UnitTy, Term::UnitTy),
            Term::arrow(Term::UnitTy, Term::UnitTy),
        );
        assert_eq!(print(&arr), "(Unit -> Unit) -> Unit -> Unit");
    }

    #[test]
    fn dependent_binders_get_fresh_names() {
        let t = Term::pi(
            Ann::Relevant,
            Term::sort(0),
            Term::pi(Ann::Relevant, Term::var(0), Term::var(1)),
        );
        assert_eq!(print(&t), "(X : Set0) -> X -> X");
        // the context already uses `X`
        assert_eq!(print_in(&["X".into()], &t), "(Y : Set0) -> Y -> Y");
    }

    #[test]
    fn duplicate_context_names_are_disambiguated() {
        let names = vec!["x".to_string(), "x".to_string()];
        assert_eq!(print_in(&names, &Term::var(1)), "x");
        assert_eq!(print_in(&names, &Term::var(0)), "x1");
    }

    #[test]
    fn roundtrips_extension_forms() {
        roundtrip(&Term::lam(
            Ann::Relevant,
            Term::sigma(Ann::Irrelevant, Term::sort(0), Term::UnitTy),
            Term::split(
                Term::var(0),
                Term::pair(Ann::Irrelevant, Term::var(1), Term::var(0)),
            ),
        ));
        roundtrip(&Term::lam(
            Ann::Relevant,
            Term::sq_ty(Term::UnitTy),
            Term::sq_elim(Term::var(0), Term::sq_val(Term::var(0))),
        ));
        roundtrip(&Term::app(
            Ann::Relevant,
            Term::sq_ty(Term::UnitTy),
            Term::sq_val(Term::UnitVal),
        ));
        roundtrip(&Term::app(
            Ann::Irrelevant,
            Term::lam(Ann::Irrelevant, Term::UnitTy, Term::Dummy),
            Term::split(Term::UnitVal, Term::var(1)),
        ));
    }
}
