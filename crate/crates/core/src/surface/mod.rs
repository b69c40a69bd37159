//! Concrete syntax.
//!
//! ```text
//! (x : A) -> B      [x : A] -> B      A -> B
//! fun (x : A) [y : B] => t            f u      f [u]
//! Set0  Set1 ...    Unit   ()         irr
//! Sig (x : A). B    Sig [x : A]. B    (u, t)   ([u], t)
//! let (x, y) = p in v
//! Sq A    sq t    let sq x = t in v
//!
//! def n : T := t;   #check t : T;   #infer t;   #eq t = u : T;
//! #whnf t;          #erase t;       #fail <item>
//! ```
//!
//! Square brackets always mark irrelevance. Comments run from `--` to the end
//! of the line.

mod elab;
mod lexer;
mod parser;
mod print;

pub use elab::{elaborate, elaborate_item, elaborate_term, CoreItem, CoreItemKind, Scope};
pub use lexer::{lex, Token, TokenKind};
pub use parser::{parse, parse_term};
pub use print::{print, print_in, unique_names};

use crate::diagnostic::Span;
use crate::term::Ann;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceTerm {
    pub span: Span,
    pub kind: SurfaceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceKind {
    Var(String),
    Sort(u32),
    UnitTy,
    UnitVal,
    Dummy,
    Pi(Ann, String, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lam(Ann, String, Box<SurfaceTerm>, Box<SurfaceTerm>),
    App(Ann, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Sigma(Ann, String, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Pair(Ann, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Split(String, String, Box<SurfaceTerm>, Box<SurfaceTerm>),
    SqTy(Box<SurfaceTerm>),
    SqVal(Box<SurfaceTerm>),
    SqElim(String, Box<SurfaceTerm>, Box<SurfaceTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub span: Span,
    pub kind: ItemKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemKind {
    Def {
        name: String,
        ty: SurfaceTerm,
        body: SurfaceTerm,
    },
    Check {
        term: SurfaceTerm,
        ty: SurfaceTerm,
    },
    Infer(SurfaceTerm),
    Eq {
        lhs: SurfaceTerm,
        rhs: SurfaceTerm,
        ty: SurfaceTerm,
    },
    Whnf(SurfaceTerm),
    Erase(SurfaceTerm),
    /// Must wrap a non-`Fail` item.
    Fail(Box<Item>),
}

impl ItemKind {
    pub fn label(&self) -> &'static str {
        match self {
            ItemKind::Def { .. } => "def",
            ItemKind::Check { .. } => "check",
            ItemKind::Infer(_) => "infer",
            ItemKind::Eq { .. } => "eq",
            ItemKind::Whnf(_) => "whnf",
            ItemKind::Erase(_) => "erase",
            ItemKind::Fail(_) => "fail",
        }
    }
}
