//! Running programs: items are elaborated and checked in order, with each
//! checked definition inlined into the items after it.

use crate::checker::{CheckError, CheckMode, Checker};
use crate::diagnostic::{Code, Diagnostic, Span};
use crate::equality::{tm_eq, EqError};
use crate::erasure::erase_external;
use crate::eval::{whnf, Fuel, DEFAULT_FUEL};
use crate::surface::{elaborate_item, parse, print, CoreItem, CoreItemKind, Item, Scope};
use crate::term::{Context, Term};
use crate::untyped::{print_untyped, PrintStyle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Step budget per item.
    pub fuel: u64,
    /// Accept user-written `irr` in irrelevant positions.
    pub allow_dummy: bool,
    pub erase_style: PrintStyle,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fuel: DEFAULT_FUEL,
            allow_dummy: false,
            erase_style: PrintStyle::Named,
        }
    }
}

/// A checked definition. `ty` and `body` are closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub ty: Term,
    pub body: Term,
}

/// Result of one item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub span: Span,
    pub kind: &'static str,
    /// Printed result of `#infer`, `#whnf`, `#erase`, `#eq` and `#fail`.
    pub output: Option<String>,
    pub diagnostic: Option<Diagnostic>,
}

impl Outcome {
    pub fn is_ok(&self) -> bool {
        self.diagnostic.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    /// Set when the source did not parse; no items ran.
    pub parse_error: Option<Diagnostic>,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.parse_error.is_none() && self.outcomes.iter().all(Outcome::is_ok)
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.parse_error
            .iter()
            .chain(self.outcomes.iter().filter_map(|o| o.diagnostic.as_ref()))
    }

    /// 0 on success, 2 for parse or scope errors, 3 when fuel ran out, 1 for
    /// other failures. The first matching class in that order wins.
    pub fn exit_code(&self) -> i32 {
        exit_code(self.diagnostics())
    }
}

pub fn exit_code<'a>(diagnostics: impl IntoIterator<Item = &'a Diagnostic>) -> i32 {
    let codes: Vec<Code> = diagnostics.into_iter().map(|d| d.code).collect();
    if codes.is_empty() {
        0
    } else if codes.iter().any(|c| matches!(c, Code::Parse | Code::Scope)) {
        2
    } else if codes.contains(&Code::Fuel) {
        3
    } else {
        1
    }
}

/// A growing environment of checked definitions.
#[derive(Debug, Clone, Default)]
pub struct Session {
    options: Options,
    scope: Scope,
    definitions: Vec<Definition>,
}

impl Session {
    pub fn new(options: Options) -> Self {
        Session {
            options,
            ..Session::default()
        }
    }

    pub fn options(&self) -> &Options {
        &self.options
    }

    pub fn set_fuel(&mut self, fuel: u64) {
        self.options.fuel = fuel;
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    /// Checked definitions, in order.
    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    fn checker(&self) -> Checker {
        Checker {
            allow_dummy: self.options.allow_dummy,
        }
    }

    /// Parses and runs `source`.
    pub fn run_source(&mut self, source: &str) -> Report {
        match parse(source) {
            Err(d) => Report {
                parse_error: Some(d),
                outcomes: Vec::new(),
            },
            Ok(items) => Report {
                parse_error: None,
                outcomes: items.iter().map(|i| self.run_item(i)).collect(),
            },
        }
    }

    pub fn run_item(&mut self, item: &Item) -> Outcome {
        let kind = item.kind.label();
        let result = match elaborate_item(item, &self.scope) {
            Ok(core) => self.exec(&core, true),
            Err(d) => Err(d),
        };
        if let (Err(_), crate::surface::ItemKind::Def { name, .. }) = (&result, &item.kind) {
            self.scope.mark_failed(name.clone());
        }
        match result {
            Ok(output) => Outcome {
                span: item.span,
                kind,
                output,
                diagnostic: None,
            },
            Err(d) => Outcome {
                span: item.span,
                kind,
                output: None,
                diagnostic: Some(d),
            },
        }
    }

    fn exec(&mut self, item: &CoreItem, commit: bool) -> Result<Option<String>, Diagnostic> {
        let span = item.span;
        let fail = |e: CheckError| Diagnostic::error(e.code(), span, e.to_string());
        let ctx = Context::empty();
        let checker = self.checker();
        let mut fuel = Fuel::new(self.options.fuel);
        let fuel = &mut fuel;
        match &item.kind {
            CoreItemKind::Def { name, ty, body } => {
                checker.check_is_type(&ctx, ty, fuel).map_err(fail)?;
                checker
                    .check(&ctx, body, ty, CheckMode::Relevant, fuel)
                    .map_err(fail)?;
                if commit {
                    self.scope.define(name.clone(), body.clone());
                    self.definitions.retain(|d| d.name != *name);
                    self.definitions.push(Definition {
                        name: name.clone(),
                        ty: ty.clone(),
                        body: body.clone(),
                    });
                }
                Ok(None)
            }
            CoreItemKind::Check { term, ty } => {
                checker.check_is_type(&ctx, ty, fuel).map_err(fail)?;
                checker
                    .check(&ctx, term, ty, CheckMode::Relevant, fuel)
                    .map_err(fail)?;
                Ok(None)
            }
            CoreItemKind::Infer(t) => {
                let ty = checker.infer(&ctx, t, fuel).map_err(fail)?;
                Ok(Some(print(&ty)))
            }
            CoreItemKind::Eq { lhs, rhs, ty } => {
                checker.check_is_type(&ctx, ty, fuel).map_err(fail)?;
                for side in [lhs, rhs] {
                    checker
                        .check(&ctx, side, ty, CheckMode::Relevant, fuel)
                        .map_err(fail)?;
                }
                match tm_eq(&ctx, lhs, rhs, ty, fuel) {
                    Ok(()) => Ok(Some("accepted".into())),
                    Err(EqError::FuelExhausted) => Err(Diagnostic::error(
                        Code::Fuel,
                        span,
                        "equality check ran out of fuel",
                    )),
                    Err(EqError::Rejected(m)) => Err(Diagnostic::error(
                        Code::Eq,
                        span,
                        format!("`{}` and `{}` are not equal: {m}", print(lhs), print(rhs)),
                    )),
                }
            }
            CoreItemKind::Whnf(t) => {
                checker.infer(&ctx, t, fuel).map_err(fail)?;
                let w = whnf(t, fuel).map_err(|e| fail(e.into()))?;
                Ok(Some(print(&w)))
            }
            CoreItemKind::Erase(t) => {
                checker.infer(&ctx, t, fuel).map_err(fail)?;
                Ok(Some(print_untyped(
                    &erase_external(t),
                    self.options.erase_style,
                    &[],
                )))
            }
            CoreItemKind::Fail(inner) => {
                let result = match &**inner {
                    Err(d) => Err(d.clone()),
                    Ok(core) => self.exec(core, false),
                };
                match result {
                    Err(d) => Ok(Some(format!(
                        "rejected as expected: error[{}]: {}",
                        d.code, d.message
                    ))),
                    Ok(_) => Err(Diagnostic::error(
                        Code::Type,
                        span,
                        "expected this item to fail, but it succeeded",
                    )),
                }
            }
        }
    }
}

/// Checks a whole source text in a fresh session.
pub fn check_program(source: &str, options: Options) -> Report {
    Session::new(options).run_source(source)
}
