use super::lexer::{lex, Token, TokenKind};
use super::{Item, ItemKind, SurfaceKind, SurfaceTerm};
use crate::diagnostic::{Code, Diagnostic, Span};
use crate::term::Ann;

const MAX_DEPTH: usize = 200;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

struct Binder {
    ann: Ann,
    names: Vec<(String, Span)>,
    ty: SurfaceTerm,
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(s) => format!("identifier `{s}`"),
        TokenKind::SetK(k) => format!("`Set{k}`"),
        TokenKind::Fun => "`fun`".into(),
        TokenKind::Let => "`let`".into(),
        TokenKind::In => "`in`".into(),
        TokenKind::SqVal => "`sq`".into(),
        TokenKind::SqTy => "`Sq`".into(),
        TokenKind::Sig => "`Sig`".into(),
        TokenKind::Unit => "`Unit`".into(),
        TokenKind::Irr => "`irr`".into(),
        TokenKind::Def => "`def`".into(),
        TokenKind::Command(c) => format!("`#{c}`"),
        TokenKind::LParen => "`(`".into(),
        TokenKind::RParen => "`)`".into(),
        TokenKind::LBracket => "`[`".into(),
        TokenKind::RBracket => "`]`".into(),
        TokenKind::Colon => "`:`".into(),
        TokenKind::Comma => "`,`".into(),
        TokenKind::Dot => "`.`".into(),
        TokenKind::Arrow => "`->`".into(),
        TokenKind::FatArrow => "`=>`".into(),
        TokenKind::Define => "`:=`".into(),
        TokenKind::Equals => "`=`".into(),
        TokenKind::Semi => "`;`".into(),
        TokenKind::Eof => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, k: usize) -> &TokenKind {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::error(
            Code::Parse,
            self.span(),
            format!("expected {expected}, found {}", describe(self.peek())),
        ))
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Span> {
        if *self.peek() == kind {
            Ok(self.bump().span)
        } else {
            self.error(what)
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            TokenKind::Ident(s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => self.error("an identifier"),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Diagnostic::error(
                Code::Parse,
                self.span(),
                "expression nested too deeply",
            ));
        }
        Ok(())
    }

    /// `(x y : A)` or `[x : A]` at the current position?
    fn at_binder(&self) -> bool {
        if !matches!(self.peek(), TokenKind::LParen | TokenKind::LBracket) {
            return false;
        }
        let mut k = 1;
        while matches!(self.peek_at(k), TokenKind::Ident(_)) {
            k += 1;
        }
        k > 1 && *self.peek_at(k) == TokenKind::Colon
    }

    fn binder(&mut self) -> PResult<Binder> {
        let (ann, close, close_str) = match self.peek() {
            TokenKind::LParen => (Ann::Relevant, TokenKind::RParen, "`)`"),
            TokenKind::LBracket => (Ann::Irrelevant, TokenKind::RBracket, "`]`"),
            _ => return self.error("a binder `(x : A)` or `[x : A]`"),
        };
        self.bump();
        let mut names = vec![self.ident()?];
        while let TokenKind::Ident(_) = self.peek() {
            names.push(self.ident()?);
        }
        self.expect(TokenKind::Colon, "`:`")?;
        let ty = self.expr()?;
        self.expect(close, close_str)?;
        Ok(Binder { ann, names, ty })
    }

    fn telescope(&mut self) -> PResult<Vec<Binder>> {
        let mut bs = vec![self.binder()?];
        while self.at_binder() {
            bs.push(self.binder()?);
        }
        Ok(bs)
    }

    fn wrap_binders(
        binders: Vec<Binder>,
        body: SurfaceTerm,
        make: fn(Ann, String, Box<SurfaceTerm>, Box<SurfaceTerm>) -> SurfaceKind,
        first_span: Span,
    ) -> SurfaceTerm {
        let mut flat: Vec<(Ann, String, Span, SurfaceTerm)> = Vec::new();
        for b in binders {
            for (n, sp) in b.names {
                flat.push((b.ann, n, sp, b.ty.clone()));
            }
        }
        let mut acc = body;
        for (i, (ann, n, sp, ty)) in flat.into_iter().enumerate().rev() {
            let span = if i == 0 { first_span } else { sp };
            acc = SurfaceTerm {
                span,
                kind: make(ann, n, Box::new(ty), Box::new(acc)),
            };
        }
        acc
    }

    fn expr(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let r = self.expr_inner();
        self.depth -= 1;
        r
    }

    fn expr_inner(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span();
        match self.peek() {
            TokenKind::Fun => {
                self.bump();
                let bs = self.telescope()?;
                self.expect(TokenKind::FatArrow, "`=>`")?;
                let body = self.expr()?;
                Ok(Self::wrap_binders(bs, body, SurfaceKind::Lam, start))
            }
            TokenKind::Let => {
                self.bump();
                if *self.peek() == TokenKind::SqVal {
                    self.bump();
                    let (x, _) = self.ident()?;
                    self.expect(TokenKind::Equals, "`=`")?;
                    let scrut = self.expr()?;
                    self.expect(TokenKind::In, "`in`")?;
                    let body = self.expr()?;
                    Ok(SurfaceTerm {
                        span: start,
                        kind: SurfaceKind::SqElim(x, Box::new(scrut), Box::new(body)),
                    })
                } else {
                    self.expect(TokenKind::LParen, "`(` or `sq`")?;
                    let (x, _) = self.ident()?;
                    self.expect(TokenKind::Comma, "`,`")?;
                    let (y, _) = self.ident()?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    self.expect(TokenKind::Equals, "`=`")?;
                    let scrut = self.expr()?;
                    self.expect(TokenKind::In, "`in`")?;
                    let body = self.expr()?;
                    Ok(SurfaceTerm {
                        span: start,
                        kind: SurfaceKind::Split(x, y, Box::new(scrut), Box::new(body)),
                    })
                }
            }
            TokenKind::Sig => {
                self.bump();
                let bs = vec![self.binder()?];
                self.expect(TokenKind::Dot, "`.`")?;
                let body = self.expr()?;
                Ok(Self::wrap_binders(bs, body, SurfaceKind::Sigma, start))
            }
            _ if self.at_binder() => {
                let bs = self.telescope()?;
                self.expect(TokenKind::Arrow, "`->`")?;
                let cod = self.expr()?;
                Ok(Self::wrap_binders(bs, cod, SurfaceKind::Pi, start))
            }
            _ => {
                let dom = self.app()?;
                if *self.peek() == TokenKind::Arrow {
                    self.bump();
                    let cod = self.expr()?;
                    Ok(SurfaceTerm {
                        span: start,
                        kind: SurfaceKind::Pi(
                            Ann::Relevant,
                            "_".into(),
                            Box::new(dom),
                            Box::new(cod),
                        ),
                    })
                } else {
                    Ok(dom)
                }
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            TokenKind::Ident(_)
                | TokenKind::SetK(_)
                | TokenKind::Unit
                | TokenKind::Irr
                | TokenKind::LParen
        )
    }

    fn app(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span();
        let mut head = match self.peek() {
            TokenKind::SqTy | TokenKind::SqVal => {
                let is_ty = *self.peek() == TokenKind::SqTy;
                self.bump();
                let inner = Box::new(self.atom()?);
                SurfaceTerm {
                    span: start,
                    kind: if is_ty {
                        SurfaceKind::SqTy(inner)
                    } else {
                        SurfaceKind::SqVal(inner)
                    },
                }
            }
            _ => self.atom()?,
        };
        loop {
            if *self.peek() == TokenKind::LBracket {
                self.bump();
                let arg = self.expr()?;
                self.expect(TokenKind::RBracket, "`]`")?;
                head = SurfaceTerm {
                    span: start,
                    kind: SurfaceKind::App(Ann::Irrelevant, Box::new(head), Box::new(arg)),
                };
            } else if self.starts_atom() {
                let arg = self.atom()?;
                head = SurfaceTerm {
                    span: start,
                    kind: SurfaceKind::App(Ann::Relevant, Box::new(head), Box::new(arg)),
                };
            } else {
                return Ok(head);
            }
        }
    }

    fn atom(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let r = self.atom_inner();
        self.depth -= 1;
        r
    }

    fn atom_inner(&mut self) -> PResult<SurfaceTerm> {
        let span = self.span();
        let kind = match self.peek().clone() {
            TokenKind::Ident(s) => {
                self.bump();
                SurfaceKind::Var(s)
            }
            TokenKind::SetK(k) => {
                self.bump();
                SurfaceKind::Sort(k)
            }
            TokenKind::Unit => {
                self.bump();
                SurfaceKind::UnitTy
            }
            TokenKind::Irr => {
                self.bump();
                SurfaceKind::Dummy
            }
            TokenKind::LParen => {
                self.bump();
                if *self.peek() == TokenKind::RParen {
                    self.bump();
                    SurfaceKind::UnitVal
                } else if *self.peek() == TokenKind::LBracket && !self.at_binder() {
                    self.bump();
                    let fst = self.expr()?;
                    self.expect(TokenKind::RBracket, "`]`")?;
                    self.expect(TokenKind::Comma, "`,`")?;
                    let snd = self.expr()?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    SurfaceKind::Pair(Ann::Irrelevant, Box::new(fst), Box::new(snd))
                } else {
                    let inner = self.expr()?;
                    match self.peek() {
                        TokenKind::Comma => {
                            self.bump();
                            let snd = self.expr()?;
                            self.expect(TokenKind::RParen, "`)`")?;
                            SurfaceKind::Pair(Ann::Relevant, Box::new(inner), Box::new(snd))
                        }
                        TokenKind::RParen => {
                            self.bump();
                            return Ok(inner);
                        }
                        _ => return self.error("`)` or `,`"),
                    }
                }
            }
            _ => return self.error("an expression"),
        };
        Ok(SurfaceTerm { span, kind })
    }

    fn item(&mut self) -> PResult<Item> {
        let span = self.span();
        let kind = match self.peek().clone() {
            TokenKind::Def => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(TokenKind::Colon, "`:`")?;
                let ty = self.expr()?;
                self.expect(TokenKind::Define, "`:=`")?;
                let body = self.expr()?;
                self.expect(TokenKind::Semi, "`;`")?;
                ItemKind::Def { name, ty, body }
            }
            TokenKind::Command("fail") => {
                self.bump();
                if *self.peek() == TokenKind::Command("fail") {
                    return self.error("an item other than `#fail`");
                }
                ItemKind::Fail(Box::new(self.item()?))
            }
            TokenKind::Command(cmd) => {
                self.bump();
                let t = self.expr()?;
                let kind = match cmd {
                    "check" => {
                        self.expect(TokenKind::Colon, "`:`")?;
                        let ty = self.expr()?;
                        ItemKind::Check { term: t, ty }
                    }
                    "eq" => {
                        self.expect(TokenKind::Equals, "`=`")?;
                        let rhs = self.expr()?;
                        self.expect(TokenKind::Colon, "`:`")?;
                        let ty = self.expr()?;
                        ItemKind::Eq { lhs: t, rhs, ty }
                    }
                    "infer" => ItemKind::Infer(t),
                    "whnf" => ItemKind::Whnf(t),
                    "erase" => ItemKind::Erase(t),
                    other => unreachable!("lexer produced unknown command {other}"),
                };
                self.expect(TokenKind::Semi, "`;`")?;
                kind
            }
            _ => return self.error("`def` or a `#` command"),
        };
        Ok(Item { span, kind })
    }
}

/// Parses a whole file into items.
pub fn parse(source: &str) -> Result<Vec<Item>, Diagnostic> {
    let mut p = Parser {
        tokens: lex(source)?,
        pos: 0,
        depth: 0,
    };
    let mut items = Vec::new();
    while *p.peek() != TokenKind::Eof {
        items.push(p.item()?);
    }
    Ok(items)
}

/// Parses a single expression spanning the whole input.
pub fn parse_term(source: &str) -> Result<SurfaceTerm, Diagnostic> {
    let mut p = Parser {
        tokens: lex(source)?,
        pos: 0,
        depth: 0,
    };
    let t = p.expr()?;
    if *p.peek() != TokenKind::Eof {
        return p.error("end of input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(src: &str) -> SurfaceKind {
        parse_term(src).unwrap().kind
    }

    #[test]
    fn parses_def() {
        let items =
            parse("def id : (x : Set0) -> (y : x) -> x := fun (x : Set0) (y : x) => y;").unwrap();
        assert_eq!(items.len(), 1);
        assert!(matches!(items[0].kind, ItemKind::Def { .. }));
    }

    #[test]
    fn parses_eq_command() {
        let src = "#eq fun (f : Unit -> Unit) (x : Unit) => x = fun (f : Unit -> Unit) (x : Unit) => f x : (Unit -> Unit) -> Unit -> Unit;";
        let items = parse(src).unwrap();
        assert_eq!(items.len(), 1);
        assert!(matches!(items[0].kind, ItemKind::Eq { .. }));
    }

    #[test]
    fn rejects_empty_def() {
        let err = parse("def bad := ;").unwrap_err();
        assert_eq!(err.code, Code::Parse);
        assert_eq!(err.span, Span::new(1, 9));
    }

    #[test]
    fn application_is_left_associative() {
        match kind("f a [b] c") {
            SurfaceKind::App(Ann::Relevant, f, _) => match f.kind {
                SurfaceKind::App(Ann::Irrelevant, g, _) => {
                    assert!(matches!(g.kind, SurfaceKind::App(Ann::Relevant, ..)))
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arrow_is_right_associative() {
        match kind("A -> B -> C") {
            SurfaceKind::Pi(_, _, a, rest) => {
                assert_eq!(a.kind, SurfaceKind::Var("A".into()));
                assert!(matches!(rest.kind, SurfaceKind::Pi(..)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pairs_and_binders_disambiguate() {
        assert!(matches!(
            kind("(a, b)"),
            SurfaceKind::Pair(Ann::Relevant, ..)
        ));
        assert!(matches!(
            kind("([a], b)"),
            SurfaceKind::Pair(Ann::Irrelevant, ..)
        ));
        assert!(matches!(
            kind("([x : A] -> B)"),
            SurfaceKind::Pi(Ann::Irrelevant, ..)
        ));
        assert!(matches!(kind("(x)"), SurfaceKind::Var(_)));
        assert!(matches!(kind("()"), SurfaceKind::UnitVal));
        assert!(matches!(
            kind("Sig [x : A]. B"),
            SurfaceKind::Sigma(Ann::Irrelevant, ..)
        ));
    }

    #[test]
    fn multi_binder_sugar() {
        match kind("fun (x y : A) [z : B] => x") {
            SurfaceKind::Lam(Ann::Relevant, x, _, b) => {
                assert_eq!(x, "x");
                match b.kind {
                    SurfaceKind::Lam(Ann::Relevant, y, _, c) => {
                        assert_eq!(y, "y");
                        assert!(matches!(c.kind, SurfaceKind::Lam(Ann::Irrelevant, ..)));
                    }
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eliminators() {
        assert!(matches!(
            kind("let (x, y) = p in y"),
            SurfaceKind::Split(..)
        ));
        assert!(matches!(
            kind("let sq x = t in f [x]"),
            SurfaceKind::SqElim(..)
        ));
        assert!(matches!(kind("Sq A"), SurfaceKind::SqTy(_)));
        assert!(matches!(kind("sq t"), SurfaceKind::SqVal(_)));
    }

    #[test]
    fn fail_wraps_single_item() {
        let items = parse("#fail #infer x;").unwrap();
        assert!(
            matches!(&items[0].kind, ItemKind::Fail(inner) if matches!(inner.kind, ItemKind::Infer(_)))
        );
        assert!(parse("#fail #fail #infer x;").is_err());
    }

    #[test]
    fn deep_nesting_is_a_diagnostic() {
        let src = format!("#infer {}x{};", "(".repeat(5000), ")".repeat(5000));
        assert_eq!(parse(&src).unwrap_err().code, Code::Parse);
    }

    #[test]
    fn item_spans_are_monotone() {
        let items = parse("#infer Set0;\n#infer Set1;  #infer Unit;").unwrap();
        let spans: Vec<Span> = items.iter().map(|i| i.span).collect();
        assert!(spans.windows(2).all(|w| w[0] < w[1]));
    }
}
