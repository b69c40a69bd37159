use crate::diagnostic::{Code, Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    SetK(u32),
    Fun,
    Let,
    In,
    SqVal,
    SqTy,
    Sig,
    Unit,
    Irr,
    Def,
    Command(&'static str),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Dot,
    Arrow,
    FatArrow,
    Define,
    Equals,
    Semi,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

const COMMANDS: [&str; 6] = ["check", "infer", "eq", "whnf", "erase", "fail"];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "fun" => TokenKind::Fun,
        "let" => TokenKind::Let,
        "in" => TokenKind::In,
        "sq" => TokenKind::SqVal,
        "Sq" => TokenKind::SqTy,
        "Sig" => TokenKind::Sig,
        "Unit" => TokenKind::Unit,
        "irr" => TokenKind::Irr,
        "def" => TokenKind::Def,
        _ => return None,
    })
}

/// Splits `source` into tokens, ending with `Eof`.
pub fn lex(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let sym2 = match two.as_str() {
            "->" => Some(TokenKind::Arrow),
            "=>" => Some(TokenKind::FatArrow),
            ":=" => Some(TokenKind::Define),
            _ => None,
        };
        if let Some(kind) = sym2 {
            tokens.push(Token { kind, span });
            for _ in 0..2 {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let sym1 = match c {
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ':' => Some(TokenKind::Colon),
            ',' => Some(TokenKind::Comma),
            '.' => Some(TokenKind::Dot),
            '=' => Some(TokenKind::Equals),
            ';' => Some(TokenKind::Semi),
            _ => None,
        };
        if let Some(kind) = sym1 {
            tokens.push(Token { kind, span });
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '#' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_alphabetic() {
                j += 1;
            }
            let word: String = chars[start..j].iter().collect();
            let Some(cmd) = COMMANDS.iter().find(|c| **c == word) else {
                return Err(Diagnostic::error(
                    Code::Parse,
                    span,
                    format!("unknown command `#{word}`"),
                ));
            };
            tokens.push(Token {
                kind: TokenKind::Command(cmd),
                span,
            });
            while i < j {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            let word: String = chars[start..i].iter().collect();
            let kind = if let Some(kw) = keyword(&word) {
                kw
            } else if let Some(level) = word.strip_prefix("Set") {
                if level.is_empty() || !level.chars().all(|d| d.is_ascii_digit()) {
                    if level.is_empty() {
                        return Err(Diagnostic::error(
                            Code::Parse,
                            span,
                            "universe needs a level, e.g. `Set0`",
                        ));
                    }
                    TokenKind::Ident(word)
                } else {
                    match level.parse::<u32>() {
                        Ok(k) => TokenKind::SetK(k),
                        Err(_) => {
                            return Err(Diagnostic::error(
                                Code::Parse,
                                span,
                                format!("universe level `{level}` is too large"),
                            ))
                        }
                    }
                }
            } else {
                TokenKind::Ident(word)
            };
            tokens.push(Token { kind, span });
            continue;
        }
        return Err(Diagnostic::error(
            Code::Parse,
            span,
            format!("unexpected character `{c}`"),
        ));
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span::new(line, col),
    });
    Ok(tokens)
}
