use std::fmt;

use super::{ErrorKind, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Lowercase identifier: predicate, constant, quantifier or keyword.
    Ident(String),
    /// Uppercase identifier.
    Var(String),
    Int(i64),
    /// `#universe`, `#intensional`
    Directive(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Dot,
    If,
    Arrow,
    Bar,
    Amp,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Directive(d) => write!(f, "`#{d}`"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", other.text()),
        }
    }
}

impl Tok {
    pub(crate) fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::If => ":-",
            Tok::Arrow => "->",
            Tok::Bar => "|",
            Tok::Amp => "&",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str, origin: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let err = |line, column, msg: String| ParseError {
        kind: ErrorKind::Syntax,
        message: msg,
        origin: origin.to_string(),
        line,
        column,
        expected: Vec::new(),
    };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let peek = chars.get(i + 1).copied();
        let tok = match c {
            '(' => Some((Tok::LParen, 1)),
            ')' => Some((Tok::RParen, 1)),
            '{' => Some((Tok::LBrace, 1)),
            '}' => Some((Tok::RBrace, 1)),
            '[' => Some((Tok::LBrack, 1)),
            ']' => Some((Tok::RBrack, 1)),
            ',' => Some((Tok::Comma, 1)),
            ';' => Some((Tok::Semi, 1)),
            '.' => Some((Tok::Dot, 1)),
            '|' => Some((Tok::Bar, 1)),
            '&' => Some((Tok::Amp, 1)),
            '=' => Some((Tok::Eq, 1)),
            ':' if peek == Some('-') => Some((Tok::If, 2)),
            ':' => Some((Tok::Colon, 1)),
            '-' if peek == Some('>') => Some((Tok::Arrow, 2)),
            '!' if peek == Some('=') => Some((Tok::Ne, 2)),
            '<' if peek == Some('=') => Some((Tok::Le, 2)),
            '<' => Some((Tok::Lt, 1)),
            '>' if peek == Some('=') => Some((Tok::Ge, 2)),
            '>' => Some((Tok::Gt, 1)),
            _ => None,
        };
        if let Some((tok, n)) = tok {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            advance(n, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            col += i - start;
            let n = lit
                .parse::<i64>()
                .map_err(|_| err(tl, tc, format!("integer literal `{lit}` out of range")))?;
            out.push(Token {
                tok: Tok::Int(n),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c == '#' || c.is_alphabetic() || c == '_' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if let Some(d) = word.strip_prefix('#') {
                if d.is_empty() {
                    return Err(err(tl, tc, "expected a directive name after `#`".into()));
                }
                Tok::Directive(d.to_string())
            } else if c.is_uppercase() {
                Tok::Var(word)
            } else if c == '_' {
                return Err(err(tl, tc, format!("identifier `{word}` must start with a letter")));
            } else {
                Tok::Ident(word)
            };
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
