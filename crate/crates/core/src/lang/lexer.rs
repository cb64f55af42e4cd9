use super::ast::Span;
use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u32),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Eq,
    AndAnd,
    OrOr,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Str(_) => "string".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span {
            start: self.pos,
            end: self.pos,
            line: self.line,
            col: self.col,
        }
    }

    fn close(&self, mut s: Span) -> Span {
        s.end = self.pos;
        s
    }
}

/// Split `text` into tokens, ending with `Eof`. Stops at the first bad
/// character.
pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut c = Cursor {
        text,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(ch) = c.peek() {
            if ch.is_whitespace() {
                c.bump();
            } else if ch == '#' {
                while c.peek().is_some_and(|ch| ch != '\n') {
                    c.bump();
                }
            } else {
                break;
            }
        }
        let start = c.here();
        let Some(ch) = c.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                span: start,
            });
            return Ok(out);
        };
        let tok = match ch {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '&' if c.peek() == Some('&') => {
                c.bump();
                Tok::AndAnd
            }
            '|' if c.peek() == Some('|') => {
                c.bump();
                Tok::OrOr
            }
            '"' => Tok::Str(string(&mut c, start)?),
            c0 if c0.is_ascii_alphabetic() || c0 == '_' => {
                while c
                    .peek()
                    .is_some_and(|ch| ch.is_ascii_alphanumeric() || ch == '_')
                {
                    c.bump();
                }
                Tok::Ident(text[start.start..c.pos].to_string())
            }
            c0 if c0.is_ascii_digit() => {
                while c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                    c.bump();
                }
                let digits = &text[start.start..c.pos];
                match digits.parse::<u32>() {
                    Ok(n) => Tok::Nat(n),
                    Err(_) => {
                        return Err(Diagnostic::error(
                            format!("number `{digits}` is too large"),
                            c.close(start),
                        ))
                    }
                }
            }
            other => {
                let hint = match other {
                    '&' => "; did you mean `&&`?",
                    '|' => "; did you mean `||`?",
                    _ => "",
                };
                return Err(Diagnostic::error(
                    format!("unexpected character `{}`{hint}", other.escape_debug()),
                    c.close(start),
                ));
            }
        };
        out.push(Token {
            tok,
            span: c.close(start),
        });
    }
}

fn string(c: &mut Cursor<'_>, start: Span) -> Result<String, Diagnostic> {
    let mut s = String::new();
    loop {
        match c.bump() {
            None => return Err(Diagnostic::error("unterminated string", c.close(start))),
            Some('"') => return Ok(s),
            Some('\\') => match c.bump() {
                Some(e @ ('"' | '\\')) => s.push(e),
                Some(e) => {
                    return Err(Diagnostic::error(
                        format!("unknown escape `\\{}`", e.escape_debug()),
                        c.close(start),
                    ))
                }
                None => return Err(Diagnostic::error("unterminated string", c.close(start))),
            },
            Some(ch) => s.push(ch),
        }
    }
}
