use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Tilde,
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
    At,
    Eq,
    Comma,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::Tilde => "~",
        Tok::Caret => "^",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::At => "@",
        Tok::Eq => "=",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        _ => "?",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn syntax(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

/// Splits source text into tokens. Newlines inside `(…)` and `[…]` are
/// dropped so long expressions may be wrapped; `#` starts a comment.
pub fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let single = match c {
            '~' => Some(Tok::Tilde),
            '^' => Some(Tok::Caret),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '@' => Some(Tok::At),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(tok) = single {
            match tok {
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
                _ => {}
            }
            out.push(Token { tok, pos });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            if depth == 0 {
                out.push(Token { tok: Tok::Newline, pos });
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(syntax(pos, "unterminated string literal")),
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') => {
                        let esc = chars.get(i + 1).copied();
                        match esc {
                            Some('"') | Some('\\') => s.push(esc.unwrap()),
                            _ => return Err(syntax(Pos { line, col }, "invalid escape in string")),
                        }
                        i += 2;
                        col += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), pos });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Number(s), pos });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-' && is_word_dash(&chars, i, start)) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        return Err(syntax(pos, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

/// A `-` continues an identifier only inside keyword-like words such as
/// `paper-literal`, never between expression operands.
fn is_word_dash(chars: &[char], i: usize, start: usize) -> bool {
    let word: String = chars[start..i].iter().collect();
    matches!(word.as_str(), "paper" | "hermitian")
        && chars.get(i + 1).is_some_and(|c| c.is_alphabetic())
}
