use super::lexer::{lex, syntax, Pos, Tok, Token};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(String, Pos),
    Ident(String, Pos),
    Neg(Box<Expr>, Pos),
    Conj(Box<Expr>, Pos),
    Add(Box<Expr>, Box<Expr>, Pos),
    Sub(Box<Expr>, Box<Expr>, Pos),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Caret(Box<Expr>, Box<Expr>, Pos),
    Tensor(Box<Expr>, usize, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Num(_, p)
            | Expr::Ident(_, p)
            | Expr::Neg(_, p)
            | Expr::Conj(_, p)
            | Expr::Add(_, _, p)
            | Expr::Sub(_, _, p)
            | Expr::Mul(_, _, p)
            | Expr::Div(_, _, p)
            | Expr::Caret(_, _, p)
            | Expr::Tensor(_, _, p) => *p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Named {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Model(String),
    Assume(String),
    Dim(usize, Pos),
    Real(Vec<Named>),
    Complex(Vec<Named>),
    Char {
        name: Named,
        dlog10: Expr,
        dlog01: Expr,
    },
    D {
        index: usize,
        pos: Pos,
        expr: Expr,
    },
    Sectors(Vec<Expr>),
    Metric {
        name: Named,
        convention: Option<Named>,
        rows: Vec<Vec<Expr>>,
    },
    Curve {
        name: Named,
        expr: Expr,
    },
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

/// Parses `.balg` source into statements.
pub fn parse_statements(src: &str) -> Result<Vec<Stmt>> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_newlines();
        if p.peek() == &Tok::Eof {
            return Ok(out);
        }
        out.push(p.statement()?);
        match p.peek() {
            Tok::Newline | Tok::Eof => {}
            other => {
                return Err(syntax(
                    p.pos(),
                    format!("expected end of statement, found {}", other.describe()),
                ))
            }
        }
    }
}

/// Parses a single expression (used by tests and the CLI).
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.sum()?;
    p.skip_newlines();
    if p.peek() != &Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Ok(e)
}

fn starts_factor(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Ident(_) | Tok::Number(_) | Tok::LParen | Tok::LBracket | Tok::Tilde
    )
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek() == &Tok::Newline {
            self.bump();
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.bump();
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Pos> {
        if self.peek() == &want {
            Ok(self.bump().pos)
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {what}, found {}", self.peek().describe()),
            ))
        }
    }

    /// Closing delimiter; an unterminated group is reported at its opening.
    fn close(&mut self, want: Tok, open: Pos) -> Result<()> {
        if self.peek() == &want {
            self.bump();
            return Ok(());
        }
        let (o, c) = if want == Tok::RParen { ("(", ")") } else { ("[", "]") };
        if self.peek() == &Tok::Eof {
            return Err(syntax(open, format!("unclosed `{o}`")));
        }
        Err(syntax(
            self.pos(),
            format!("expected `{c}`, found {}", self.peek().describe()),
        ))
    }

    fn ident(&mut self, what: &str) -> Result<Named> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                Ok(Named { name, pos })
            }
            other => Err(syntax(
                self.pos(),
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    fn string(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(syntax(
                self.pos(),
                format!("expected string literal, found {}", other.describe()),
            )),
        }
    }

    fn names(&mut self) -> Result<Vec<Named>> {
        let mut out = vec![self.ident("a variable name")?];
        while self.peek() == &Tok::Comma {
            self.bump();
            out.push(self.ident("a variable name")?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Stmt> {
        let kw = self.ident("a statement keyword")?;
        match kw.name.as_str() {
            "model" => Ok(Stmt::Model(self.string()?)),
            "assume" => Ok(Stmt::Assume(self.string()?)),
            "dim" => match self.peek().clone() {
                Tok::Number(s) if s.chars().all(|c| c.is_ascii_digit()) => {
                    let pos = self.bump().pos;
                    let n = s.parse().map_err(|_| syntax(pos, "dimension out of range"))?;
                    Ok(Stmt::Dim(n, pos))
                }
                other => Err(syntax(
                    self.pos(),
                    format!("expected an integer dimension, found {}", other.describe()),
                )),
            },
            "real" => Ok(Stmt::Real(self.names()?)),
            "complex" => Ok(Stmt::Complex(self.names()?)),
            "char" => self.char_block(),
            "d" => {
                let target = self.ident("a generator `e<k>`")?;
                let index = generator_index(&target.name)
                    .ok_or_else(|| syntax(target.pos, format!("expected a generator `e<k>`, found `{}`", target.name)))?;
                self.expect(Tok::Eq, "`=`")?;
                let expr = self.sum()?;
                Ok(Stmt::D {
                    index,
                    pos: target.pos,
                    expr,
                })
            }
            "sectors" => {
                let mut out = vec![self.sum()?];
                while self.peek() == &Tok::Comma {
                    self.bump();
                    out.push(self.sum()?);
                }
                Ok(Stmt::Sectors(out))
            }
            "metric" => self.metric_block(),
            "curve" => {
                let name = self.ident("a curve name")?;
                self.expect(Tok::Eq, "`=`")?;
                let expr = self.sum()?;
                Ok(Stmt::Curve { name, expr })
            }
            other => Err(syntax(kw.pos, format!("unknown statement `{other}`"))),
        }
    }

    fn char_block(&mut self) -> Result<Stmt> {
        let name = self.ident("a character name")?;
        let open = self.expect(Tok::LBrace, "`{`")?;
        let (mut d10, mut d01) = (None, None);
        loop {
            self.skip_separators();
            if self.peek() == &Tok::RBrace {
                self.bump();
                break;
            }
            let field = self.ident("`dlog10` or `dlog01`")?;
            self.expect(Tok::Eq, "`=`")?;
            let e = self.sum()?;
            match field.name.as_str() {
                "dlog10" if d10.is_none() => d10 = Some(e),
                "dlog01" if d01.is_none() => d01 = Some(e),
                "dlog10" | "dlog01" => {
                    return Err(syntax(field.pos, format!("duplicate field `{}`", field.name)))
                }
                other => return Err(syntax(field.pos, format!("unknown character field `{other}`"))),
            }
            if !matches!(self.peek(), Tok::Semi | Tok::Newline | Tok::RBrace) {
                return Err(syntax(
                    self.pos(),
                    format!("expected `;` or `}}`, found {}", self.peek().describe()),
                ));
            }
        }
        match (d10, d01) {
            (Some(dlog10), Some(dlog01)) => Ok(Stmt::Char { name, dlog10, dlog01 }),
            _ => Err(syntax(open, "character needs both `dlog10` and `dlog01`")),
        }
    }

    fn metric_block(&mut self) -> Result<Stmt> {
        let name = self.ident("a metric name")?;
        let mut convention = None;
        if matches!(self.peek(), Tok::Ident(s) if s == "convention") {
            self.bump();
            convention = Some(self.ident("a convention name")?);
        }
        self.expect(Tok::LBrace, "`{`")?;
        let mut rows = Vec::new();
        loop {
            self.skip_separators();
            if self.peek() == &Tok::RBrace {
                self.bump();
                break;
            }
            let mut row = vec![self.sum()?];
            while self.peek() == &Tok::Comma {
                self.bump();
                row.push(self.sum()?);
            }
            rows.push(row);
            if !matches!(self.peek(), Tok::Semi | Tok::Newline | Tok::RBrace) {
                return Err(syntax(
                    self.pos(),
                    format!("expected `,`, `;` or `}}`, found {}", self.peek().describe()),
                ));
            }
        }
        Ok(Stmt::Metric {
            name,
            convention,
            rows,
        })
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let v = self.vterm()?;
        if self.peek() == &Tok::At {
            let pos = self.bump().pos;
            let z = self.ident("a frame vector `Z<k>`")?;
            let k = z
                .name
                .strip_prefix('Z')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| syntax(z.pos, format!("expected a frame vector `Z<k>`, found `{}`", z.name)))?;
            return Ok(Expr::Tensor(Box::new(v), k, pos));
        }
        Ok(v)
    }

    fn vterm(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), pos);
                }
                t if starts_factor(t) => {
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == &Tok::Minus {
            let pos = self.bump().pos;
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner), pos));
        }
        let mut lhs = self.unary()?;
        while self.peek() == &Tok::Caret {
            let pos = self.bump().pos;
            let rhs = self.unary()?;
            lhs = Expr::Caret(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == &Tok::Tilde {
            let pos = self.bump().pos;
            let inner = self.unary()?;
            return Ok(Expr::Conj(Box::new(inner), pos));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                Ok(Expr::Num(s, pos))
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "conj" && self.peek() == &Tok::LParen {
                    let open = self.bump().pos;
                    let inner = self.sum()?;
                    self.close(Tok::RParen, open)?;
                    return Ok(Expr::Conj(Box::new(inner), pos));
                }
                Ok(Expr::Ident(name, pos))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.close(Tok::RParen, pos)?;
                Ok(inner)
            }
            Tok::LBracket => {
                self.bump();
                let inner = self.sum()?;
                self.close(Tok::RBracket, pos)?;
                Ok(inner)
            }
            other => Err(syntax(pos, format!("expected an operand, found {}", other.describe()))),
        }
    }
}

/// `e<k>` with `k ≥ 1`, returned 0-based.
pub fn generator_index(name: &str) -> Option<usize> {
    let d = name.strip_prefix('e')?;
    if d.is_empty() || !d.chars().all(|c| c.is_ascii_digit()) || d.starts_with('0') {
        return None;
    }
    d.parse::<usize>().ok().map(|k| k - 1)
}
