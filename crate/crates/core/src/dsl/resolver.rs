use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lexer::Pos;
use super::parser::{generator_index, parse_expr, parse_statements, Expr, Named, Stmt};
use super::{Model, NamedMetric};
use crate::calculus::VForm;
use crate::error::{Error, Result};
use crate::forms::{Character, CoframeAlgebra, Form, Mono, Weight, MAX_DIM};
use crate::metrics::{Convention, HermMetric};
use crate::obstruction::DeformationCurve;
use crate::scalars::{GaussPoly, GaussRat, VarTable};

/// Name of the real curve parameter, always the first variable.
pub const PARAM: &str = "t";

const RESERVED: &[&str] = &["i", "conj", PARAM];

fn at(pos: Pos, inner: Error) -> Error {
    match inner {
        e @ (Error::Parse { .. } | Error::Located { .. }) => e,
        e => Error::Located {
            line: pos.line,
            col: pos.col,
            inner: Box::new(e),
        },
    }
}

fn is_frame_name(name: &str) -> bool {
    generator_index(name).is_some()
        || name
            .strip_prefix('Z')
            .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}

#[derive(Clone, Debug)]
enum Val {
    Scalar(Form<GaussPoly>),
    Vector(VForm<GaussPoly>),
}

struct Scope {
    n: usize,
    table: Arc<VarTable>,
    chars: Vec<String>,
}

impl Scope {
    fn nchars(&self) -> usize {
        self.chars.len()
    }

    fn zero_weight(&self) -> Weight {
        Weight::zero(self.nchars())
    }

    fn constant(&self, c: GaussRat) -> Form<GaussPoly> {
        Form::term(
            self.n,
            self.zero_weight(),
            Mono::ONE,
            GaussPoly::constant(&self.table, c),
        )
    }

    fn eval(&self, e: &Expr) -> Result<Val> {
        match e {
            Expr::Num(s, pos) => Ok(Val::Scalar(self.constant(parse_number(s).map_err(|e| at(*pos, e))?))),
            Expr::Ident(name, pos) => self.ident(name).map(Val::Scalar).map_err(|e| at(*pos, e)),
            Expr::Neg(inner, _) => Ok(match self.eval(inner)? {
                Val::Scalar(f) => Val::Scalar(f.neg()),
                Val::Vector(v) => Val::Vector(v.scale_rat(&GaussRat::from_int(-1))),
            }),
            Expr::Conj(inner, pos) => match self.eval(inner)? {
                Val::Scalar(f) => Ok(Val::Scalar(f.conj())),
                Val::Vector(_) => Err(at(
                    *pos,
                    Error::Structural("cannot conjugate a vector-valued form".into()),
                )),
            },
            Expr::Add(a, b, pos) => self.additive(a, b, *pos, false),
            Expr::Sub(a, b, pos) => self.additive(a, b, *pos, true),
            Expr::Mul(a, b, pos) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.product(x, y).map_err(|e| at(*pos, e))
            }
            Expr::Div(a, b, pos) => {
                let x = self.eval(a)?;
                let d = self.eval(b)?;
                let c = match &d {
                    Val::Scalar(f) => constant_of(f),
                    Val::Vector(_) => None,
                }
                .ok_or_else(|| at(b.pos(), Error::Structural("divisor must be a numeric constant".into())))?;
                let inv = c
                    .inv()
                    .ok_or_else(|| at(*pos, Error::Structural("division by zero".into())))?;
                Ok(match x {
                    Val::Scalar(f) => Val::Scalar(f.scale_rat(&inv)),
                    Val::Vector(v) => Val::Vector(v.scale_rat(&inv)),
                })
            }
            Expr::Caret(a, b, pos) => {
                if let Expr::Num(s, npos) = &**b {
                    let k: u32 = s.parse().map_err(|_| {
                        at(*npos, Error::Structural(format!("exponent `{s}` must be a non-negative integer")))
                    })?;
                    let base = self.scalar(a)?;
                    if base.terms().any(|(_, m, _)| m.degree() > 0) {
                        return Err(at(
                            *pos,
                            Error::Structural("exponent applied to a form of positive degree".into()),
                        ));
                    }
                    let mut acc = self.constant(GaussRat::one());
                    for _ in 0..k {
                        acc = acc.wedge(&base);
                    }
                    return Ok(Val::Scalar(acc));
                }
                let x = self.scalar(a)?;
                let y = self.scalar(b)?;
                Ok(Val::Scalar(x.wedge(&y)))
            }
            Expr::Tensor(inner, k, pos) => {
                if *k > self.n {
                    return Err(at(*pos, Error::Undeclared(format!("Z{k}"))));
                }
                let f = match self.eval(inner)? {
                    Val::Scalar(f) => f,
                    Val::Vector(_) => {
                        return Err(at(*pos, Error::Structural("nested `@`".into())));
                    }
                };
                let mut comps = vec![Form::zero(self.n, self.nchars()); self.n];
                comps[k - 1] = f;
                Ok(Val::Vector(VForm::new(comps)))
            }
        }
    }

    fn scalar(&self, e: &Expr) -> Result<Form<GaussPoly>> {
        match self.eval(e)? {
            Val::Scalar(f) => Ok(f),
            Val::Vector(_) => Err(at(
                e.pos(),
                Error::Structural("expected a scalar-valued form, found a vector-valued one".into()),
            )),
        }
    }

    fn vector(&self, e: &Expr) -> Result<VForm<GaussPoly>> {
        match self.eval(e)? {
            Val::Vector(v) => Ok(v),
            Val::Scalar(f) if f.is_zero() => Ok(VForm::zero(self.n, self.nchars())),
            Val::Scalar(_) => Err(at(
                e.pos(),
                Error::Structural("expected a vector-valued form `... @ Z<k>`".into()),
            )),
        }
    }

    fn additive(&self, a: &Expr, b: &Expr, pos: Pos, sub: bool) -> Result<Val> {
        let x = self.eval(a)?;
        let y = self.eval(b)?;
        let zero_v = || VForm::zero(self.n, self.nchars());
        let (x, y) = match (x, y) {
            (Val::Scalar(f), Val::Vector(v)) if f.is_zero() => (Val::Vector(zero_v()), Val::Vector(v)),
            (Val::Vector(v), Val::Scalar(f)) if f.is_zero() => (Val::Vector(v), Val::Vector(zero_v())),
            other => other,
        };
        match (x, y) {
            (Val::Scalar(f), Val::Scalar(g)) => Ok(Val::Scalar(if sub { f.minus(&g) } else { f.plus(&g) })),
            (Val::Vector(f), Val::Vector(g)) => Ok(Val::Vector(if sub { f.minus(&g) } else { f.plus(&g) })),
            _ => Err(at(
                pos,
                Error::Structural("cannot add a scalar-valued form to a vector-valued form".into()),
            )),
        }
    }

    fn product(&self, x: Val, y: Val) -> Result<Val> {
        let positive = |f: &Form<GaussPoly>| f.terms().any(|(_, m, _)| m.degree() > 0);
        match (x, y) {
            (Val::Scalar(f), Val::Scalar(g)) => {
                if positive(&f) && positive(&g) {
                    return Err(Error::Structural(
                        "product of two forms of positive degree; use `^`".into(),
                    ));
                }
                Ok(Val::Scalar(f.wedge(&g)))
            }
            (Val::Scalar(f), Val::Vector(v)) | (Val::Vector(v), Val::Scalar(f)) => {
                if positive(&f) {
                    return Err(Error::Structural(
                        "vector-valued forms may only be scaled by functions".into(),
                    ));
                }
                Ok(Val::Vector(v.map(|c| f.wedge(c))))
            }
            (Val::Vector(_), Val::Vector(_)) => Err(Error::Structural(
                "product of two vector-valued forms".into(),
            )),
        }
    }

    fn ident(&self, name: &str) -> Result<Form<GaussPoly>> {
        if name == "i" {
            return Ok(self.constant(GaussRat::i()));
        }
        if let Some(k) = generator_index(name) {
            if k < self.n {
                return Ok(Form::term(
                    self.n,
                    self.zero_weight(),
                    Mono::holo(k),
                    GaussPoly::one(&self.table),
                ));
            }
            return Err(Error::Undeclared(format!("{name} (dimension is {})", self.n)));
        }
        if let Some(c) = self.chars.iter().position(|c| c == name) {
            return Ok(Form::term(
                self.n,
                Weight::unit(self.nchars(), c),
                Mono::ONE,
                GaussPoly::one(&self.table),
            ));
        }
        if let Some(v) = self.table.index_of(name) {
            return Ok(Form::term(
                self.n,
                self.zero_weight(),
                Mono::ONE,
                GaussPoly::var(&self.table, v),
            ));
        }
        Err(Error::Undeclared(name.to_string()))
    }
}

fn constant_of(f: &Form<GaussPoly>) -> Option<GaussRat> {
    if f.is_zero() {
        return Some(GaussRat::zero());
    }
    let mut it = f.terms();
    let (w, m, c) = it.next()?;
    if it.next().is_some() || !w.is_zero() || m != Mono::ONE {
        return None;
    }
    c.as_constant()
}

fn parse_number(s: &str) -> Result<GaussRat> {
    let bad = || Error::Structural(format!("invalid number `{s}`"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(&digits).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(GaussRat::new(BigRational::new(num, den), BigRational::zero()))
}

/// Coefficients of an unweighted form as exact constants.
fn numeric(f: &Form<GaussPoly>, what: &str) -> Result<Form<GaussRat>> {
    f.try_map_into(|c| {
        c.as_constant()
            .ok_or_else(|| Error::InvalidAlgebra(format!("{what} must have numeric coefficients")))
    })
}

fn declare(table: &mut VarTable, seen: &mut HashSet<String>, n: &Named, complex: bool) -> Result<()> {
    if RESERVED.contains(&n.name.as_str()) || is_frame_name(&n.name) || seen.contains(&n.name) {
        let why = if n.name == PARAM {
            format!("`{PARAM}` is the reserved curve parameter")
        } else {
            format!("`{}` is reserved or already declared", n.name)
        };
        return Err(at(n.pos, Error::Structural(why)));
    }
    seen.insert(n.name.clone());
    if complex {
        table.add_complex(&n.name).map(|_| ())
    } else {
        table.add_real(&n.name).map(|_| ())
    }
    .map_err(|e| at(n.pos, e))
}

/// Parses and resolves a complete model file.
pub fn parse_model(src: &str) -> Result<Model> {
    let stmts = parse_statements(src)?;

    let mut name = None;
    let mut assumptions = Vec::new();
    let mut dim = None;
    let mut table = VarTable::new();
    table.add_real(PARAM)?;
    let mut seen = HashSet::new();
    let mut chars: Vec<String> = Vec::new();
    for s in &stmts {
        match s {
            Stmt::Model(m) => {
                if name.replace(m.clone()).is_some() {
                    return Err(Error::Structural("duplicate `model` statement".into()));
                }
            }
            Stmt::Assume(a) => assumptions.push(a.clone()),
            Stmt::Dim(n, pos) => {
                if *n == 0 || *n > MAX_DIM {
                    return Err(at(*pos, Error::InvalidAlgebra(format!("dimension {n} outside 1..={MAX_DIM}"))));
                }
                if dim.replace(*n).is_some() {
                    return Err(at(*pos, Error::Structural("duplicate `dim` statement".into())));
                }
            }
            Stmt::Real(names) => {
                for n in names {
                    declare(&mut table, &mut seen, n, false)?;
                }
            }
            Stmt::Complex(names) => {
                for n in names {
                    declare(&mut table, &mut seen, n, true)?;
                }
            }
            Stmt::Char { name, .. } => {
                if RESERVED.contains(&name.name.as_str()) || is_frame_name(&name.name) || seen.contains(&name.name) {
                    return Err(at(
                        name.pos,
                        Error::Structural(format!("`{}` is reserved or already declared", name.name)),
                    ));
                }
                seen.insert(name.name.clone());
                chars.push(name.name.clone());
            }
            _ => {}
        }
    }
    let n = dim.ok_or_else(|| Error::Structural("missing `dim` statement".into()))?;
    let scope = Scope {
        n,
        table: Arc::new(table),
        chars,
    };

    let mut structure: BTreeMap<usize, Form<GaussRat>> = BTreeMap::new();
    let mut characters = Vec::new();
    let mut sectors = Vec::new();
    let mut metrics: Vec<NamedMetric> = Vec::new();
    let mut curves: Vec<DeformationCurve> = Vec::new();
    for s in &stmts {
        match s {
            Stmt::D { index, pos, expr } => {
                if *index >= n {
                    return Err(at(*pos, Error::Undeclared(format!("e{} (dimension is {n})", index + 1))));
                }
                let f = scope.scalar(expr)?;
                let f = numeric(&f, &format!("d e{}", index + 1)).map_err(|e| at(expr.pos(), e))?;
                if structure.insert(*index, f).is_some() {
                    return Err(at(*pos, Error::Structural(format!("duplicate `d e{}`", index + 1))));
                }
            }
            Stmt::Char { name, dlog10, dlog01 } => {
                let a = numeric(&scope.scalar(dlog10)?, "dlog10").map_err(|e| at(dlog10.pos(), e))?;
                let b = numeric(&scope.scalar(dlog01)?, "dlog01").map_err(|e| at(dlog01.pos(), e))?;
                characters.push(Character {
                    name: name.name.clone(),
                    dlog10: a,
                    dlog01: b,
                });
            }
            Stmt::Sectors(list) => {
                for e in list {
                    let f = scope.scalar(e)?;
                    let w = match f.terms().collect::<Vec<_>>().as_slice() {
                        [(w, m, c)] if *m == Mono::ONE && c.as_constant().is_some_and(|c| c.is_one()) => (*w).clone(),
                        _ => {
                            return Err(at(
                                e.pos(),
                                Error::Structural("a sector is a product of characters".into()),
                            ))
                        }
                    };
                    if !sectors.contains(&w) {
                        sectors.push(w);
                    }
                }
            }
            Stmt::Metric { name, convention, rows } => {
                if metrics.iter().any(|m| m.name == name.name) {
                    return Err(at(name.pos, Error::Structural(format!("duplicate metric `{}`", name.name))));
                }
                let convention = convention
                    .as_ref()
                    .map(|c| Convention::from_str(&c.name).map_err(|e| at(c.pos, e)))
                    .transpose()?;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(at(
                        name.pos,
                        Error::NonHermitian(format!("metric `{}` must be {n}x{n}", name.name)),
                    ));
                }
                let mut entries = Vec::new();
                for row in rows {
                    let mut out = Vec::new();
                    for e in row {
                        let f = scope.scalar(e)?;
                        let entry = function_of(&f, &scope.table).ok_or_else(|| {
                            at(e.pos(), Error::Structural("metric entries must be functions".into()))
                        })?;
                        out.push(entry);
                    }
                    entries.push(out);
                }
                let metric = HermMetric::new(entries).map_err(|e| at(name.pos, e))?;
                metrics.push(NamedMetric {
                    name: name.name.clone(),
                    convention,
                    metric,
                });
            }
            Stmt::Curve { name, expr } => {
                if curves.iter().any(|c| c.name == name.name) {
                    return Err(at(name.pos, Error::Structural(format!("duplicate curve `{}`", name.name))));
                }
                let phi = scope.vector(expr)?;
                curves.push(DeformationCurve::new(name.name.clone(), phi, 0).map_err(|e| at(name.pos, e))?);
            }
            _ => {}
        }
    }

    let structure: Vec<Form<GaussRat>> = (0..n)
        .map(|k| structure.remove(&k).unwrap_or_else(|| Form::zero(n, scope.nchars())))
        .collect();
    let algebra = CoframeAlgebra::new(n, structure, characters)?;
    let report = algebra.d_squared_check();
    if !report.passed() {
        return Err(Error::InvalidAlgebra(report.violations.join("; ")));
    }
    if sectors.is_empty() {
        sectors.push(algebra.zero_weight());
    }
    Ok(Model {
        name: name.unwrap_or_default(),
        assumptions,
        table: scope.table,
        algebra,
        sectors,
        metrics,
        curves,
    })
}

/// Evaluates a scalar-valued form expression in the scope of `model`.
pub(super) fn form_in(model: &Model, src: &str) -> Result<Form<GaussPoly>> {
    let scope = Scope {
        n: model.algebra.dim(),
        table: model.table.clone(),
        chars: model.algebra.char_names(),
    };
    scope.scalar(&parse_expr(src)?)
}

/// Evaluates a function (unweighted 0-form) expression in the scope of `model`.
pub(super) fn function_in(model: &Model, src: &str) -> Result<GaussPoly> {
    let f = form_in(model, src)?;
    function_of(&f, &model.table)
        .ok_or_else(|| Error::Structural(format!("`{src}` is not an unweighted function")))
}

fn function_of(f: &Form<GaussPoly>, table: &Arc<VarTable>) -> Option<GaussPoly> {
    if f.is_zero() {
        return Some(GaussPoly::zero(table));
    }
    let mut it = f.terms();
    let (w, m, c) = it.next()?;
    if it.next().is_some() || !w.is_zero() || m != Mono::ONE {
        return None;
    }
    Some(c.clone())
}
