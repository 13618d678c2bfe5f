use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Assignment, Coeff, GaussRat, VarTable};
use crate::error::{Error, Result};

/// Dense exponent vector over a [`VarTable`], ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn zero(nvars: usize) -> Self {
        Exponents(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with Gaussian-rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by graded-lex exponents; zero
/// coefficients are never stored.
#[derive(Clone, Debug)]
pub struct GaussPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Exponents, GaussRat>,
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for GaussPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl GaussPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        GaussPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VarTable>, c: GaussRat) -> Self {
        let mut p = GaussPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(Exponents::zero(table.len()), c);
        }
        p
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        GaussPoly::constant(table, GaussRat::one())
    }

    pub fn var(table: &Arc<VarTable>, idx: usize) -> Self {
        let mut e = Exponents::zero(table.len());
        e.0[idx] = 1;
        let mut p = GaussPoly::zero(table);
        p.terms.insert(e, GaussRat::one());
        p
    }

    pub fn var_named(table: &Arc<VarTable>, name: &str) -> Result<Self> {
        let idx = table
            .index_of(name)
            .ok_or_else(|| Error::Undeclared(name.to_string()))?;
        Ok(GaussPoly::var(table, idx))
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value, if the polynomial has no variable.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (e.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Exponents, &GaussRat)> {
        self.terms.iter().next_back()
    }

    /// Exact `p op q`; fails if the two polynomials live over different tables.
    pub fn arith(&self, other: &GaussPoly, op: PolyOp) -> Result<GaussPoly> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::Structural(
                "polynomial arithmetic across different variable tables".into(),
            ));
        }
        Ok(match op {
            PolyOp::Add => self.add_unchecked(other, false),
            PolyOp::Sub => self.add_unchecked(other, true),
            PolyOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &GaussPoly, negate: bool) -> GaussPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let c = if negate { -c } else { c.clone() };
            out.add_term(e.clone(), c);
        }
        out
    }

    fn add_term(&mut self, e: Exponents, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn mul_unchecked(&self, other: &GaussPoly) -> GaussPoly {
        let mut out = GaussPoly::zero(&self.table);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    fn assert_table(&self, other: &GaussPoly) {
        assert!(
            same_table(&self.table, &other.table),
            "polynomial arithmetic across different variable tables"
        );
    }

    pub fn scale(&self, c: &GaussRat) -> GaussPoly {
        if c.is_zero() {
            return GaussPoly::zero(&self.table);
        }
        GaussPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> GaussPoly {
        let mut acc = GaussPoly::one(&self.table);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Swaps conjugate-paired variables and conjugates every coefficient.
    pub fn conj(&self) -> GaussPoly {
        let t = &self.table;
        let mut out = GaussPoly::zero(t);
        for (e, c) in &self.terms {
            let mut f = Exponents::zero(t.len());
            for (v, &k) in e.0.iter().enumerate() {
                f.0[t.conj_of(v)] += k;
            }
            out.add_term(f, c.conj());
        }
        out
    }

    /// Variables that occur with nonzero exponent.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for e in self.terms.keys() {
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    s.insert(v);
                }
            }
        }
        s
    }

    /// Groups terms by the power of `var`, removing that variable.
    pub fn split_by(&self, var: usize) -> BTreeMap<u32, GaussPoly> {
        let mut out: BTreeMap<u32, GaussPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e.0[var];
            let mut f = e.clone();
            f.0[var] = 0;
            out.entry(k)
                .or_insert_with(|| GaussPoly::zero(&self.table))
                .add_term(f, c.clone());
        }
        out
    }

    /// Coefficient of `var^k` (with `var` removed).
    pub fn coeff_of(&self, var: usize, k: u32) -> GaussPoly {
        self.split_by(var)
            .remove(&k)
            .unwrap_or_else(|| GaussPoly::zero(&self.table))
    }

    /// Substitutes `var := value`.
    pub fn subst(&self, var: usize, value: &GaussPoly) -> GaussPoly {
        self.assert_table(value);
        let mut out = GaussPoly::zero(&self.table);
        for (k, c) in self.split_by(var) {
            out = out.add_unchecked(&c.mul_unchecked(&value.pow(k)), false);
        }
        out
    }

    /// Scales so that the graded-lex leading coefficient is `1`.
    pub fn normalized(&self) -> GaussPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("stored coefficients are nonzero")),
        }
    }

    pub fn eval(&self, assign: &Assignment) -> Result<Complex64> {
        let vals = assign.resolve(&self.table, &self.variables())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = c.to_c64();
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    m *= vals[&v].powu(k);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    fn fmt_monomial(&self, e: &Exponents) -> String {
        let mut parts = Vec::new();
        for (v, &k) in e.0.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(self.table.name(v).to_string()),
                _ => parts.push(format!("{}^{}", self.table.name(v), k)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for GaussPoly {
    /// Canonical rendering: leading term first, `i` for the imaginary unit and
    /// `~x` for the conjugate of `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_display();
            let shown = if negative && n > 0 { -c } else { c.clone() };
            if n > 0 {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if e.degree() == 0 {
                write!(f, "{shown}")?;
                continue;
            }
            let mono = self.fmt_monomial(e);
            if shown.is_one() {
                write!(f, "{mono}")?;
            } else if (-&shown).is_one() {
                write!(f, "-{mono}")?;
            } else {
                write!(f, "{shown}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Coeff for GaussPoly {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.assert_table(o);
        self.add_unchecked(o, false)
    }
    fn times(&self, o: &Self) -> Self {
        self.assert_table(o);
        self.mul_unchecked(o)
    }
    fn negated(&self) -> Self {
        self.scale(&GaussRat::from_int(-1))
    }
    fn scaled(&self, c: &GaussRat) -> Self {
        self.scale(c)
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn unit_like(&self) -> Self {
        GaussPoly::one(&self.table)
    }
    fn absorb(&mut self, o: &Self) {
        self.assert_table(o);
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}
