use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Mono, Weight};
use crate::scalars::{Coeff, GaussRat};

/// Bidegree of a form: homogeneous, mixed, or the zero form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bidegree {
    Any,
    Pure(usize, usize),
    Mixed,
}

/// Character-weighted invariant form with coefficients in `C`.
///
/// Terms are keyed by `(weight, monomial)`; zero coefficients are pruned.
#[derive(Clone, PartialEq, Debug)]
pub struct Form<C> {
    n: usize,
    nchars: usize,
    terms: BTreeMap<(Weight, Mono), C>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(n: usize, nchars: usize) -> Self {
        Form {
            n,
            nchars,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(n: usize, weight: Weight, mono: Mono, c: C) -> Self {
        let nchars = weight.len();
        let mut f = Form::zero(n, nchars);
        f.add_term(weight, mono, c);
        f
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nchars(&self) -> usize {
        self.nchars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, Mono, &C)> {
        self.terms.iter().map(|((w, m), c)| (w, *m, c))
    }

    pub fn coeff(&self, w: &Weight, m: Mono) -> Option<&C> {
        self.terms.get(&(w.clone(), m))
    }

    pub fn add_term(&mut self, w: Weight, m: Mono, c: C) {
        if c.vanishes() {
            return;
        }
        let key = (w, m);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                slot.absorb(&c);
                if slot.vanishes() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &Form<C>) {
        for ((w, m), c) in &o.terms {
            self.add_term(w.clone(), *m, c.clone());
        }
    }

    pub fn plus(&self, o: &Form<C>) -> Form<C> {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn minus(&self, o: &Form<C>) -> Form<C> {
        self.plus(&o.neg())
    }

    pub fn neg(&self) -> Form<C> {
        self.map(|c| c.negated())
    }

    pub fn scale(&self, c: &C) -> Form<C> {
        self.map(|x| x.times(c))
    }

    pub fn scale_rat(&self, c: &GaussRat) -> Form<C> {
        self.map(|x| x.scaled(c))
    }

    /// Applies `f` to every coefficient, pruning zeros.
    pub fn map(&self, f: impl Fn(&C) -> C) -> Form<C> {
        self.map_into(f)
    }

    /// Changes the coefficient ring.
    pub fn map_into<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n, self.nchars);
        for ((w, m), c) in &self.terms {
            out.add_term(w.clone(), *m, f(c));
        }
        out
    }

    pub fn try_map_into<D: Coeff, E>(
        &self,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<Form<D>, E> {
        let mut out = Form::zero(self.n, self.nchars);
        for ((w, m), c) in &self.terms {
            out.add_term(w.clone(), *m, f(c)?);
        }
        Ok(out)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Weight, Mono) -> bool) -> Form<C> {
        Form {
            n: self.n,
            nchars: self.nchars,
            terms: self
                .terms
                .iter()
                .filter(|((w, m), _)| keep(w, *m))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn wedge(&self, o: &Form<C>) -> Form<C> {
        let mut out = Form::zero(self.n, self.nchars.max(o.nchars));
        for ((w1, m1), c1) in &self.terms {
            for ((w2, m2), c2) in &o.terms {
                if let Some((s, m)) = m1.wedge(*m2) {
                    let c = c1.times(c2);
                    let c = if s < 0 { c.negated() } else { c };
                    out.add_term(w1 + w2, m, c);
                }
            }
        }
        out
    }

    /// `k`-fold wedge power; `k = 0` is rejected by returning `None`.
    pub fn wedge_power(&self, k: usize) -> Option<Form<C>> {
        if k == 0 {
            return None;
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.wedge(self);
        }
        Some(acc)
    }

    /// `c ∧ self` for a constant-coefficient form `c`.
    pub fn wedge_const_left(&self, c: &Form<GaussRat>) -> Form<C> {
        let mut out = Form::zero(self.n, self.nchars.max(c.nchars));
        for ((w1, m1), k) in &c.terms {
            for ((w2, m2), x) in &self.terms {
                if let Some((s, m)) = m1.wedge(*m2) {
                    let y = x.scaled(k);
                    let y = if s < 0 { y.negated() } else { y };
                    out.add_term(w1 + w2, m, y);
                }
            }
        }
        out
    }

    /// Complex conjugate: swaps factor types, negates weights, conjugates
    /// coefficients.
    pub fn conj(&self) -> Form<C> {
        let mut out = Form::zero(self.n, self.nchars);
        for ((w, m), c) in &self.terms {
            let (s, cm) = m.conj(self.n);
            let c = c.conjugate();
            out.add_term(-w, cm, if s < 0 { c.negated() } else { c });
        }
        out
    }

    pub fn bidegree(&self) -> Bidegree {
        let mut seen: Option<(usize, usize)> = None;
        for (_, m) in self.terms.keys() {
            let b = m.bidegree(self.n);
            match seen {
                None => seen = Some(b),
                Some(s) if s != b => return Bidegree::Mixed,
                _ => {}
            }
        }
        match seen {
            None => Bidegree::Any,
            Some((p, q)) => Bidegree::Pure(p, q),
        }
    }

    /// Bidegree-`(p,q)` component.
    pub fn component(&self, p: usize, q: usize) -> Form<C> {
        let n = self.n;
        self.filter(|_, m| m.bidegree(n) == (p, q))
    }

    pub fn weights(&self) -> BTreeSet<Weight> {
        self.terms.keys().map(|(w, _)| w.clone()).collect()
    }

    pub fn sector(&self, weight: &Weight) -> Form<C> {
        self.filter(|w, _| w == weight)
    }

    pub fn display<'a>(&'a self, char_names: &'a [String]) -> FormDisplay<'a, C> {
        FormDisplay {
            form: self,
            names: char_names,
        }
    }
}

pub struct FormDisplay<'a, C> {
    form: &'a Form<C>,
    names: &'a [String],
}

/// Coefficients that render as a parenthesised factor.
pub trait CoeffDisplay {
    fn is_unit(&self) -> bool;
    fn render(&self) -> String;
}

impl<C: Coeff + CoeffDisplay> fmt::Display for FormDisplay<'_, C> {
    /// `[w] (coef) e1^e2^~e1 + …`, with `(coef)` omitted when it is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        let n = self.form.n;
        let mut first = true;
        for ((w, m), c) in &self.form.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if !w.is_zero() {
                parts.push(format!("[{}]", w.render(self.names)));
            }
            if !c.is_unit() || m.0 == 0 && parts.is_empty() {
                parts.push(format!("({})", c.render()));
            }
            if m.0 != 0 {
                parts.push(m.display(n).to_string());
            }
            write!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl CoeffDisplay for crate::scalars::GaussPoly {
    fn is_unit(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl CoeffDisplay for GaussRat {
    fn is_unit(&self) -> bool {
        self.is_one()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl CoeffDisplay for num_complex::Complex64 {
    fn is_unit(&self) -> bool {
        *self == num_complex::Complex64::new(1.0, 0.0)
    }
    fn render(&self) -> String {
        format!("{:.6e} + {:.6e}*i", self.re, self.im)
    }
}
