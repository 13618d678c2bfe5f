//! Exact scalars: Gaussian rationals, variable tables and polynomials.

mod gauss;
mod poly;
mod vars;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;

use num_complex::Complex64;

pub use gauss::GaussRat;
pub use poly::{Exponents, GaussPoly, PolyOp};
pub use vars::VarTable;

use crate::error::{Error, Result};

/// Coefficient ring of a form.
///
/// Method names avoid the `std::ops` names so that calls never resolve to an
/// operator trait or an inherent method of the implementing type.
pub trait Coeff: Clone + PartialEq + Debug {
    fn vanishes(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, c: &GaussRat) -> Self;
    fn conjugate(&self) -> Self;
    /// The multiplicative identity of the ring `self` lives in.
    fn unit_like(&self) -> Self;
    fn absorb(&mut self, o: &Self) {
        *self = self.plus(o);
    }
}

impl Coeff for Complex64 {
    fn vanishes(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &GaussRat) -> Self {
        self * c.to_c64()
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn unit_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn absorb(&mut self, o: &Self) {
        *self += o;
    }
}

impl Coeff for GaussRat {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &GaussRat) -> Self {
        self * c
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn unit_like(&self) -> Self {
        GaussRat::one()
    }
    fn absorb(&mut self, o: &Self) {
        *self += o;
    }
}

const CONJ_TOL: f64 = 1e-12;

/// Numeric values for variables of a [`VarTable`], keyed by variable index.
///
/// Only one member of a conjugate pair needs a value; the partner is derived.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    values: HashMap<usize, Complex64>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn set(&mut self, var: usize, value: Complex64) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: usize) -> Option<Complex64> {
        self.values.get(&var).copied()
    }

    pub fn from_pairs(table: &VarTable, pairs: &[(&str, Complex64)]) -> Result<Self> {
        let mut a = Assignment::new();
        for (name, v) in pairs {
            let idx = table
                .index_of(name)
                .ok_or_else(|| Error::Undeclared(name.to_string()))?;
            a.set(idx, *v);
        }
        Ok(a)
    }

    /// Value of `var`, derived from its partner when needed, with the
    /// consistency checks for conjugate pairs and real variables.
    pub fn value(&self, table: &VarTable, var: usize) -> Result<Complex64> {
        let partner = table.conj_of(var);
        let direct = self.values.get(&var).copied();
        let via = self.values.get(&partner).map(|z| z.conj());
        let v = match (direct, via) {
            (Some(a), Some(b)) => {
                if (a - b).norm() > CONJ_TOL * (1.0 + a.norm()) {
                    return Err(Error::InconsistentConjugate(table.name(var).into()));
                }
                a
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return Err(Error::MissingAssignment(table.name(var).into())),
        };
        if table.is_real(var) && v.im.abs() > CONJ_TOL * (1.0 + v.re.abs()) {
            return Err(Error::NotReal(table.name(var).into()));
        }
        Ok(v)
    }

    pub(crate) fn resolve(
        &self,
        table: &VarTable,
        vars: &BTreeSet<usize>,
    ) -> Result<HashMap<usize, Complex64>> {
        vars.iter()
            .map(|&v| self.value(table, v).map(|z| (v, z)))
            .collect()
    }

    /// Every variable of `table` not yet assigned (nor derivable) gets `value`.
    pub fn fill_missing(&mut self, table: &VarTable, value: Complex64) {
        for v in 0..table.len() {
            let p = table.conj_of(v);
            if !self.values.contains_key(&v) && !self.values.contains_key(&p) {
                self.values.insert(v, value);
            }
        }
    }
}
