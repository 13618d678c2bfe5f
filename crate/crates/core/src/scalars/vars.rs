use std::collections::HashMap;

use crate::error::{Error, Result};

/// Ordered variable identifiers with a conjugation involution.
///
/// A complex variable `x` is stored together with its partner `~x`; a real
/// variable is its own partner. The table order fixes the monomial order of
/// every polynomial built over it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VarTable {
    names: Vec<String>,
    conj: Vec<usize>,
    index: HashMap<String, usize>,
}

impl VarTable {
    pub fn new() -> Self {
        VarTable::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn push(&mut self, name: String) -> usize {
        let idx = self.names.len();
        self.index.insert(name.clone(), idx);
        self.names.push(name);
        self.conj.push(idx);
        idx
    }

    /// Declares a self-conjugate variable.
    pub fn add_real(&mut self, name: &str) -> Result<usize> {
        self.check_fresh(name)?;
        Ok(self.push(name.to_string()))
    }

    /// Declares `name` and its conjugate partner `~name`; returns both indices.
    pub fn add_complex(&mut self, name: &str) -> Result<(usize, usize)> {
        self.check_fresh(name)?;
        let a = self.push(name.to_string());
        let b = self.push(format!("~{name}"));
        self.conj[a] = b;
        self.conj[b] = a;
        Ok((a, b))
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if name.is_empty() || name.starts_with('~') {
            return Err(Error::Structural(format!("invalid variable name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Structural(format!("variable `{name}` declared twice")));
        }
        Ok(())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn conj_of(&self, idx: usize) -> usize {
        self.conj[idx]
    }

    pub fn is_real(&self, idx: usize) -> bool {
        self.conj[idx] == idx
    }

    /// Declared (non-tilde) variables in table order, with their reality flag.
    pub fn primaries(&self) -> impl Iterator<Item = (usize, &str, bool)> + '_ {
        self.names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.starts_with('~'))
            .map(move |(i, n)| (i, n.as_str(), self.is_real(i)))
    }
}
