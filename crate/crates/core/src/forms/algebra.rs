use super::{Bidegree, Form, Mono, Weight, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalars::{Coeff, GaussRat};

/// Unitary character `χ` given by its logarithmic differential
/// `dχ/χ = dlog10 + dlog01`.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub name: String,
    pub dlog10: Form<GaussRat>,
    pub dlog01: Form<GaussRat>,
}

/// Structure equations `dη^k` of an invariant coframe, plus declared characters.
#[derive(Clone, Debug, PartialEq)]
pub struct CoframeAlgebra {
    n: usize,
    structure: Vec<Form<GaussRat>>,
    characters: Vec<Character>,
    /// `d` of each factor slot: `dη^k` then `dη̄^k`.
    dfactor: Vec<Form<GaussRat>>,
}

impl CoframeAlgebra {
    /// Validates degrees, integrability (no `(0,2)` part in `dη^k`) and the
    /// shape of every character. Closedness of `d` is checked separately.
    pub fn new(
        n: usize,
        structure: Vec<Form<GaussRat>>,
        characters: Vec<Character>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidAlgebra(format!(
                "dimension {n} outside 1..={MAX_DIM}"
            )));
        }
        if structure.len() != n {
            return Err(Error::InvalidAlgebra(format!(
                "expected {n} structure forms, got {}",
                structure.len()
            )));
        }
        let nchars = characters.len();
        for (k, s) in structure.iter().enumerate() {
            let s = s.clone();
            if s.terms().any(|(w, m, _)| !w.is_zero() || m.degree() != 2) {
                return Err(Error::InvalidAlgebra(format!(
                    "d e{} must be an unweighted 2-form",
                    k + 1
                )));
            }
            if !s.component(0, 2).is_zero() {
                return Err(Error::Bidegree(format!(
                    "d e{} has a (0,2) part; the structure is not integrable",
                    k + 1
                )));
            }
        }
        for ch in &characters {
            let ok10 = matches!(ch.dlog10.bidegree(), Bidegree::Pure(1, 0) | Bidegree::Any);
            let ok01 = matches!(ch.dlog01.bidegree(), Bidegree::Pure(0, 1) | Bidegree::Any);
            if !ok10 || !ok01 {
                return Err(Error::Bidegree(format!(
                    "character `{}`: dlog10 must be (1,0) and dlog01 must be (0,1)",
                    ch.name
                )));
            }
            if ch.dlog10.terms().chain(ch.dlog01.terms()).any(|(w, _, _)| !w.is_zero()) {
                return Err(Error::InvalidAlgebra(format!(
                    "character `{}` has weighted log-differential",
                    ch.name
                )));
            }
            if ch.dlog01 != ch.dlog10.conj().neg() {
                return Err(Error::InvalidAlgebra(format!(
                    "character `{}` is not unitary: dlog01 must equal -conj(dlog10)",
                    ch.name
                )));
            }
        }
        let structure: Vec<Form<GaussRat>> = structure
            .into_iter()
            .map(|s| s.pad_chars(nchars))
            .collect();
        let characters = characters
            .into_iter()
            .map(|c| Character {
                dlog10: c.dlog10.pad_chars(nchars),
                dlog01: c.dlog01.pad_chars(nchars),
                ..c
            })
            .collect();
        let mut dfactor = structure.clone();
        dfactor.extend(structure.iter().map(|s| s.conj()));
        Ok(CoframeAlgebra {
            n,
            structure,
            characters,
            dfactor,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nchars(&self) -> usize {
        self.characters.len()
    }

    pub fn structure(&self) -> &[Form<GaussRat>] {
        &self.structure
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn char_names(&self) -> Vec<String> {
        self.characters.iter().map(|c| c.name.clone()).collect()
    }

    pub fn char_index(&self, name: &str) -> Option<usize> {
        self.characters.iter().position(|c| c.name == name)
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::zero(self.nchars())
    }

    pub(crate) fn dfactor(&self, slot: usize) -> &Form<GaussRat> {
        &self.dfactor[slot]
    }

    pub fn zero<C: Coeff>(&self) -> Form<C> {
        Form::zero(self.n, self.nchars())
    }

    /// Unweighted monomial with coefficient `c`.
    pub fn mono<C: Coeff>(&self, m: Mono, c: C) -> Form<C> {
        Form::term(self.n, self.zero_weight(), m, c)
    }

    /// Lifts a constant form into the coefficient ring of `one`.
    pub fn lift<C: Coeff>(&self, f: &Form<GaussRat>, one: &C) -> Form<C> {
        f.map_into(|k| one.scaled(k))
    }

    /// `(dlog10, dlog01)` of the character power `w`.
    pub fn dlog(&self, w: &Weight) -> (Form<GaussRat>, Form<GaussRat>) {
        let mut a = self.zero();
        let mut b = self.zero();
        for (k, &e) in w.0.iter().enumerate() {
            if e != 0 {
                let e = GaussRat::from_int(e as i64);
                a.add_assign(&self.characters[k].dlog10.scale_rat(&e));
                b.add_assign(&self.characters[k].dlog01.scale_rat(&e));
            }
        }
        (a, b)
    }
}

impl<C: Coeff> Form<C> {
    /// Re-keys weights to `nchars` entries (used when an algebra is assembled
    /// from forms built before the character table was known).
    pub fn pad_chars(&self, nchars: usize) -> Form<C> {
        let mut out = Form::zero(self.dim(), nchars);
        for (w, m, c) in self.terms() {
            let mut v = w.0.clone();
            v.resize(nchars, 0);
            out.add_term(Weight(v), m, c.clone());
        }
        out
    }
}
