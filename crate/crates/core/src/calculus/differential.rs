use crate::error::{Error, Result};
use crate::forms::{Bidegree, CoframeAlgebra, Form, Mono, Weight};
use crate::scalars::{Coeff, GaussRat};

/// Outcome of [`CoframeAlgebra::d_squared_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredReport {
    pub violations: Vec<String>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Full,
    Del,
    Delbar,
}

impl CoframeAlgebra {
    /// `d(χ^w · m)` as a constant-coefficient form.
    pub fn d_mono(&self, w: &Weight, m: Mono) -> Form<GaussRat> {
        let one = GaussRat::one();
        let unit = Form::term(self.dim(), w.clone(), m, one);
        let (a, b) = self.dlog(w);
        let mut out = unit.wedge_const_left(&a.plus(&b));
        for slot in m.slots() {
            let rest = Form::term(self.dim(), w.clone(), m.without_slot(slot), GaussRat::one());
            let piece = rest.wedge_const_left(self.dfactor(slot));
            if m.rank_of(slot) % 2 == 0 {
                out.add_assign(&piece);
            } else {
                out.add_assign(&piece.neg());
            }
        }
        out
    }

    fn apply_d<C: Coeff>(&self, alpha: &Form<C>, part: Part) -> Form<C> {
        let n = self.dim();
        let mut out = Form::zero(n, alpha.nchars().max(self.nchars()));
        for (w, m, c) in alpha.terms() {
            let (p, q) = m.bidegree(n);
            for (w2, m2, k) in self.d_mono(w, m).terms() {
                let keep = match part {
                    Part::Full => true,
                    Part::Del => m2.bidegree(n) == (p + 1, q),
                    Part::Delbar => m2.bidegree(n) == (p, q + 1),
                };
                if keep {
                    out.add_term(w2.clone(), m2, c.scaled(k));
                }
            }
        }
        out
    }

    /// Exterior derivative, including the log-differential of character weights.
    pub fn d<C: Coeff>(&self, alpha: &Form<C>) -> Form<C> {
        self.apply_d(alpha, Part::Full)
    }

    /// `∂` applied to each bidegree component separately.
    pub fn del_termwise<C: Coeff>(&self, alpha: &Form<C>) -> Form<C> {
        self.apply_d(alpha, Part::Del)
    }

    /// `∂̄` applied to each bidegree component separately.
    pub fn delbar_termwise<C: Coeff>(&self, alpha: &Form<C>) -> Form<C> {
        self.apply_d(alpha, Part::Delbar)
    }

    pub fn del<C: Coeff>(&self, alpha: &Form<C>) -> Result<Form<C>> {
        reject_mixed(alpha, "del")?;
        Ok(self.del_termwise(alpha))
    }

    pub fn delbar<C: Coeff>(&self, alpha: &Form<C>) -> Result<Form<C>> {
        reject_mixed(alpha, "delbar")?;
        Ok(self.delbar_termwise(alpha))
    }

    /// Checks `d(dη^k) = 0` for every generator and closedness of every
    /// character's log-differential.
    pub fn d_squared_check(&self) -> DSquaredReport {
        let mut violations = Vec::new();
        for (k, s) in self.structure().iter().enumerate() {
            if !self.d(s).is_zero() {
                violations.push(format!("d(d e{}) != 0", k + 1));
            }
        }
        for ch in self.characters() {
            if !self.d(&ch.dlog10.plus(&ch.dlog01)).is_zero() {
                violations.push(format!("d(dlog {}) != 0", ch.name));
            }
        }
        DSquaredReport { violations }
    }
}

fn reject_mixed<C: Coeff>(alpha: &Form<C>, op: &str) -> Result<()> {
    if alpha.bidegree() == Bidegree::Mixed {
        return Err(Error::Bidegree(format!("{op} of a mixed-degree form")));
    }
    Ok(())
}
