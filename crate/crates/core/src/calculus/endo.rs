use super::contraction::SlotRule;
use super::vform::{interior, VForm};
use crate::forms::{CoframeAlgebra, Form, Mono};
use crate::scalars::Coeff;

/// Endomorphism of a frame with weighted scalar entries (0-forms).
///
/// Acting on antiholomorphic factors it sends `η̄^i ↦ Σ_j E[i][j] η̄^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameEndo<C> {
    pub entries: Vec<Vec<Form<C>>>,
}

impl<C: Coeff> FrameEndo<C> {
    pub fn identity(n: usize, nchars: usize, one: &C) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Form::term(n, crate::forms::Weight::zero(nchars), Mono::ONE, one.clone())
                        } else {
                            Form::zero(n, nchars)
                        }
                    })
                    .collect()
            })
            .collect();
        FrameEndo { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Reads the matrix off `(0,1)`-forms `ψ^i = Σ_j E[i][j] η̄^j`.
    pub fn from_anti_forms(n: usize, forms: &[Form<C>]) -> Self {
        FrameEndo {
            entries: forms
                .iter()
                .map(|f| (0..n).map(|j| interior(n, n + j, f)).collect())
                .collect(),
        }
    }

    pub fn minus(&self, o: &FrameEndo<C>) -> FrameEndo<C> {
        FrameEndo {
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.minus(b)).collect())
                .collect(),
        }
    }

    pub fn compose(&self, o: &FrameEndo<C>) -> FrameEndo<C> {
        let n = self.dim();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = Form::zero(self.entries[i][j].dim(), self.entries[i][j].nchars());
                for k in 0..n {
                    acc.add_assign(&self.entries[i][k].wedge(&o.entries[k][j]));
                }
                row.push(acc);
            }
            entries.push(row);
        }
        FrameEndo { entries }
    }
}

impl CoframeAlgebra {
    /// `φ̄φ`: the endomorphism with rows `i_φ(conj φ^i)`.
    pub fn phibar_phi<C: Coeff>(&self, phi: &VForm<C>) -> FrameEndo<C> {
        let rows: Vec<Form<C>> = phi
            .conj_comps()
            .iter()
            .map(|c| self.contract(phi, c))
            .collect();
        FrameEndo::from_anti_forms(self.dim(), &rows)
    }

    /// Applies `E` to every antiholomorphic factor of `alpha` simultaneously.
    pub fn apply_anti<C: Coeff>(&self, e: &FrameEndo<C>, alpha: &Form<C>) -> Form<C> {
        let n = self.dim();
        let mut rules: Vec<SlotRule<C>> = (0..n).map(|_| SlotRule::Keep).collect();
        for row in &e.entries {
            let mut img = self.zero::<C>();
            for (j, coef) in row.iter().enumerate() {
                if let Some((_, _, c)) = coef.terms().next() {
                    let bar = Form::term(n, self.zero_weight(), Mono::anti(n, j), c.unit_like());
                    img.add_assign(&coef.wedge(&bar));
                }
            }
            rules.push(SlotRule::Replace(img));
        }
        self.substitute(alpha, &rules)
    }
}
