use crate::forms::{Bidegree, CoframeAlgebra, Form};
use crate::scalars::{Coeff, GaussRat};

/// Form with values in the `(1,0)` frame: `Σ_i comps[i] ⊗ Z_i`.
///
/// Deformation parameters have `(0,1)` components; brackets and
/// Maurer–Cartan residuals have `(0,2)` components.
#[derive(Clone, Debug, PartialEq)]
pub struct VForm<C> {
    comps: Vec<Form<C>>,
}

impl<C: Coeff> VForm<C> {
    pub fn new(comps: Vec<Form<C>>) -> Self {
        VForm { comps }
    }

    pub fn zero(n: usize, nchars: usize) -> Self {
        VForm {
            comps: (0..n).map(|_| Form::zero(n, nchars)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Form<C>] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Form<C> {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Form::is_zero)
    }

    /// Every component is of pure bidegree `(p,q)` (or zero).
    pub fn is_of_type(&self, p: usize, q: usize) -> bool {
        self.comps
            .iter()
            .all(|c| matches!(c.bidegree(), Bidegree::Pure(a, b) if (a, b) == (p, q)) || c.is_zero())
    }

    /// Componentwise conjugates: the `(1,0)`-forms of `φ̄ = Σ conj(φ^i) ⊗ Z̄_i`.
    pub fn conj_comps(&self) -> Vec<Form<C>> {
        self.comps.iter().map(Form::conj).collect()
    }

    pub fn plus(&self, o: &VForm<C>) -> VForm<C> {
        VForm::new(self.comps.iter().zip(&o.comps).map(|(a, b)| a.plus(b)).collect())
    }

    pub fn minus(&self, o: &VForm<C>) -> VForm<C> {
        VForm::new(self.comps.iter().zip(&o.comps).map(|(a, b)| a.minus(b)).collect())
    }

    pub fn scale_rat(&self, c: &GaussRat) -> VForm<C> {
        self.map(|f| f.scale_rat(c))
    }

    pub fn map(&self, f: impl Fn(&Form<C>) -> Form<C>) -> VForm<C> {
        VForm::new(self.comps.iter().map(f).collect())
    }

    pub fn map_into<D: Coeff>(&self, f: impl Fn(&C) -> D) -> VForm<D> {
        VForm::new(self.comps.iter().map(|c| c.map_into(&f)).collect())
    }

    pub fn try_map_into<D: Coeff, E>(
        &self,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<VForm<D>, E> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.try_map_into(&f))
            .collect::<Result<Vec<_>, E>>()?;
        Ok(VForm::new(comps))
    }

    pub fn display<'a>(&'a self, char_names: &'a [String]) -> VFormDisplay<'a, C> {
        VFormDisplay {
            v: self,
            names: char_names,
        }
    }
}

pub struct VFormDisplay<'a, C> {
    v: &'a VForm<C>,
    names: &'a [String],
}

impl<C: Coeff + crate::forms::CoeffDisplay> std::fmt::Display for VFormDisplay<'_, C> {
    /// `(form) @ Z1 + (form) @ Z3`; `0` when every component vanishes.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .v
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({}) @ Z{}", c.display(self.names), i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl CoframeAlgebra {
    /// Structure constants `c^k_{ij}` with `[Z_i, Z_j] = Σ_k c^k_{ij} Z_k`,
    /// from `η^k([Z_i,Z_j]) = -dη^k(Z_i,Z_j)`.
    pub fn bracket_constants(&self) -> Vec<Vec<Vec<GaussRat>>> {
        let n = self.dim();
        let mut c = vec![vec![vec![GaussRat::zero(); n]; n]; n];
        for (k, s) in self.structure().iter().enumerate() {
            for (i, row) in c.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    let v = interior(n, j, &interior(n, i, s));
                    let x = v.terms().next().map(|t| -t.2);
                    if let Some(x) = x {
                        entry[k] = x;
                    }
                }
            }
        }
        c
    }

    /// Lie derivative `L_{Z_i} β = i_{Z_i} dβ` of a `(0,q)`-form.
    fn lie_holo<C: Coeff>(&self, i: usize, beta: &Form<C>) -> Form<C> {
        interior(self.dim(), i, &self.d(beta))
    }

    /// Frame-adapted bracket of vector `(0,1)`-forms.
    pub fn bracket<C: Coeff>(&self, phi: &VForm<C>, psi: &VForm<C>) -> VForm<C> {
        let n = self.dim();
        let consts = self.bracket_constants();
        let mut out = VForm::zero(n, self.nchars());
        for j in 0..n {
            let mut acc = self.zero::<C>();
            for i in 0..n {
                acc.add_assign(&phi.comps[i].wedge(&self.lie_holo(i, &psi.comps[j])));
                acc.add_assign(&psi.comps[i].wedge(&self.lie_holo(i, &phi.comps[j])));
            }
            out.comps[j] = acc;
        }
        for i in 0..n {
            for k in 0..n {
                let pw = phi.comps[i].wedge(&psi.comps[k]);
                if pw.is_zero() {
                    continue;
                }
                for (j, cst) in consts[i][k].iter().enumerate() {
                    if !cst.is_zero() {
                        out.comps[j].add_assign(&pw.scale_rat(cst));
                    }
                }
            }
        }
        out
    }

    /// `∂̄φ − ½[φ,φ]`.
    pub fn mc_residual<C: Coeff>(&self, phi: &VForm<C>) -> VForm<C> {
        let dbar = phi.map(|c| self.delbar_termwise(c));
        let br = self.bracket(phi, phi).scale_rat(&GaussRat::from_ratio(1, 2));
        dbar.minus(&br)
    }
}

/// Interior product with the frame vector of factor slot `slot`
/// (`Z_k` for `slot = k < n`, `Z̄_k` for `slot = n + k`).
pub fn interior<C: Coeff>(n: usize, slot: usize, alpha: &Form<C>) -> Form<C> {
    let mut out = Form::zero(n, alpha.nchars());
    for (w, m, c) in alpha.terms() {
        if m.contains_slot(slot) {
            let c = if m.rank_of(slot) % 2 == 0 { c.clone() } else { c.negated() };
            out.add_term(w.clone(), m.without_slot(slot), c);
        }
    }
    out
}
