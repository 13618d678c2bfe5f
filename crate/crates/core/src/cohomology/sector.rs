use super::linalg::{self, Mat};
use crate::error::{Error, Result};
use crate::forms::{basis, Bidegree, CoframeAlgebra, Form, Mono, Weight};
use crate::scalars::{Coeff, GaussPoly, GaussRat};

/// `∂̄` on one weight sector around bidegree `(p,q)`:
/// `(p,q−1) → (p,q) → (p,q+1)`.
#[derive(Clone, Debug)]
pub struct SectorComplex {
    pub weight: Weight,
    pub p: usize,
    pub q: usize,
    pub prev: Vec<Mono>,
    pub basis: Vec<Mono>,
    pub next: Vec<Mono>,
    /// `basis.len() × prev.len()`.
    pub d_in: Mat,
    /// `next.len() × basis.len()`.
    pub d_out: Mat,
}

fn delbar_matrix(alg: &CoframeAlgebra, w: &Weight, from: &[Mono], to: &[Mono]) -> Mat {
    let n = alg.dim();
    let mut m = linalg::zeros(to.len(), from.len());
    for (j, &src) in from.iter().enumerate() {
        let (p, q) = src.bidegree(n);
        for (w2, m2, c) in alg.d_mono(w, src).terms() {
            if m2.bidegree(n) != (p, q + 1) {
                continue;
            }
            debug_assert_eq!(w2, w);
            let i = to.iter().position(|&t| t == m2).expect("target in basis");
            m[i][j] = c.clone();
        }
    }
    m
}

impl SectorComplex {
    pub fn build(alg: &CoframeAlgebra, weight: &Weight, p: usize, q: usize) -> Self {
        let n = alg.dim();
        let prev = if q > 0 { basis(n, p, q - 1) } else { Vec::new() };
        let here = basis(n, p, q);
        let next = if q < n { basis(n, p, q + 1) } else { Vec::new() };
        SectorComplex {
            weight: weight.clone(),
            p,
            q,
            d_in: delbar_matrix(alg, weight, &prev, &here),
            d_out: delbar_matrix(alg, weight, &here, &next),
            prev,
            basis: here,
            next,
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.basis.len() - linalg::rank(&self.d_out, self.basis.len())
    }

    pub fn image_rank(&self) -> usize {
        linalg::rank(&self.d_in, self.prev.len())
    }

    pub fn cohomology_dim(&self) -> usize {
        self.kernel_dim() - self.image_rank()
    }

    /// `∂̄∘∂̄ = 0` on this sector.
    pub fn composes_to_zero(&self) -> bool {
        linalg::mul(&self.d_out, &self.d_in, self.prev.len())
            .iter()
            .all(|r| r.iter().all(GaussRat::is_zero))
    }

    /// Independent columns of `d_in` (pivot columns of its echelon form).
    fn image_columns(&self) -> Vec<usize> {
        let mut m = self.d_in.clone();
        linalg::rref(&mut m, self.prev.len())
    }

    /// Basis of `ker ∂̄ ∩ (im ∂̄)^⊥` in reduced echelon form, with pivots.
    pub fn complement_basis(&self) -> (Vec<Vec<GaussRat>>, Vec<usize>) {
        let dim = self.basis.len();
        let mut stacked = self.d_out.clone();
        let cols = self.image_columns();
        for &c in &cols {
            stacked.push((0..dim).map(|i| self.d_in[i][c].conj()).collect());
        }
        let mut k = linalg::nullspace(&stacked, dim);
        let pivots = linalg::rref(&mut k, dim);
        (k, pivots)
    }
}

/// One vanishing condition: the residual coefficient on a complement vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub weight: Weight,
    pub pivot: Mono,
    pub raw: GaussPoly,
    pub normalized: GaussPoly,
}

/// Splitting of a `∂̄`-closed form into an exact part and a residual on the
/// orthogonal complement of the image.
#[derive(Clone, Debug)]
pub struct ClassResidual {
    pub input: Form<GaussPoly>,
    pub exact_part: Form<GaussPoly>,
    pub potential: Form<GaussPoly>,
    pub residual: Form<GaussPoly>,
    pub conditions: Vec<Condition>,
}

impl ClassResidual {
    pub fn vanishes(&self) -> bool {
        self.conditions.is_empty()
    }
}

fn apply(m: &[Vec<GaussRat>], v: &[GaussPoly], zero: &GaussPoly) -> Vec<GaussPoly> {
    m.iter()
        .map(|row| {
            let mut acc = zero.clone();
            for (x, p) in row.iter().zip(v) {
                if !x.is_zero() && !p.is_zero() {
                    acc.absorb(&p.scale(x));
                }
            }
            acc
        })
        .collect()
}

impl CoframeAlgebra {
    pub fn build_sector(&self, weight: &Weight, p: usize, q: usize) -> SectorComplex {
        SectorComplex::build(self, weight, p, q)
    }

    /// Total `(0,1)` cohomology of the invariant complex over `weights`.
    pub fn invariant_h01_dimension<'a>(&self, weights: impl IntoIterator<Item = &'a Weight>) -> usize {
        weights
            .into_iter()
            .map(|w| self.build_sector(w, 0, 1).cohomology_dim())
            .sum()
    }

    /// `∂̄β = term` exactly.
    pub fn certify_exact<C: Coeff>(&self, term: &Form<C>, beta: &Form<C>) -> bool {
        &self.delbar_termwise(beta) == term
    }

    /// Reduces a `∂̄`-closed homogeneous form modulo `∂̄`-exact forms, sector by
    /// sector, and extracts the residual coefficients as conditions.
    pub fn reduce_class(&self, theta: &Form<GaussPoly>) -> Result<ClassResidual> {
        let (p, q) = match theta.bidegree() {
            Bidegree::Any => {
                return Ok(ClassResidual {
                    input: theta.clone(),
                    exact_part: theta.clone(),
                    potential: theta.clone(),
                    residual: theta.clone(),
                    conditions: Vec::new(),
                })
            }
            Bidegree::Mixed => {
                return Err(Error::Bidegree("class reduction of a mixed-degree form".into()))
            }
            Bidegree::Pure(p, q) => (p, q),
        };
        if !self.delbar_termwise(theta).is_zero() {
            return Err(Error::Structural("form to reduce is not delbar-closed".into()));
        }
        let zero = GaussPoly::zero(theta.terms().next().expect("nonzero form").2.table());
        let mut exact_part = self.zero();
        let mut potential = self.zero();
        let mut residual = self.zero();
        let mut conditions = Vec::new();
        for w in theta.weights() {
            let sec = self.build_sector(&w, p, q);
            let v: Vec<GaussPoly> = sec
                .basis
                .iter()
                .map(|&m| theta.coeff(&w, m).cloned().unwrap_or_else(|| zero.clone()))
                .collect();
            let cols = sec.image_columns();
            let mut res = v.clone();
            if !cols.is_empty() {
                let b: Mat = (0..sec.basis.len())
                    .map(|i| cols.iter().map(|&c| sec.d_in[i][c].clone()).collect())
                    .collect();
                let b_adj = linalg::adjoint(&b, cols.len());
                let gram = linalg::mul(&b_adj, &b, cols.len());
                let gram_inv = linalg::inverse(&gram)
                    .ok_or_else(|| Error::Singular("Gram matrix of the image".into()))?;
                let x = apply(&linalg::mul(&gram_inv, &b_adj, sec.basis.len()), &v, &zero);
                let ex = apply(&b, &x, &zero);
                for (i, e) in ex.iter().enumerate() {
                    res[i] = res[i].plus(&e.negated());
                    exact_part.add_term(w.clone(), sec.basis[i], e.clone());
                }
                for (k, &c) in cols.iter().enumerate() {
                    potential.add_term(w.clone(), sec.prev[c], x[k].clone());
                }
            }
            for (i, r) in res.iter().enumerate() {
                residual.add_term(w.clone(), sec.basis[i], r.clone());
            }
            let (_, pivots) = sec.complement_basis();
            for &c in &pivots {
                if !res[c].is_zero() {
                    conditions.push(Condition {
                        weight: w.clone(),
                        pivot: sec.basis[c],
                        raw: res[c].clone(),
                        normalized: res[c].normalized(),
                    });
                }
            }
        }
        Ok(ClassResidual {
            input: theta.clone(),
            exact_part,
            potential,
            residual,
            conditions,
        })
    }
}
