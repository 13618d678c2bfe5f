use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::calculus::SlotRule;
use crate::error::{Error, Result};
use crate::forms::{CoframeAlgebra, Form, Mono};

const HERMITIAN_TOL: f64 = 1e-12;
const HARMONIC_TOL: f64 = 1e-10;

/// Numeric positive-definite metric `ω = (i/2) Σ G_jk η^j ∧ η̄^k` together
/// with a unitary coframe `θ^a = Σ_j C_aj η^j` from the Cholesky factor.
#[derive(Clone, Debug)]
pub struct NumMetric {
    g: DMatrix<Complex64>,
    c: DMatrix<Complex64>,
    c_inv: DMatrix<Complex64>,
}

fn check_hermitian(g: &DMatrix<Complex64>) -> Result<()> {
    if !g.is_square() {
        return Err(Error::NonHermitian("matrix is not square".into()));
    }
    let scale = 1.0 + g.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if (g - g.adjoint()).iter().any(|z| z.norm() > HERMITIAN_TOL * scale) {
        return Err(Error::NonHermitian("numeric matrix differs from its adjoint".into()));
    }
    Ok(())
}

/// Lower Cholesky factor, or `None` when a pivot is not strictly positive.
fn cholesky(g: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let n = g.nrows();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Positive definiteness of a Hermitian matrix by Cholesky factorization.
pub fn posdef_check(g: &DMatrix<Complex64>) -> Result<bool> {
    check_hermitian(g)?;
    Ok(cholesky(g).is_some())
}

impl NumMetric {
    pub fn new(g: DMatrix<Complex64>) -> Result<Self> {
        check_hermitian(&g)?;
        let l = cholesky(&g).ok_or(Error::NotPositiveDefinite)?;
        let c = l.transpose();
        let c_inv = c
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("Cholesky factor".into()))?;
        Ok(NumMetric { g, c, c_inv })
    }

    pub fn identity(n: usize) -> Self {
        NumMetric::new(DMatrix::identity(n, n)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.g
    }

    /// Rewrites a form through the linear coframe change `η^j ↦ Σ_a M_ja η^a`
    /// (and the conjugate map on antiholomorphic factors).
    fn change(&self, alg: &CoframeAlgebra, alpha: &Form<Complex64>, m: &DMatrix<Complex64>) -> Form<Complex64> {
        let n = alg.dim();
        let one = Complex64::new(1.0, 0.0);
        let mut rules = Vec::with_capacity(2 * n);
        for anti in [false, true] {
            for j in 0..n {
                let mut img = alg.zero();
                for a in 0..n {
                    let x = if anti { m[(j, a)].conj() } else { m[(j, a)] };
                    let mono = if anti { Mono::anti(n, a) } else { Mono::holo(a) };
                    img.add_term(alg.zero_weight(), mono, x * one);
                }
                rules.push(SlotRule::Replace(img));
            }
        }
        alg.substitute(alpha, &rules)
    }

    /// Antilinear Hodge star.
    pub fn star(&self, alg: &CoframeAlgebra, alpha: &Form<Complex64>) -> Form<Complex64> {
        let n = alg.dim();
        let in_theta = self.change(alg, alpha, &self.c_inv.transpose());
        let mut out = alg.zero();
        for (w, m, c) in in_theta.terms() {
            let (k, mc) = unitary_star(n, m);
            out.add_term(-w, mc, c.conj() * k);
        }
        self.change(alg, &out, &self.c.transpose())
    }

    /// Volume form `ω^n / n!` in the coframe basis.
    pub fn volume(&self, alg: &CoframeAlgebra) -> Form<Complex64> {
        let one = Form::term(alg.dim(), alg.zero_weight(), Mono::ONE, Complex64::new(1.0, 0.0));
        self.star(alg, &one)
    }

    /// `⟨α, β⟩` with `α ∧ ∗β = ⟨α, β⟩ vol`, keeping only the unweighted part
    /// (nontrivial unitary characters integrate to zero).
    pub fn inner(&self, alg: &CoframeAlgebra, alpha: &Form<Complex64>, beta: &Form<Complex64>) -> Complex64 {
        let n = alg.dim();
        let top = Mono::from_sets(n, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
        let w0 = alg.zero_weight();
        let prod = alpha.wedge(&self.star(alg, beta));
        let vol = self.volume(alg);
        let num = prod.coeff(&w0, top).copied().unwrap_or_default();
        num / vol.coeff(&w0, top).copied().expect("nonzero volume")
    }

    /// `∂̄* = −∗∂̄∗`.
    pub fn delbar_adjoint(&self, alg: &CoframeAlgebra, alpha: &Form<Complex64>) -> Form<Complex64> {
        let s = self.star(alg, alpha);
        self.star(alg, &alg.delbar_termwise(&s)).neg()
    }

    /// `∂̄α = 0` and `∂̄*α = 0` up to the harmonicity tolerance.
    pub fn harmonic_check(&self, alg: &CoframeAlgebra, alpha: &Form<Complex64>) -> bool {
        max_abs(&alg.delbar_termwise(alpha)) <= HARMONIC_TOL
            && max_abs(&self.delbar_adjoint(alg, alpha)) <= HARMONIC_TOL
    }
}

pub fn max_abs(f: &Form<Complex64>) -> f64 {
    f.terms().map(|t| t.2.norm()).fold(0.0, f64::max)
}

/// Star of a unitary-coframe monomial `θ_J`: `(c, J^c)` with
/// `θ_J ∧ c θ_{J^c} = 2^{p+q} vol`.
pub fn unitary_star(n: usize, m: Mono) -> (Complex64, Mono) {
    let full = (1u32 << n) - 1;
    let comp = Mono((full ^ m.holo_mask(n)) | ((full ^ m.anti_mask(n)) << n));
    let (s, _) = m.wedge(comp).expect("complementary monomials");
    let (p, q) = m.bidegree(n);
    let sigma = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let half_i = Complex64::new(0.0, 0.5).powu(n as u32);
    let k = half_i * (2f64.powi((p + q) as i32) * sigma / s as f64);
    (k, comp)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::basis;

    fn abelian() -> CoframeAlgebra {
        CoframeAlgebra::new(3, vec![Form::zero(3, 0); 3], vec![]).unwrap()
    }

    fn sample() -> NumMetric {
        let z = |a: f64, b: f64| Complex64::new(a, b);
        let g = DMatrix::from_row_slice(
            3,
            3,
            &[
                z(2.0, 0.0), z(0.3, -0.2), z(0.0, 0.1),
                z(0.3, 0.2), z(1.5, 0.0), z(-0.2, 0.0),
                z(0.0, -0.1), z(-0.2, 0.0), z(1.0, 0.0),
            ],
        );
        NumMetric::new(g).unwrap()
    }

    #[test]
    fn posdef() {
        let id = DMatrix::<Complex64>::identity(3, 3);
        assert!(posdef_check(&id).unwrap());
        let mut d = id.clone();
        d[(2, 2)] = Complex64::new(-1.0, 0.0);
        assert!(!posdef_check(&d).unwrap());
        let mut bad = id;
        bad[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(posdef_check(&bad).is_err());
        let z = |a: f64, b: f64| Complex64::new(a, b);
        // displayed matrix with alpha_jj = 2 and alpha_jk = 0.1i: entries -i*alpha = 0.1
        let g = DMatrix::from_row_slice(
            3,
            3,
            &[z(2.0, 0.0), z(0.1, 0.0), z(0.1, 0.0), z(0.1, 0.0), z(2.0, 0.0), z(0.1, 0.0), z(0.1, 0.0), z(0.1, 0.0), z(2.0, 0.0)],
        );
        assert!(posdef_check(&g).unwrap());
    }

    #[test]
    fn star_one_is_volume() {
        let a = abelian();
        for g in [NumMetric::identity(3), sample()] {
            let w: Form<Complex64> = {
                let mut w = a.zero();
                for j in 0..3 {
                    for k in 0..3 {
                        w.add_term(
                            a.zero_weight(),
                            Mono::from_sets(3, &[j], &[k]),
                            Complex64::new(0.0, 0.5) * g.matrix()[(j, k)],
                        );
                    }
                }
                w
            };
            let vol = w.wedge_power(3).unwrap().scale(&Complex64::new(1.0 / 6.0, 0.0));
            assert!(max_abs(&g.volume(&a).minus(&vol)) < 1e-12);
        }
    }

    #[test]
    fn star_star_sign_table() {
        let a = abelian();
        let g = sample();
        for p in 0..=3 {
            for q in 0..=3 {
                let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
                for m in basis(3, p, q) {
                    let f = a.mono(m, Complex64::new(1.0, 0.0));
                    let ss = g.star(&a, &g.star(&a, &f));
                    assert!(max_abs(&ss.minus(&f.scale(&Complex64::new(sign, 0.0)))) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn antilinear() {
        let a = abelian();
        let g = sample();
        let f = a.mono(Mono::from_sets(3, &[0, 1], &[0, 1, 2]), Complex64::new(0.7, -0.1));
        let i = Complex64::new(0.0, 1.0);
        let lhs = g.star(&a, &f.scale(&i));
        let rhs = g.star(&a, &f).scale(&-i);
        assert!(max_abs(&lhs.minus(&rhs)) < 1e-12);
    }

    #[test]
    fn identity_star_of_harmonic_monomial() {
        let a = abelian();
        let g = NumMetric::identity(3);
        let f = a.mono(Mono::from_sets(3, &[0, 1], &[0, 1, 2]), Complex64::new(1.0, 0.0));
        let (k, comp) = unitary_star(3, Mono::from_sets(3, &[0, 1], &[0, 1, 2]));
        assert_eq!(comp, Mono::holo(2));
        let s = g.star(&a, &f);
        assert!(max_abs(&s.minus(&a.mono(Mono::holo(2), k))) < 1e-12);
    }
}
