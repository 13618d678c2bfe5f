//! Invariant Hermitian metrics, fundamental forms and the balanced test.

mod hodge;

pub use hodge::{max_abs, posdef_check, unitary_star, NumMetric};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::{CoframeAlgebra, Form, Mono};
use crate::scalars::{Assignment, Coeff, GaussPoly, GaussRat};

/// How a metric matrix is turned into a fundamental form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// `ω = (i/2) Σ_j A_jj η^{jj̄} + ½ Σ_{j<k} (α_jk − ᾱ_jk) η^{jk̄}` with
    /// `α_jk = i·A_jk`, exactly as the off-diagonal display is written.
    PaperLiteral,
    /// `ω = (i/2) Σ_{j,k} A_jk η^j ∧ η̄^k`, real for Hermitian `A`.
    #[default]
    HermitianStandard,
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(Convention::PaperLiteral),
            "hermitian-standard" => Ok(Convention::HermitianStandard),
            other => Err(Error::Structural(format!("unknown convention `{other}`"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::PaperLiteral => "paper-literal",
            Convention::HermitianStandard => "hermitian-standard",
        })
    }
}

/// Conjugate-symmetric matrix of polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMetric {
    entries: Vec<Vec<GaussPoly>>,
}

impl HermMetric {
    pub fn new(entries: Vec<Vec<GaussPoly>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::NonHermitian("matrix is not square".into()));
        }
        for j in 0..n {
            for k in j..n {
                if entries[k][j] != entries[j][k].conj() {
                    return Err(Error::NonHermitian(format!(
                        "entry ({},{}) is not the conjugate of ({},{})",
                        k + 1,
                        j + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(HermMetric { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, j: usize, k: usize) -> &GaussPoly {
        &self.entries[j][k]
    }

    pub fn entries(&self) -> &[Vec<GaussPoly>] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&GaussPoly) -> GaussPoly) -> HermMetric {
        HermMetric {
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn eval(&self, assign: &Assignment) -> Result<NumMetric> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(j, k)] = self.entries[j][k].eval(assign)?;
            }
        }
        NumMetric::new(m)
    }

    /// Fundamental form under `conv`.
    pub fn omega(&self, alg: &CoframeAlgebra, conv: Convention) -> Form<GaussPoly> {
        let n = self.dim();
        let table = self.entries[0][0].table();
        let half_i = GaussRat::from_parts((0, 1), (1, 2));
        let half = GaussRat::from_ratio(1, 2);
        let mut w = alg.zero();
        let mut put = |j: usize, k: usize, c: GaussPoly| {
            w.add_assign(&alg.mono(Mono::from_sets(n, &[j], &[k]), c));
        };
        match conv {
            Convention::HermitianStandard => {
                for j in 0..n {
                    for k in 0..n {
                        put(j, k, self.entries[j][k].scale(&half_i));
                    }
                }
            }
            Convention::PaperLiteral => {
                let i = GaussPoly::constant(table, GaussRat::i());
                for j in 0..n {
                    put(j, j, self.entries[j][j].scale(&half_i));
                    for k in j + 1..n {
                        let alpha = i.times(&self.entries[j][k]);
                        put(j, k, alpha.plus(&alpha.conj().negated()).scale(&half));
                    }
                }
            }
        }
        w
    }
}

/// Outcome of the balanced test: `∂̄ω^{n−1}` and `∂ω^{n−1}`.
#[derive(Clone, Debug)]
pub struct BalancedReport {
    pub delbar_residual: Form<GaussPoly>,
    pub del_residual: Form<GaussPoly>,
}

impl BalancedReport {
    pub fn balanced(&self) -> bool {
        self.delbar_residual.is_zero()
    }
}

impl CoframeAlgebra {
    pub fn balanced_check(&self, omega: &Form<GaussPoly>) -> BalancedReport {
        let n = self.dim();
        let power = if n >= 2 {
            omega.wedge_power(n - 1).expect("positive power")
        } else {
            Form::term(n, self.zero_weight(), Mono::ONE, unit(omega))
        };
        BalancedReport {
            delbar_residual: self.delbar_termwise(&power),
            del_residual: self.del_termwise(&power),
        }
    }
}

/// `conj(ω) − ω`; zero exactly when `ω` is real.
pub fn realness_defect(omega: &Form<GaussPoly>) -> Form<GaussPoly> {
    omega.conj().minus(omega)
}

fn unit(f: &Form<GaussPoly>) -> GaussPoly {
    f.terms().next().map(|t| t.2.unit_like()).expect("nonzero form")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::VarTable;
    use std::sync::Arc;

    fn table() -> Arc<VarTable> {
        let mut t = VarTable::new();
        for v in ["alpha11", "alpha22", "alpha33"] {
            t.add_real(v).unwrap();
        }
        for v in ["alpha12", "alpha13", "alpha23"] {
            t.add_complex(v).unwrap();
        }
        Arc::new(t)
    }

    pub(crate) fn generic(t: &Arc<VarTable>) -> HermMetric {
        let v = |s: &str| GaussPoly::var_named(t, s).unwrap();
        let mi = GaussRat::from_parts((0, 1), (-1, 1));
        let pi = GaussRat::i();
        HermMetric::new(vec![
            vec![v("alpha11"), v("alpha12").scale(&mi), v("alpha13").scale(&mi)],
            vec![v("~alpha12").scale(&pi), v("alpha22"), v("alpha23").scale(&mi)],
            vec![v("~alpha13").scale(&pi), v("~alpha23").scale(&pi), v("alpha33")],
        ])
        .unwrap()
    }

    fn abelian() -> CoframeAlgebra {
        CoframeAlgebra::new(3, vec![Form::zero(3, 0); 3], vec![]).unwrap()
    }

    #[test]
    fn diagonal_agrees_across_conventions() {
        let t = table();
        let a = abelian();
        let g = generic(&t).map(|p| {
            if p.variables().iter().all(|&v| t.is_real(v)) {
                p.clone()
            } else {
                GaussPoly::zero(&t)
            }
        });
        let w1 = g.omega(&a, Convention::PaperLiteral);
        let w2 = g.omega(&a, Convention::HermitianStandard);
        assert_eq!(w1, w2);
        assert_eq!(w1.len(), 3);
    }

    #[test]
    fn standard_is_real_literal_is_not() {
        let t = table();
        let a = abelian();
        let g = generic(&t);
        let w = g.omega(&a, Convention::HermitianStandard);
        assert_eq!(w.conj(), w);
        let l = g.omega(&a, Convention::PaperLiteral);
        assert!(!l.conj().minus(&l).is_zero());
    }

    #[test]
    fn non_hermitian_rejected() {
        let t = table();
        let v = |s: &str| GaussPoly::var_named(&t, s).unwrap();
        let z = GaussPoly::zero(&t);
        let bad = HermMetric::new(vec![vec![v("alpha11"), v("alpha12")], vec![v("alpha12"), z]]);
        assert!(matches!(bad, Err(Error::NonHermitian(_))));
    }

    #[test]
    fn identity_square_and_top_power() {
        let t = table();
        let a = abelian();
        let one = GaussPoly::one(&t);
        let z = GaussPoly::zero(&t);
        let id = HermMetric::new(vec![
            vec![one.clone(), z.clone(), z.clone()],
            vec![z.clone(), one.clone(), z.clone()],
            vec![z.clone(), z, one],
        ])
        .unwrap();
        let w = id.omega(&a, Convention::HermitianStandard);
        assert_eq!(w.wedge_power(1).unwrap(), w);
        let w2 = w.wedge_power(2).unwrap();
        // (i/2)^2 * 2 * (e1^~e1)^(e2^~e2) = -1/2 * (-e1^e2^~e1^~e2) = 1/2 e1^e2^~e1^~e2
        let m = Mono::from_sets(3, &[0, 1], &[0, 1]);
        assert_eq!(
            w2.coeff(&a.zero_weight(), m).unwrap(),
            &GaussPoly::constant(&t, GaussRat::from_ratio(1, 2))
        );
        assert_eq!(w2.len(), 3);
        let w3 = w.wedge_power(3).unwrap();
        assert_eq!(w3.len(), 1);
        assert_eq!(w3.terms().next().unwrap().1, Mono::from_sets(3, &[0, 1, 2], &[0, 1, 2]));
    }

    #[test]
    fn realness_by_convention() {
        let t = table();
        let a = abelian();
        let g = generic(&t);
        assert!(realness_defect(&g.omega(&a, Convention::HermitianStandard)).is_zero());
        let defect = realness_defect(&g.omega(&a, Convention::PaperLiteral));
        assert!(!defect.is_zero());
        assert_eq!(defect.bidegree(), crate::forms::Bidegree::Pure(1, 1));
    }
}
