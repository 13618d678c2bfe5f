//! Finite-difference oracle for the first-order balanced condition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::calculus::{FrameEndo, SlotRule, VForm};
use crate::error::{Error, Result};
use crate::forms::{CoframeAlgebra, Form, Mono};
use crate::metrics::{max_abs, Convention};
use crate::obstruction::{DeformationCurve, MetricCurve};
use crate::scalars::{Assignment, GaussPoly};

const NEUMANN_MAX_TERMS: usize = 400;
const NEUMANN_TOL: f64 = 1e-17;
const INVERSE_CHECK_TOL: f64 = 1e-10;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Evaluates a symbolic form.
pub fn eval_form(f: &Form<GaussPoly>, assign: &Assignment) -> Result<Form<Complex64>> {
    f.try_map_into(|p| p.eval(assign))
}

fn endo_norm(e: &FrameEndo<Complex64>) -> f64 {
    e.entries.iter().flatten().map(max_abs).fold(0.0, f64::max)
}

/// Inverse of a frame endomorphism with numeric weighted entries.
///
/// Unweighted matrices are inverted directly; otherwise `E = I − M` is
/// inverted by the Neumann series `Σ M^k`, which must converge.
pub fn invert_endo(alg: &CoframeAlgebra, e: &FrameEndo<Complex64>) -> Result<FrameEndo<Complex64>> {
    let n = e.dim();
    let id = identity_of(alg, n);
    let unweighted = e.entries.iter().flatten().all(|f| {
        f.terms().all(|(w, m, _)| w.is_zero() && m == Mono::ONE)
    });
    let inv = if unweighted {
        let m = DMatrix::from_fn(n, n, |i, j| {
            e.entries[i][j]
                .coeff(&alg.zero_weight(), Mono::ONE)
                .copied()
                .unwrap_or_default()
        });
        let mi = m
            .try_inverse()
            .ok_or_else(|| Error::Singular("frame endomorphism (phi too large)".into()))?;
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let row = (0..n)
                .map(|j| {
                    let mut f = alg.zero();
                    f.add_term(alg.zero_weight(), Mono::ONE, mi[(i, j)]);
                    f
                })
                .collect();
            entries.push(row);
        }
        FrameEndo { entries }
    } else {
        let m = id.minus(e);
        let mut acc = id.clone();
        let mut power = id.clone();
        let mut converged = false;
        for _ in 0..NEUMANN_MAX_TERMS {
            power = power.compose(&m);
            let size = endo_norm(&power);
            if !size.is_finite() {
                break;
            }
            acc = FrameEndo {
                entries: acc
                    .entries
                    .iter()
                    .zip(&power.entries)
                    .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.plus(y)).collect())
                    .collect(),
            };
            if size < NEUMANN_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Singular(
                "Neumann series for the frame endomorphism did not converge (phi too large)".into(),
            ));
        }
        acc
    };
    let check = e.compose(&inv).minus(&id);
    if endo_norm(&check) > INVERSE_CHECK_TOL {
        return Err(Error::Singular("frame endomorphism inverse failed verification".into()));
    }
    Ok(inv)
}

fn identity_of(alg: &CoframeAlgebra, size: usize) -> FrameEndo<Complex64> {
    let mut entries = Vec::with_capacity(size);
    for i in 0..size {
        let row = (0..size)
            .map(|j| {
                let mut f = alg.zero();
                if i == j {
                    f.add_term(alg.zero_weight(), Mono::ONE, one());
                }
                f
            })
            .collect();
        entries.push(row);
    }
    FrameEndo { entries }
}

/// The inner operator of the deformed `∂̄`:
/// `(I−φ̄φ)^{-1} ⨼ ([∂, i_φ] + ∂̄) (I−φ̄φ) ⨼ α`, on the undeformed basis.
pub fn delbar_t(alg: &CoframeAlgebra, phi: &VForm<Complex64>, alpha: &Form<Complex64>) -> Result<Form<Complex64>> {
    let e = identity_of(alg, alg.dim()).minus(&alg.phibar_phi(phi));
    let e_inv = invert_endo(alg, &e)?;
    let beta = alg.apply_anti(&e, alpha);
    let gamma = alg
        .del_termwise(&alg.contract(phi, &beta))
        .minus(&alg.contract(phi, &alg.del_termwise(&beta)))
        .plus(&alg.delbar_termwise(&beta));
    Ok(alg.apply_anti(&e_inv, &gamma))
}

/// Full deformed operator including the outer extension map.
pub fn delbar_t_full(alg: &CoframeAlgebra, phi: &VForm<Complex64>, alpha: &Form<Complex64>) -> Result<Form<Complex64>> {
    Ok(alg.extension_map(phi, &delbar_t(alg, phi, alpha)?))
}

/// Inverse of the extension map `(I+φ+φ̄)⨼`, as the substitution by the
/// inverse of its action on the `2n` coframe slots.
pub fn extension_inverse(alg: &CoframeAlgebra, phi: &VForm<Complex64>, alpha: &Form<Complex64>) -> Result<Form<Complex64>> {
    let n = alg.dim();
    let mut images: Vec<Form<Complex64>> = Vec::with_capacity(2 * n);
    let conj = phi.conj_comps();
    for s in 0..2 * n {
        let base = alg.mono(Mono(1 << s), one());
        let delta = if s < n { &phi.comps()[s] } else { &conj[s - n] };
        images.push(base.plus(delta));
    }
    let mut entries = Vec::with_capacity(2 * n);
    for img in &images {
        let row = (0..2 * n)
            .map(|t| crate::calculus::interior(n, t, img))
            .collect();
        entries.push(row);
    }
    let t = FrameEndo { entries };
    let t_inv = invert_endo(alg, &t)?;
    let rules: Vec<SlotRule<Complex64>> = t_inv
        .entries
        .iter()
        .map(|row| {
            let mut img = alg.zero();
            for (s, coef) in row.iter().enumerate() {
                img.add_assign(&coef.wedge(&alg.mono(Mono(1 << s), one())));
            }
            SlotRule::Replace(img)
        })
        .collect();
    Ok(alg.substitute(alpha, &rules))
}

/// Result of the finite-difference check of the theorem residual.
#[derive(Clone, Debug)]
pub struct FdReport {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Successive order estimates `log(e_k/e_{k+1}) / log(h_k/h_{k+1})`.
    pub orders: Vec<f64>,
    /// Least-squares slope of `log e` against `log h`.
    pub order: Option<f64>,
    pub prediction: Form<Complex64>,
    pub derivatives: Vec<Form<Complex64>>,
}

impl FdReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn prediction_norm(&self) -> f64 {
        max_abs(&self.prediction)
    }
}

/// Central differences of `delbar_t(φ(h), ω(h)^{n−1})` compared with the
/// numeric value of `R`.
pub fn fd_theorem_check(
    alg: &CoframeAlgebra,
    conv: Convention,
    metric: &MetricCurve,
    curve: &DeformationCurve,
    assign: &Assignment,
    steps: &[f64],
) -> Result<FdReport> {
    let prediction = eval_form(&alg.theorem_residual(conv, metric, curve), assign)?;
    let omega_t = metric.omega_t(alg, conv);
    let inner = |h: f64| -> Result<Form<Complex64>> {
        let mut a = assign.clone();
        a.set(metric.t, Complex64::new(h, 0.0));
        metric.metric_at(assign, h)?;
        let w = eval_form(&omega_t, &a)?;
        let alpha = if alg.dim() >= 2 {
            w.wedge_power(alg.dim() - 1).expect("positive power")
        } else {
            alg.mono(Mono::ONE, one())
        };
        delbar_t(alg, &curve.at(assign, h)?, &alpha)
    };
    let mut errors = Vec::new();
    let mut derivatives = Vec::new();
    for &h in steps {
        let fd = inner(h)?
            .minus(&inner(-h)?)
            .scale(&Complex64::new(1.0 / (2.0 * h), 0.0));
        errors.push(max_abs(&fd.minus(&prediction)));
        derivatives.push(fd);
    }
    let orders: Vec<f64> = steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    let order = fit_order(steps, &errors);
    Ok(FdReport {
        steps: steps.to_vec(),
        errors,
        orders,
        order,
        prediction,
        derivatives,
    })
}

fn fit_order(steps: &[f64], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&h, &e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
