//! First-order obstruction form, theorem residual, conditions and verdicts.

use num_complex::Complex64;

use crate::calculus::VForm;
use crate::cohomology::{ClassResidual, Condition};
use crate::error::{Error, Result};
use crate::forms::{CoframeAlgebra, Form, Mono};
use crate::metrics::{Convention, HermMetric, NumMetric};
use crate::scalars::{Assignment, Coeff, GaussPoly};

/// Verdict tolerance on condition values.
pub const VERDICT_TOL: f64 = 1e-9;

/// Deformation `φ(t)` with polynomial dependence on the real parameter `t`.
#[derive(Clone, Debug)]
pub struct DeformationCurve {
    pub name: String,
    pub phi: VForm<GaussPoly>,
    pub t: usize,
}

impl DeformationCurve {
    pub fn new(name: impl Into<String>, phi: VForm<GaussPoly>, t: usize) -> Result<Self> {
        let name = name.into();
        if !phi.is_of_type(0, 1) {
            return Err(Error::Bidegree(format!(
                "curve `{name}` has a component that is not a (0,1)-form"
            )));
        }
        Ok(DeformationCurve { name, phi, t })
    }

    /// `φ(0) = 0`.
    pub fn vanishes_at_zero(&self) -> bool {
        self.phi.map_into(|p| p.coeff_of(self.t, 0)).is_zero()
    }

    /// `φ′(0)`: the `t`-linear part.
    pub fn derivative(&self) -> VForm<GaussPoly> {
        self.phi.map_into(|p| p.coeff_of(self.t, 1))
    }

    pub fn mc_residual(&self, alg: &CoframeAlgebra) -> VForm<GaussPoly> {
        alg.mc_residual(&self.phi)
    }

    /// Numeric `φ(h)` at `assign` extended by `t = h`.
    pub fn at(&self, assign: &Assignment, h: f64) -> Result<VForm<Complex64>> {
        let mut a = assign.clone();
        a.set(self.t, Complex64::new(h, 0.0));
        self.phi.try_map_into(|p| p.eval(&a))
    }
}

/// Metric family `ω(t)` given by a metric matrix polynomial in `t`.
#[derive(Clone, Debug)]
pub struct MetricCurve {
    pub metric: HermMetric,
    pub t: usize,
}

impl MetricCurve {
    pub fn new(metric: HermMetric, t: usize) -> Self {
        MetricCurve { metric, t }
    }

    pub fn omega_t(&self, alg: &CoframeAlgebra, conv: Convention) -> Form<GaussPoly> {
        self.metric.omega(alg, conv)
    }

    /// `ω(0)`.
    pub fn omega0(&self, alg: &CoframeAlgebra, conv: Convention) -> Form<GaussPoly> {
        self.omega_t(alg, conv).map(|p| p.coeff_of(self.t, 0))
    }

    /// `(ω^{n−1}(t))′` at `t = 0`.
    pub fn power_derivative(&self, alg: &CoframeAlgebra, conv: Convention) -> Form<GaussPoly> {
        let w = self.omega_t(alg, conv);
        power(alg, &w).map(|p| p.coeff_of(self.t, 1))
    }

    pub fn metric_at(&self, assign: &Assignment, h: f64) -> Result<NumMetric> {
        let mut a = assign.clone();
        a.set(self.t, Complex64::new(h, 0.0));
        self.metric.eval(&a)
    }
}

/// `ω^{n−1}` (the constant `1` when `n = 1`).
pub fn power(alg: &CoframeAlgebra, omega: &Form<GaussPoly>) -> Form<GaussPoly> {
    let n = alg.dim();
    if n >= 2 {
        omega.wedge_power(n - 1).expect("positive power")
    } else {
        let one = omega.terms().next().map(|t| t.2.unit_like()).expect("nonzero form");
        Form::term(n, alg.zero_weight(), Mono::ONE, one)
    }
}

impl CoframeAlgebra {
    /// `Θ = ∂(i_{φ′(0)} ω^{n−1})`.
    pub fn first_order_obstruction(
        &self,
        omega: &Form<GaussPoly>,
        dphi: &VForm<GaussPoly>,
    ) -> Form<GaussPoly> {
        self.del_termwise(&self.contract(dphi, &power(self, omega)))
    }

    /// `R = ∂(i_{φ′(0)} ω^{n−1}) + ∂̄((ω^{n−1}(0))′)`.
    pub fn theorem_residual(
        &self,
        conv: Convention,
        metric: &MetricCurve,
        curve: &DeformationCurve,
    ) -> Form<GaussPoly> {
        let theta = self.first_order_obstruction(&metric.omega0(self, conv), &curve.derivative());
        theta.plus(&self.delbar_termwise(&metric.power_derivative(self, conv)))
    }

    pub fn corollary_conditions(
        &self,
        omega: &Form<GaussPoly>,
        dphi: &VForm<GaussPoly>,
    ) -> Result<ClassResidual> {
        self.reduce_class(&self.first_order_obstruction(omega, dphi))
    }
}

/// Numeric evaluation of the extracted conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub values: Vec<Complex64>,
    /// Indices of conditions that are nonzero beyond [`VERDICT_TOL`].
    pub fired: Vec<usize>,
}

impl Verdict {
    pub fn obstructed(&self) -> bool {
        !self.fired.is_empty()
    }
}

/// Evaluates `conditions` at `assign`; the metric sample, when given, must be
/// positive definite.
pub fn verdict(
    conditions: &[Condition],
    assign: &Assignment,
    metric: Option<&HermMetric>,
) -> Result<Verdict> {
    if let Some(m) = metric {
        m.eval(assign)?;
    }
    let values = conditions
        .iter()
        .map(|c| c.raw.eval(assign))
        .collect::<Result<Vec<_>>>()?;
    let fired = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > VERDICT_TOL)
        .map(|(i, _)| i)
        .collect();
    Ok(Verdict { values, fired })
}
