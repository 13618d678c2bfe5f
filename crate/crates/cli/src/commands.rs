use std::collections::BTreeSet;

use balobs_core::dsl::{Model, NamedMetric};
use balobs_core::forms::{CoframeAlgebra, Form};
use balobs_core::metrics::{realness_defect, Convention};
use balobs_core::numeric::fd_theorem_check;
use balobs_core::obstruction::{verdict, DeformationCurve};
use balobs_core::cohomology::Condition;
use balobs_core::scalars::{Assignment, GaussPoly};
use balobs_core::Error;
use num_complex::Complex64;

use crate::config::{parse_sample_file, MetricSample, RunConfig, Verb};
use crate::report::*;
use crate::CliError;

/// An FD run holds when every error is at most `FD_ERROR_RATIO · h` and the
/// fitted order lies in `FD_ORDER_RANGE`, or when all errors are negligible.
pub const FD_ERROR_RATIO: f64 = 1e-3;
pub const FD_ORDER_RANGE: (f64, f64) = (1.7, 2.3);
pub const FD_EXACT_TOL: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-12;

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub model: &'a Model,
}

impl Ctx<'_> {
    fn alg(&self) -> &CoframeAlgebra {
        &self.model.algebra
    }

    fn names(&self) -> Vec<String> {
        self.alg().char_names()
    }

    fn show(&self, f: &Form<GaussPoly>) -> String {
        f.display(&self.names()).to_string()
    }

    fn metric(&self) -> Result<&NamedMetric, CliError> {
        Ok(self.model.default_metric()?)
    }

    fn convention_for(&self, m: &NamedMetric) -> Convention {
        self.cfg.convention.or(m.convention).unwrap_or_default()
    }

    fn sector(&self, c: &Condition) -> String {
        let w = c.weight.render(&self.names());
        if w.is_empty() {
            "1".into()
        } else {
            w
        }
    }

    /// User assignments, completed by the metric sample where one is given.
    fn assignment(&self, metric: Option<&NamedMetric>) -> Result<Assignment, CliError> {
        let table = &self.model.table;
        let mut pairs: Vec<(String, Complex64)> = self.cfg.assignments.clone();
        if let Some(MetricSample::File(path)) = &self.cfg.metric_sample {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            pairs.extend(parse_sample_file(&text)?);
        }
        let mut a = Assignment::new();
        let mut seen = BTreeSet::new();
        for (name, v) in &pairs {
            if name == balobs_core::dsl::PARAM {
                return Err(CliError::Usage(format!("`{name}` is the curve parameter and cannot be assigned")));
            }
            let idx = table
                .index_of(name)
                .ok_or_else(|| Error::Undeclared(name.clone()))?;
            if table.is_real(idx) && v.im != 0.0 {
                return Err(Error::NotReal(name.clone()).into());
            }
            let key = idx.min(table.conj_of(idx));
            if seen.insert(key) {
                a.set(idx, *v);
            }
        }
        if let (Some(MetricSample::Identity), Some(m)) = (&self.cfg.metric_sample, metric) {
            solve_identity(self.model, m, &mut a);
        }
        for v in 0..table.len() {
            if a.get(v).is_some() {
                table_check(&a, self.model, v)?;
            }
        }
        a.set(self.model.t(), Complex64::new(0.0, 0.0));
        if let (Some(sample), Some(m)) = (&self.cfg.metric_sample, metric) {
            let num = self.model.metric_curve(m).metric_at(&a, 0.0)?;
            if *sample == MetricSample::Identity {
                let n = num.dim();
                let off = (0..n)
                    .flat_map(|j| (0..n).map(move |k| (j, k)))
                    .map(|(j, k)| {
                        let target = if j == k { 1.0 } else { 0.0 };
                        (num.matrix()[(j, k)] - Complex64::new(target, 0.0)).norm()
                    })
                    .fold(0.0, f64::max);
                if off > IDENTITY_TOL {
                    return Err(CliError::Usage(format!(
                        "metric `{}` cannot be set to the identity by assigning its variables",
                        m.name
                    )));
                }
            }
        }
        Ok(a)
    }
}

fn table_check(a: &Assignment, model: &Model, v: usize) -> Result<(), CliError> {
    a.value(&model.table, v)?;
    Ok(())
}

/// Assigns every metric entry that is a multiple of a single variable so the
/// matrix at `t = 0` becomes the identity. Variables already set are kept.
fn solve_identity(model: &Model, m: &NamedMetric, a: &mut Assignment) {
    let table = &model.table;
    let n = m.metric.dim();
    for j in 0..n {
        for k in 0..n {
            let p = m.metric.entry(j, k).coeff_of(model.t(), 0);
            if p.num_terms() != 1 {
                continue;
            }
            let (e, c) = p.terms().next().expect("one term");
            if e.degree() != 1 {
                continue;
            }
            let v = e.as_slice().iter().position(|&x| x == 1).expect("degree one");
            if a.get(v).is_some() || a.get(table.conj_of(v)).is_some() {
                continue;
            }
            let target = if j == k { 1.0 } else { 0.0 };
            a.set(v, Complex64::new(target, 0.0) / c.to_c64());
        }
    }
}

pub fn execute(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let cfg = ctx.cfg;
    let model = ctx.model;
    let alg = ctx.alg();
    let mut code = 0;
    let mut convention = None;
    let body = match cfg.verb {
        Verb::CheckAlgebra => {
            let rep = alg.d_squared_check();
            let ok = rep.violations.is_empty();
            if !ok {
                code = 2;
            }
            Body::CheckAlgebra(AlgebraReport {
                status: Status::of(ok),
                dimension: alg.dim(),
                characters: ctx.names(),
                structure: alg
                    .structure()
                    .iter()
                    .map(|s| s.display(&ctx.names()).to_string())
                    .collect(),
                violations: rep.violations,
            })
        }
        Verb::CheckBalanced => {
            let mut metrics = Vec::new();
            for m in &model.metrics {
                let conv = ctx.convention_for(m);
                convention.get_or_insert(conv);
                let omega = m.metric.omega(alg, conv);
                let r = alg.balanced_check(&omega);
                metrics.push(BalancedEntry {
                    metric: m.name.clone(),
                    status: Status::of(r.balanced()),
                    real: realness_defect(&omega).is_zero(),
                    delbar_residual: ctx.show(&r.delbar_residual),
                    del_residual: ctx.show(&r.del_residual),
                });
            }
            if metrics.is_empty() {
                return Err(CliError::Input(Error::Structural(format!(
                    "model `{}` declares no metric",
                    model.name
                ))));
            }
            let ok = metrics.iter().all(|m| m.status == Status::Holds);
            if !ok {
                code = 2;
            }
            Body::CheckBalanced(BalancedReport { status: Status::of(ok), metrics })
        }
        Verb::McResidual => {
            let mut curves = Vec::new();
            for c in &model.curves {
                let r = c.mc_residual(alg);
                let mut orders = BTreeSet::new();
                for comp in r.comps() {
                    for (_, _, p) in comp.terms() {
                        orders.extend(p.split_by(model.t()).into_iter().filter(|(_, q)| !q.is_zero()).map(|(k, _)| k));
                    }
                }
                curves.push(McEntry {
                    curve: c.name.clone(),
                    residual: r.display(&ctx.names()).to_string(),
                    orders: orders.into_iter().collect(),
                });
            }
            let ok = curves.iter().all(|c| c.orders.is_empty());
            if !ok {
                code = 2;
            }
            Body::McResidual(McReport { status: Status::of(ok), curves })
        }
        Verb::Obstruction => {
            let m = ctx.metric()?;
            let conv = ctx.convention_for(m);
            convention = Some(conv);
            let omega0 = model.metric_curve(m).omega0(alg, conv);
            let mut curves = Vec::new();
            for c in &model.curves {
                let dphi = c.derivative();
                let theta = alg.first_order_obstruction(&omega0, &dphi);
                let cls = alg.reduce_class(&theta)?;
                curves.push(ObstructionEntry {
                    curve: c.name.clone(),
                    derivative: dphi.display(&ctx.names()).to_string(),
                    obstruction: ctx.show(&theta),
                    exact_part: ctx.show(&cls.exact_part),
                    potential: ctx.show(&cls.potential),
                    residual: ctx.show(&cls.residual),
                    conditions: cls
                        .conditions
                        .iter()
                        .map(|k| ConditionEntry {
                            sector: ctx.sector(k),
                            pivot: k.pivot.display(alg.dim()).to_string(),
                            polynomial: k.normalized.to_string(),
                        })
                        .collect(),
                });
            }
            Body::Obstruction(ObstructionReport { metric: m.name.clone(), curves })
        }
        Verb::Conditions => {
            let m = ctx.metric()?;
            let conv = ctx.convention_for(m);
            convention = Some(conv);
            let curves = model
                .curves
                .iter()
                .map(|c| {
                    let conds = conditions_of(ctx, m, conv, c)?;
                    Ok(ConditionsEntry {
                        curve: c.name.clone(),
                        verdict: if conds.is_empty() {
                            VerdictKind::NoFirstOrderObstruction
                        } else {
                            VerdictKind::Conditional
                        },
                        conditions: conds.iter().map(|k| k.normalized.to_string()).collect(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Body::Conditions(ConditionsReport { metric: m.name.clone(), curves })
        }
        Verb::Verdict => {
            let m = ctx.metric()?;
            let conv = ctx.convention_for(m);
            convention = Some(conv);
            let a = ctx.assignment(Some(m))?;
            let sample = cfg.metric_sample.as_ref().map(|_| &m.metric);
            let mut curves = Vec::new();
            for c in &model.curves {
                let conds: Vec<Condition> = conditions_of(ctx, m, conv, c)?
                    .into_iter()
                    .map(|k| Condition { raw: k.normalized.clone(), ..k })
                    .collect();
                let strings = conds.iter().map(|k| k.normalized.to_string()).collect();
                let (values, kind) = if conds.is_empty() {
                    (None, VerdictKind::NoFirstOrderObstruction)
                } else {
                    match verdict(&conds, &a, sample) {
                        Ok(v) => {
                            let kind = if v.obstructed() {
                                VerdictKind::Obstructed
                            } else {
                                VerdictKind::NoFirstOrderObstruction
                            };
                            (Some(v.values.into_iter().map(Complex::from).collect()), kind)
                        }
                        Err(Error::MissingAssignment(_)) => (None, VerdictKind::Conditional),
                        Err(e) => return Err(e.into()),
                    }
                };
                curves.push(VerdictEntry { curve: c.name.clone(), conditions: strings, values, verdict: kind });
            }
            let overall = curves
                .iter()
                .map(|c| c.verdict)
                .max()
                .unwrap_or(VerdictKind::NoFirstOrderObstruction);
            if overall == VerdictKind::Obstructed {
                code = 2;
            }
            Body::Verdict(VerdictReport { metric: m.name.clone(), verdict: overall, curves })
        }
        Verb::VerifyTheorem => {
            let m = ctx.metric()?;
            let conv = ctx.convention_for(m);
            convention = Some(conv);
            let a = ctx.assignment(Some(m))?;
            let mc = model.metric_curve(m);
            let mut curves = Vec::new();
            for c in &model.curves {
                let r = fd_theorem_check(alg, conv, &mc, c, &a, &cfg.fd_steps)?;
                let exact = r.errors.iter().all(|&e| e < FD_EXACT_TOL);
                let within = r
                    .steps
                    .iter()
                    .zip(&r.errors)
                    .all(|(h, e)| *e <= FD_ERROR_RATIO * h);
                let order_ok = r
                    .order
                    .is_some_and(|o| (FD_ORDER_RANGE.0..=FD_ORDER_RANGE.1).contains(&o));
                curves.push(FdEntry {
                    curve: c.name.clone(),
                    status: Status::of(exact || (within && order_ok)),
                    steps: r.steps.iter().map(|&x| num(x)).collect(),
                    errors: r.errors.iter().map(|&x| num(x)).collect(),
                    orders: r.orders.iter().map(|&x| num(x)).collect(),
                    order: r.order.map(num),
                    prediction_norm: num(r.prediction_norm()),
                });
            }
            let ok = curves.iter().all(|c| c.status == Status::Holds);
            if !ok {
                code = 2;
            }
            Body::VerifyTheorem(TheoremReport { status: Status::of(ok), metric: m.name.clone(), curves })
        }
        Verb::Cohomology => {
            let n = alg.dim();
            let sectors: Vec<SectorEntry> = model
                .sectors
                .iter()
                .map(|w| {
                    let label = w.render(&ctx.names());
                    SectorEntry {
                        sector: if label.is_empty() { "1".into() } else { label },
                        hodge: (0..=n)
                            .map(|p| (0..=n).map(|q| alg.build_sector(w, p, q).cohomology_dim()).collect())
                            .collect(),
                    }
                })
                .collect();
            let h01_total = sectors.iter().map(|s| s.hodge[0][1]).sum();
            Body::Cohomology(CohomologyReport { sectors, h01_total })
        }
    };
    Ok((
        Report {
            model: model.name.clone(),
            convention: convention.map(|c| c.to_string()),
            body,
        },
        code,
    ))
}

fn conditions_of(
    ctx: &Ctx,
    m: &NamedMetric,
    conv: Convention,
    c: &DeformationCurve,
) -> Result<Vec<Condition>, CliError> {
    let alg = ctx.alg();
    let omega0 = ctx.model.metric_curve(m).omega0(alg, conv);
    Ok(alg.corollary_conditions(&omega0, &c.derivative())?.conditions)
}
