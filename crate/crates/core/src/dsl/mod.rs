//! Text format for models: algebras, characters, metrics and deformation
//! curves, with a canonical printer and the built-in registry.

mod lexer;
mod parser;
mod printer;
mod registry;
mod resolver;

pub use lexer::{lex, Pos, Tok, Token};
pub use parser::{parse_expr, parse_statements, Expr, Named, Stmt};
pub use printer::{form_source, vform_source, SourceCoeff};
pub use registry::{registry, REGISTRY};
pub use resolver::{parse_model, PARAM};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forms::{CoframeAlgebra, Weight};
use crate::metrics::{Convention, HermMetric};
use crate::obstruction::{DeformationCurve, MetricCurve};
use crate::scalars::VarTable;

#[derive(Clone, Debug)]
pub struct NamedMetric {
    pub name: String,
    pub convention: Option<Convention>,
    pub metric: HermMetric,
}

/// A resolved model file.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub assumptions: Vec<String>,
    pub table: Arc<VarTable>,
    pub algebra: CoframeAlgebra,
    /// Character sectors of interest; the trivial sector by default.
    pub sectors: Vec<Weight>,
    pub metrics: Vec<NamedMetric>,
    pub curves: Vec<DeformationCurve>,
}

impl Model {
    /// Index of the curve parameter in [`Model::table`].
    pub fn t(&self) -> usize {
        0
    }

    pub fn metric(&self, name: &str) -> Result<&NamedMetric> {
        self.metrics
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::Undeclared(format!("metric `{name}`")))
    }

    /// First declared metric.
    pub fn default_metric(&self) -> Result<&NamedMetric> {
        self.metrics
            .first()
            .ok_or_else(|| Error::Structural(format!("model `{}` declares no metric", self.name)))
    }

    pub fn metric_curve(&self, m: &NamedMetric) -> MetricCurve {
        MetricCurve::new(m.metric.clone(), self.t())
    }

    pub fn curve(&self, name: &str) -> Result<&DeformationCurve> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Undeclared(format!("curve `{name}`")))
    }

    /// Evaluates a form expression such as `w e1^e2^~e2^~e3` in this model.
    pub fn form(&self, src: &str) -> Result<crate::forms::Form<crate::scalars::GaussPoly>> {
        resolver::form_in(self, src)
    }

    /// Evaluates a polynomial expression over this model's variables.
    pub fn function(&self, src: &str) -> Result<crate::scalars::GaussPoly> {
        resolver::function_in(self, src)
    }

    /// Canonical source text; parsing it yields an identical model.
    pub fn print(&self) -> String {
        printer::print(self)
    }
}
