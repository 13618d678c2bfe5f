use std::fmt::Write as _;
use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;

use crate::config::Format;

/// Decimal rendering with 15 significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0.0…"
        return format!("{:.14e}", 0.0);
    }
    format!("{x:.14e}")
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: String,
    pub im: String,
}

impl From<Complex64> for Complex {
    fn from(z: Complex64) -> Self {
        Complex { re: num(z.re), im: num(z.im) }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
}

impl Status {
    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    fn word(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
        }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    NoFirstOrderObstruction,
    Conditional,
    Obstructed,
}

impl VerdictKind {
    pub fn word(self) -> &'static str {
        match self {
            VerdictKind::NoFirstOrderObstruction => "no-first-order-obstruction",
            VerdictKind::Conditional => "conditional",
            VerdictKind::Obstructed => "obstructed",
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Serialize, Debug, Clone)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Body {
    CheckAlgebra(AlgebraReport),
    CheckBalanced(BalancedReport),
    McResidual(McReport),
    Obstruction(ObstructionReport),
    Conditions(ConditionsReport),
    Verdict(VerdictReport),
    VerifyTheorem(TheoremReport),
    Cohomology(CohomologyReport),
}

#[derive(Serialize, Debug, Clone)]
pub struct AlgebraReport {
    pub status: Status,
    pub dimension: usize,
    pub characters: Vec<String>,
    pub structure: Vec<String>,
    pub violations: Vec<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct BalancedReport {
    pub status: Status,
    pub metrics: Vec<BalancedEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct BalancedEntry {
    pub metric: String,
    pub status: Status,
    /// Whether the fundamental form is real under the chosen convention.
    pub real: bool,
    pub delbar_residual: String,
    pub del_residual: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct McReport {
    pub status: Status,
    pub curves: Vec<McEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct McEntry {
    pub curve: String,
    pub residual: String,
    /// Powers of `t` with a nonzero coefficient.
    pub orders: Vec<u32>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ConditionEntry {
    pub sector: String,
    pub pivot: String,
    pub polynomial: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct ObstructionReport {
    pub metric: String,
    pub curves: Vec<ObstructionEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ObstructionEntry {
    pub curve: String,
    pub derivative: String,
    pub obstruction: String,
    pub exact_part: String,
    pub potential: String,
    pub residual: String,
    pub conditions: Vec<ConditionEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ConditionsReport {
    pub metric: String,
    pub curves: Vec<ConditionsEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ConditionsEntry {
    pub curve: String,
    pub conditions: Vec<String>,
    pub verdict: VerdictKind,
}

#[derive(Serialize, Debug, Clone)]
pub struct VerdictReport {
    pub metric: String,
    pub verdict: VerdictKind,
    pub curves: Vec<VerdictEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct VerdictEntry {
    pub curve: String,
    pub conditions: Vec<String>,
    /// Present when there are conditions and every one could be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Complex>>,
    pub verdict: VerdictKind,
}

#[derive(Serialize, Debug, Clone)]
pub struct TheoremReport {
    pub status: Status,
    pub metric: String,
    pub curves: Vec<FdEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct FdEntry {
    pub curve: String,
    pub status: Status,
    pub steps: Vec<String>,
    pub errors: Vec<String>,
    pub orders: Vec<String>,
    pub order: Option<String>,
    pub prediction_norm: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct CohomologyReport {
    pub sectors: Vec<SectorEntry>,
    pub h01_total: usize,
}

#[derive(Serialize, Debug, Clone)]
pub struct SectorEntry {
    pub sector: String,
    /// `hodge[p][q] = dim H^{p,q}` of the sector.
    pub hodge: Vec<Vec<usize>>,
}

/// Single-line JSON with `": "` and `", "` separators.
struct Spaced;

impl Formatter for Spaced {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(buf).expect("utf-8 json")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self) + "\n",
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let conv = self
            .convention
            .as_deref()
            .map(|c| format!(" (convention {c})"))
            .unwrap_or_default();
        let _ = writeln!(s, "model {}{conv}", self.model);
        match &self.body {
            Body::CheckAlgebra(r) => {
                let _ = writeln!(s, "dimension {}", r.dimension);
                if !r.characters.is_empty() {
                    let _ = writeln!(s, "characters {}", r.characters.join(", "));
                }
                for (k, d) in r.structure.iter().enumerate() {
                    let _ = writeln!(s, "d e{} = {d}", k + 1);
                }
                for v in &r.violations {
                    let _ = writeln!(s, "violation: {v}");
                }
                let _ = writeln!(s, "d^2 = 0 and integrability: {}", r.status.word());
            }
            Body::CheckBalanced(r) => {
                for m in &r.metrics {
                    let _ = writeln!(s, "metric {}: balanced {}", m.metric, m.status.word());
                    if !m.real {
                        let _ = writeln!(s, "  fundamental form is not real: conj(omega) - omega != 0");
                    }
                    if m.status == Status::Fails {
                        let _ = writeln!(s, "  delbar(omega^(n-1)) = {}", m.delbar_residual);
                        let _ = writeln!(s, "  del(omega^(n-1)) = {}", m.del_residual);
                    }
                }
            }
            Body::McResidual(r) => {
                for c in &r.curves {
                    if c.orders.is_empty() {
                        let _ = writeln!(s, "curve {}: residual 0 (identically in t)", c.curve);
                    } else {
                        let orders: Vec<String> = c.orders.iter().map(|k| format!("t^{k}")).collect();
                        let _ = writeln!(s, "curve {}: residual nonzero at {}", c.curve, orders.join(", "));
                        let _ = writeln!(s, "  {}", c.residual);
                    }
                }
            }
            Body::Obstruction(r) => {
                let _ = writeln!(s, "metric {}", r.metric);
                for c in &r.curves {
                    let _ = writeln!(s, "curve {}", c.curve);
                    let _ = writeln!(s, "  first-order direction: {}", c.derivative);
                    let _ = writeln!(s, "  obstruction form: {}", c.obstruction);
                    let _ = writeln!(s, "  exact part: {}", c.exact_part);
                    let _ = writeln!(s, "  potential: {}", c.potential);
                    let _ = writeln!(s, "  class residual: {}", c.residual);
                    if c.conditions.is_empty() {
                        let _ = writeln!(s, "  no conditions");
                    }
                    for k in &c.conditions {
                        let _ = writeln!(s, "  condition [{}] {}: {} = 0", k.sector, k.pivot, k.polynomial);
                    }
                }
            }
            Body::Conditions(r) => {
                let _ = writeln!(s, "metric {}", r.metric);
                for c in &r.curves {
                    let _ = writeln!(s, "curve {}: {}", c.curve, c.verdict.word());
                    for k in &c.conditions {
                        let _ = writeln!(s, "  {k} = 0");
                    }
                }
            }
            Body::Verdict(r) => {
                let _ = writeln!(s, "metric {}", r.metric);
                for c in &r.curves {
                    let _ = writeln!(s, "curve {}: {}", c.curve, c.verdict.word());
                    for (i, k) in c.conditions.iter().enumerate() {
                        match c.values.as_ref().and_then(|v| v.get(i)) {
                            Some(v) => {
                                let _ = writeln!(s, "  {k} = {} + {}i", v.re, v.im);
                            }
                            None => {
                                let _ = writeln!(s, "  {k}");
                            }
                        }
                    }
                }
                let _ = writeln!(s, "{}", r.verdict.word());
            }
            Body::VerifyTheorem(r) => {
                let _ = writeln!(s, "metric {}", r.metric);
                for c in &r.curves {
                    let _ = writeln!(s, "curve {}: {}", c.curve, c.status.word());
                    let _ = writeln!(s, "  |R| = {}", c.prediction_norm);
                    for (h, e) in c.steps.iter().zip(&c.errors) {
                        let _ = writeln!(s, "  h = {h}  error = {e}");
                    }
                    if let Some(o) = &c.order {
                        let _ = writeln!(s, "  order {o}");
                    }
                }
                let _ = writeln!(s, "theorem check {}", r.status.word());
            }
            Body::Cohomology(r) => {
                for sec in &r.sectors {
                    let _ = writeln!(s, "sector {}", sec.sector);
                    for (p, row) in sec.hodge.iter().enumerate() {
                        let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
                        let _ = writeln!(s, "  h^{{{p},q}}: {}", cells.join(" "));
                    }
                }
                let _ = writeln!(s, "dim H^{{0,1}} = {}", r.h01_total);
            }
        }
        s
    }
}
