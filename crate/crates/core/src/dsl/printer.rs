use std::fmt::Write;

use super::Model;
use crate::calculus::VForm;
use crate::forms::Form;
use crate::scalars::{GaussPoly, GaussRat};

/// Coefficient rendering in source syntax as `(negated, body)`; no body means unit.
pub trait SourceCoeff {
    fn source(&self) -> (bool, Option<String>);
}

impl SourceCoeff for GaussRat {
    fn source(&self) -> (bool, Option<String>) {
        if self.is_one() {
            (false, None)
        } else if (-self).is_one() {
            (true, None)
        } else if self.is_negative_display() {
            (true, Some((-self).to_string()))
        } else {
            (false, Some(self.to_string()))
        }
    }
}

impl SourceCoeff for GaussPoly {
    fn source(&self) -> (bool, Option<String>) {
        if let Some(c) = self.as_constant() {
            return c.source();
        }
        let s = self.to_string();
        if self.num_terms() > 1 {
            return (false, Some(format!("({s})")));
        }
        match s.strip_prefix('-') {
            Some(rest) => (true, Some(rest.to_string())),
            None => (false, Some(s)),
        }
    }
}

fn form_terms<C: SourceCoeff + crate::scalars::Coeff>(
    f: &Form<C>,
    names: &[String],
    suffix: &str,
    out: &mut Vec<(bool, String)>,
) {
    let n = f.dim();
    for (w, m, c) in f.terms() {
        let (neg, body) = c.source();
        let mut parts: Vec<String> = body.into_iter().collect();
        if !w.is_zero() {
            parts.push(w.render(names));
        }
        if m.degree() > 0 {
            parts.push(m.display(n).to_string());
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        out.push((neg, format!("{}{suffix}", parts.join(" "))));
    }
}

fn join(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (neg, t)) in terms.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => {}
            (0, true) => s.push_str("- "),
            (_, false) => s.push_str(" + "),
            (_, true) => s.push_str(" - "),
        }
        s.push_str(&t);
    }
    s
}

pub fn form_source<C: SourceCoeff + crate::scalars::Coeff>(f: &Form<C>, names: &[String]) -> String {
    let mut terms = Vec::new();
    form_terms(f, names, "", &mut terms);
    join(terms)
}

pub fn vform_source(v: &VForm<GaussPoly>, names: &[String]) -> String {
    let mut terms = Vec::new();
    for (k, c) in v.comps().iter().enumerate() {
        form_terms(c, names, &format!(" @ Z{}", k + 1), &mut terms);
    }
    join(terms)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub(super) fn print(m: &Model) -> String {
    let names = m.algebra.char_names();
    let mut out = String::new();
    if !m.name.is_empty() {
        writeln!(out, "model {}", quote(&m.name)).unwrap();
    }
    for a in &m.assumptions {
        writeln!(out, "assume {}", quote(a)).unwrap();
    }
    writeln!(out, "dim {}", m.algebra.dim()).unwrap();

    let mut runs: Vec<(bool, Vec<&str>)> = Vec::new();
    for (idx, name, real) in m.table.primaries() {
        if idx == m.t() {
            continue;
        }
        match runs.last_mut() {
            Some((r, v)) if *r == real => v.push(name),
            _ => runs.push((real, vec![name])),
        }
    }
    for (real, vars) in runs {
        writeln!(out, "{} {}", if real { "real" } else { "complex" }, vars.join(", ")).unwrap();
    }

    for ch in m.algebra.characters() {
        writeln!(
            out,
            "char {} {{ dlog10 = {}; dlog01 = {} }}",
            ch.name,
            form_source(&ch.dlog10, &names),
            form_source(&ch.dlog01, &names)
        )
        .unwrap();
    }
    let sectors: Vec<String> = m
        .sectors
        .iter()
        .map(|w| if w.is_zero() { "1".into() } else { w.render(&names) })
        .collect();
    writeln!(out, "sectors {}", sectors.join(", ")).unwrap();
    for (k, s) in m.algebra.structure().iter().enumerate() {
        writeln!(out, "d e{} = {}", k + 1, form_source(s, &names)).unwrap();
    }
    for nm in &m.metrics {
        write!(out, "metric {}", nm.name).unwrap();
        if let Some(c) = nm.convention {
            write!(out, " convention {c}").unwrap();
        }
        writeln!(out, " {{").unwrap();
        for row in nm.metric.entries() {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(out, "  {};", cells.join(", ")).unwrap();
        }
        writeln!(out, "}}").unwrap();
    }
    for c in &m.curves {
        writeln!(out, "curve {} = {}", c.name, vform_source(&c.phi, &names)).unwrap();
    }
    out
}
