//! Algebraic identities checked on random inputs.

mod common;

use std::sync::Arc;

use balobs_core::calculus::VForm;
use balobs_core::dsl::{parse_model, registry, Model, REGISTRY};
use balobs_core::forms::{basis, Form};
use balobs_core::scalars::{Assignment, GaussPoly, GaussRat, PolyOp, VarTable};
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn table() -> Arc<VarTable> {
    let mut t = VarTable::new();
    t.add_real("t").unwrap();
    t.add_complex("x").unwrap();
    t.add_real("y").unwrap();
    Arc::new(t)
}

fn poly_strategy(table: Arc<VarTable>) -> impl Strategy<Value = GaussPoly> {
    prop::collection::vec((0u32..3, 0u32..3, 0u32..2, 0u32..3, -4i64..=4, -4i64..=4), 0..5).prop_map(
        move |terms| {
            let mut p = GaussPoly::zero(&table);
            for (ex, exb, ey, et, re, im) in terms {
                let mono = GaussPoly::var_named(&table, "x")
                    .unwrap()
                    .pow(ex)
                    .arith(&GaussPoly::var_named(&table, "~x").unwrap().pow(exb), PolyOp::Mul)
                    .unwrap()
                    .arith(&GaussPoly::var_named(&table, "y").unwrap().pow(ey), PolyOp::Mul)
                    .unwrap()
                    .arith(&GaussPoly::var_named(&table, "t").unwrap().pow(et), PolyOp::Mul)
                    .unwrap();
                let c = GaussPoly::constant(&table, GaussRat::from_parts((re, 1), (im, 3)));
                p = p.arith(&mono.arith(&c, PolyOp::Mul).unwrap(), PolyOp::Add).unwrap();
            }
            p
        },
    )
}

fn ops(a: &GaussPoly, b: &GaussPoly, op: PolyOp) -> GaussPoly {
    a.arith(b, op).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(
        (a, b, c) in {
            let t = table();
            (poly_strategy(t.clone()), poly_strategy(t.clone()), poly_strategy(t))
        }
    ) {
        use PolyOp::*;
        prop_assert_eq!(ops(&a, &b, Add), ops(&b, &a, Add));
        prop_assert_eq!(ops(&a, &b, Mul), ops(&b, &a, Mul));
        prop_assert_eq!(ops(&ops(&a, &b, Mul), &c, Mul), ops(&a, &ops(&b, &c, Mul), Mul));
        prop_assert_eq!(ops(&a, &ops(&b, &c, Add), Mul), ops(&ops(&a, &b, Mul), &ops(&a, &c, Mul), Add));
        prop_assert!(ops(&a, &a, Sub).is_zero());
    }

    #[test]
    fn conjugation_and_evaluation(
        (a, b) in { let t = table(); (poly_strategy(t.clone()), poly_strategy(t)) },
        xr in -2.0f64..2.0, xi in -2.0f64..2.0, y in -2.0f64..2.0, tv in -1.0f64..1.0,
    ) {
        use PolyOp::*;
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(ops(&a, &b, Mul).conj(), ops(&a.conj(), &b.conj(), Mul));
        let tab = a.table().clone();
        let asg = Assignment::from_pairs(
            &tab,
            &[("x", Complex64::new(xr, xi)), ("y", Complex64::new(y, 0.0)), ("t", Complex64::new(tv, 0.0))],
        ).unwrap();
        let ea = a.eval(&asg).unwrap();
        let eb = b.eval(&asg).unwrap();
        let eab = ops(&a, &b, Mul).eval(&asg).unwrap();
        prop_assert!((eab - ea * eb).norm() <= 1e-9 * (1.0 + eab.norm()));
        prop_assert!((a.conj().eval(&asg).unwrap() - ea.conj()).norm() <= 1e-9 * (1.0 + ea.norm()));
    }
}

fn model(k: usize) -> Model {
    registry(REGISTRY[k % REGISTRY.len()].0).unwrap()
}

fn degree(f: &Form<GaussRat>) -> usize {
    f.terms().next().map(|(_, m, _)| m.degree()).unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_laws(k in 0usize..3, seed in any::<u64>(), p1 in 0usize..2, q1 in 0usize..2, p2 in 0usize..2, q2 in 0usize..3) {
        let m = model(k);
        let alg = &m.algebra;
        let ws = small_weights(alg.nchars());
        let mut g = rng(seed);
        let a = random_exact_form(alg, &ws, p1, q1, &mut g);
        let b = random_exact_form(alg, &ws, p2, q2, &mut g);
        let c = random_exact_form(alg, &ws, 1, 0, &mut g);
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        let sign = if ((p1 + q1) * (p2 + q2)) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_rat(&GaussRat::from_int(sign)));
        for (w, _, _) in a.wedge(&b).terms() {
            prop_assert!(a.weights().iter().any(|wa| b.weights().iter().any(|wb| &(wa + wb) == w)));
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn differential_squares_vanish(k in 0usize..3, seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let m = model(k);
        let alg = &m.algebra;
        let f = random_exact_form(alg, &small_weights(alg.nchars()), p, q, &mut rng(seed));
        prop_assert!(alg.d(&alg.d(&f)).is_zero());
        prop_assert!(alg.del_termwise(&alg.del_termwise(&f)).is_zero());
        prop_assert!(alg.delbar_termwise(&alg.delbar_termwise(&f)).is_zero());
        let anti = alg.del_termwise(&alg.delbar_termwise(&f)).plus(&alg.delbar_termwise(&alg.del_termwise(&f)));
        prop_assert!(anti.is_zero());
        prop_assert_eq!(alg.d(&f), alg.del_termwise(&f).plus(&alg.delbar_termwise(&f)));
        prop_assert_eq!(alg.d(&f.conj()), alg.d(&f).conj());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn leibniz(k in 0usize..3, seed in any::<u64>(), p1 in 0usize..3, q1 in 0usize..3, p2 in 0usize..2, q2 in 0usize..2) {
        let m = model(k);
        let alg = &m.algebra;
        let ws = small_weights(alg.nchars());
        let mut g = rng(seed);
        let a = random_exact_form(alg, &ws, p1, q1, &mut g);
        let b = random_exact_form(alg, &ws, p2, q2, &mut g);
        let sign = GaussRat::from_int(if degree(&a) % 2 == 0 { 1 } else { -1 });
        let rhs = alg.d(&a).wedge(&b).plus(&a.wedge(&alg.d(&b)).scale_rat(&sign));
        prop_assert_eq!(alg.d(&a.wedge(&b)), rhs);
    }
}

fn random_phi(m: &Model, g: &mut ChaCha8Rng) -> VForm<GaussRat> {
    let alg = &m.algebra;
    let ws = small_weights(alg.nchars());
    VForm::new((0..alg.dim()).map(|_| random_exact_form(alg, &ws, 0, 1, g)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn extension_map_is_simultaneous_contraction(k in 0usize..3, seed in any::<u64>(), p in 0usize..4, q in 0usize..3) {
        let m = model(k);
        let alg = &m.algebra;
        let mut g = rng(seed);
        let phi = random_phi(&m, &mut g);
        let alpha = random_exact_form(alg, &small_weights(alg.nchars()), p.min(3), q, &mut g);
        prop_assert_eq!(alg.extension_map(&phi, &alpha), alg.simcontract(&phi, &alpha));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_reduction(k in 0usize..3, seed in any::<u64>(), p in 0usize..3, q in 1usize..4) {
        let m = model(k);
        let alg = &m.algebra;
        let mut g = rng(seed);
        let ws = small_weights(alg.nchars());
        let tab = m.table.clone();
        let lift = |f: &Form<GaussRat>| f.map_into(|c| GaussPoly::constant(&tab, c.clone()));

        // exact input: zero residual, potential recovered
        let beta = lift(&random_exact_form(alg, &ws, p, q - 1, &mut g));
        let theta = alg.delbar_termwise(&beta);
        let red = alg.reduce_class(&theta).unwrap();
        prop_assert!(red.residual.is_zero());
        prop_assert!(red.conditions.is_empty());
        prop_assert!(alg.certify_exact(&theta, &red.potential));

        // top antiholomorphic degree is always closed: the residual is
        // orthogonal to the image and reduction is idempotent
        let n = alg.dim();
        let closed = lift(&random_exact_form(alg, &ws, p, n, &mut g)).plus(&alg.delbar_termwise(
            &lift(&random_exact_form(alg, &ws, p, n - 1, &mut g)),
        ));
        let red = alg.reduce_class(&closed).unwrap();
        prop_assert!(alg.certify_exact(&closed.minus(&red.residual), &red.potential));
        let again = alg.reduce_class(&red.residual).unwrap();
        prop_assert_eq!(&again.residual, &red.residual);
        prop_assert!(again.exact_part.is_zero());
        for w in ws.iter() {
            for mono in basis(n, p, n - 1) {
                let image = alg.delbar_termwise(&alg.mono::<GaussRat>(mono, GaussRat::one()).pad_weight(w));
                let mut dot = GaussPoly::zero(&tab);
                for (wi, mi, ci) in image.terms() {
                    if let Some(r) = red.residual.coeff(wi, mi) {
                        dot = dot.arith(&r.scale(&ci.conj()), PolyOp::Add).unwrap();
                    }
                }
                prop_assert!(dot.is_zero());
            }
        }
    }
}

trait PadWeight {
    fn pad_weight(&self, w: &balobs_core::forms::Weight) -> Self;
}

impl PadWeight for Form<GaussRat> {
    fn pad_weight(&self, w: &balobs_core::forms::Weight) -> Self {
        let mut out = Form::zero(self.dim(), self.nchars());
        for (_, m, c) in self.terms() {
            out.add_term(w.clone(), m, c.clone());
        }
        out
    }
}

/// Random model text whose structure is closed by construction: only the last
/// generator has a nonzero differential, built from the earlier ones.
fn random_model_source(g: &mut ChaCha8Rng) -> String {
    let n = g.gen_range(1..=4usize);
    let mut s = String::from("model \"random\"\n");
    s.push_str(&format!("dim {n}\nreal r1, r2\ncomplex z1, z2\n"));
    let nchars = if n >= 2 { g.gen_range(0..=2usize) } else { 0 };
    let names = ["u", "v"];
    for c in names.iter().take(nchars) {
        let re = g.gen_range(-2i64..=2);
        let im = g.gen_range(-2i64..=2);
        s.push_str(&format!(
            "char {c} {{ dlog10 = ({re} + {im}*i) e1; dlog01 = -({re} - {im}*i) ~e1 }}\n"
        ));
    }
    if nchars > 0 {
        s.push_str(&format!("sectors 1, {}\n", names[..nchars].join(", ")));
    }
    let gens: Vec<String> = (1..n).map(|k| format!("e{k}")).collect();
    let mut terms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in gens.iter().skip(i + 1) {
            if g.gen_bool(0.5) {
                terms.push(format!("{} {a}^{b}", g.gen_range(1..4)));
            }
        }
        for b in &gens {
            if g.gen_bool(0.3) {
                terms.push(format!("{}*i {a}^~{b}", g.gen_range(1..4)));
            }
        }
    }
    if !terms.is_empty() {
        s.push_str(&format!("d e{n} = {}\n", terms.join(" - ")));
    }
    let vars = ["r1", "r2", "z1", "~z1", "z2", "t", "i"];
    let mut rows = Vec::new();
    let off: Vec<Vec<String>> = (0..n)
        .map(|_| (0..n).map(|_| vars[g.gen_range(2..vars.len())].to_string()).collect())
        .collect();
    for j in 0..n {
        let mut row = Vec::new();
        for k in 0..n {
            row.push(match j.cmp(&k) {
                std::cmp::Ordering::Equal => format!("{} + 2", vars[g.gen_range(0..2)]),
                std::cmp::Ordering::Less => off[j][k].clone(),
                std::cmp::Ordering::Greater => format!("conj({})", off[k][j]),
            });
        }
        rows.push(row.join(", "));
    }
    s.push_str(&format!("metric g {{ {} }}\n", rows.join("; ")));
    let mut comps = Vec::new();
    for k in 1..=n {
        for j in 1..=n {
            if g.gen_bool(0.4) {
                let wt = if nchars > 0 && g.gen_bool(0.5) { "~u " } else { "" };
                comps.push(format!("{}*t^{} {wt}~e{j} @ Z{k}", vars[g.gen_range(0..5)], g.gen_range(1..3)));
            }
        }
    }
    s.push_str(&format!(
        "curve c = {}\n",
        if comps.is_empty() { "0".into() } else { comps.join(" + ") }
    ));
    s
}

fn same_model(a: &Model, b: &Model) -> bool {
    a.algebra == b.algebra
        && a.sectors == b.sectors
        && a.table.names() == b.table.names()
        && a.metrics.len() == b.metrics.len()
        && a.metrics.iter().zip(&b.metrics).all(|(x, y)| x.metric == y.metric && x.convention == y.convention)
        && a.curves.len() == b.curves.len()
        && a.curves.iter().zip(&b.curves).all(|(x, y)| x.phi == y.phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dsl_round_trip(seed in any::<u64>()) {
        let src = random_model_source(&mut rng(seed));
        let m = parse_model(&src).map_err(|e| TestCaseError::fail(format!("{e}\n{src}")))?;
        let printed = m.print();
        let again = parse_model(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert!(same_model(&m, &again), "{}", printed);
        prop_assert_eq!(again.print(), printed);
    }
}

#[test]
fn registry_round_trip_preserves_models() {
    for (name, _) in REGISTRY {
        let m = registry(name).unwrap();
        let again = parse_model(&m.print()).unwrap();
        assert!(same_model(&m, &again), "{name}");
    }
}

#[test]
fn registry_algebras_pass_d_squared() {
    for (name, _) in REGISTRY {
        assert!(registry(name).unwrap().algebra.d_squared_check().passed());
    }
}
