//! Model file diagnostics and registry contents.

use balobs_core::dsl::{parse_model, registry};
use balobs_core::forms::{Bidegree, Mono};
use balobs_core::metrics::Convention;
use balobs_core::scalars::GaussRat;
use balobs_core::Error;

fn located(err: &Error) -> Option<(usize, usize, &Error)> {
    match err {
        Error::Located { line, col, inner } => Some((*line, *col, inner)),
        _ => None,
    }
}

#[test]
fn dangling_wedge_is_a_syntax_error() {
    let err = parse_model("dim 3\nd e3 = e1 ^\n").unwrap_err();
    assert_eq!(err.to_string(), "2:12: syntax error: expected an operand, found end of line");
}

#[test]
fn unbalanced_parenthesis() {
    let err = parse_model("dim 2\nd e2 = (e1 ^ ~e1\n").unwrap_err();
    assert_eq!(err.to_string(), "2:8: syntax error: unclosed `(`");
}

#[test]
fn undeclared_identifiers() {
    for (src, line, col) in [
        ("dim 2\nmetric g { 1, q; conj(q), 1 }\n", 2, 15),
        ("dim 2\ncurve c = t ~e3 @ Z1\n", 2, 14),
        ("dim 2\ncurve c = t ~e1 @ Z5\n", 2, 17),
    ] {
        let err = parse_model(src).unwrap_err();
        let (l, c, inner) = located(&err).unwrap_or_else(|| panic!("{err}"));
        assert_eq!((l, c), (line, col), "{src}");
        assert!(matches!(inner, Error::Undeclared(_)), "{inner}");
    }
}

#[test]
fn tampered_structure_names_generator() {
    let err = parse_model("dim 3\nd e2 = - e1 ^ e2\nd e3 = e1 ^ e3 + e2 ^ ~e1\n").unwrap_err();
    assert!(matches!(err, Error::InvalidAlgebra(_)));
    assert!(err.to_string().contains("d(d e3) != 0"), "{err}");
}

#[test]
fn non_integrable_structure_rejected() {
    let err = parse_model("dim 2\nd e2 = ~e1 ^ ~e2\n").unwrap_err();
    assert!(matches!(err, Error::Bidegree(_)), "{err}");
}

#[test]
fn symbolic_structure_constants_rejected() {
    let err = parse_model("dim 3\ncomplex s\nd e3 = s e1 ^ e2\n").unwrap_err();
    let (_, _, inner) = located(&err).unwrap();
    assert!(matches!(inner, Error::InvalidAlgebra(_)));
}

#[test]
fn non_unitary_character_rejected() {
    let err = parse_model("dim 3\nchar w { dlog10 = - e1; dlog01 = - ~e1 }\n").unwrap_err();
    assert!(matches!(err, Error::InvalidAlgebra(_)), "{err}");
}

#[test]
fn curve_must_be_01() {
    let err = parse_model("dim 2\ncurve c = t e1^~e1 @ Z1\n").unwrap_err();
    let (_, _, inner) = located(&err).unwrap();
    assert!(matches!(inner, Error::Bidegree(_)));
}

#[test]
fn metric_must_be_hermitian() {
    let err = parse_model("dim 2\ncomplex x\nmetric g { 1, x; x, 1 }\n").unwrap_err();
    let (_, _, inner) = located(&err).unwrap();
    assert!(matches!(inner, Error::NonHermitian(_)));
}

#[test]
fn iwasawa_structure_constants() {
    let m = registry("iwasawa").unwrap();
    let s = m.algebra.structure();
    assert!(s[0].is_zero() && s[1].is_zero());
    assert_eq!(s[2].len(), 1);
    assert_eq!(
        s[2].coeff(&m.algebra.zero_weight(), Mono::from_sets(3, &[0, 1], &[])),
        Some(&GaussRat::from_int(-1))
    );
    let brackets = m.algebra.bracket_constants();
    assert_eq!(brackets[0][1][2], GaussRat::one());
}

#[test]
fn nakamura_character_table() {
    let m = registry("nakamura-i").unwrap();
    let ch = &m.algebra.characters()[0];
    assert_eq!(ch.name, "w");
    assert_eq!(ch.dlog10, m.algebra.zero::<GaussRat>().plus(&m.algebra.mono(Mono::holo(0), GaussRat::from_int(-1))));
    assert_eq!(ch.dlog01, ch.dlog10.conj().neg());
    assert_eq!(m.sectors.len(), 3);
}

#[test]
fn iwasawa_family_has_second_order_term() {
    let m = registry("iwasawa").unwrap();
    let phi = &m.curve("family").unwrap().phi;
    let z3 = phi.comp(2);
    let coeff = z3
        .coeff(&m.algebra.zero_weight(), Mono::anti(3, 2))
        .expect("~e3 @ Z3 term");
    assert_eq!(coeff, &m.function("-t^2*(a11*a22 - a12*a21)").unwrap());
}

#[test]
fn class_one_template_zeroes_entries() {
    let m = registry("nakamura-i").unwrap();
    let kur1 = m.curve("kur1").unwrap();
    let used: Vec<String> = kur1
        .phi
        .comps()
        .iter()
        .flat_map(|f| f.terms().flat_map(|(_, _, p)| p.variables()).collect::<Vec<_>>())
        .map(|v| m.table.name(v).to_string())
        .collect();
    for absent in ["a12", "a13", "a23", "a32"] {
        assert!(!used.iter().any(|u| u == absent), "{absent}");
    }
    assert!(used.iter().any(|u| u == "a11"));
}

#[test]
fn fundamental_form_is_11() {
    let m = registry("nakamura-ii").unwrap();
    for conv in [Convention::HermitianStandard, Convention::PaperLiteral] {
        let omega = m.metric_curve(m.default_metric().unwrap()).omega0(&m.algebra, conv);
        assert_eq!(omega.bidegree(), Bidegree::Pure(1, 1));
    }
    let top = m.form("e1^e2^~e1^~e2^~e3").unwrap();
    assert_eq!(top.bidegree(), Bidegree::Pure(2, 3));
    assert_eq!(m.form("0").unwrap().bidegree(), Bidegree::Any);
}

#[test]
fn conventions_parse_in_metric_blocks() {
    let m = parse_model("dim 1\nreal a\nmetric g convention paper-literal { a }\n").unwrap();
    assert_eq!(m.metrics[0].convention, Some(Convention::PaperLiteral));
    assert!(m.print().contains("metric g convention paper-literal {"));
}
