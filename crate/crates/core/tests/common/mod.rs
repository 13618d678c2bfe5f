#![allow(dead_code)]

use balobs_core::dsl::Model;
use balobs_core::scalars::Assignment;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Assignment with every unlisted variable set to zero.
pub fn assign(model: &Model, pairs: &[(&str, Complex64)]) -> Assignment {
    let mut a = Assignment::from_pairs(&model.table, pairs).unwrap();
    a.fill_missing(&model.table, c(0.0, 0.0));
    a
}

pub const IDENTITY_METRIC: [(&str, Complex64); 3] = [
    ("alpha11", Complex64::new(1.0, 0.0)),
    ("alpha22", Complex64::new(1.0, 0.0)),
    ("alpha33", Complex64::new(1.0, 0.0)),
];

/// Diagonally dominant sample of the generic metric.
pub fn sampled_metric(seed: u64) -> Vec<(&'static str, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for v in ["alpha11", "alpha22", "alpha33"] {
        out.push((v, c(rng.gen_range(1.5..3.0), 0.0)));
    }
    for v in ["alpha12", "alpha13", "alpha23"] {
        out.push((v, c(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))));
    }
    out
}

use balobs_core::forms::{basis, CoframeAlgebra, Form, Weight};

/// Random numeric `(p,q)`-form spread over `weights`.
pub fn random_form(
    alg: &CoframeAlgebra,
    weights: &[Weight],
    p: usize,
    q: usize,
    rng: &mut ChaCha8Rng,
) -> Form<Complex64> {
    let mut f = alg.zero();
    for w in weights {
        for m in basis(alg.dim(), p, q) {
            f.add_term(w.clone(), m, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    f
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generic small Iwasawa deformation direction.
pub const IWASAWA_DIRECTION: [(&str, Complex64); 6] = [
    ("a11", Complex64::new(0.15, 0.0)),
    ("a12", Complex64::new(0.25, -0.1)),
    ("a21", Complex64::new(0.05, 0.2)),
    ("a22", Complex64::new(-0.125, 0.0)),
    ("a31", Complex64::new(0.0, 0.1)),
    ("a32", Complex64::new(0.075, 0.0)),
];

use balobs_core::scalars::GaussRat;

/// Sparse random exact `(p,q)`-form with small Gaussian-integer coefficients.
pub fn random_exact_form(
    alg: &CoframeAlgebra,
    weights: &[Weight],
    p: usize,
    q: usize,
    rng: &mut ChaCha8Rng,
) -> Form<GaussRat> {
    let mut f = alg.zero();
    for w in weights {
        for m in basis(alg.dim(), p, q) {
            if rng.gen_bool(0.5) {
                let re = rng.gen_range(-3i64..=3);
                let im = rng.gen_range(-3i64..=3);
                f.add_term(w.clone(), m, GaussRat::from_parts((re, 1), (im, 2)));
            }
        }
    }
    f
}

/// All weights with entries in `-1..=1`.
pub fn small_weights(nchars: usize) -> Vec<Weight> {
    let mut out = vec![Weight::zero(nchars)];
    for k in 0..nchars {
        let mut next = Vec::new();
        for w in &out {
            for e in [-1, 1] {
                let mut v = w.clone();
                v.0[k] = e;
                next.push(v);
            }
        }
        out.extend(next);
    }
    out
}
