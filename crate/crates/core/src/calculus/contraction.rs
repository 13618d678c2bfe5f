use super::vform::{interior, VForm};
use crate::forms::{CoframeAlgebra, Form, Mono};
use crate::scalars::{Coeff, GaussRat};

/// How [`CoframeAlgebra::substitute`] rewrites one factor slot.
#[derive(Clone, Debug)]
pub enum SlotRule<C> {
    Keep,
    /// `η^s ↦ η^s + delta`.
    Shift(Form<C>),
    /// `η^s ↦ image`.
    Replace(Form<C>),
}

impl CoframeAlgebra {
    /// `i_φ α = Σ_i φ^i ∧ i_{Z_i} α`.
    pub fn contract<C: Coeff>(&self, phi: &VForm<C>, alpha: &Form<C>) -> Form<C> {
        let n = self.dim();
        let mut out = self.zero();
        for (i, p) in phi.comps().iter().enumerate() {
            if !p.is_zero() {
                out.add_assign(&p.wedge(&interior(n, i, alpha)));
            }
        }
        out
    }

    /// `i_φ̄ α = Σ_i conj(φ^i) ∧ i_{Z̄_i} α`.
    pub fn contract_bar<C: Coeff>(&self, phi: &VForm<C>, alpha: &Form<C>) -> Form<C> {
        let n = self.dim();
        let mut out = self.zero();
        for (i, p) in phi.conj_comps().iter().enumerate() {
            if !p.is_zero() {
                out.add_assign(&p.wedge(&interior(n, n + i, alpha)));
            }
        }
        out
    }

    /// Factorwise substitution: every factor in slot `s` of every monomial is
    /// rewritten according to `rules[s]` (one rule per slot, `2n` in total).
    pub fn substitute<C: Coeff>(&self, alpha: &Form<C>, rules: &[SlotRule<C>]) -> Form<C> {
        let n = self.dim();
        assert_eq!(rules.len(), 2 * n, "substitution needs one rule per factor slot");
        let mut out = self.zero();
        for (w, m, c) in alpha.terms() {
            let mut acc = Form::term(n, w.clone(), Mono::ONE, c.clone());
            for s in m.slots() {
                acc = match &rules[s] {
                    SlotRule::Keep => append_slot(&acc, s),
                    SlotRule::Shift(d) => {
                        let mut next = append_slot(&acc, s);
                        if !d.is_zero() {
                            next.add_assign(&acc.wedge(d));
                        }
                        next
                    }
                    SlotRule::Replace(img) => acc.wedge(img),
                };
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// `(I + φ + φ̄) ⨼ α`: each `η^i` becomes `η^i + φ^i` and each `η̄^i`
    /// becomes `η̄^i + conj(φ^i)`, simultaneously.
    pub fn simcontract<C: Coeff>(&self, phi: &VForm<C>, alpha: &Form<C>) -> Form<C> {
        let rules: Vec<SlotRule<C>> = phi
            .comps()
            .iter()
            .cloned()
            .chain(phi.conj_comps())
            .map(SlotRule::Shift)
            .collect();
        self.substitute(alpha, &rules)
    }

    /// `e^{i_φ | i_φ̄}`: the exponential of `i_φ` on the holomorphic part of
    /// each monomial wedged with that of `i_φ̄` on the antiholomorphic part.
    pub fn extension_map<C: Coeff>(&self, phi: &VForm<C>, alpha: &Form<C>) -> Form<C> {
        let n = self.dim();
        let mut out = self.zero();
        for (w, m, c) in alpha.terms() {
            let holo = Form::term(n, w.clone(), Mono(m.holo_mask(n)), c.clone());
            let anti = Form::term(
                n,
                self.zero_weight(),
                Mono(m.anti_mask(n) << n),
                c.unit_like(),
            );
            let eh = exp_series(&holo, |f| self.contract(phi, f));
            let ea = exp_series(&anti, |f| self.contract_bar(phi, f));
            out.add_assign(&eh.wedge(&ea));
        }
        out
    }
}

/// `Σ_k op^k(f) / k!`, stopping when a power vanishes.
fn exp_series<C: Coeff>(f: &Form<C>, op: impl Fn(&Form<C>) -> Form<C>) -> Form<C> {
    let mut acc = f.clone();
    let mut power = f.clone();
    let mut k = 1i64;
    loop {
        power = op(&power).scale_rat(&GaussRat::from_ratio(1, k));
        if power.is_zero() {
            return acc;
        }
        acc.add_assign(&power);
        k += 1;
    }
}

/// `f ∧ η^slot`.
fn append_slot<C: Coeff>(f: &Form<C>, slot: usize) -> Form<C> {
    let mut out = Form::zero(f.dim(), f.nchars());
    let e = Mono(1 << slot);
    for (w, m, c) in f.terms() {
        if let Some((s, prod)) = m.wedge(e) {
            out.add_term(w.clone(), prod, if s < 0 { c.negated() } else { c.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Weight;

    fn r(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    fn abelian() -> CoframeAlgebra {
        CoframeAlgebra::new(3, vec![Form::zero(3, 0); 3], vec![]).unwrap()
    }

    fn phi11(a: &CoframeAlgebra, c: GaussRat) -> VForm<GaussRat> {
        let mut comps = vec![a.zero(); 3];
        comps[0] = a.mono(Mono::anti(3, 0), c);
        VForm::new(comps)
    }

    #[test]
    fn dual_pairing() {
        let a = abelian();
        let phi = phi11(&a, r(1));
        let e1 = a.mono(Mono::holo(0), r(1));
        let e2 = a.mono(Mono::holo(1), r(1));
        assert_eq!(a.contract(&phi, &e1), a.mono(Mono::anti(3, 0), r(1)));
        assert!(a.contract(&phi, &e2).is_zero());
    }

    #[test]
    fn single_factor_simcontract() {
        let a = abelian();
        let c = GaussRat::from_parts((1, 3), (2, 1));
        let phi = phi11(&a, c.clone());
        let e1 = a.mono(Mono::holo(0), r(1));
        let expected = e1.plus(&a.mono(Mono::anti(3, 0), c));
        assert_eq!(a.simcontract(&phi, &e1), expected);
        assert_eq!(a.extension_map(&phi, &e1), expected);
    }

    #[test]
    fn zero_phi_is_identity() {
        let a = abelian();
        let phi = VForm::zero(3, 0);
        let f = a
            .mono(Mono::from_sets(3, &[0, 2], &[1]), r(2))
            .plus(&Form::term(3, Weight::zero(0), Mono::ONE, r(5)));
        assert_eq!(a.simcontract(&phi, &f), f);
        assert_eq!(a.extension_map(&phi, &f), f);
    }
}
