use std::fmt;

/// Wedge monomial `η^H ∧ η̄^A` stored as a bitmask over `2n` factor slots.
///
/// Bits `0..n` are the holomorphic factors `η^1..η^n`, bits `n..2n` the
/// antiholomorphic ones. Canonical order is ascending slot, so holomorphic
/// factors always come first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub u32);

/// Largest supported complex dimension.
pub const MAX_DIM: usize = 15;

impl Mono {
    pub const ONE: Mono = Mono(0);

    /// Holomorphic factor `η^k` (`k` is 0-based).
    pub fn holo(k: usize) -> Mono {
        Mono(1 << k)
    }

    /// Antiholomorphic factor `η̄^k` (`k` is 0-based).
    pub fn anti(n: usize, k: usize) -> Mono {
        Mono(1 << (n + k))
    }

    pub fn from_sets(n: usize, holo: &[usize], anti: &[usize]) -> Mono {
        let mut m = 0u32;
        for &k in holo {
            m |= 1 << k;
        }
        for &k in anti {
            m |= 1 << (n + k);
        }
        Mono(m)
    }

    pub fn holo_mask(self, n: usize) -> u32 {
        self.0 & ((1 << n) - 1)
    }

    pub fn anti_mask(self, n: usize) -> u32 {
        self.0 >> n
    }

    pub fn bidegree(self, n: usize) -> (usize, usize) {
        (
            self.holo_mask(n).count_ones() as usize,
            self.anti_mask(n).count_ones() as usize,
        )
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn holo_indices(self, n: usize) -> Vec<usize> {
        bits(self.holo_mask(n))
    }

    pub fn anti_indices(self, n: usize) -> Vec<usize> {
        bits(self.anti_mask(n))
    }

    pub fn slots(self) -> Vec<usize> {
        bits(self.0)
    }

    pub fn contains_slot(self, slot: usize) -> bool {
        self.0 & (1 << slot) != 0
    }

    /// Number of factors strictly before `slot` in canonical order.
    pub fn rank_of(self, slot: usize) -> usize {
        (self.0 & ((1u32 << slot) - 1)).count_ones() as usize
    }

    pub fn without_slot(self, slot: usize) -> Mono {
        Mono(self.0 & !(1 << slot))
    }

    /// `self ∧ other` as `(sign, product)`; `None` when a factor repeats.
    pub fn wedge(self, other: Mono) -> Option<(i32, Mono)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            inversions += (self.0 >> b).count_ones();
            rest &= rest - 1;
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, Mono(self.0 | other.0)))
    }

    /// Conjugate monomial with the reordering sign `(-1)^{pq}`.
    pub fn conj(self, n: usize) -> (i32, Mono) {
        let h = self.holo_mask(n);
        let a = self.anti_mask(n);
        let (p, q) = (h.count_ones(), a.count_ones());
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        (sign, Mono(a | (h << n)))
    }

    /// Graded-lex sort key on index sets.
    pub fn sort_key(self, n: usize) -> (usize, usize, Vec<usize>, Vec<usize>) {
        let (p, q) = self.bidegree(n);
        (p, q, self.holo_indices(n), self.anti_indices(n))
    }

    pub fn display(self, n: usize) -> MonoDisplay {
        MonoDisplay { mono: self, n }
    }
}

fn bits(mut m: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// All `k`-subsets of `0..n` as bitmasks, in lexicographic order of index lists.
pub fn subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Monomial basis of `(p,q)`-forms in graded-lex order.
pub fn basis(n: usize, p: usize, q: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    for h in subsets(n, p) {
        for a in subsets(n, q) {
            out.push(Mono(h | (a << n)));
        }
    }
    out
}

pub struct MonoDisplay {
    mono: Mono,
    n: usize,
}

impl fmt::Display for MonoDisplay {
    /// `e1^e2^~e3`; the empty monomial renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.0 == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for k in self.mono.holo_indices(self.n) {
            parts.push(format!("e{}", k + 1));
        }
        for k in self.mono.anti_indices(self.n) {
            parts.push(format!("~e{}", k + 1));
        }
        write!(f, "{}", parts.join("^"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_factor_vanishes() {
        assert!(Mono::holo(0).wedge(Mono::holo(0)).is_none());
    }

    #[test]
    fn parity_across_holomorphic_pair() {
        let n = 3;
        let e12 = Mono::holo(0).wedge(Mono::holo(1)).unwrap();
        assert_eq!(e12, (1, Mono::from_sets(n, &[0, 1], &[])));
        let left = Mono::anti(n, 0).wedge(e12.1).unwrap();
        let right = e12.1.wedge(Mono::anti(n, 0)).unwrap();
        assert_eq!(left, right);
        let (s, _) = Mono::holo(1).wedge(Mono::holo(0)).unwrap();
        assert_eq!(s, -1);
    }

    #[test]
    fn conj_of_mixed_pair() {
        let n = 3;
        // conj(e1^~e2) = ~e1^e2 = -e2^~e1
        let m = Mono::from_sets(n, &[0], &[1]);
        assert_eq!(m.conj(n), (-1, Mono::from_sets(n, &[1], &[0])));
    }

    #[test]
    fn basis_sizes() {
        let binom = |n: usize, k: usize| -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        };
        for n in 1..=4 {
            for p in 0..=n {
                for q in 0..=n {
                    assert_eq!(basis(n, p, q).len(), binom(n, p) * binom(n, q));
                }
            }
        }
    }

    #[test]
    fn rendering() {
        let n = 3;
        assert_eq!(
            Mono::from_sets(n, &[0, 1], &[2]).display(n).to_string(),
            "e1^e2^~e3"
        );
        assert_eq!(Mono::ONE.display(n).to_string(), "1");
    }
}
