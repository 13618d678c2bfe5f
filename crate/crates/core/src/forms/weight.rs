use std::ops::{Add, Neg};

/// Exponent vector over the declared characters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Weight(pub Vec<i32>);

impl Weight {
    pub fn zero(nchars: usize) -> Self {
        Weight(vec![0; nchars])
    }

    pub fn unit(nchars: usize, c: usize) -> Self {
        let mut w = Weight::zero(nchars);
        w.0[c] = 1;
        w
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w`, `~w`, `w^2`, `w ~v`; empty string for the zero weight.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (k, &e) in self.0.iter().enumerate() {
            let name = names.get(k).map(String::as_str).unwrap_or("?");
            let base = if e < 0 { format!("~{name}") } else { name.to_string() };
            match e.unsigned_abs() {
                0 => {}
                1 => parts.push(base),
                m => parts.push(format!("{base}^{m}")),
            }
        }
        parts.join(" ")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}
