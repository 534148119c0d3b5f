//! Monomials in the jet variables `u_(1), u_(2), ...` and their ranking.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `(i_1, ..., i_m)` of `u_(1)^{i_1} ... u_(m)^{i_m}`.
///
/// Trailing zeros are always trimmed, so equal monomials compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetMonomial(Vec<u32>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        JetMonomial(exps)
    }

    /// The single jet variable `u_(k)`, `k >= 1`.
    pub fn var(k: usize) -> Self {
        assert!(k >= 1, "u itself is a coefficient symbol, not a jet variable");
        let mut v = vec![0; k];
        v[k - 1] = 1;
        JetMonomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of `u_(k)`.
    pub fn exp(&self, k: usize) -> u32 {
        if k == 0 {
            return 0;
        }
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    /// Highest jet order present (0 for the empty monomial).
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum()
    }

    pub fn total_power(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0)).collect();
        JetMonomial::new(v)
    }

    /// Multiplies by `u_(k)^p`.
    pub fn times_var(&self, k: usize, p: u32) -> Self {
        let mut v = self.0.clone();
        if v.len() < k {
            v.resize(k, 0);
        }
        v[k - 1] += p;
        JetMonomial::new(v)
    }

    /// Divides by one factor of `u_(k)`; `None` if absent.
    pub fn div_var(&self, k: usize) -> Option<Self> {
        if self.exp(k) == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[k - 1] -= 1;
        Some(JetMonomial::new(v))
    }

    pub fn divisible_by_ux(&self) -> bool {
        self.exp(1) > 0
    }

    /// All monomials of the given degree.
    pub fn all_of_degree(d: u32) -> Vec<JetMonomial> {
        fn rec(rem: u32, max_part: u32, acc: &mut Vec<u32>, out: &mut Vec<JetMonomial>) {
            if rem == 0 {
                let mut exps = vec![0u32; acc.first().copied().unwrap_or(0) as usize];
                for &p in acc.iter() {
                    exps[p as usize - 1] += 1;
                }
                out.push(JetMonomial::new(exps));
                return;
            }
            for p in (1..=max_part.min(rem)).rev() {
                acc.push(p);
                rec(rem - p, p, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| rank_compare(b, a));
        out
    }
}

/// Ranking of monomials. Monomials of different degree compare by degree;
/// within a degree the monomial with the larger exponent at the highest
/// differing derivative ranks higher.
pub fn rank_compare(m1: &JetMonomial, m2: &JetMonomial) -> Ordering {
    m1.degree().cmp(&m2.degree()).then_with(|| reverse_lex(m1, m2))
}

/// The within-degree rule alone: compare exponents from the highest
/// derivative downwards.
pub fn reverse_lex(m1: &JetMonomial, m2: &JetMonomial) -> Ordering {
    let n = m1.order().max(m2.order());
    for k in (1..=n).rev() {
        match m1.exp(k).cmp(&m2.exp(k)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Name of the k-th jet variable in subscript style.
pub fn jet_name(k: usize) -> String {
    match k {
        0 => "u".to_string(),
        1..=3 => format!("u_{}", "x".repeat(k)),
        _ => format!("u_{k}x"),
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for k in (1..=self.0.len()).rev() {
            let e = self.exp(k);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", jet_name(k))?;
            } else {
                write!(f, "{}^{e}", jet_name(k))?;
            }
        }
        Ok(())
    }
}
