//! Multi-indices `I = (i₀, …, iₙ) ∈ ℕⁿ⁺¹` for σ-monomials `σ⃗(x)^I`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::rho::{rho_length, LinOp};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// The index with a single 1 at position `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `|I| = Σ iⱼ`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&i| i == 0)
    }

    /// `|I|_ρ`.
    pub fn rho_length(&self) -> LinOp {
        rho_length(&self.0)
    }

    /// Product order `I ≤ J`.
    pub fn below(&self, other: &MultiIndex) -> bool {
        (0..self.len().max(other.len())).all(|i| self.get(i) <= other.get(i))
    }

    /// Strict product order `I < J`.
    pub fn strictly_below(&self, other: &MultiIndex) -> bool {
        self != other && self.below(other)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let n = self.len().max(other.len());
        MultiIndex((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    /// `self − other`, defined when `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let n = self.len().max(other.len());
        (0..n)
            .map(|i| self.get(i).checked_sub(other.get(i)))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Pads or truncates (truncation only drops zero entries) to `len`.
    pub fn resized(&self, len: usize) -> MultiIndex {
        debug_assert!(self.0.iter().skip(len).all(|&i| i == 0));
        MultiIndex((0..len).map(|i| self.get(i)).collect())
    }

    /// `C(K, I) = Π C(kⱼ, iⱼ)`; zero unless `I ≤ K`.
    pub fn binomial(top: &MultiIndex, bottom: &MultiIndex) -> BigInt {
        let n = top.len().max(bottom.len());
        let mut acc = BigInt::one();
        for j in 0..n {
            let (k, i) = (top.get(j), bottom.get(j));
            if i > k {
                return BigInt::from(0);
            }
            acc *= binomial(k, i);
        }
        acc
    }

    /// Every `J` with `J ≤ self` componentwise.
    pub fn box_below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &k in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=k).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        let k = MultiIndex::new(vec![3, 2]);
        let i = MultiIndex::new(vec![1, 1]);
        assert_eq!(MultiIndex::binomial(&k, &i), BigInt::from(6));
        assert_eq!(MultiIndex::binomial(&i, &k), BigInt::from(0));
    }

    #[test]
    fn product_order_and_box() {
        let a = MultiIndex::new(vec![1, 0]);
        let b = MultiIndex::new(vec![1, 1]);
        let c = MultiIndex::new(vec![0, 1]);
        assert!(a.strictly_below(&b) && c.strictly_below(&b));
        assert!(!a.below(&c) && !c.below(&a));
        assert_eq!(b.box_below().len(), 4);
        assert_eq!(b.checked_sub(&a), Some(c.clone()));
        assert_eq!(a.checked_sub(&b), None);
    }
}
