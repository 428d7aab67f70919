use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::CompensatedSum;

/// Exact counts indexed by a small non-negative value (an `omega`).
///
/// `total` always equals the sum of the bins; merging adds bin-wise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    bins: Vec<u64>,
    total: u64,
    pub label: String,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_label(label: impl Into<String>) -> Self {
        Histogram { label: label.into(), ..Self::default() }
    }

    #[inline]
    pub fn add(&mut self, value: u32) {
        self.add_count(value, 1);
    }

    pub fn add_count(&mut self, value: u32, count: u64) {
        let i = value as usize;
        if i >= self.bins.len() {
            self.bins.resize(i + 1, 0);
        }
        self.bins[i] += count;
        self.total += count;
    }

    /// Bin-wise sum; the label of `self` is kept.
    pub fn merge(&mut self, other: &Histogram) {
        if other.bins.len() > self.bins.len() {
            self.bins.resize(other.bins.len(), 0);
        }
        for (dst, &src) in self.bins.iter_mut().zip(&other.bins) {
            *dst += src;
        }
        self.total += other.total;
    }

    pub fn get(&self, value: u32) -> u64 {
        self.bins.get(value as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Largest value with a non-zero count.
    pub fn max_value(&self) -> Option<u32> {
        self.bins.iter().rposition(|&c| c > 0).map(|i| i as u32)
    }

    pub fn min_value(&self) -> Option<u32> {
        self.bins.iter().position(|&c| c > 0).map(|i| i as u32)
    }

    /// Non-zero `(value, count)` pairs in increasing value order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.bins.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i as u32, c))
    }

    /// `(1/total) sum count(v) (v - center)^k`, summed in increasing `v`.
    pub fn moment_about(&self, center: f64, k: u32) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::Empty);
        }
        let sum: CompensatedSum =
            self.iter().map(|(v, c)| c as f64 * libm::pow(f64::from(v) - center, f64::from(k))).collect();
        Ok(sum.value() / self.total as f64)
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment_about(0.0, 1)
    }
}

impl FromIterator<u32> for Histogram {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for v in iter {
            h.add(v);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_merge() {
        let mut a: Histogram = [1, 1, 2, 5].into_iter().collect();
        let b: Histogram = [0, 2, 7].into_iter().collect();
        a.merge(&b);
        assert_eq!(a.total(), 7);
        assert_eq!(a.get(2), 2);
        assert_eq!(a.get(7), 1);
        assert_eq!(a.get(100), 0);
        assert_eq!(a.iter().map(|(_, c)| c).sum::<u64>(), a.total());
        assert_eq!(a.max_value(), Some(7));
        assert_eq!(a.min_value(), Some(0));
    }

    #[test]
    fn merge_is_order_independent() {
        let parts: Vec<Histogram> = (0..5u32).map(|i| (i..i + 4).collect()).collect();
        let mut fwd = Histogram::new();
        parts.iter().for_each(|h| fwd.merge(h));
        let mut rev = Histogram::new();
        parts.iter().rev().for_each(|h| rev.merge(h));
        assert_eq!(fwd, rev);
    }

    #[test]
    fn moments() {
        let h: Histogram = [2, 4].into_iter().collect();
        assert_eq!(h.moment_about(1.0, 2).unwrap(), 5.0);
        assert_eq!(h.mean().unwrap(), 3.0);
        assert_eq!(Histogram::new().mean(), Err(Error::Empty));
    }
}
