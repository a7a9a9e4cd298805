//! Small numeric helpers: deterministic summation, `x log x`, exact binomials
//! and unbounded path counters.

use alloc::vec::Vec;
use core::cmp::Ordering;

/// Natural logarithm.
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * ln(x)
    } else {
        0.0
    }
}

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// slice length, so the result is reproducible.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Streaming sum with a fixed reduction shape: values are folded
/// sequentially into chunks of [`ChunkedSum::CHUNK`] and the chunk totals are
/// combined pairwise. Two accumulators fed the same sequence agree bit for bit.
#[derive(Debug, Clone, Default)]
pub struct ChunkedSum {
    chunks: Vec<f64>,
    current: f64,
    filled: usize,
}

impl ChunkedSum {
    pub const CHUNK: usize = 4096;

    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.current += x;
        self.filled += 1;
        if self.filled == Self::CHUNK {
            self.chunks.push(self.current);
            self.current = 0.0;
            self.filled = 0;
        }
    }

    pub fn total(&self) -> f64 {
        if self.chunks.is_empty() {
            return self.current;
        }
        let mut all = self.chunks.clone();
        if self.filled > 0 {
            all.push(self.current);
        }
        pairwise_sum(&all)
    }
}

/// Exact binomial coefficient; `None` on overflow (never for `n <= 128`
/// and `k` near `n/2` only past `n = 130`).
pub fn binomial(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Additive counter used for path counting through 0/1 matrices.
pub trait Count: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    /// `self += other`; returns `false` on overflow.
    fn add_assign_checked(&mut self, other: &Self) -> bool;
    fn is_zero(&self) -> bool;
}

impl Count for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    #[inline]
    fn add_assign_checked(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

/// Arbitrary-precision unsigned integer supporting only what path counting
/// needs: addition, comparison and a logarithm.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigCount {
    // little-endian limbs, no trailing zeros
    limbs: Vec<u64>,
}

impl BigCount {
    pub fn from_u128(v: u128) -> Self {
        let mut limbs = alloc::vec![v as u64, (v >> 64) as u64];
        trim(&mut limbs);
        BigCount { limbs }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(u128::from(self.limbs[0])),
            2 => Some(u128::from(self.limbs[0]) | (u128::from(self.limbs[1]) << 64)),
            _ => None,
        }
    }

    pub fn bits(&self) -> u32 {
        match self.limbs.last() {
            None => 0,
            Some(top) => (self.limbs.len() as u32) * 64 - top.leading_zeros(),
        }
    }

    /// Nearest `f64`; saturates to infinity beyond the `f64` range.
    pub fn to_f64(&self) -> f64 {
        let bits = self.bits();
        if bits <= 128 {
            return self.to_u128().unwrap_or(0) as f64;
        }
        let shift = bits - 128;
        let top = self.shr_to_u128(shift) as f64;
        top * libm::pow(2.0, f64::from(shift))
    }

    pub fn ln(&self) -> f64 {
        let bits = self.bits();
        if bits <= 128 {
            return ln(self.to_u128().unwrap_or(0) as f64);
        }
        let shift = bits - 128;
        ln(self.shr_to_u128(shift) as f64) + f64::from(shift) * core::f64::consts::LN_2
    }

    fn shr_to_u128(&self, shift: u32) -> u128 {
        let limb = (shift / 64) as usize;
        let off = shift % 64;
        let mut out: u128 = 0;
        for i in 0..3u32 {
            let w = self.limbs.get(limb + i as usize).copied().unwrap_or(0) as u128;
            let sh = 64 * i as i32 - off as i32;
            if sh >= 128 {
                continue;
            }
            out |= if sh < 0 { w >> (-sh) } else { w << sh };
        }
        out
    }
}

fn trim(limbs: &mut Vec<u64>) {
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
}

impl Count for BigCount {
    fn zero() -> Self {
        BigCount { limbs: Vec::new() }
    }
    fn one() -> Self {
        BigCount { limbs: alloc::vec![1] }
    }
    fn add_assign_checked(&mut self, other: &Self) -> bool {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        let mut carry = 0u64;
        for i in 0..self.limbs.len() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            let (s1, c1) = self.limbs[i].overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry);
            self.limbs[i] = s2;
            carry = u64::from(c1) + u64::from(c2);
            if carry == 0 && i >= other.limbs.len() {
                break;
            }
        }
        if carry > 0 {
            self.limbs.push(carry);
        }
        true
    }
    fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }
}

impl PartialOrd for BigCount {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigCount {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

/// Binomial coefficient as `f64` (exact integer converted once).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n as u32, k as u32).map(|b| b as f64).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(64, 32), Some(1_832_624_140_942_590_534));
        assert_eq!(binomial(3, 4), Some(0));
    }

    #[test]
    fn xlogx_zero() {
        assert_eq!(xlogx(0.0), 0.0);
        assert!((xlogx(0.5) + 0.5 * core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn bigcount_add_and_ln() {
        let mut a = BigCount::from_u128(u128::MAX);
        assert!(a.add_assign_checked(&BigCount::one()));
        assert_eq!(a.bits(), 129);
        assert!((a.ln() - 128.0 * core::f64::consts::LN_2).abs() < 1e-12);
        let mut b = BigCount::from_u128(7);
        b.add_assign_checked(&BigCount::from_u128(5));
        assert_eq!(b.to_u128(), Some(12));
        assert!(a > b);
    }

    #[test]
    fn chunked_sum_matches_order_independent_of_chunks() {
        let vals: Vec<f64> = (0..10_000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let mut s = ChunkedSum::new();
        for v in &vals {
            s.push(*v);
        }
        let direct: f64 = vals.iter().sum();
        assert!((s.total() - direct).abs() < 1e-12);
    }
}
