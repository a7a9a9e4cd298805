//! Index sets `S ⊂ n* = {0, ..., n-1}` as bitmasks.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::BitIter;

pub const MAX_HORIZON: usize = 64;

/// A subset of `{0, ..., n-1}` with `n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetSpec {
    n: u32,
    mask: u64,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl SubsetSpec {
    pub fn new(n: usize, mask: u64) -> Result<Self> {
        if n > MAX_HORIZON {
            return Err(Error::HorizonExceeded { requested: n, cap: MAX_HORIZON });
        }
        if mask & !full_mask(n) != 0 {
            return Err(Error::invalid(alloc::format!("mask {mask:#x} has bits outside 0..{n}")));
        }
        Ok(SubsetSpec { n: n as u32, mask })
    }

    pub fn from_elements(n: usize, elements: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in elements {
            if e >= n {
                return Err(Error::invalid(alloc::format!("element {e} outside 0..{n}")));
            }
            mask |= 1 << e;
        }
        Self::new(n, mask)
    }

    /// The whole horizon `n*`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, full_mask(n))
    }

    pub fn horizon(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.mask >> i & 1 == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        BitIter { bits: self.mask }
    }

    pub fn complement(&self) -> Self {
        SubsetSpec { n: self.n, mask: full_mask(self.n as usize) ^ self.mask }
    }

    /// Gaps `s_{i+1} - s_i` between consecutive elements.
    pub fn gaps(&self) -> Vec<usize> {
        let e: Vec<usize> = self.elements().collect();
        e.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Translate so the smallest element is 0; horizon is kept.
    pub fn canonical(&self) -> Self {
        if self.mask == 0 {
            return *self;
        }
        SubsetSpec { n: self.n, mask: self.mask >> self.mask.trailing_zeros() }
    }

    /// Maximal runs of consecutive elements as `(start, length)`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut m = self.mask;
        while m != 0 {
            let start = m.trailing_zeros() as usize;
            let len = (m >> start).trailing_ones() as usize;
            out.push((start, len));
            m &= !(full_mask(len) << start);
        }
        out
    }

    /// `S + w* = {s + j : s in S, 0 <= j < w}` on the horizon `n + w - 1`.
    pub fn dilate(&self, w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::invalid("window length must be positive"));
        }
        let horizon = self.n as usize + w - 1;
        if horizon > MAX_HORIZON {
            return Err(Error::HorizonExceeded { requested: horizon, cap: MAX_HORIZON });
        }
        let mut mask = 0u64;
        for j in 0..w {
            mask |= self.mask << j;
        }
        Self::new(horizon, mask)
    }

    pub fn is_subset_of(&self, other: &SubsetSpec) -> bool {
        self.mask & !other.mask == 0
    }
}

impl fmt::Display for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}/{}", self.n)
    }
}
