//! Subset averages over a table indexed by translation classes.
//!
//! Every quantity averaged here is shift invariant, so it is tabulated once
//! per canonical subset `T` (smallest element 0). Index `i` of a table stands
//! for the mask `(i << 1) | 1`; a table built for horizon `N` serves every
//! `n <= N` through its first `2^(n-1)` entries.

use alloc::vec;
use alloc::vec::Vec;

use crate::coeffs::CoefficientSystem;
use crate::error::{Error, Result};
#[cfg(test)]
use crate::linalg::BitIter;
use crate::numeric::{ln, ChunkedSum};
use crate::sft::Sft;
use crate::subset::full_mask;

/// Hard ceiling on table horizons (a table holds `2^(n-1)` doubles).
pub const MAX_TABLE_HORIZON: usize = 26;

#[inline]
pub(crate) fn canonical_index(mask: u64) -> usize {
    debug_assert!(mask != 0);
    ((mask >> mask.trailing_zeros()) >> 1) as usize
}

#[inline]
fn mask_of(index: usize) -> u64 {
    ((index as u64) << 1) | 1
}

/// Averages of a shift-invariant set function `v` with `v(∅) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Averages {
    /// `(1/n) Σ_S c v(S)`
    pub asc: f64,
    /// `(1/n) Σ_S c (v(S) + v(S^c) - v(n*))`
    pub int: f64,
    /// `(1/n) Σ_{S ∋ 0} c v(S)`
    pub acc: f64,
    /// `v(n*)`
    pub full: f64,
}

pub(crate) fn averages(n: usize, coeffs: &CoefficientSystem, v: &[f64]) -> Result<Averages> {
    if n == 0 {
        return Err(Error::invalid("horizon must be positive"));
    }
    if v.len() < 1 << (n - 1) {
        return Err(Error::invalid("value table shorter than the horizon requires"));
    }
    let c = coeffs.row(n)?;
    let classes = 1usize << (n - 1);
    let mut asc = ChunkedSum::new();
    let mut acc = ChunkedSum::new();
    for (i, &val) in v[..classes].iter().enumerate() {
        let m = mask_of(i);
        let width = 64 - m.leading_zeros() as usize;
        let term = c[m.count_ones() as usize] * val;
        acc.push(term);
        asc.push((n - width + 1) as f64 * term);
    }
    let full_m = full_mask(n);
    let full = v[canonical_index(full_m)];
    let mut int = ChunkedSum::new();
    for s in 1..full_m {
        let comp = full_m ^ s;
        int.push(c[s.count_ones() as usize] * (v[canonical_index(s)] + v[canonical_index(comp)] - full));
    }
    let nf = n as f64;
    Ok(Averages { asc: asc.total() / nf, int: int.total() / nf, acc: acc.total() / nf, full })
}

/// `2^-n Σ_S x(S)` where `x` is tabulated by class and `x(∅) = 1`.
pub(crate) fn uniform_plain_sum(n: usize, x: &[f64]) -> f64 {
    let classes = 1usize << (n - 1);
    let mut s = ChunkedSum::new();
    s.push(1.0);
    for (i, &val) in x[..classes].iter().enumerate() {
        let m = mask_of(i);
        let width = 64 - m.leading_zeros() as usize;
        s.push((n - width + 1) as f64 * val);
    }
    s.total() / libm::ldexp(1.0, n as i32)
}

pub(crate) fn log_table(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| ln(v)).collect()
}

/// Weighted path sums `Σ_{w ∈ L_{T + w*}} Π e^{f(w_i)}` for every canonical
/// class `T` of horizon `n`; `weight[a] = e^{f(a)}`.
pub(crate) fn path_table(sft: &Sft, n: usize, window: usize, weight: &[f64]) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_TABLE_HORIZON {
        return Err(Error::HorizonExceeded { requested: n, cap: MAX_TABLE_HORIZON });
    }
    let classes = 1usize << (n - 1);
    let mut out = vec![0.0; classes];
    if window <= 1 && sft.is_label_injective() {
        let states = sft.state_count();
        let sw: Vec<f64> = sft.labels().iter().map(|&l| weight[usize::from(l)]).collect();
        let mut scratch = vec![vec![0.0; states]; n];
        scratch[0].copy_from_slice(&sw);
        dfs(sft, &sw, 0, 0, n, &mut scratch, &mut out);
    } else {
        let w = window.max(1);
        for (i, slot) in out.iter_mut().enumerate() {
            let m = mask_of(i);
            let mut dil = 0u128;
            for j in 0..w {
                dil |= u128::from(m) << j;
            }
            let elements: Vec<usize> = (0..128).filter(|&b| dil >> b & 1 == 1).collect();
            *slot = sft.weighted_paths(&elements, weight);
        }
    }
    Ok(out)
}

fn dfs(sft: &Sft, sw: &[f64], pos: usize, idx: usize, n: usize, scratch: &mut [Vec<f64>], out: &mut [f64]) {
    let (cur, rest) = scratch.split_at_mut(1);
    let u = &cur[0];
    out[idx] = u.iter().sum();
    if rest.is_empty() {
        return;
    }
    for next in pos + 1..n {
        let r = sft.reach(next - pos);
        let child = &mut rest[0];
        child.iter_mut().for_each(|x| *x = 0.0);
        for (a, &ua) in u.iter().enumerate() {
            if ua != 0.0 {
                for b in r.row_ones(a) {
                    child[b] += ua;
                }
            }
        }
        for (x, w) in child.iter_mut().zip(sw) {
            *x *= w;
        }
        dfs(sft, sw, next, idx | 1 << (next - 1), n, rest, out);
    }
}

#[cfg(test)]
/// Elements of the mask for class `index`.
pub(crate) fn class_elements(index: usize) -> impl Iterator<Item = usize> {
    BitIter { bits: mask_of(index) }
}
