//! Brute-force reference computations.
//!
//! Nothing here touches the reachability matrices: words are generated as
//! strings, filtered against the forbidden list, and projected explicitly.
//! These routines exist to cross-check the fast paths and are exponential.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::markov::MarkovMeasure;
use crate::numeric::xlogx;
use crate::sft::Sft;
use crate::subset::SubsetSpec;

/// Default cap on `r^n` for enumeration.
pub const DEFAULT_CAP: u128 = 10_000_000;
pub const MAX_ORACLE_N: usize = 20;

fn avoids(word: &[u8], forbidden: &[Vec<u8>]) -> bool {
    !forbidden.iter().any(|f| word.windows(f.len()).any(|x| x == f.as_slice()))
}

fn all_words(r: usize, len: usize, cap: u128) -> Result<Vec<Vec<u8>>> {
    let total = (r as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::EnumerationCap { requested: total, cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut w = vec![0u8; len];
    for _ in 0..total {
        out.push(w.clone());
        for slot in w.iter_mut().rev() {
            *slot += 1;
            if usize::from(*slot) < r {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// Blocks of length `b` that admit an infinite continuation in the given
/// direction, as a greatest fixed point over strings.
fn extendable_blocks(r: usize, b: usize, forbidden: &[Vec<u8>], forward: bool) -> Result<BTreeSet<Vec<u8>>> {
    let mut set: BTreeSet<Vec<u8>> = all_words(r, b, DEFAULT_CAP)?.into_iter().filter(|w| avoids(w, forbidden)).collect();
    loop {
        let keep: BTreeSet<Vec<u8>> = set
            .iter()
            .filter(|blk| {
                (0..r as u8).any(|a| {
                    let joined: Vec<u8> = if forward {
                        blk.iter().copied().chain(core::iter::once(a)).collect()
                    } else {
                        core::iter::once(a).chain(blk.iter().copied()).collect()
                    };
                    let next = if forward { &joined[1..] } else { &joined[..b] };
                    avoids(&joined, forbidden) && set.contains(next)
                })
            })
            .cloned()
            .collect();
        if keep.len() == set.len() {
            return Ok(set);
        }
        set = keep;
    }
}

/// All words of length `n` occurring in points of the shift, in
/// lexicographic order.
pub fn enumerate_words_oracle(sft: &Sft, n: usize) -> Result<Vec<Vec<u8>>> {
    enumerate_with_cap(sft, n, DEFAULT_CAP)
}

pub fn enumerate_with_cap(sft: &Sft, n: usize, cap: u128) -> Result<Vec<Vec<u8>>> {
    if n > MAX_ORACLE_N {
        return Err(Error::HorizonExceeded { requested: n, cap: MAX_ORACLE_N });
    }
    let r = sft.alphabet_size();
    let forbidden = sft.forbidden_words();
    let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
    let b = longest.saturating_sub(1).max(1);
    let fwd = extendable_blocks(r, b, forbidden, true)?;
    let bwd = extendable_blocks(r, b, forbidden, false)?;
    let m = n.max(b);
    let mut out = BTreeSet::new();
    for w in all_words(r, m, cap)? {
        if avoids(&w, forbidden) && bwd.contains(&w[..b]) && fwd.contains(&w[m - b..]) {
            out.insert(w[..n].to_vec());
        }
    }
    Ok(out.into_iter().collect())
}

/// `N(S)` by projecting every word of `L_n` onto `S`.
pub fn count_words_at_oracle(sft: &Sft, s: &SubsetSpec) -> Result<u128> {
    let words = enumerate_words_oracle(sft, s.horizon())?;
    let idx: Vec<usize> = s.elements().collect();
    let proj: BTreeSet<Vec<u8>> = words.iter().map(|w| idx.iter().map(|&i| w[i]).collect()).collect();
    Ok(proj.len().max(1) as u128)
}

/// `sum over w in L_S(X) of exp(sum_i f(w_i))` by enumeration.
pub fn weighted_count_oracle(sft: &Sft, weights: &[f64], s: &SubsetSpec) -> Result<f64> {
    let words = enumerate_words_oracle(sft, s.horizon())?;
    let idx: Vec<usize> = s.elements().collect();
    let proj: BTreeSet<Vec<u8>> = words.iter().map(|w| idx.iter().map(|&i| w[i]).collect()).collect();
    Ok(proj.iter().map(|w| w.iter().map(|&a| weights[usize::from(a)]).product::<f64>()).sum())
}

/// `H_mu(alpha_S)` from the joint law of the symbols at `S`, obtained by
/// summing cylinder measures of all words of length `max(S) + 1`.
pub fn joint_entropy_oracle(m: &MarkovMeasure, s: &SubsetSpec) -> Result<f64> {
    let Some(last) = s.elements().last() else {
        return Ok(0.0);
    };
    let idx: Vec<usize> = s.elements().collect();
    let mut law: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
    for w in all_words(m.alphabet_size(), last + 1, DEFAULT_CAP)? {
        let mass = m.cylinder_measure(&w);
        if mass > 0.0 {
            *law.entry(idx.iter().map(|&i| w[i]).collect()).or_insert(0.0) += mass;
        }
    }
    Ok(-law.values().map(|&q| xlogx(q)).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::examples::*;

    #[test]
    fn golden_mean_words() {
        let gm = golden_mean();
        let w = enumerate_words_oracle(&gm, 3).unwrap();
        assert_eq!(w, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 1]]);
        assert_eq!(count_words_at_oracle(&gm, &SubsetSpec::from_elements(3, &[0, 2]).unwrap()).unwrap(), 4);
    }

    #[test]
    fn table_pair_oracle() {
        let [_, two] = same_complexity_pair();
        let s = SubsetSpec::from_elements(4, &[0, 1, 3]).unwrap();
        assert_eq!(count_words_at_oracle(&two, &s).unwrap(), 11);
        let f = full_shift(2);
        assert_eq!(count_words_at_oracle(&f, &SubsetSpec::from_elements(5, &[1, 3, 4]).unwrap()).unwrap(), 8);
    }

    #[test]
    fn stranded_symbols_do_not_appear() {
        // symbol 2 can be entered but never left
        let s = Sft::from_adjacency(&[vec![1, 1, 1], vec![1, 1, 0], vec![0, 0, 0]]).unwrap();
        let w = enumerate_words_oracle(&s, 2).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|x| !x.contains(&2)));
    }

    #[test]
    fn cap_is_enforced() {
        let f = full_shift(10);
        assert!(matches!(enumerate_with_cap(&f, 8, 1000), Err(Error::EnumerationCap { .. })));
        assert!(enumerate_words_oracle(&f, 21).is_err());
    }
}
