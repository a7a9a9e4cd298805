//! `k`-step Markov measures and their 1-step recoding on `k`-blocks.

use alloc::vec;
use alloc::vec::Vec;

use super::MarkovMeasure;
use crate::error::{Error, Result};
use crate::sft::{format_word, Sft};

/// Conditional law of the next symbol given the preceding `k`-block.
#[derive(Debug, Clone, PartialEq)]
pub struct KStepConditionals {
    pub k: usize,
    pub alphabet_size: usize,
    /// `(block, probabilities of each next symbol)`
    pub rows: Vec<(Vec<u8>, Vec<f64>)>,
}

impl KStepConditionals {
    pub fn new(k: usize, alphabet_size: usize, rows: Vec<(Vec<u8>, Vec<f64>)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        for (block, probs) in &rows {
            if block.len() != k || block.iter().any(|&a| usize::from(a) >= alphabet_size) {
                return Err(Error::invalid(alloc::format!("'{}' is not a {k}-block", format_word(block))));
            }
            if probs.len() != alphabet_size || probs.iter().any(|&x| !x.is_finite() || x < 0.0) {
                return Err(Error::MalformedMatrix(alloc::format!("bad row for '{}'", format_word(block))));
            }
            if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::MalformedMatrix(alloc::format!("row for '{}' does not sum to 1", format_word(block))));
            }
        }
        Ok(KStepConditionals { k, alphabet_size, rows })
    }

    /// The `k`-step description of a measure: one row per `k`-block of
    /// positive measure.
    pub fn from_measure(m: &MarkovMeasure, k: usize) -> Result<Self> {
        if k < m.block_len() {
            return Err(Error::invalid("k must be at least the block length of the measure"));
        }
        let r = m.alphabet_size();
        let total = (r as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if total > 1 << 16 {
            return Err(Error::EnumerationCap { requested: total, cap: 1 << 16 });
        }
        let mut rows = Vec::new();
        let mut block = vec![0u8; k];
        for _ in 0..total {
            let mass = m.cylinder_measure(&block);
            if mass > 0.0 {
                let mut ext = block.clone();
                ext.push(0);
                let probs = (0..r as u8)
                    .map(|a| {
                        ext[k] = a;
                        m.cylinder_measure(&ext) / mass
                    })
                    .collect();
                rows.push((block.clone(), probs));
            }
            for slot in block.iter_mut().rev() {
                *slot += 1;
                if usize::from(*slot) < r {
                    break;
                }
                *slot = 0;
            }
        }
        let rows = rows
            .into_iter()
            .map(|(b, p): (Vec<u8>, Vec<f64>)| {
                let s: f64 = p.iter().sum();
                (b, p.into_iter().map(|x| x / s).collect())
            })
            .collect();
        Self::new(k, r, rows)
    }

    /// 1-step chain on the `k`-blocks. Blocks that are not words of `sft`
    /// are dropped; a positive probability leading out of `sft` is an error.
    pub fn recode(&self, sft: Option<&Sft>) -> Result<MarkovMeasure> {
        let rows: Vec<&(Vec<u8>, Vec<f64>)> = match sft {
            Some(s) => self.rows.iter().filter(|(b, _)| s.contains_word(b)).collect(),
            None => self.rows.iter().collect(),
        };
        let states: Vec<Vec<u8>> = rows.iter().map(|(b, _)| b.clone()).collect();
        let k = self.k;
        let mut p = vec![vec![0.0; states.len()]; states.len()];
        for (i, (block, probs)) in rows.iter().enumerate() {
            for (a, &x) in probs.iter().enumerate() {
                if x == 0.0 {
                    continue;
                }
                let mut word = block.clone();
                word.push(a as u8);
                if let Some(s) = sft {
                    if !s.contains_word(&word) {
                        return Err(Error::invalid(alloc::format!("'{}' has positive probability but is forbidden", format_word(&word))));
                    }
                }
                let Some(j) = states.iter().position(|t| t[..] == word[1..]) else {
                    return Err(Error::invalid(alloc::format!("no row for block '{}'", format_word(&word[1..]))));
                };
                p[i][j] = x;
            }
        }
        debug_assert!(states.iter().all(|s| s.len() == k));
        MarkovMeasure::with_states(k, self.alphabet_size, states, &p, None)
    }
}
