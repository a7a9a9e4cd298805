//! Markov measures on shifts of finite type.
//!
//! A `k`-step measure is stored as a 1-step chain on overlapping `k`-blocks.
//! The symbol observed at time `t` is the last symbol of the block state at
//! time `t`, so for `k = 1` states and symbols coincide.

mod recode;
mod sampled;
mod series;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};
use crate::numeric::xlogx;
use crate::sft::{format_word, Sft};

pub use recode::KStepConditionals;
pub use sampled::{
    asc_finite, monte_carlo_asc, monte_carlo_chunk, sampled_joint_entropy, summarize_samples, McEstimate,
    SampledEntropyResult, MAX_MC_HORIZON, MC_CHUNK,
};
pub use series::{asc_lambda, asc_series_markov, gap_conditional_entropy, lambda_weight, SeriesResult};

const ROW_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-10;

/// A stationary Markov measure `μ_{P,p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    block_len: usize,
    alphabet_size: usize,
    states: Vec<Vec<u8>>,
    transition: Matrix,
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    /// 1-step chain on symbols `0..r`; the stationary vector is solved for.
    pub fn one_step(p: &[Vec<f64>]) -> Result<Self> {
        let r = p.len();
        let states = (0..r).map(|a| vec![a as u8]).collect();
        Self::with_states(1, r, states, p, None)
    }

    /// 1-step chain with a caller-supplied stationary vector.
    pub fn one_step_with_stationary(p: &[Vec<f64>], stationary: &[f64]) -> Result<Self> {
        let r = p.len();
        let states = (0..r).map(|a| vec![a as u8]).collect();
        Self::with_states(1, r, states, p, Some(stationary))
    }

    /// Chain on the given `block_len`-blocks. A positive transition `a -> b`
    /// requires `b` to extend `a` by one symbol.
    pub fn with_states(
        block_len: usize,
        alphabet_size: usize,
        states: Vec<Vec<u8>>,
        p: &[Vec<f64>],
        stationary: Option<&[f64]>,
    ) -> Result<Self> {
        if block_len == 0 {
            return Err(Error::invalid("block length must be positive"));
        }
        if alphabet_size == 0 || alphabet_size > 36 {
            return Err(Error::invalid("alphabet size must be between 1 and 36"));
        }
        if states.is_empty() || states.len() != p.len() {
            return Err(Error::MalformedMatrix(alloc::format!("{} states but {} rows", states.len(), p.len())));
        }
        for (i, s) in states.iter().enumerate() {
            if s.len() != block_len || s.iter().any(|&a| usize::from(a) >= alphabet_size) {
                return Err(Error::invalid(alloc::format!("state '{}' is not a block of length {block_len}", format_word(s))));
            }
            if states[..i].contains(s) {
                return Err(Error::invalid(alloc::format!("duplicate state '{}'", format_word(s))));
            }
        }
        let transition = Matrix::from_rows(p)?;
        if transition.cols() != states.len() {
            return Err(Error::MalformedMatrix("transition matrix must be square".into()));
        }
        for (i, row) in p.iter().enumerate() {
            if row.iter().any(|&x| !x.is_finite() || x < 0.0) {
                return Err(Error::MalformedMatrix(alloc::format!("row {i} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_TOL {
                return Err(Error::MalformedMatrix(alloc::format!("row {i} sums to {sum}")));
            }
            for (j, &x) in row.iter().enumerate() {
                if x > 0.0 && states[i][1..] != states[j][..block_len - 1] {
                    return Err(Error::invalid(alloc::format!(
                        "transition {} -> {} does not overlap",
                        format_word(&states[i]),
                        format_word(&states[j])
                    )));
                }
            }
        }
        let stationary = match stationary {
            Some(v) => {
                check_stationary(&transition, v)?;
                v.to_vec()
            }
            None => stationary_vector(&transition)?,
        };
        Ok(MarkovMeasure { block_len, alphabet_size, states, transition, stationary })
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn state_labels(&self) -> Vec<String> {
        self.states.iter().map(|s| format_word(s)).collect()
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Symbol emitted by a state: its last symbol.
    pub(crate) fn emit(&self, state: usize) -> u8 {
        self.states[state][self.block_len - 1]
    }

    /// `h_μ = -Σ_j p_j Σ_k P_jk log P_jk`.
    pub fn entropy_rate(&self) -> f64 {
        let n = self.states.len();
        -(0..n).map(|j| self.stationary[j] * self.transition.row(j).iter().map(|&x| xlogx(x)).sum::<f64>()).sum::<f64>()
    }

    /// `μ[w_0 ... w_{m-1}]` by the forward recursion over block states.
    pub fn cylinder_measure(&self, word: &[u8]) -> f64 {
        let Some((&first, rest)) = word.split_first() else {
            return 1.0;
        };
        let n = self.states.len();
        let mut alpha: Vec<f64> = (0..n).map(|s| if self.emit(s) == first { self.stationary[s] } else { 0.0 }).collect();
        let mut next = vec![0.0; n];
        for &sym in rest {
            next.iter_mut().for_each(|x| *x = 0.0);
            for (a, &pa) in alpha.iter().enumerate() {
                if pa == 0.0 {
                    continue;
                }
                for (b, &t) in self.transition.row(a).iter().enumerate() {
                    if t > 0.0 && self.emit(b) == sym {
                        next[b] += pa * t;
                    }
                }
            }
            core::mem::swap(&mut alpha, &mut next);
        }
        alpha.iter().sum()
    }

    /// Every state block and every positive transition must occur in `sft`.
    pub fn check_support(&self, sft: &Sft) -> Result<()> {
        if sft.alphabet_size() != self.alphabet_size {
            return Err(Error::invalid("measure and shift have different alphabets"));
        }
        let mut word = Vec::with_capacity(self.block_len + 1);
        for (a, s) in self.states.iter().enumerate() {
            if self.stationary[a] > 0.0 && !sft.contains_word(s) {
                return Err(Error::invalid(alloc::format!("state '{}' is not a word of the shift", format_word(s))));
            }
            for (b, &t) in self.transition.row(a).iter().enumerate() {
                if t > 0.0 {
                    word.clear();
                    word.extend_from_slice(s);
                    word.push(self.emit(b));
                    if !sft.contains_word(&word) {
                        return Err(Error::invalid(alloc::format!("transition onto '{}' leaves the shift", format_word(&word))));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_stationary(p: &Matrix, v: &[f64]) -> Result<()> {
    if v.len() != p.rows() {
        return Err(Error::invalid("stationary vector has the wrong length"));
    }
    if v.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::invalid("stationary vector has a negative entry"));
    }
    if (v.iter().sum::<f64>() - 1.0).abs() > STATIONARY_TOL {
        return Err(Error::invalid("stationary vector does not sum to 1"));
    }
    let vp = p.left_mul(v);
    if vp.iter().zip(v).any(|(a, b)| (a - b).abs() > STATIONARY_TOL) {
        return Err(Error::invalid("vector is not fixed by the transition matrix"));
    }
    Ok(())
}

/// Stationary vector of a row-stochastic matrix: `pP = p`, `Σp = 1`.
///
/// Solves `(P^T - I) p = 0` with the last equation replaced by the
/// normalisation; falls back to averaged power iteration if the solution
/// is not accurate enough.
pub fn stationary_vector(p: &Matrix) -> Result<Vec<f64>> {
    let n = p.rows();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = p[(j, i)] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let (mut v, pivot_ratio) = solve(&a, &b)?;
    if pivot_ratio < 1e-12 {
        log::warn!("stationary solve is ill-conditioned (pivot ratio {pivot_ratio:e})");
    }
    for x in &mut v {
        if *x < 0.0 && *x > -1e-12 {
            *x = 0.0;
        }
    }
    if check_stationary(p, &v).is_ok() {
        return Ok(v);
    }
    log::warn!("stationary solve inaccurate; falling back to power iteration");
    let mut x = vec![1.0 / n as f64; n];
    let mut avg = vec![0.0; n];
    for _ in 0..100_000 {
        let y = p.left_mul(&x);
        // averaging consecutive iterates damps periodic oscillation
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        let diff = z.iter().zip(&avg).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        avg.clone_from(&z);
        x = z;
        if diff < 1e-15 {
            break;
        }
    }
    check_stationary(p, &avg)?;
    Ok(avg)
}

/// Named measures used throughout the tests and tables.
pub mod examples {
    use super::*;

    /// 1-step chain on the full 2-shift with `P00 = a`, `P11 = b`.
    pub fn full2(a: f64, b: f64) -> Result<MarkovMeasure> {
        MarkovMeasure::one_step(&[vec![a, 1.0 - a], vec![1.0 - b, b]])
    }

    /// 1-step chain on the golden mean shift with `P00 = a`.
    pub fn gms1(a: f64) -> Result<MarkovMeasure> {
        MarkovMeasure::one_step(&[vec![a, 1.0 - a], vec![1.0, 0.0]])
    }

    /// 2-step chain on the golden mean shift: states `00, 01, 10`,
    /// `P000 = a` (00 to 00), `P100 = b` (10 to 00).
    pub fn gms2(a: f64, b: f64) -> Result<MarkovMeasure> {
        MarkovMeasure::with_states(
            2,
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 0]],
            &[vec![a, 1.0 - a, 0.0], vec![0.0, 0.0, 1.0], vec![b, 1.0 - b, 0.0]],
            None,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::sft::examples::{full_shift, golden_mean};
    use core::f64::consts::LN_2;

    #[test]
    fn stationary_examples() {
        let m = full2(0.5, 0.5).unwrap();
        assert!((m.stationary()[0] - 0.5).abs() < 1e-15);
        let m = full2(0.216, 0.0).unwrap();
        let expect = [1.0 / (2.0 - 0.216), (1.0 - 0.216) / (2.0 - 0.216)];
        for (a, b) in m.stationary().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((m.stationary()[0] - 0.5605).abs() < 1e-4);
    }

    #[test]
    fn stationary_two_step_matches_closed_form() {
        let (a, b) = (0.618, 0.618);
        let m = gms2(a, b).unwrap();
        let d = 2.0 * a - b - 2.0;
        let expect = [-b / d, b / (2.0 * d) + 0.5, b / (2.0 * d) + 0.5];
        for (x, y) in m.stationary().iter().zip(expect) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn periodic_and_reducible_chains() {
        let m = full2(0.0, 0.0).unwrap();
        assert!((m.stationary()[0] - 0.5).abs() < 1e-12);
        assert_eq!(m.entropy_rate(), 0.0);
        assert_eq!(full2(1.0, 1.0), Err(Error::NonUniqueStationary));
        // transient state: unique stationary vector concentrated on state 0
        let m = full2(1.0, 0.5).unwrap();
        assert!((m.stationary()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_examples() {
        assert!((full2(0.5, 0.5).unwrap().entropy_rate() - LN_2).abs() < 1e-15);
        assert!((gms1(0.618).unwrap().entropy_rate() - 0.481).abs() < 5e-4);
        let perm = MarkovMeasure::one_step(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(perm.entropy_rate(), 0.0);
    }

    #[test]
    fn invalid_input() {
        assert!(MarkovMeasure::one_step(&[vec![0.5, 0.4], vec![0.5, 0.5]]).is_err());
        assert!(MarkovMeasure::one_step(&[vec![1.5, -0.5], vec![0.5, 0.5]]).is_err());
        assert!(MarkovMeasure::one_step_with_stationary(&[vec![0.5, 0.5], vec![0.5, 0.5]], &[0.9, 0.1]).is_err());
        // 00 -> 10 does not overlap
        assert!(MarkovMeasure::with_states(
            2,
            2,
            vec![vec![0, 0], vec![1, 0]],
            &[vec![0.5, 0.5], vec![0.5, 0.5]],
            None
        )
        .is_err());
    }

    #[test]
    fn cylinders_and_support() {
        let m = gms1(0.618).unwrap();
        let total: f64 = [[0u8, 0], [0, 1], [1, 0], [1, 1]].iter().map(|w| m.cylinder_measure(w)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert_eq!(m.cylinder_measure(&[1, 1]), 0.0);
        assert!(m.check_support(&golden_mean()).is_ok());
        assert!(full2(0.5, 0.5).unwrap().check_support(&golden_mean()).is_err());
        assert!(gms2(0.3, 0.6).unwrap().check_support(&golden_mean()).is_ok());
        assert!(gms2(0.3, 0.6).unwrap().check_support(&full_shift(2)).is_ok());
    }
}
