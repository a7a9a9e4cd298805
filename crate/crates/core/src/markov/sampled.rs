//! Joint entropies at index sets, finite-horizon averages and the
//! first-return Monte Carlo estimator.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::series::{asc_series_markov, SeriesResult};
use super::MarkovMeasure;
use crate::coeffs::CoefficientSystem;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numeric::{xlogx, ChunkedSum};
use crate::oracle::DEFAULT_CAP;
use crate::subset::SubsetSpec;
use crate::table::{averages, canonical_index};

/// Horizon caps for finite averages.
pub const MAX_FINITE_ONE_STEP: usize = 20;
pub const MAX_FINITE_BLOCK: usize = 12;
/// Largest `n` accepted by the Monte Carlo estimator (`2n <= 64`).
pub const MAX_MC_HORIZON: usize = 32;
/// Samples per independently seeded stream.
pub const MC_CHUNK: usize = 1024;

/// Finite-horizon measure-theoretic complexity functions.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEntropyResult {
    pub n: usize,
    pub asc: f64,
    pub int: f64,
    pub acc: f64,
    /// `(1/n) H_μ(α_{n*})`
    pub h: f64,
    pub series: Option<SeriesResult>,
    pub mc: Option<McEstimate>,
}

/// Monte Carlo estimate of `(1/2n) E H_μ(α_{S(ξ)})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

struct Powers {
    p: Vec<Matrix>,
}

impl Powers {
    fn new(m: &MarkovMeasure, max_gap: usize) -> Self {
        Powers { p: m.transition().powers(max_gap.max(1)) }
    }

    fn get(&self, g: usize) -> &Matrix {
        &self.p[g - 1]
    }
}

/// `-Σ_j p_j Σ_k Q_jk log Q_jk`
fn step_entropy(m: &MarkovMeasure, q: &Matrix) -> f64 {
    -m.stationary().iter().enumerate().map(|(j, &pj)| pj * q.row(j).iter().map(|&x| xlogx(x)).sum::<f64>()).sum::<f64>()
}

fn marginal_entropy(m: &MarkovMeasure) -> f64 {
    let mut marg = vec![0.0; m.alphabet_size()];
    for (s, &p) in m.stationary().iter().enumerate() {
        marg[usize::from(m.emit(s))] += p;
    }
    -marg.iter().map(|&x| xlogx(x)).sum::<f64>()
}

/// `H_μ(α_S)` for an increasing list of times.
fn joint_entropy_elements(m: &MarkovMeasure, elements: &[usize], powers: &Powers) -> Result<f64> {
    if elements.is_empty() {
        return Ok(0.0);
    }
    if m.block_len() == 1 {
        // the sampled process is again Markov with transitions P^g
        let mut h = marginal_entropy(m);
        for w in elements.windows(2) {
            h += step_entropy(m, powers.get(w[1] - w[0]));
        }
        return Ok(h);
    }
    let r = m.alphabet_size() as u128;
    let total = r.checked_pow(elements.len() as u32).unwrap_or(u128::MAX);
    if total > DEFAULT_CAP {
        return Err(Error::EnumerationCap { requested: total, cap: DEFAULT_CAP });
    }
    let n = m.states().len();
    let mut scratch = vec![vec![0.0; n]; elements.len()];
    let mut acc = 0.0;
    for z in 0..m.alphabet_size() as u8 {
        for (s, slot) in scratch[0].iter_mut().enumerate() {
            *slot = if m.emit(s) == z { m.stationary()[s] } else { 0.0 };
        }
        forward(m, elements, powers, 0, &mut scratch, &mut acc);
    }
    Ok(-acc)
}

/// Depth-first enumeration of symbol tuples; `scratch[0]` holds the forward
/// vector after the current prefix. Accumulates `Σ q log q` over leaves.
fn forward(m: &MarkovMeasure, elements: &[usize], powers: &Powers, depth: usize, scratch: &mut [Vec<f64>], acc: &mut f64) {
    let (cur, rest) = scratch.split_at_mut(1);
    let alpha = &cur[0];
    let mass: f64 = alpha.iter().sum();
    if mass == 0.0 {
        return;
    }
    if depth + 1 == elements.len() {
        *acc += xlogx(mass);
        return;
    }
    let q = powers.get(elements[depth + 1] - elements[depth]);
    for z in 0..m.alphabet_size() as u8 {
        let child = &mut rest[0];
        for (b, slot) in child.iter_mut().enumerate() {
            *slot = if m.emit(b) == z { alpha.iter().enumerate().map(|(a, &pa)| pa * q[(a, b)]).sum() } else { 0.0 };
        }
        forward(m, elements, powers, depth + 1, rest, acc);
    }
}

/// `H_μ(α_S) = -Σ_w μ(w at S) log μ(w at S)`.
pub fn sampled_joint_entropy(m: &MarkovMeasure, s: &SubsetSpec) -> Result<f64> {
    let elements: Vec<usize> = s.elements().collect();
    let max_gap = elements.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(1);
    joint_entropy_elements(m, &elements, &Powers::new(m, max_gap))
}

/// `Asc_μ(n) = (1/n) Σ_S c(n,|S|) H_μ(α_S)` together with `Int_μ(n)`,
/// `Acc_μ(n)` and the 20-term series value.
pub fn asc_finite(m: &MarkovMeasure, coeffs: &CoefficientSystem, n: usize) -> Result<SampledEntropyResult> {
    let cap = if m.block_len() == 1 { MAX_FINITE_ONE_STEP } else { MAX_FINITE_BLOCK };
    if n == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    if n > cap {
        return Err(Error::HorizonExceeded { requested: n, cap });
    }
    let powers = Powers::new(m, n);
    let classes = 1usize << (n - 1);
    let mut table = vec![0.0; classes];
    if m.block_len() == 1 {
        let steps: Vec<f64> = (1..n.max(2)).map(|g| step_entropy(m, powers.get(g))).collect();
        table[0] = marginal_entropy(m);
        for i in 1..classes {
            let mask = ((i as u64) << 1) | 1;
            let top = 63 - mask.leading_zeros() as usize;
            let rest = mask ^ (1 << top);
            let prev_top = 63 - rest.leading_zeros() as usize;
            table[i] = table[canonical_index(rest)] + steps[top - prev_top - 1];
        }
    } else {
        for (i, slot) in table.iter_mut().enumerate() {
            let mask = ((i as u64) << 1) | 1;
            let elements: Vec<usize> = (0..64).filter(|&b| mask >> b & 1 == 1).collect();
            *slot = joint_entropy_elements(m, &elements, &powers)?;
        }
    }
    let a = averages(n, coeffs, &table)?;
    Ok(SampledEntropyResult {
        n,
        asc: a.asc,
        int: a.int,
        acc: a.acc,
        h: a.full / n as f64,
        series: Some(asc_series_markov(m, 20)?),
        mc: None,
    })
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Per-sample values `(1/2n) H_μ(α_{S(ξ)})` for samples
/// `chunk * MC_CHUNK .. min((chunk + 1) * MC_CHUNK, samples)`.
///
/// `ξ ∈ {0,1}^{2n}` has `ξ_0 = 1` and fair coin flips elsewhere, drawn from
/// ChaCha8 seeded with `seed` on stream `chunk`. The values depend only on
/// `(seed, chunk)`, so chunks can be evaluated in any order or in parallel.
pub fn monte_carlo_chunk(m: &MarkovMeasure, n: usize, samples: usize, seed: u64, chunk: usize) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_MC_HORIZON {
        return Err(Error::HorizonExceeded { requested: n, cap: MAX_MC_HORIZON });
    }
    let start = chunk * MC_CHUNK;
    let end = samples.min(start + MC_CHUNK);
    if start >= end {
        return Ok(Vec::new());
    }
    let powers = Powers::new(m, 2 * n);
    let mut rng = chunk_rng(seed, chunk as u64);
    let free = 2 * n - 1;
    let mut out = Vec::with_capacity(end - start);
    let mut elements = Vec::with_capacity(2 * n);
    for _ in start..end {
        let bits = rng.next_u64() & ((1u64 << free) - 1);
        let xi = (bits << 1) | 1;
        elements.clear();
        elements.extend((0..2 * n).filter(|&b| xi >> b & 1 == 1));
        out.push(joint_entropy_elements(m, &elements, &powers)? / (2 * n) as f64);
    }
    Ok(out)
}

/// Mean and standard error of per-sample values in sample order.
pub fn summarize_samples(values: &[f64], n: usize, seed: u64) -> McEstimate {
    let k = values.len();
    let mut s = ChunkedSum::new();
    values.iter().for_each(|&v| s.push(v));
    let mean = if k == 0 { f64::NAN } else { s.total() / k as f64 };
    let stderr = if k < 2 {
        0.0
    } else {
        let mut d = ChunkedSum::new();
        values.iter().for_each(|&v| d.push((v - mean) * (v - mean)));
        libm::sqrt(d.total() / (k - 1) as f64) / libm::sqrt(k as f64)
    };
    McEstimate { n, mean, stderr, samples: k, seed }
}

/// First-return estimator of `Asc_μ` at horizon `n`.
pub fn monte_carlo_asc(m: &MarkovMeasure, n: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let mut values = Vec::with_capacity(samples);
    for chunk in 0..samples.div_ceil(MC_CHUNK) {
        values.extend(monte_carlo_chunk(m, n, samples, seed, chunk)?);
    }
    Ok(summarize_samples(&values, n, seed))
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;
    use crate::oracle::joint_entropy_oracle;
    use core::f64::consts::LN_2;

    #[test]
    fn bernoulli_joint_entropy() {
        let m = full2(0.5, 0.5).unwrap();
        let s = SubsetSpec::from_elements(9, &[0, 3, 4, 8]).unwrap();
        assert!((sampled_joint_entropy(&m, &s).unwrap() - 4.0 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn chain_rule_matches_oracle() {
        let m = gms1(0.618).unwrap();
        let s = SubsetSpec::from_elements(3, &[0, 2]).unwrap();
        let a = sampled_joint_entropy(&m, &s).unwrap();
        assert!((a - joint_entropy_oracle(&m, &s).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn block_chain_full_window() {
        let m = gms2(0.618, 0.618).unwrap();
        let s = SubsetSpec::full(3).unwrap();
        let a = sampled_joint_entropy(&m, &s).unwrap();
        let words: [[u8; 3]; 5] = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 0, 1]];
        let direct: f64 = -words.iter().map(|w| xlogx(m.cylinder_measure(w))).sum::<f64>();
        assert!((a - direct).abs() < 1e-12);
    }

    #[test]
    fn finite_averages() {
        let u = CoefficientSystem::uniform();
        let r = asc_finite(&full2(0.5, 0.5).unwrap(), &u, 8).unwrap();
        assert!((r.asc - LN_2 / 2.0).abs() < 1e-14);
        assert!((r.int - (2.0 * r.asc - r.h)).abs() < 1e-12);
        let r = asc_finite(&gms1(0.618).unwrap(), &u, 6).unwrap();
        assert!((r.asc - 0.266).abs() < 0.02);
        // brute-force value; the finite average is still 0.019 above the series here
        let r = asc_finite(&full2(0.216, 0.0).unwrap(), &u, 10).unwrap();
        assert!((r.asc - 0.227_027_418_963_682).abs() < 1e-10, "{r:?}");
        assert!(r.asc > r.series.unwrap().asc);
    }

    #[test]
    fn block_finite_matches_one_step_recoding() {
        let u = CoefficientSystem::uniform();
        let m = gms1(0.4).unwrap();
        let hb = crate::markov::KStepConditionals::from_measure(&m, 2).unwrap().recode(None).unwrap();
        let a = asc_finite(&m, &u, 7).unwrap();
        let b = asc_finite(&hb, &u, 7).unwrap();
        assert!((a.asc - b.asc).abs() < 1e-12 && (a.int - b.int).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let m = gms1(0.618).unwrap();
        let a = monte_carlo_asc(&m, 8, 1, 7).unwrap();
        let b = monte_carlo_asc(&m, 8, 1, 7).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_asc(&m, 8, 3000, 9).unwrap();
        let d = monte_carlo_asc(&m, 8, 3000, 9).unwrap();
        assert_eq!(c.mean.to_bits(), d.mean.to_bits());
    }

    #[test]
    fn monte_carlo_bernoulli_bias() {
        let m = full2(0.5, 0.5).unwrap();
        let n = 16;
        let e = monte_carlo_asc(&m, n, 2000, 42).unwrap();
        let exact = LN_2 / 2.0 * (1.0 + 1.0 / (2.0 * n as f64));
        assert!((e.mean - exact).abs() <= 3.0 * e.stderr, "{e:?} vs {exact}");
    }
}
