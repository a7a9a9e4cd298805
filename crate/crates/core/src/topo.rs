//! Topological complexity functions of a shift of finite type.
//!
//! For a horizon `n`, a system of coefficients `c` and a block length `k`
//! (cover by cylinders of length `w = max(k, 1)`):
//!
//! * `H_n   = log N(n* + w*) / n`
//! * `Asc_n = (1/n) Σ_S c(n,|S|) log N(S + w*)`
//! * `Int_n = (1/n) Σ_S c(n,|S|) log(N(S + w*) N(S^c + w*) / N(n* + w*))`
//! * `Acc_n = (1/n) Σ_{S ∋ 0} c(n,|S|) log N(S + w*)`
//! * `Alt_n = 2^-n Σ_S N(S + w*)` (uniform weights only)

use alloc::string::String;
use alloc::vec::Vec;

use crate::coeffs::CoefficientSystem;
use crate::error::{Error, Result};
use crate::numeric::{ln, ChunkedSum};
use crate::sft::Sft;
use crate::subset::{full_mask, SubsetSpec};
use crate::table::{self, averages, log_table, path_table};

/// Default cap on the horizon for subset enumeration.
pub const DEFAULT_N_CAP: usize = 24;
/// Default number of series terms.
pub const DEFAULT_TERMS: usize = 20;

/// Finite-horizon complexity functions at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityProfile {
    pub n: usize,
    pub block_k: usize,
    pub h: f64,
    pub asc: f64,
    pub int: f64,
    pub acc: f64,
    /// Present only for uniform weights.
    pub alt: Option<f64>,
    pub coeffs_spec: String,
}

/// A truncated series together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

fn window(block_k: usize) -> usize {
    block_k.max(1)
}

fn check_horizon(n: usize, block_k: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let cap = cap.min(table::MAX_TABLE_HORIZON);
    if n > cap {
        return Err(Error::HorizonExceeded { requested: n, cap });
    }
    if n + window(block_k) - 1 > crate::subset::MAX_HORIZON {
        return Err(Error::HorizonExceeded { requested: n + window(block_k) - 1, cap: crate::subset::MAX_HORIZON });
    }
    Ok(())
}

/// Complexity profile at horizon `n` with the default cap.
pub fn finite_profile(sft: &Sft, coeffs: &CoefficientSystem, n: usize, block_k: usize) -> Result<ComplexityProfile> {
    finite_profile_capped(sft, coeffs, n, block_k, DEFAULT_N_CAP)
}

pub fn finite_profile_capped(
    sft: &Sft,
    coeffs: &CoefficientSystem,
    n: usize,
    block_k: usize,
    cap: usize,
) -> Result<ComplexityProfile> {
    Ok(profiles_capped(sft, coeffs, n, block_k, cap)?.pop().expect("n >= 1"))
}

/// Profiles for every horizon `1..=n_max`, sharing one table.
pub fn profiles(sft: &Sft, coeffs: &CoefficientSystem, n_max: usize, block_k: usize) -> Result<Vec<ComplexityProfile>> {
    profiles_capped(sft, coeffs, n_max, block_k, DEFAULT_N_CAP)
}

pub fn profiles_capped(
    sft: &Sft,
    coeffs: &CoefficientSystem,
    n_max: usize,
    block_k: usize,
    cap: usize,
) -> Result<Vec<ComplexityProfile>> {
    check_horizon(n_max, block_k, cap)?;
    let ones = alloc::vec![1.0; sft.alphabet_size()];
    let counts = path_table(sft, n_max, window(block_k), &ones)?;
    let logs = log_table(&counts);
    (1..=n_max).map(|n| assemble(n, block_k, coeffs, &counts, &logs)).collect()
}

fn assemble(n: usize, block_k: usize, coeffs: &CoefficientSystem, counts: &[f64], logs: &[f64]) -> Result<ComplexityProfile> {
    let a = averages(n, coeffs, logs)?;
    let alt = coeffs.is_uniform().then(|| table::uniform_plain_sum(n, counts));
    Ok(ComplexityProfile {
        n,
        block_k,
        h: a.full / n as f64,
        asc: a.asc,
        int: a.int,
        acc: a.acc,
        alt,
        coeffs_spec: coeffs.spec_string(),
    })
}

/// `Alt_n = 2^-n Σ_S N(S)`; defined for uniform weights only.
pub fn alternate_complexity(sft: &Sft, coeffs: &CoefficientSystem, n: usize) -> Result<f64> {
    if !coeffs.is_uniform() {
        return Err(Error::Unsupported("alternate complexity for non-uniform weights".into()));
    }
    finite_profile(sft, coeffs, n, 0).map(|p| p.alt.expect("uniform"))
}

/// Profile by plain enumeration of all `2^n` subsets, counting each one
/// separately. Exponentially slower; used to cross-check [`finite_profile`].
pub fn finite_profile_enumerated(
    sft: &Sft,
    coeffs: &CoefficientSystem,
    n: usize,
    block_k: usize,
) -> Result<ComplexityProfile> {
    check_horizon(n, block_k, 16)?;
    let w = window(block_k);
    let c = coeffs.row(n)?;
    let full_m = full_mask(n);
    let logn = |mask: u64| -> Result<f64> {
        if mask == 0 {
            return Ok(0.0);
        }
        Ok(sft.count_words_at(&SubsetSpec::new(n, mask)?.dilate(w)?).ln())
    };
    let log_full = logn(full_m)?;
    let (mut asc, mut int, mut acc, mut alt) = (ChunkedSum::new(), ChunkedSum::new(), ChunkedSum::new(), ChunkedSum::new());
    for s in 0..=full_m {
        let k = s.count_ones() as usize;
        let ls = logn(s)?;
        asc.push(c[k] * ls);
        int.push(c[k] * (ls + logn(full_m ^ s)? - log_full));
        if s & 1 == 1 {
            acc.push(c[k] * ls);
        }
        alt.push(if s == 0 { 1.0 } else { crate::numeric::exp(ls) });
    }
    let nf = n as f64;
    Ok(ComplexityProfile {
        n,
        block_k,
        h: log_full / nf,
        asc: asc.total() / nf,
        int: int.total() / nf,
        acc: acc.total() / nf,
        alt: coeffs.is_uniform().then(|| alt.total() / libm::ldexp(1.0, n as i32)),
        coeffs_spec: coeffs.spec_string(),
    })
}

/// `b_n = Σ_S c(n,|S|) log N(S)`.
pub fn weighted_log_sum(sft: &Sft, coeffs: &CoefficientSystem, n: usize) -> Result<f64> {
    Ok(finite_profile(sft, coeffs, n, 0)?.asc * n as f64)
}

fn require_square_positive(sft: &Sft) -> Result<()> {
    if sft.square_positive() {
        Ok(())
    } else {
        Err(Error::Hypothesis("the squared adjacency matrix has a zero entry".into()))
    }
}

/// `Asc = (1/4) Σ_{k=1}^{K} log|L_k| / 2^k` for shifts with `M^2 > 0`.
pub fn asc_series(sft: &Sft, terms: usize) -> Result<SeriesValue> {
    require_square_positive(sft)?;
    if terms == 0 {
        return Err(Error::invalid("at least one series term is required"));
    }
    let mut sum = 0.0;
    for k in 1..=terms {
        sum += sft.complexity_count(k).ln() / libm::ldexp(1.0, k as i32);
    }
    // (1/4) Σ_{k>K} k log r / 2^k = (1/4) log r (K + 2) / 2^K
    let tail = 0.25 * ln(sft.alphabet_size() as f64) * (terms as f64 + 2.0) / libm::ldexp(1.0, terms as i32);
    Ok(SeriesValue { value: 0.25 * sum, terms, tail_bound: tail })
}

/// `Int = 2 Asc - h_top` for shifts with `M^2 > 0`.
pub fn int_series(sft: &Sft, terms: usize) -> Result<SeriesValue> {
    let a = asc_series(sft, terms)?;
    Ok(SeriesValue { value: 2.0 * a.value - sft.topological_entropy(), terms, tail_bound: 2.0 * a.tail_bound })
}

/// Comparison of `a_m = Σ_{S ⊂ m*} log N(S)` computed by enumeration against
/// the recursion `a_m = λ_m + 2 a_{m-1} + 2^{m-2} Σ_{k=1}^{m-2} λ_k / 2^k`,
/// where `λ_k = log|L_k|`, for `m = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionReport {
    pub n: usize,
    pub direct: Vec<f64>,
    pub recursive: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub max_rel_err: f64,
    pub passed: bool,
}

pub fn recursion_check(sft: &Sft, n: usize) -> Result<RecursionReport> {
    require_square_positive(sft)?;
    if n == 0 || n > 20 {
        return Err(Error::HorizonExceeded { requested: n, cap: 20 });
    }
    let ones = alloc::vec![1.0; sft.alphabet_size()];
    let logs = log_table(&path_table(sft, n, 1, &ones)?);
    let direct: Vec<f64> = (1..=n)
        .map(|m| {
            let mut s = ChunkedSum::new();
            for i in 0..1usize << (m - 1) {
                let width = 64 - (((i as u64) << 1) | 1).leading_zeros() as usize;
                s.push((m - width + 1) as f64 * logs[i]);
            }
            s.total()
        })
        .collect();
    let lambda: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { sft.complexity_count(k).ln() }).collect();
    let mut recursive = Vec::with_capacity(n);
    let mut closed_form = Vec::with_capacity(n);
    for m in 1..=n {
        let p2 = |e: i32| libm::ldexp(1.0, e);
        let rec = if m == 1 {
            lambda[1]
        } else {
            let tail: f64 = (1..=m.saturating_sub(2)).map(|k| lambda[k] / p2(k as i32)).sum();
            lambda[m] + 2.0 * recursive[m - 2] + p2(m as i32 - 2) * tail
        };
        recursive.push(rec);
        let cf: f64 = (1..m).map(|k| (m - k + 3) as f64 / p2(k as i32) * lambda[k]).sum();
        closed_form.push(lambda[m] + p2(m as i32 - 2) * cf);
    }
    let mut max_rel_err: f64 = 0.0;
    for i in 0..n {
        let scale = direct[i].abs().max(1e-300);
        max_rel_err = max_rel_err.max((direct[i] - recursive[i]).abs() / scale).max((direct[i] - closed_form[i]).abs() / scale);
    }
    Ok(RecursionReport { n, direct, recursive, closed_form, max_rel_err, passed: max_rel_err <= 1e-9 })
}
