//! Conditional-entropy series for `Asc_μ` and `Int_μ`.

use alloc::vec;
use alloc::vec::Vec;

use super::MarkovMeasure;
use crate::coeffs::SymmetricMeasure;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numeric::{ln, xlogx};

/// `Asc_μ`, `Int_μ` and `h_μ` from a truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub h: f64,
    pub asc: f64,
    pub int: f64,
    pub terms: usize,
    /// Bound on the omitted tail of `asc`; the bound for `int` is twice this.
    pub tail_bound: f64,
}

/// `-Σ_j p_j Σ_z q_jz log q_jz` where `q_jz` is the probability of
/// observing symbol `z` `i` steps after state `j`.
fn conditional_from_power(m: &MarkovMeasure, q: &Matrix) -> f64 {
    let r = m.alphabet_size();
    let mut marginal = vec![0.0; r];
    let mut h = 0.0;
    for (j, &pj) in m.stationary().iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        marginal.iter_mut().for_each(|x| *x = 0.0);
        for (b, &t) in q.row(j).iter().enumerate() {
            marginal[usize::from(m.emit(b))] += t;
        }
        h -= pj * marginal.iter().map(|&x| xlogx(x)).sum::<f64>();
    }
    h
}

/// `H_μ(α | α_i)` for `i >= 1`.
pub fn gap_conditional_entropy(m: &MarkovMeasure, i: usize) -> Result<f64> {
    if i == 0 {
        return Err(Error::invalid("gap must be at least 1"));
    }
    let powers = m.transition().powers(i);
    Ok(conditional_from_power(m, &powers[i - 1]))
}

fn conditional_entropies(m: &MarkovMeasure, terms: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(terms);
    let mut q = m.transition().clone();
    for i in 1..=terms {
        out.push(conditional_from_power(m, &q));
        if i < terms {
            q = q.mul(m.transition());
        }
    }
    out
}

/// `Asc_μ = (1/2) Σ_{i=1}^{K} 2^-i H_μ(α | α_i)` and `Int_μ = 2 Asc_μ - h_μ`.
pub fn asc_series_markov(m: &MarkovMeasure, terms: usize) -> Result<SeriesResult> {
    if terms == 0 {
        return Err(Error::invalid("at least one series term is required"));
    }
    let hs = conditional_entropies(m, terms);
    let mut asc = 0.0;
    for (i, h) in hs.iter().enumerate() {
        asc += h / libm::ldexp(1.0, i as i32 + 1);
    }
    asc *= 0.5;
    let h = m.entropy_rate();
    let tail = ln(m.alphabet_size() as f64) / libm::ldexp(1.0, terms as i32);
    Ok(SeriesResult { h, asc, int: 2.0 * asc - h, terms, tail_bound: tail })
}

/// `∫ p^2 (1-p)^(i-1) dλ(p)`.
pub fn lambda_weight(lambda: &SymmetricMeasure, i: usize) -> f64 {
    let fi = i as f64;
    lambda.integrate(|x| x * x * libm::pow(1.0 - x, fi - 1.0), 2.0 / (fi * (fi + 1.0) * (fi + 2.0)))
}

/// `Asc_μ^λ = Σ_{i=1}^{K} [∫ p^2 (1-p)^(i-1) dλ] H_μ(α | α_i)` for 1-step
/// measures.
pub fn asc_lambda(m: &MarkovMeasure, lambda: &SymmetricMeasure, terms: usize) -> Result<f64> {
    if m.block_len() != 1 {
        return Err(Error::Unsupported("general weights for higher-block measures".into()));
    }
    if terms == 0 {
        return Err(Error::invalid("at least one series term is required"));
    }
    let hs = conditional_entropies(m, terms);
    Ok(hs.iter().enumerate().map(|(i, h)| lambda_weight(lambda, i + 1) * h).sum())
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;
    use core::f64::consts::LN_2;

    #[test]
    fn bernoulli_conditionals() {
        let m = full2(0.5, 0.5).unwrap();
        for i in 1..6 {
            assert!((gap_conditional_entropy(&m, i).unwrap() - LN_2).abs() < 1e-15);
        }
    }

    #[test]
    fn first_gap_is_entropy_rate() {
        let m = gms1(0.618).unwrap();
        assert!((gap_conditional_entropy(&m, 1).unwrap() - m.entropy_rate()).abs() < 1e-15);
    }

    #[test]
    fn table_rows() {
        let cases: [(MarkovMeasure, f64, f64, f64); 4] = [
            (full2(0.5, 0.5).unwrap(), 0.693, 0.347, 0.0),
            (full2(0.905, 0.905).unwrap(), 0.315, 0.209, 0.104),
            (gms1(0.618).unwrap(), 0.481, 0.266, 0.051),
            (gms2(0.483, 0.569).unwrap(), 0.466, 0.272, 0.078),
        ];
        for (m, h, a, i) in cases {
            let s = asc_series_markov(&m, 20).unwrap();
            assert!((s.h - h).abs() < 1.5e-3 && (s.asc - a).abs() < 1.5e-3 && (s.int - i).abs() < 1.5e-3, "{s:?}");
        }
    }

    #[test]
    fn zero_intricacy_line() {
        for a in [0.1, 0.3, 0.5, 0.77] {
            let s = asc_series_markov(&full2(a, 1.0 - a).unwrap(), 20).unwrap();
            assert!(s.int.abs() <= 2.0 * s.tail_bound, "{s:?}");
        }
    }

    #[test]
    fn lambda_weights() {
        let half = SymmetricMeasure::dirac_half();
        for i in 1..10 {
            assert!((lambda_weight(&half, i) - libm::ldexp(1.0, -(i as i32) - 1)).abs() < 1e-16);
        }
        let m = gms1(0.618).unwrap();
        let a = asc_lambda(&m, &half, 20).unwrap();
        assert!((a - asc_series_markov(&m, 20).unwrap().asc).abs() < 1e-12);
        let leb = asc_lambda(&full2(0.5, 0.5).unwrap(), &SymmetricMeasure::lebesgue(), 2000).unwrap();
        assert!((leb - LN_2 / 2.0).abs() < 1e-6);
        assert!(asc_lambda(&gms2(0.5, 0.5).unwrap(), &half, 5).is_err());
    }

    #[test]
    fn two_point_lambda_by_hand() {
        let m = gms1(0.618).unwrap();
        let lam = SymmetricMeasure::new(&[(0.3, 0.5)], 0.0).unwrap();
        let got = asc_lambda(&m, &lam, 40).unwrap();
        let mut want = 0.0;
        for i in 1..=40 {
            let h = gap_conditional_entropy(&m, i).unwrap();
            for p in [0.3f64, 0.7] {
                want += 0.5 * p * p * libm::pow(1.0 - p, (i - 1) as f64) * h;
            }
        }
        assert!((got - want).abs() < 1e-12);
    }
}
