//! Oracle and property suites behind `intricacy check`.

use intricacy_core::markov::examples::{full2, gms1, gms2};
use intricacy_core::markov::{asc_finite, asc_lambda, asc_series_markov, sampled_joint_entropy};
use intricacy_core::oracle::{count_words_at_oracle, joint_entropy_oracle};
use intricacy_core::pressure::{asp_profiles, weighted_count};
use intricacy_core::sft::examples::*;
use intricacy_core::topo::{profiles, weighted_log_sum};
use intricacy_core::{CoefficientSystem, MarkovMeasure, Potential, Sft, SubsetSpec, SymmetricMeasure};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::output::Table;

pub const SUITES: [&str; 8] = ["coeffs", "counts", "product", "subadditivity", "profiles", "markov", "lambda", "pressure"];

/// Outcome of one property over all of its cases.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub property: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest deviation (or violation) seen.
    pub max_error: f64,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    cases: usize,
    failures: usize,
    max_error: f64,
}

impl Tally {
    fn record(&mut self, ok: bool, err: f64) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
        if err.is_nan() || err > self.max_error {
            self.max_error = err;
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.cases += o.cases;
        self.failures += o.failures;
        if o.max_error.is_nan() || o.max_error > self.max_error {
            self.max_error = o.max_error;
        }
        self
    }

    fn finish(self, suite: &'static str, property: &'static str) -> PropertyResult {
        PropertyResult { suite, property, cases: self.cases, failures: self.failures, max_error: self.max_error }
    }
}

fn merge_all(v: Vec<Tally>) -> Tally {
    v.into_iter().fold(Tally::default(), Tally::merge)
}

/// The shifts of the published tables plus the golden mean and full 2-shift.
pub fn table_shifts() -> Vec<Sft> {
    let mut v = Vec::new();
    v.extend(same_complexity_pair());
    v.extend(positive_square_pair());
    v.extend(entropy_log2_family());
    v.push(golden_mean());
    v.push(full_shift(2));
    v
}

fn oracle_shifts() -> Vec<Sft> {
    let mut v = table_shifts();
    v.extend(pressure_pair());
    v.push(Sft::from_forbidden(2, &[vec![1, 1, 1]]).expect("nonempty"));
    v.push(Sft::from_forbidden(3, &[vec![0, 1, 2], vec![2, 2]]).expect("nonempty"));
    v
}

pub fn coefficient_systems() -> Vec<CoefficientSystem> {
    vec![
        CoefficientSystem::uniform(),
        CoefficientSystem::neural(),
        CoefficientSystem::p_symmetric(0.3).expect("valid p"),
        CoefficientSystem::from_measure(&[(0.2, 0.25)], 0.5).expect("valid measure"),
    ]
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn masks(n: usize) -> impl Iterator<Item = SubsetSpec> {
    (1..1u64 << n).map(move |m| SubsetSpec::new(n, m).expect("mask within horizon"))
}

fn coeffs_suite() -> Result<Vec<PropertyResult>> {
    let (mut norm, mut sym, mut nonneg, mut agree) = (Tally::default(), Tally::default(), Tally::default(), Tally::default());
    for c in coefficient_systems() {
        for n in 1..=20 {
            let mut total = 0.0;
            for k in 0..=n {
                let w = c.weight(n, k)?;
                let w2 = c.weight(n, n - k)?;
                sym.record(w == w2, (w - w2).abs());
                nonneg.record(w >= 0.0, (-w).max(0.0));
                total += binom(n, k) * w;
            }
            norm.record((total - 1.0).abs() <= 1e-12, (total - 1.0).abs());
        }
    }
    let pairs = [
        (CoefficientSystem::p_symmetric(0.3)?, CoefficientSystem::from_measure(&[(0.3, 0.5)], 0.0)?),
        (CoefficientSystem::neural(), CoefficientSystem::from_measure(&[], 1.0)?),
        (CoefficientSystem::uniform(), CoefficientSystem::from_measure(&[(0.5, 1.0)], 0.0)?),
    ];
    for (a, b) in &pairs {
        for n in 1..=20 {
            for k in 0..=n {
                let d = (a.weight(n, k)? - b.weight(n, k)?).abs();
                agree.record(d <= 1e-12, d);
            }
        }
    }
    Ok(vec![
        norm.finish("coeffs", "normalization"),
        sym.finish("coeffs", "complement-symmetry"),
        nonneg.finish("coeffs", "nonnegative"),
        agree.finish("coeffs", "measure-closed-form-agreement"),
    ])
}

fn counts_suite(max_n: usize) -> Result<Vec<PropertyResult>> {
    let n_top = max_n.min(10);
    let per_shift: Vec<[Tally; 4]> = oracle_shifts()
        .par_iter()
        .map(|sft| -> Result<[Tally; 4]> {
            let mut t = [Tally::default(); 4];
            for n in 1..=n_top {
                for s in masks(n) {
                    let a = sft.count_words_at(&s);
                    let b = count_words_at_oracle(sft, &s)?;
                    t[0].record(a == b, if a == b { 0.0 } else { 1.0 });
                    let c = sft.count_words_at(&s.canonical());
                    t[1].record(a == c, if a == c { 0.0 } else { 1.0 });
                    for j in (0..n).filter(|&j| !s.contains(j)) {
                        let bigger = SubsetSpec::new(n, s.mask() | 1 << j)?;
                        let d = sft.count_words_at(&bigger);
                        t[2].record(a <= d, 0.0);
                    }
                }
            }
            for n in 1..=max_n.min(8) {
                for s1 in 0..1u64 << n {
                    let rest = ((1u64 << n) - 1) & !s1;
                    let mut s2 = rest;
                    loop {
                        let n1 = sft.count_words_at(&SubsetSpec::new(n, s1)?).to_f64();
                        let n2 = sft.count_words_at(&SubsetSpec::new(n, s2)?).to_f64();
                        let both = sft.count_words_at(&SubsetSpec::new(n, s1 | s2)?).to_f64();
                        t[3].record(both <= n1 * n2, (both - n1 * n2).max(0.0));
                        if s2 == 0 {
                            break;
                        }
                        s2 = (s2 - 1) & rest;
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let col = |i: usize| merge_all(per_shift.iter().map(|t| t[i]).collect());
    Ok(vec![
        col(0).finish("counts", "oracle-equivalence"),
        col(1).finish("counts", "shift-invariance"),
        col(2).finish("counts", "monotonicity"),
        col(3).finish("counts", "submultiplicativity"),
    ])
}

fn product_suite(max_n: usize) -> Result<Vec<PropertyResult>> {
    let n_top = max_n.min(10);
    let shifts: Vec<Sft> = oracle_shifts().into_iter().filter(Sft::square_positive).collect();
    let tallies: Vec<Tally> = shifts
        .par_iter()
        .map(|sft| {
            let lk: Vec<f64> = (0..=n_top).map(|k| sft.complexity_count(k).to_f64()).collect();
            let mut t = Tally::default();
            for n in 1..=n_top {
                for s in masks(n) {
                    let prod: f64 = s.runs().iter().map(|&(_, len)| lk[len]).product();
                    let got = sft.count_words_at(&s).to_f64();
                    t.record(got == prod, (got - prod).abs());
                }
            }
            t
        })
        .collect();
    Ok(vec![merge_all(tallies).finish("product", "product-formula")])
}

fn subadditivity_suite() -> Result<Vec<PropertyResult>> {
    let systems = &coefficient_systems()[..3];
    let shifts = table_shifts();
    let mut t = Tally::default();
    for c in systems {
        for sft in &shifts {
            let b = (1..=12).map(|n| weighted_log_sum(sft, c, n)).collect::<Result<Vec<_>, _>>()?;
            for n in 1..=6 {
                for m in 1..=6 {
                    let excess = b[n + m - 1] - b[n - 1] - b[m - 1];
                    t.record(excess <= 1e-9, excess.max(0.0));
                }
            }
        }
    }
    Ok(vec![t.finish("subadditivity", "b(n+m)<=b(n)+b(m)")])
}

fn profiles_suite() -> Result<Vec<PropertyResult>> {
    let (mut acc, mut intid, mut intpos, mut below) = (Tally::default(), Tally::default(), Tally::default(), Tally::default());
    for c in &coefficient_systems()[..3] {
        for sft in table_shifts() {
            let ps = profiles(&sft, c, 12, 0)?;
            for (i, p) in ps.iter().enumerate() {
                intpos.record(p.int >= -1e-12, (-p.int).max(0.0));
                below.record(p.asc <= p.h + 1e-12, (p.asc - p.h).max(0.0));
                if c.is_uniform() {
                    let d = (p.int - (2.0 * p.asc - p.h)).abs();
                    intid.record(d <= 1e-12, d);
                    if i > 0 {
                        let nf = p.n as f64;
                        let d = (p.asc - p.acc - (nf - 1.0) / (2.0 * nf) * ps[i - 1].asc).abs();
                        acc.record(d <= 1e-12, d);
                    }
                }
            }
        }
    }
    Ok(vec![
        acc.finish("profiles", "acc-identity"),
        intid.finish("profiles", "int-equals-2asc-minus-h"),
        intpos.finish("profiles", "int-nonnegative"),
        below.finish("profiles", "asc-at-most-h"),
    ])
}

fn markov_params() -> [(f64, f64); 5] {
    [(0.1, 0.7), (0.35, 0.35), (0.5, 0.9), (0.77, 0.2), (0.95, 0.05)]
}

fn markov_suite(max_n: usize) -> Result<Vec<PropertyResult>> {
    let mut cases: Vec<MarkovMeasure> = Vec::new();
    for (a, b) in markov_params() {
        cases.push(full2(a, b)?);
        cases.push(gms1(a)?);
        cases.push(gms2(a, b)?);
    }
    let horizon = max_n.min(8);
    let oracle: Vec<Tally> = cases
        .par_iter()
        .map(|m| -> Result<Tally> {
            let mut t = Tally::default();
            for s in masks(horizon) {
                let d = (sampled_joint_entropy(m, &s)? - joint_entropy_oracle(m, &s)?).abs();
                t.record(d <= 1e-10, d);
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let supported = [
        (full2(0.216, 0.0)?, full_shift(2)),
        (full2(0.905, 0.905)?, full_shift(2)),
        (gms1(0.618)?, golden_mean()),
        (gms2(0.483, 0.569)?, golden_mean()),
    ];
    let mut bound = Tally::default();
    for (m, sft) in &supported {
        for n in 1..=max_n.min(10) {
            for s in masks(n) {
                let excess = sampled_joint_entropy(m, &s)? - sft.count_words_at(&s).ln();
                bound.record(excess <= 1e-12, excess.max(0.0));
            }
        }
    }
    let (mut intpos, mut below) = (Tally::default(), Tally::default());
    let u = CoefficientSystem::uniform();
    for m in &cases {
        for n in 1..=max_n.min(10) {
            let r = asc_finite(m, &u, n)?;
            intpos.record(r.int >= -1e-12, (-r.int).max(0.0));
            below.record(r.asc <= r.h + 1e-12, (r.asc - r.h).max(0.0));
        }
    }
    Ok(vec![
        merge_all(oracle).finish("markov", "joint-entropy-oracle"),
        bound.finish("markov", "entropy-at-most-log-count"),
        intpos.finish("markov", "finite-int-nonnegative"),
        below.finish("markov", "finite-asc-at-most-h"),
    ])
}

fn lambda_suite() -> Result<Vec<PropertyResult>> {
    let half = SymmetricMeasure::dirac_half();
    let mut t = Tally::default();
    for (a, b) in markov_params() {
        for m in [full2(a, b)?, gms1(a)?] {
            let d = (asc_lambda(&m, &half, 20)? - asc_series_markov(&m, 20)?.asc).abs();
            t.record(d <= 1e-12, d);
        }
    }
    Ok(vec![t.finish("lambda", "delta-half-consistency")])
}

fn pressure_suite(max_n: usize) -> Result<Vec<PropertyResult>> {
    let u = CoefficientSystem::uniform();
    let (mut zero, mut mono, mut bound) = (Tally::default(), Tally::default(), Tally::default());
    let mut shifts = table_shifts();
    shifts.extend(pressure_pair());
    for sft in &shifts {
        let r = sft.alphabet_size();
        let asp = asp_profiles(sft, &Potential::zero(r), &u, 10)?;
        let asc = profiles(sft, &u, 10, 0)?;
        for (a, p) in asp.iter().zip(&asc) {
            zero.record(a.to_bits() == p.asc.to_bits(), (a - p.asc).abs());
        }
        let f = Potential::new((0..r).map(|i| 0.25 * i as f64).collect())?;
        let g = Potential::new((0..r).map(|i| 0.25 * i as f64 + if i % 2 == 0 { 0.5 } else { 0.0 }).collect())?;
        let n_top = max_n.min(8);
        for s in masks(n_top) {
            let (wf, wg) = (weighted_count(sft, &f, &s)?, weighted_count(sft, &g, &s)?);
            mono.record(wf <= wg * (1.0 + 1e-12), (wf - wg).max(0.0));
            let full = weighted_count(sft, &f, &SubsetSpec::full(n_top)?)?;
            bound.record(wf.ln() <= full.ln() + 1e-12, (wf.ln() - full.ln()).max(0.0));
        }
        let (af, ag) = (asp_profiles(sft, &f, &u, n_top)?, asp_profiles(sft, &g, &u, n_top)?);
        for (x, y) in af.iter().zip(&ag) {
            mono.record(*x <= y + 1e-12, (x - y).max(0.0));
        }
    }
    Ok(vec![
        zero.finish("pressure", "zero-potential-equals-asc"),
        mono.finish("pressure", "potential-monotonicity"),
        bound.finish("pressure", "subset-bounded-by-window"),
    ])
}

/// Run `suite` (`all` or one of [`SUITES`]).
pub fn run_suites(suite: &str, max_n: usize) -> Result<Vec<PropertyResult>> {
    let chosen: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(CliError::bad(format!("unknown suite '{suite}' (expected all or one of {})", SUITES.join(", "))));
    };
    let mut out = Vec::new();
    for s in chosen {
        let res = match s {
            "coeffs" => coeffs_suite(),
            "counts" => counts_suite(max_n),
            "product" => product_suite(max_n),
            "subadditivity" => subadditivity_suite(),
            "profiles" => profiles_suite(),
            "markov" => markov_suite(max_n),
            "lambda" => lambda_suite(),
            "pressure" => pressure_suite(max_n),
            _ => unreachable!(),
        }?;
        for r in &res {
            log::info!("{}/{}: {} of {} passed", r.suite, r.property, r.cases - r.failures, r.cases);
        }
        out.extend(res);
    }
    Ok(out)
}

pub const CHECK_COLUMNS: [&str; 7] = ["suite", "property", "cases", "passed", "failed", "max_error", "status"];

pub fn to_table(results: &[PropertyResult]) -> Table {
    let mut t = Table::new(&CHECK_COLUMNS);
    for r in results {
        t.push(vec![
            r.suite.into(),
            r.property.into(),
            r.cases.into(),
            (r.cases - r.failures).into(),
            r.failures.into(),
            r.max_error.into(),
            (if r.passed() { "PASS" } else { "FAIL" }).into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for r in run_suites("all", 4).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_suites("nope", 4).unwrap_err().exit_code(), 1);
    }
}
