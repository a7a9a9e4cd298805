use intricacy_core::markov::examples::{full2, gms1, gms2};
use intricacy_core::markov::{asc_finite, asc_lambda, asc_series_markov, monte_carlo_asc, sampled_joint_entropy};
use intricacy_core::oracle::joint_entropy_oracle;
use intricacy_core::sft::examples::{full_shift, golden_mean};
use intricacy_core::{CoefficientSystem, MarkovMeasure, Sft, SubsetSpec, SymmetricMeasure};
use proptest::prelude::*;

fn supported() -> Vec<(MarkovMeasure, Sft)> {
    vec![
        (full2(0.5, 0.5).unwrap(), full_shift(2)),
        (full2(0.216, 0.0).unwrap(), full_shift(2)),
        (full2(0.905, 0.905).unwrap(), full_shift(2)),
        (gms1(0.618).unwrap(), golden_mean()),
        (gms1(0.533).unwrap(), golden_mean()),
        (gms2(0.483, 0.569).unwrap(), golden_mean()),
        (gms2(0.0, 0.344).unwrap(), golden_mean()),
    ]
}

#[test]
fn entropy_bounded_by_count() {
    for (m, sft) in supported() {
        m.check_support(&sft).unwrap();
        for n in 1..=10 {
            for mask in 1..(1u64 << n) {
                let s = SubsetSpec::new(n, mask).unwrap();
                let h = sampled_joint_entropy(&m, &s).unwrap();
                assert!(h <= sft.count_words_at(&s).ln() + 1e-12, "S = {s}");
            }
        }
    }
}

#[test]
fn chain_rule_matches_oracle() {
    let params = [(0.1, 0.7), (0.35, 0.35), (0.5, 0.9), (0.77, 0.2), (0.95, 0.05)];
    for (a, b) in params {
        for m in [full2(a, b).unwrap(), gms1(a).unwrap(), gms2(a, b).unwrap()] {
            for mask in 1..(1u64 << 8) {
                let s = SubsetSpec::new(8, mask).unwrap();
                let x = sampled_joint_entropy(&m, &s).unwrap();
                let y = joint_entropy_oracle(&m, &s).unwrap();
                assert!((x - y).abs() < 1e-10, "({a}, {b}) S = {s}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn finite_averages_approach_series() {
    let u = CoefficientSystem::uniform();
    for (m, _) in supported() {
        let series = asc_series_markov(&m, 40).unwrap().asc;
        let top = if m.block_len() == 1 { 14 } else { 12 };
        let mut last = f64::INFINITY;
        for n in 4..=top {
            let r = asc_finite(&m, &u, n).unwrap();
            assert!(r.asc >= series - 1e-12, "n={n}");
            let gap = (r.asc - series).abs();
            assert!(gap <= last + 1e-12, "n={n}");
            last = gap;
            assert!(r.int >= -1e-12);
            assert!((r.int - (2.0 * r.asc - r.h)).abs() < 1e-12);
        }
    }
}

#[test]
fn lambda_half_matches_series() {
    let half = SymmetricMeasure::dirac_half();
    for a in [0.1, 0.4, 0.618, 0.9] {
        let m = gms1(a).unwrap();
        let x = asc_lambda(&m, &half, 20).unwrap();
        let y = asc_series_markov(&m, 20).unwrap().asc;
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let m = gms1(0.618).unwrap();
    let a = monte_carlo_asc(&m, 12, 300, 7).unwrap();
    let b = monte_carlo_asc(&m, 12, 300, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    let c = monte_carlo_asc(&m, 12, 300, 8).unwrap();
    assert_ne!(a.mean, c.mean);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_chains(a in 0.0f64..=1.0, b in 0.0f64..=1.0, n in 2usize..=9) {
        for m in [full2(a, b), gms1(a), gms2(a, b)].into_iter().flatten() {
            let h = m.entropy_rate();
            prop_assert!(h >= 0.0 && h <= (m.alphabet_size() as f64).ln() + 1e-12);
            let s = asc_series_markov(&m, 20).unwrap();
            prop_assert!(s.int >= -2.0 * s.tail_bound - 1e-12);
            let f = asc_finite(&m, &CoefficientSystem::uniform(), n).unwrap();
            prop_assert!(f.int >= -1e-12);
            prop_assert!(f.asc <= f.h + 1e-12);
        }
    }
}
