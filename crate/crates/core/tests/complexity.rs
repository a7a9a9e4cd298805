use intricacy_core::sft::examples::*;
use intricacy_core::topo::{asc_series, finite_profile, finite_profile_enumerated, profiles, recursion_check, weighted_log_sum};
use intricacy_core::{CoefficientSystem, Sft};
use proptest::prelude::*;

fn table_shifts() -> Vec<Sft> {
    let mut v = Vec::new();
    v.extend(same_complexity_pair());
    v.extend(positive_square_pair());
    v.extend(entropy_log2_family());
    v.push(golden_mean());
    v.push(full_shift(2));
    v
}

fn systems() -> Vec<CoefficientSystem> {
    vec![
        CoefficientSystem::uniform(),
        CoefficientSystem::neural(),
        CoefficientSystem::p_symmetric(0.3).unwrap(),
        CoefficientSystem::from_measure(&[(0.2, 0.25)], 0.5).unwrap(),
    ]
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn coefficient_normalization_and_symmetry() {
    for c in systems() {
        for n in 1..=20 {
            let mut total = 0.0;
            for k in 0..=n {
                let w = c.weight(n, k).unwrap();
                assert!(w >= 0.0);
                assert_eq!(w, c.weight(n, n - k).unwrap(), "{} n={n} k={k}", c.spec_string());
                total += binom(n, k) * w;
            }
            assert!((total - 1.0).abs() < 1e-12, "{} n={n}: {total}", c.spec_string());
        }
        assert!(c.validate(20).passed);
    }
}

#[test]
fn measure_kind_matches_closed_forms() {
    let psym = CoefficientSystem::p_symmetric(0.3).unwrap();
    let atoms = CoefficientSystem::from_measure(&[(0.3, 0.5)], 0.0).unwrap();
    let neural = CoefficientSystem::neural();
    let leb = CoefficientSystem::from_measure(&[], 1.0).unwrap();
    for n in 1..=20 {
        for k in 0..=n {
            assert!((psym.weight(n, k).unwrap() - atoms.weight(n, k).unwrap()).abs() < 1e-12);
            assert!((neural.weight(n, k).unwrap() - leb.weight(n, k).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn subadditivity_of_weighted_sums() {
    for c in &systems()[..3] {
        for sft in table_shifts() {
            let b: Vec<f64> = (1..=12).map(|n| weighted_log_sum(&sft, c, n).unwrap()).collect();
            for n in 1..=6 {
                for m in 1..=6 {
                    assert!(b[n + m - 1] <= b[n - 1] + b[m - 1] + 1e-9, "{} n={n} m={m}", c.spec_string());
                }
            }
        }
    }
}

#[test]
fn profile_bounds_and_acc_identity() {
    let u = CoefficientSystem::uniform();
    for sft in table_shifts() {
        let ps = profiles(&sft, &u, 12, 0).unwrap();
        for (i, p) in ps.iter().enumerate() {
            assert!(p.asc >= 0.0 && p.asc <= p.h + 1e-12);
            assert!(p.int >= -1e-12 && p.int <= p.h + 1e-12);
            assert!((p.int - (2.0 * p.asc - p.h)).abs() < 1e-12);
            if i > 0 {
                let nf = p.n as f64;
                let want = p.acc + (nf - 1.0) / (2.0 * nf) * ps[i - 1].asc;
                assert!((p.asc - want).abs() < 1e-12, "n={}: {} vs {}", p.n, p.asc, want);
            }
        }
    }
}

#[test]
fn shift_invariant_table_matches_plain_enumeration() {
    for c in systems() {
        for sft in [golden_mean(), same_complexity_pair()[1].clone()] {
            for (n, k) in [(1, 0), (5, 0), (9, 0), (7, 2), (6, 3)] {
                let a = finite_profile(&sft, &c, n, k).unwrap();
                let b = finite_profile_enumerated(&sft, &c, n, k).unwrap();
                for (x, y) in [(a.asc, b.asc), (a.int, b.int), (a.acc, b.acc), (a.h, b.h)] {
                    assert!((x - y).abs() < 1e-12, "{} n={n} k={k}: {x} vs {y}", c.spec_string());
                }
                if let (Some(x), Some(y)) = (a.alt, b.alt) {
                    assert!((x - y).abs() <= 1e-12 * y);
                }
            }
        }
    }
}

#[test]
fn fekete_consistency() {
    let u = CoefficientSystem::uniform();
    for sft in table_shifts().into_iter().filter(Sft::square_positive) {
        let series = asc_series(&sft, 40).unwrap().value;
        let ps = profiles(&sft, &u, 20, 0).unwrap();
        let mut last = f64::INFINITY;
        for p in &ps {
            let gap = p.asc - series;
            assert!(gap >= -1e-12, "n={}", p.n);
            assert!(gap <= last + 1e-12, "n={}", p.n);
            last = gap;
        }
    }
}

#[test]
fn recursion_holds() {
    for sft in table_shifts().into_iter().filter(Sft::square_positive) {
        let r = recursion_check(&sft, 12).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn block_cover_trend() {
    let u = CoefficientSystem::uniform();
    for sft in [full_shift(2), golden_mean()] {
        let h = sft.topological_entropy();
        let asc: Vec<f64> = (0..=3).map(|k| finite_profile(&sft, &u, 14, k).unwrap().asc).collect();
        assert!(asc.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{asc:?}");
        assert!(asc[3] < h);
        assert!(h - asc[3] <= 0.12 * h, "{asc:?} h={h}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_shift_bounds(
        rows in (2usize..=4).prop_flat_map(|r| proptest::collection::vec(proptest::collection::vec(0u8..=1, r), r)),
        n in 1usize..=10,
        p in 0.05f64..0.5,
    ) {
        let Ok(sft) = Sft::from_adjacency(&rows) else { return Ok(()); };
        for c in [CoefficientSystem::uniform(), CoefficientSystem::p_symmetric(p).unwrap()] {
            let prof = finite_profile(&sft, &c, n, 0).unwrap();
            prop_assert!(prof.asc <= prof.h + 1e-12);
            prop_assert!(prof.int >= -1e-12);
        }
    }
}
