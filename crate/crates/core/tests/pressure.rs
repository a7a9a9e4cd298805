use intricacy_core::oracle::weighted_count_oracle;
use intricacy_core::pressure::{asp_profiles, classical_pressure, full_shift_asp, weighted_count};
use intricacy_core::sft::examples::*;
use intricacy_core::topo::profiles;
use intricacy_core::{CoefficientSystem, Potential, Sft, SubsetSpec};
use proptest::prelude::*;

fn table_shifts() -> Vec<Sft> {
    let mut v = Vec::new();
    v.extend(same_complexity_pair());
    v.extend(positive_square_pair());
    v.extend(entropy_log2_family());
    v.extend(pressure_pair());
    v.push(golden_mean());
    v
}

#[test]
fn zero_potential_is_asc_bit_for_bit() {
    let u = CoefficientSystem::uniform();
    for sft in table_shifts() {
        let asp = asp_profiles(&sft, &Potential::zero(sft.alphabet_size()), &u, 10).unwrap();
        let asc: Vec<f64> = profiles(&sft, &u, 10, 0).unwrap().iter().map(|p| p.asc).collect();
        assert_eq!(asp, asc);
    }
}

#[test]
fn weighted_count_matches_oracle() {
    for sft in table_shifts() {
        let r = sft.alphabet_size();
        let f: Vec<f64> = (0..r).map(|i| 0.3 * i as f64 - 0.2).collect();
        let pot = Potential::new(f.clone()).unwrap();
        let w: Vec<f64> = f.iter().map(|x| x.exp()).collect();
        for n in 1..=7 {
            for mask in 1..(1u64 << n) {
                let s = SubsetSpec::new(n, mask).unwrap();
                let a = weighted_count(&sft, &pot, &s).unwrap();
                let b = weighted_count_oracle(&sft, &w, &s).unwrap();
                assert!((a - b).abs() <= 1e-12 * b, "S = {s}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn full_shift_closed_form_and_pressure() {
    let u = CoefficientSystem::uniform();
    for f in [vec![0.0, 1.0], vec![-0.5, 2.0], vec![0.0, 0.0, 0.7]] {
        let pot = Potential::new(f.clone()).unwrap();
        let sft = full_shift(f.len());
        let want = full_shift_asp(&pot);
        for v in asp_profiles(&sft, &pot, &u, 8).unwrap() {
            assert!((v - want).abs() < 1e-12);
        }
        let p = classical_pressure(&sft, &pot).unwrap();
        assert!((p - 2.0 * want).abs() < 1e-9);
    }
}

fn arb_case() -> impl Strategy<Value = (Sft, Vec<f64>, Vec<f64>)> {
    (0usize..11).prop_flat_map(|i| {
        let sft = table_shifts()[i].clone();
        let r = sft.alphabet_size();
        (
            Just(sft),
            proptest::collection::vec(0.0f64..2.0, r),
            proptest::collection::vec(0.0f64..1.0, r),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monotone_in_potential((sft, f, extra) in arb_case(), n in 1usize..=8, raw in any::<u64>()) {
        let g: Vec<f64> = f.iter().zip(&extra).map(|(a, b)| a + b).collect();
        let (pf, pg) = (Potential::new(f).unwrap(), Potential::new(g).unwrap());
        let mask = raw & ((1 << n) - 1);
        let s = SubsetSpec::new(n, mask).unwrap();
        prop_assert!(weighted_count(&sft, &pf, &s).unwrap() <= weighted_count(&sft, &pg, &s).unwrap() * (1.0 + 1e-12));
        let u = CoefficientSystem::uniform();
        let af = asp_profiles(&sft, &pf, &u, n).unwrap();
        let ag = asp_profiles(&sft, &pg, &u, n).unwrap();
        prop_assert!(af[n - 1] <= ag[n - 1] + 1e-12);
    }

    #[test]
    fn subset_bounded_by_full_window((sft, f, _) in arb_case(), n in 1usize..=8, raw in any::<u64>()) {
        let pot = Potential::new(f).unwrap();
        let s = SubsetSpec::new(n, raw & ((1 << n) - 1)).unwrap();
        let full = SubsetSpec::full(n).unwrap();
        let a = weighted_count(&sft, &pot, &s).unwrap();
        let b = weighted_count(&sft, &pot, &full).unwrap();
        prop_assert!(a.ln() <= b.ln() + 1e-12);
        let asp = asp_profiles(&sft, &pot, &CoefficientSystem::uniform(), n).unwrap();
        prop_assert!(asp[n - 1] <= b.ln() / n as f64 + 1e-12);
    }
}
