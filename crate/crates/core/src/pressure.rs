//! Average sample pressure for single-coordinate potentials on the cylinder
//! cover, and classical pressure for comparison.

use alloc::vec::Vec;

use crate::coeffs::CoefficientSystem;
use crate::error::{Error, Result};
use crate::linalg::{perron_root, Matrix};
use crate::numeric::{exp, ln};
use crate::sft::Sft;
use crate::subset::SubsetSpec;
use crate::table::{averages, log_table, path_table};
use crate::topo::DEFAULT_N_CAP;

/// A real function of the symbol at coordinate 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("potential needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("potential values must be finite"));
        }
        Ok(Potential { values })
    }

    pub fn zero(alphabet_size: usize) -> Self {
        Potential { values: alloc::vec![0.0; alphabet_size] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, symbol: usize) -> f64 {
        self.values[symbol]
    }

    fn weights_for(&self, sft: &Sft) -> Result<Vec<f64>> {
        if self.values.len() != sft.alphabet_size() {
            return Err(Error::invalid(alloc::format!(
                "potential has {} values but the alphabet has {} symbols",
                self.values.len(),
                sft.alphabet_size()
            )));
        }
        Ok(self.values.iter().map(|&v| exp(v)).collect())
    }
}

/// `Σ_{w ∈ L_S(X)} exp(Σ_i f(w_i))`.
pub fn weighted_count(sft: &Sft, f: &Potential, s: &SubsetSpec) -> Result<f64> {
    let w = f.weights_for(sft)?;
    let elements: Vec<usize> = s.elements().collect();
    Ok(sft.weighted_paths(&elements, &w))
}

/// `Asp(n) = (1/n) Σ_S c(n,|S|) log Σ_{w ∈ L_S(X)} exp(Σ f(w_i))`.
pub fn asp_profile(sft: &Sft, f: &Potential, coeffs: &CoefficientSystem, n: usize) -> Result<f64> {
    Ok(*asp_profiles(sft, f, coeffs, n)?.last().expect("n >= 1"))
}

/// `Asp(1), ..., Asp(n_max)` from one table.
pub fn asp_profiles(sft: &Sft, f: &Potential, coeffs: &CoefficientSystem, n_max: usize) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    if n_max > DEFAULT_N_CAP {
        return Err(Error::HorizonExceeded { requested: n_max, cap: DEFAULT_N_CAP });
    }
    let w = f.weights_for(sft)?;
    let logs = log_table(&path_table(sft, n_max, 1, &w)?);
    (1..=n_max).map(|n| averages(n, coeffs, &logs).map(|a| a.asc)).collect()
}

/// `P(σ, f) = log ρ(M diag(e^f))`.
pub fn classical_pressure(sft: &Sft, f: &Potential) -> Result<f64> {
    let w = f.weights_for(sft)?;
    let adj = sft.adjacency();
    let n = sft.state_count();
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in adj.row_ones(a) {
            m[(a, b)] = w[usize::from(sft.labels()[b])];
        }
    }
    Ok(ln(perron_root(&m, 1e-12, 1_000_000)?))
}

/// `(1/2) log Σ_i e^{f(i)}`: the limit (and every finite-`n` value under
/// uniform weights) of `Asp` on the full shift.
pub fn full_shift_asp(f: &Potential) -> f64 {
    0.5 * ln(f.values.iter().map(|&v| exp(v)).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::examples::*;
    use crate::topo::finite_profile;
    use core::f64::consts::{E, LN_2};

    fn f01() -> Potential {
        Potential::new(alloc::vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn weighted_count_examples() {
        let f2 = full_shift(2);
        let s3 = SubsetSpec::from_elements(5, &[0, 2, 4]).unwrap();
        assert_eq!(weighted_count(&f2, &Potential::zero(2), &s3).unwrap(), 8.0);
        let s01 = SubsetSpec::from_elements(2, &[0, 1]).unwrap();
        assert!((weighted_count(&f2, &f01(), &s01).unwrap() - (1.0 + E) * (1.0 + E)).abs() < 1e-12);
        assert!((weighted_count(&golden_mean(), &f01(), &s01).unwrap() - (1.0 + 2.0 * E)).abs() < 1e-12);
    }

    #[test]
    fn table_values() {
        let [a, b] = pressure_pair();
        let u = CoefficientSystem::uniform();
        let f1 = Potential::new(alloc::vec![0.0, 0.0, 1.0]).unwrap();
        let f2 = Potential::new(alloc::vec![0.0, 1.0, 0.0]).unwrap();
        assert!((asp_profile(&a, &f1, &u, 10).unwrap() - 0.660).abs() < 5e-4);
        assert!((asp_profile(&a, &f2, &u, 10).unwrap() - 0.660).abs() < 5e-4);
        assert!((asp_profile(&b, &f1, &u, 10).unwrap() - 0.722).abs() < 5e-4);
        assert!((asp_profile(&b, &f2, &u, 10).unwrap() - 0.633).abs() < 5e-4);
    }

    #[test]
    fn zero_potential_is_asc() {
        let u = CoefficientSystem::uniform();
        for s in same_complexity_pair() {
            let asp = asp_profile(&s, &Potential::zero(3), &u, 9).unwrap();
            assert_eq!(asp, finite_profile(&s, &u, 9, 0).unwrap().asc);
        }
    }

    #[test]
    fn full_shift_closed_form() {
        let f2 = full_shift(2);
        let u = CoefficientSystem::uniform();
        let v = asp_profile(&f2, &f01(), &u, 12).unwrap();
        assert!((v - full_shift_asp(&f01())).abs() < 1e-12);
        assert!((full_shift_asp(&f01()) - 0.5 * ln(1.0 + E)).abs() < 1e-15);
    }

    #[test]
    fn classical_examples() {
        let f2 = full_shift(2);
        assert!((classical_pressure(&f2, &Potential::zero(2)).unwrap() - LN_2).abs() < 1e-11);
        assert!((classical_pressure(&f2, &f01()).unwrap() - ln(1.0 + E)).abs() < 1e-11);
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((classical_pressure(&golden_mean(), &Potential::zero(2)).unwrap() - ln(phi)).abs() < 1e-11);
    }

    #[test]
    fn potential_must_cover_alphabet() {
        assert!(weighted_count(&full_shift(3), &f01(), &SubsetSpec::full(2).unwrap()).is_err());
    }
}
