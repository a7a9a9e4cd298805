//! Systems of coefficients `c(n, k)`: nonnegative weights on subsets of
//! `{0, ..., n-1}` that depend only on the subset size `k`, sum to one over
//! all subsets and are invariant under complementation.
//!
//! Every built-in system is a moment sequence of a symmetric probability
//! measure `lambda` on `[0, 1]`:
//!
//! ```text
//! c(n, k) = ∫ x^k (1 - x)^(n - k) lambda(dx)
//! ```
//!
//! `uniform` is `lambda = delta_{1/2}`, `neural` is Lebesgue measure and
//! `psym:p` is `(delta_p + delta_{1-p}) / 2`. Weights are tabulated once at
//! construction, so evaluation is a lookup.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::numeric::{binomial, binomial_f64};

pub const DEFAULT_HORIZON: usize = 64;
const UNDERFLOW: f64 = 1e-300;
const AXIOM_TOL: f64 = 1e-12;

/// Symmetric probability measure on `[0, 1]` with finitely many atoms plus
/// an optional multiple of Lebesgue measure.
///
/// Atoms are stored one-sided: an entry `(x, m)` with `x < 1/2` stands for
/// mass `m` at `x` *and* mass `m` at `1 - x`; an entry at `x = 1/2` carries
/// its mass once.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMeasure {
    atoms: Vec<(f64, f64)>,
    lebesgue: f64,
}

impl SymmetricMeasure {
    /// Mirror one-sided atoms and validate total mass.
    pub fn new(atoms: &[(f64, f64)], lebesgue: f64) -> Result<Self> {
        if !(lebesgue >= 0.0) || !lebesgue.is_finite() {
            return Err(Error::invalid("lebesgue mass must be a nonnegative number"));
        }
        let mut folded: Vec<(f64, f64)> = Vec::new();
        for &(x, m) in atoms {
            if !(m >= 0.0) || !m.is_finite() {
                return Err(Error::invalid(alloc::format!("negative or non-finite mass {m} at {x}")));
            }
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::invalid(alloc::format!(
                    "atom at {x}: mass at 0 or 1 (or outside [0,1]) is not allowed"
                )));
            }
            if m == 0.0 {
                continue;
            }
            let loc = if x > 0.5 { 1.0 - x } else { x };
            match folded.iter_mut().find(|(y, _)| *y == loc) {
                Some(slot) => slot.1 += m,
                None => folded.push((loc, m)),
            }
        }
        folded.sort_by(|a, b| a.0.total_cmp(&b.0));
        let measure = SymmetricMeasure { atoms: folded, lebesgue };
        let total = measure.total_mass();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(alloc::format!("total mass {total} differs from 1")));
        }
        Ok(measure)
    }

    pub fn lebesgue() -> Self {
        SymmetricMeasure { atoms: Vec::new(), lebesgue: 1.0 }
    }

    pub fn dirac_half() -> Self {
        SymmetricMeasure { atoms: alloc::vec![(0.5, 1.0)], lebesgue: 0.0 }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(x, m)| if x == 0.5 { m } else { 2.0 * m }).sum::<f64>() + self.lebesgue
    }

    /// Full (two-sided) atom list.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &(x, m) in &self.atoms {
            out.push((x, m));
            if x != 0.5 {
                out.push((1.0 - x, m));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    pub fn lebesgue_mass(&self) -> f64 {
        self.lebesgue
    }

    /// `∫ g(x) lambda(dx)` for a function whose Lebesgue integral is supplied
    /// in closed form.
    pub fn integrate(&self, g: impl Fn(f64) -> f64, lebesgue_integral: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|&(x, m)| if x == 0.5 { m * g(x) } else { m * (g(x) + g(1.0 - x)) })
            .sum();
        atoms + self.lebesgue * lebesgue_integral
    }

    fn weight(&self, n: usize, k: usize) -> f64 {
        let mut w = 0.0;
        for &(x, m) in &self.atoms {
            let a = libm::pow(x, k as f64) * libm::pow(1.0 - x, (n - k) as f64);
            if x == 0.5 {
                w += m * a;
            } else {
                let b = libm::pow(1.0 - x, k as f64) * libm::pow(x, (n - k) as f64);
                // a + b and b + a round identically, so c(n,k) = c(n,n-k) exactly
                w += m * (a + b);
            }
        }
        if self.lebesgue > 0.0 {
            w += self.lebesgue * beta_weight(n, k);
        }
        w
    }
}

/// `∫_0^1 x^k (1-x)^(n-k) dx = k! (n-k)! / (n+1)! = 1 / ((n+1) C(n,k))`,
/// computed from an exact integer binomial.
fn beta_weight(n: usize, k: usize) -> f64 {
    let c = binomial(n as u32, k as u32).expect("binomial fits u128 below the horizon cap");
    1.0 / ((n as f64 + 1.0) * c as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientKind {
    Uniform,
    Neural,
    PSymmetric { p: f64 },
    Measure(SymmetricMeasure),
    /// Explicit table `table[n][k]`, not validated at construction.
    Table(Vec<Vec<f64>>),
}

/// A system of coefficients with weights precomputed up to `horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSystem {
    kind: CoefficientKind,
    horizon: usize,
    // table[n][k], n = 0..=horizon
    table: Vec<Vec<f64>>,
    underflowed: bool,
}

impl CoefficientSystem {
    pub fn uniform() -> Self {
        Self::build(CoefficientKind::Uniform, DEFAULT_HORIZON)
    }

    pub fn neural() -> Self {
        Self::build(CoefficientKind::Neural, DEFAULT_HORIZON)
    }

    pub fn p_symmetric(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(alloc::format!("p-symmetric weights need 0 < p < 1, got {p}")));
        }
        Ok(Self::build(CoefficientKind::PSymmetric { p }, DEFAULT_HORIZON))
    }

    /// Measure-backed system from one-sided atoms (auto-mirrored) and a
    /// Lebesgue component.
    pub fn from_measure(atoms: &[(f64, f64)], lebesgue: f64) -> Result<Self> {
        let m = SymmetricMeasure::new(atoms, lebesgue)?;
        Ok(Self::build(CoefficientKind::Measure(m), DEFAULT_HORIZON))
    }

    /// Hand-built table `table[n][k]` for `n = 0..table.len()`. No axioms are
    /// checked; use [`CoefficientSystem::validate`].
    pub fn from_table(table: Vec<Vec<f64>>) -> Result<Self> {
        for (n, row) in table.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::invalid(alloc::format!("table row {n} must have {} entries", n + 1)));
            }
        }
        let horizon = table.len().saturating_sub(1);
        Ok(CoefficientSystem { kind: CoefficientKind::Table(table.clone()), horizon, table, underflowed: false })
    }

    /// Same system tabulated to a different horizon.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        if matches!(self.kind, CoefficientKind::Table(_)) {
            return Err(Error::Unsupported("changing the horizon of a hand-built table".into()));
        }
        if horizon > 128 {
            return Err(Error::HorizonExceeded { requested: horizon, cap: 128 });
        }
        Ok(Self::build(self.kind.clone(), horizon))
    }

    fn build(kind: CoefficientKind, horizon: usize) -> Self {
        let mut underflowed = false;
        let table = (0..=horizon)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        let w = raw_weight(&kind, n, k);
                        if w > 0.0 && w < UNDERFLOW {
                            underflowed = true;
                            0.0
                        } else {
                            w
                        }
                    })
                    .collect()
            })
            .collect();
        if underflowed {
            log::warn!("coefficient weights below {UNDERFLOW:e} were flushed to zero");
        }
        CoefficientSystem { kind, horizon, table, underflowed }
    }

    pub fn kind(&self) -> &CoefficientKind {
        &self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, CoefficientKind::Uniform)
    }

    pub fn underflowed(&self) -> bool {
        self.underflowed
    }

    /// `c(n, k)`: the weight of any subset of size `k` of `{0..n-1}`.
    pub fn weight(&self, n: usize, k: usize) -> Result<f64> {
        if n > self.horizon {
            return Err(Error::HorizonExceeded { requested: n, cap: self.horizon });
        }
        if k > n {
            return Err(Error::OutOfRange { n, k });
        }
        Ok(self.table[n][k])
    }

    /// The row `c(n, 0..=n)`.
    pub fn row(&self, n: usize) -> Result<&[f64]> {
        if n > self.horizon {
            return Err(Error::HorizonExceeded { requested: n, cap: self.horizon });
        }
        Ok(&self.table[n])
    }

    /// Check the defining axioms for every `n <= n_max`.
    pub fn validate(&self, n_max: usize) -> ValidationReport {
        let n_max = n_max.min(self.horizon);
        let rows = (1..=n_max)
            .map(|n| {
                let row = &self.table[n];
                let total: f64 = row.iter().enumerate().map(|(k, w)| binomial_f64(n, k) * w).sum();
                let asym = (0..=n).map(|k| (row[k] - row[n - k]).abs()).fold(0.0f64, f64::max);
                let negative = row.iter().enumerate().find(|(_, w)| **w < 0.0 || w.is_nan()).map(|(k, w)| (k, *w));
                AxiomRow { n, sum_deviation: (total - 1.0).abs(), max_asymmetry: asym, negative }
            })
            .collect::<Vec<_>>();
        let passed = rows
            .iter()
            .all(|r| r.sum_deviation <= AXIOM_TOL && r.max_asymmetry <= AXIOM_TOL && r.negative.is_none());
        ValidationReport { rows, passed }
    }

    /// Parse a coefficient string:
    /// `uniform | neural | psym:<p> | measure:<x1>=<m1>,...[;lebesgue=<m>]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "uniform" => return Ok(Self::uniform()),
            "neural" => return Ok(Self::neural()),
            _ => {}
        }
        if let Some(p) = spec.strip_prefix("psym:") {
            let p: f64 = p.trim().parse().map_err(|_| Error::invalid(alloc::format!("bad p in '{spec}'")))?;
            return Self::p_symmetric(p);
        }
        if let Some(body) = spec.strip_prefix("measure:") {
            let (atoms_part, leb_part) = match body.split_once(';') {
                Some((a, l)) => (a, Some(l)),
                None => (body, None),
            };
            let mut atoms = Vec::new();
            for item in atoms_part.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (x, m) = item
                    .split_once('=')
                    .ok_or_else(|| Error::invalid(alloc::format!("atom '{item}' must be <x>=<mass>")))?;
                let x: f64 = x.trim().parse().map_err(|_| Error::invalid(alloc::format!("bad location '{x}'")))?;
                let m: f64 = m.trim().parse().map_err(|_| Error::invalid(alloc::format!("bad mass '{m}'")))?;
                atoms.push((x, m));
            }
            let leb = match leb_part {
                None => 0.0,
                Some(l) => {
                    let v = l
                        .trim()
                        .strip_prefix("lebesgue=")
                        .ok_or_else(|| Error::invalid(alloc::format!("expected 'lebesgue=<m>', got '{l}'")))?;
                    v.trim().parse().map_err(|_| Error::invalid(alloc::format!("bad lebesgue mass '{v}'")))?
                }
            };
            return Self::from_measure(&atoms, leb);
        }
        Err(Error::invalid(alloc::format!("unknown coefficient system '{spec}'")))
    }

    /// Canonical spec string (inverse of [`CoefficientSystem::parse`]).
    pub fn spec_string(&self) -> String {
        self.to_string()
    }

    /// The symmetric measure behind a built-in system, if any.
    pub fn measure(&self) -> Option<SymmetricMeasure> {
        match &self.kind {
            CoefficientKind::Uniform => Some(SymmetricMeasure::dirac_half()),
            CoefficientKind::Neural => Some(SymmetricMeasure::lebesgue()),
            CoefficientKind::PSymmetric { p } => {
                let loc = if *p > 0.5 { 1.0 - p } else { *p };
                Some(if loc == 0.5 {
                    SymmetricMeasure::dirac_half()
                } else {
                    SymmetricMeasure { atoms: alloc::vec![(loc, 0.5)], lebesgue: 0.0 }
                })
            }
            CoefficientKind::Measure(m) => Some(m.clone()),
            CoefficientKind::Table(_) => None,
        }
    }
}

impl fmt::Display for CoefficientSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CoefficientKind::Uniform => f.write_str("uniform"),
            CoefficientKind::Neural => f.write_str("neural"),
            CoefficientKind::PSymmetric { p } => write!(f, "psym:{p}"),
            CoefficientKind::Measure(m) => {
                f.write_str("measure:")?;
                for (i, (x, mass)) in m.atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}={mass}")?;
                }
                if m.lebesgue > 0.0 {
                    write!(f, ";lebesgue={}", m.lebesgue)?;
                }
                Ok(())
            }
            CoefficientKind::Table(_) => f.write_str("table"),
        }
    }
}

fn raw_weight(kind: &CoefficientKind, n: usize, k: usize) -> f64 {
    match kind {
        CoefficientKind::Uniform => libm::pow(0.5, n as f64),
        CoefficientKind::Neural => beta_weight(n, k),
        CoefficientKind::PSymmetric { p } => {
            let q = 1.0 - p;
            let a = libm::pow(*p, k as f64) * libm::pow(q, (n - k) as f64);
            let b = libm::pow(q, k as f64) * libm::pow(*p, (n - k) as f64);
            0.5 * (a + b)
        }
        CoefficientKind::Measure(m) => m.weight(n, k),
        CoefficientKind::Table(t) => t.get(n).and_then(|r| r.get(k)).copied().unwrap_or(0.0),
    }
}

/// Per-`n` axiom check.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomRow {
    pub n: usize,
    /// `|sum_S c_S^n - 1|`
    pub sum_deviation: f64,
    /// `max_k |c(n,k) - c(n,n-k)|`
    pub max_asymmetry: f64,
    /// First negative weight, as `(k, value)`.
    pub negative: Option<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<AxiomRow>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.sum_deviation).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn weight_examples() {
        assert_eq!(CoefficientSystem::uniform().weight(3, 2).unwrap(), 0.125);
        let nc = CoefficientSystem::neural().weight(2, 1).unwrap();
        assert!((nc - 1.0 / 6.0).abs() < 1e-15);
        let half = CoefficientSystem::from_measure(&[(0.5, 1.0)], 0.0).unwrap();
        assert!((half.weight(5, 3).unwrap() - 0.03125).abs() < 1e-16);
        let ps = CoefficientSystem::p_symmetric(0.3).unwrap();
        assert!((ps.weight(2, 0).unwrap() - 0.29).abs() < 1e-15);
    }

    #[test]
    fn weight_errors() {
        let u = CoefficientSystem::uniform();
        assert!(matches!(u.weight(65, 1), Err(Error::HorizonExceeded { .. })));
        assert!(matches!(u.weight(3, 4), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn from_measure_examples() {
        let leb = CoefficientSystem::from_measure(&[], 1.0).unwrap();
        for n in 1..=12 {
            for k in 0..=n {
                let expect = 1.0 / ((n + 1) as f64 * binomial_f64(n, k));
                assert!((leb.weight(n, k).unwrap() - expect).abs() < 1e-15);
            }
        }
        let m = CoefficientSystem::from_measure(&[(0.3, 0.5)], 0.0).unwrap();
        let atoms = m.measure().unwrap().atoms();
        assert_eq!(atoms.len(), 2);
        assert!((atoms[1].0 - 0.7).abs() < 1e-15 && atoms[1].1 == 0.5);
        assert!((m.weight(2, 0).unwrap() - 0.29).abs() < 1e-15);
    }

    #[test]
    fn from_measure_errors() {
        assert!(CoefficientSystem::from_measure(&[(0.0, 0.5)], 0.0).is_err());
        assert!(CoefficientSystem::from_measure(&[(1.0, 0.5)], 0.0).is_err());
        assert!(CoefficientSystem::from_measure(&[(0.3, 0.4)], 0.0).is_err());
        assert!(CoefficientSystem::from_measure(&[(0.3, -0.5)], 2.0).is_err());
        assert!(CoefficientSystem::p_symmetric(1.0).is_err());
    }

    #[test]
    fn validate_examples() {
        let r = CoefficientSystem::uniform().validate(10);
        assert!(r.passed);
        assert_eq!(r.max_deviation(), 0.0);
        assert!(CoefficientSystem::neural().validate(10).passed);
        let table = vec![
            vec![1.0],
            vec![0.5, 0.5],
            vec![0.25, 0.25, 0.25],
            vec![0.1, 0.2, 0.1, 0.1],
        ];
        let bad = CoefficientSystem::from_table(table).unwrap();
        let report = bad.validate(3);
        assert!(!report.passed);
        assert!(report.rows[2].max_asymmetry > 0.09);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["uniform", "neural", "psym:0.3", "measure:0.3=0.25;lebesgue=0.5"] {
            let c = CoefficientSystem::parse(s).unwrap();
            assert_eq!(CoefficientSystem::parse(&c.spec_string()).unwrap(), c);
        }
        assert!(CoefficientSystem::parse("measure:0.3").is_err());
        assert!(CoefficientSystem::parse("bogus").is_err());
    }

    #[test]
    fn underflow_is_flagged() {
        let c = CoefficientSystem::p_symmetric(1e-10).unwrap();
        assert!(c.underflowed());
        assert!(c.weight(64, 32).unwrap() >= 0.0);
    }
}
