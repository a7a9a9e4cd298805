//! Grid scans and simplex refinement over parameterised Markov families.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::markov::{asc_series_markov, examples, MarkovMeasure, SeriesResult};

/// Quantity being maximised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Entropy,
    Asc,
    Int,
}

impl Objective {
    pub fn of(&self, s: &SeriesResult) -> f64 {
        match self {
            Objective::Entropy => s.h,
            Objective::Asc => s.asc,
            Objective::Int => s.int,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Objective::Entropy => "h",
            Objective::Asc => "asc",
            Objective::Int => "int",
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" | "entropy" => Ok(Objective::Entropy),
            "asc" => Ok(Objective::Asc),
            "int" => Ok(Objective::Int),
            _ => Err(Error::invalid(alloc::format!("unknown objective '{s}' (expected h, asc or int)"))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One entry of a templated transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Const(f64),
    Param(usize),
    OneMinus(usize),
    /// `1 -` the sum of the other entries of the row.
    Remainder,
}

#[derive(Debug, Clone, PartialEq)]
enum Builder {
    Full2,
    Gms1,
    Gms2,
    Template { block_len: usize, alphabet_size: usize, states: Vec<Vec<u8>>, entries: Vec<Vec<Entry>> },
}

/// A map from a parameter box to Markov measures.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovFamily {
    name: String,
    bounds: Vec<(f64, f64)>,
    builder: Builder,
}

pub const BUILTIN_FAMILIES: [&str; 3] = ["full2-1step", "gms-1step", "gms-2step"];

impl MarkovFamily {
    /// `full2-1step` (`P00, P11`), `gms-1step` (`P00`) or `gms-2step`
    /// (`P000, P100`).
    pub fn builtin(name: &str) -> Result<Self> {
        let (builder, d) = match name {
            "full2-1step" => (Builder::Full2, 2),
            "gms-1step" => (Builder::Gms1, 1),
            "gms-2step" => (Builder::Gms2, 2),
            _ => return Err(Error::invalid(alloc::format!("unknown family '{name}'"))),
        };
        Ok(MarkovFamily { name: name.to_string(), bounds: vec![(0.0, 1.0); d], builder })
    }

    pub fn template(
        name: &str,
        block_len: usize,
        alphabet_size: usize,
        states: Vec<Vec<u8>>,
        entries: Vec<Vec<Entry>>,
        bounds: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if bounds.is_empty() || bounds.len() > 2 {
            return Err(Error::invalid("families have one or two parameters"));
        }
        if bounds.iter().any(|&(lo, hi)| !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi)) {
            return Err(Error::invalid("parameter bounds must be nested intervals in [0, 1]"));
        }
        if entries.len() != states.len() || entries.iter().any(|r| r.len() != states.len()) {
            return Err(Error::MalformedMatrix("template must be square over the states".into()));
        }
        for row in &entries {
            if row.iter().filter(|e| **e == Entry::Remainder).count() > 1 {
                return Err(Error::MalformedMatrix("at most one remainder per row".into()));
            }
            for e in row {
                if let Entry::Param(i) | Entry::OneMinus(i) = e {
                    if *i >= bounds.len() {
                        return Err(Error::invalid(alloc::format!("parameter p{i} has no bounds")));
                    }
                }
            }
        }
        Ok(MarkovFamily { name: name.to_string(), bounds, builder: Builder::Template { block_len, alphabet_size, states, entries } })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.dimension() && theta.iter().zip(&self.bounds).all(|(&t, &(lo, hi))| t >= lo && t <= hi)
    }

    pub fn build(&self, theta: &[f64]) -> Result<MarkovMeasure> {
        if !self.contains(theta) {
            return Err(Error::invalid(alloc::format!("parameters {theta:?} lie outside the family box")));
        }
        match &self.builder {
            Builder::Full2 => examples::full2(theta[0], theta[1]),
            Builder::Gms1 => examples::gms1(theta[0]),
            Builder::Gms2 => examples::gms2(theta[0], theta[1]),
            Builder::Template { block_len, alphabet_size, states, entries } => {
                let mut rows = Vec::with_capacity(entries.len());
                for row in entries {
                    let mut vals: Vec<f64> = row
                        .iter()
                        .map(|e| match e {
                            Entry::Const(c) => *c,
                            Entry::Param(i) => theta[*i],
                            Entry::OneMinus(i) => 1.0 - theta[*i],
                            Entry::Remainder => 0.0,
                        })
                        .collect();
                    if let Some(pos) = row.iter().position(|e| *e == Entry::Remainder) {
                        let rest: f64 = vals.iter().sum();
                        vals[pos] = 1.0 - rest;
                        if vals[pos] < 0.0 && vals[pos] > -1e-12 {
                            vals[pos] = 0.0;
                        }
                    }
                    rows.push(vals);
                }
                MarkovMeasure::with_states(*block_len, *alphabet_size, states.clone(), &rows, None)
            }
        }
    }

    /// Series values at `theta`.
    pub fn evaluate(&self, theta: &[f64], terms: usize) -> Result<SeriesResult> {
        asc_series_markov(&self.build(theta)?, terms)
    }
}

/// A grid point and its series values (`None` if the family failed there).
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub theta: Vec<f64>,
    pub eval: Option<SeriesResult>,
}

/// Outcome of a simplex refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub theta: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalMax {
    pub index: usize,
    pub theta: Vec<f64>,
    pub value: f64,
    pub refined: Option<Refined>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Best {
    pub theta: Vec<f64>,
    pub value: f64,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub family: String,
    pub objective: Objective,
    pub step: f64,
    pub terms: usize,
    /// Row-major over the grid, first parameter slowest.
    pub grid: Vec<GridPoint>,
    pub shape: Vec<usize>,
    pub local_maxima: Vec<LocalMax>,
    pub best: Best,
    pub skipped: usize,
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = libm::round((hi - lo) / step) as usize;
    let mut v: Vec<f64> = (0..=count).map(|i| (lo + i as f64 * step).min(hi)).collect();
    if let Some(last) = v.last_mut() {
        *last = hi;
    }
    v
}

/// Grid points (row-major, first parameter slowest) and the grid shape.
pub fn grid_points(family: &MarkovFamily, step: f64) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::invalid("grid step must lie in (0, 0.1]"));
    }
    let axes: Vec<Vec<f64>> = family.bounds.iter().map(|&(lo, hi)| axis(lo, hi, step)).collect();
    let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
    let mut pts = Vec::new();
    match axes.as_slice() {
        [a] => pts.extend(a.iter().map(|&x| vec![x])),
        [a, b] => {
            for &x in a {
                for &y in b {
                    pts.push(vec![x, y]);
                }
            }
        }
        _ => return Err(Error::invalid("families have one or two parameters")),
    }
    Ok((pts, shape))
}

fn neighbours(index: usize, shape: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(4);
    match *shape {
        [n] => {
            if index > 0 {
                out.push(index - 1);
            }
            if index + 1 < n {
                out.push(index + 1);
            }
        }
        [_, m] => {
            let (i, j) = (index / m, index % m);
            if i > 0 {
                out.push(index - m);
            }
            if index + m < shape[0] * m {
                out.push(index + m);
            }
            if j > 0 {
                out.push(index - 1);
            }
            if j + 1 < m {
                out.push(index + 1);
            }
        }
        _ => {}
    }
    out
}

/// Build a sweep result from evaluations at [`grid_points`].
pub fn assemble(
    family: &MarkovFamily,
    objective: Objective,
    step: f64,
    terms: usize,
    points: Vec<Vec<f64>>,
    shape: Vec<usize>,
    evals: Vec<Option<SeriesResult>>,
) -> Result<SweepResult> {
    let values: Vec<Option<f64>> = evals.iter().map(|e| e.as_ref().map(|s| objective.of(s))).collect();
    let skipped = values.iter().filter(|v| v.is_none()).count();
    let mut local_maxima = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let Some(v) = *v else { continue };
        if neighbours(i, &shape).iter().all(|&j| values[j].is_none_or(|w| v > w)) {
            local_maxima.push(LocalMax { index: i, theta: points[i].clone(), value: v, refined: None });
        }
    }
    let best_idx = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, b)) if b >= v => acc,
            _ => Some((i, v)),
        })
        .ok_or_else(|| Error::invalid("no grid point could be evaluated"))?;
    let theta = points[best_idx.0].clone();
    let boundary = on_boundary(family, &theta, step);
    let grid = points.into_iter().zip(evals).map(|(theta, eval)| GridPoint { theta, eval }).collect();
    Ok(SweepResult {
        family: family.name.clone(),
        objective,
        step,
        terms,
        grid,
        shape,
        local_maxima,
        best: Best { theta, value: best_idx.1, boundary },
        skipped,
    })
}

fn on_boundary(family: &MarkovFamily, theta: &[f64], step: f64) -> bool {
    theta.iter().zip(&family.bounds).any(|(&t, &(lo, hi))| t - lo < step - 1e-12 || hi - t < step - 1e-12)
}

/// Evaluate the whole grid sequentially.
pub fn scan(family: &MarkovFamily, objective: Objective, step: f64, terms: usize) -> Result<SweepResult> {
    if terms < 10 {
        return Err(Error::invalid("at least 10 series terms are required"));
    }
    let (points, shape) = grid_points(family, step)?;
    let evals = points
        .iter()
        .map(|t| match family.evaluate(t, terms) {
            Ok(s) => Some(s),
            Err(e) => {
                log::info!("skipping {t:?}: {e}");
                None
            }
        })
        .collect();
    assemble(family, objective, step, terms, points, shape, evals)
}

/// Refine every grid local maximum and update `best` to the largest refined
/// value.
pub fn refine(result: &mut SweepResult, family: &MarkovFamily) {
    for lm in &mut result.local_maxima {
        lm.refined = Some(maximize(family, result.objective, &lm.theta, result.terms));
    }
    if let Some(top) = result
        .local_maxima
        .iter()
        .filter_map(|lm| lm.refined.as_ref())
        .fold(None, |acc: Option<&Refined>, r| match acc {
            Some(a) if a.value >= r.value => Some(a),
            _ => Some(r),
        })
    {
        if top.value >= result.best.value {
            result.best = Best { theta: top.theta.clone(), value: top.value, boundary: on_boundary(family, &top.theta, result.step) };
        }
    }
}

const NM_TOL: f64 = 1e-5;
const NM_MAX_ITER: usize = 500;

/// Nelder–Mead maximisation started at `start`, with every trial point
/// clamped to the family box. Points where the family fails count as `-inf`.
pub fn maximize(family: &MarkovFamily, objective: Objective, start: &[f64], terms: usize) -> Refined {
    let d = family.dimension();
    let clamp = |x: &mut Vec<f64>| {
        for (t, &(lo, hi)) in x.iter_mut().zip(&family.bounds) {
            *t = t.clamp(lo, hi);
        }
    };
    let f = |x: &[f64]| family.evaluate(x, terms).map(|s| objective.of(&s)).unwrap_or(f64::NEG_INFINITY);
    let mut x0 = start.to_vec();
    clamp(&mut x0);
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.clone(), f(&x0))];
    for i in 0..d {
        let mut x = x0.clone();
        let (lo, hi) = family.bounds[i];
        x[i] = if x[i] + 0.05 <= hi { x[i] + 0.05 } else { (x[i] - 0.05).max(lo) };
        let v = f(&x);
        simplex.push((x, v));
    }
    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| b.1.total_cmp(&a.1));
    let diameter = |s: &[(Vec<f64>, f64)]| {
        let mut m: f64 = 0.0;
        for a in s {
            for b in s {
                let dist = a.0.iter().zip(&b.0).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
                m = m.max(libm::sqrt(dist));
            }
        }
        m
    };
    let mut iterations = 0;
    let mut converged = false;
    while iterations < NM_MAX_ITER {
        sort(&mut simplex);
        if diameter(&simplex) < NM_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        let worst = simplex[d].clone();
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let along = |t: f64| {
            let mut x: Vec<f64> = centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect();
            clamp(&mut x);
            x
        };
        let xr = along(1.0);
        let fr = f(&xr);
        if fr > simplex[0].1 {
            let xe = along(2.0);
            let fe = f(&xe);
            simplex[d] = if fe > fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr > simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let outside = fr > worst.1;
        let xc = along(if outside { 0.5 } else { -0.5 });
        let fc = f(&xc);
        if (outside && fc >= fr) || (!outside && fc > worst.1) {
            simplex[d] = (xc, fc);
            continue;
        }
        // shrink towards the best vertex
        let best = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&best) {
                *xi = bi + 0.5 * (*xi - bi);
            }
            *v = f(x);
        }
    }
    sort(&mut simplex);
    let (theta, value) = simplex.swap_remove(0);
    if !converged {
        log::warn!("simplex refinement stopped after {NM_MAX_ITER} iterations");
    }
    Refined { theta, value, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_parsing() {
        assert_eq!("asc".parse::<Objective>().unwrap(), Objective::Asc);
        assert!("foo".parse::<Objective>().is_err());
    }

    #[test]
    fn grid_shape_and_neighbours() {
        let f = MarkovFamily::builtin("full2-1step").unwrap();
        let (pts, shape) = grid_points(&f, 0.1).unwrap();
        assert_eq!(shape, vec![11, 11]);
        assert_eq!(pts.len(), 121);
        assert_eq!(pts[12], vec![0.1, 0.1]);
        assert_eq!(neighbours(0, &shape), vec![11, 1]);
        assert_eq!(neighbours(120, &shape).len(), 2);
        assert!(grid_points(&f, 0.2).is_err());
    }

    #[test]
    fn gms1_refinement() {
        let f = MarkovFamily::builtin("gms-1step").unwrap();
        let r = maximize(&f, Objective::Asc, &[0.5], 20);
        assert!((r.theta[0] - 0.533).abs() < 0.002 && (r.value - 0.271).abs() < 0.001, "{r:?}");
        let r = maximize(&f, Objective::Entropy, &[0.5], 20);
        assert!((r.theta[0] - 0.618).abs() < 0.002 && (r.value - 0.481).abs() < 0.001, "{r:?}");
    }

    #[test]
    fn full2_symmetry_and_zero_line() {
        let f = MarkovFamily::builtin("full2-1step").unwrap();
        let s = scan(&f, Objective::Int, 0.05, 20).unwrap();
        let m = s.shape[1];
        for (idx, g) in s.grid.iter().enumerate() {
            let (i, j) = (idx / m, idx % m);
            let mirror = &s.grid[j * m + i];
            if let (Some(a), Some(b)) = (&g.eval, &mirror.eval) {
                assert!((a.asc - b.asc).abs() < 1e-10 && (a.int - b.int).abs() < 1e-10);
            }
            if i + j == m - 1 {
                if let Some(a) = &g.eval {
                    assert!(a.int.abs() <= 2.0 * a.tail_bound);
                }
            }
        }
        // (1, 1) is reducible
        assert_eq!(s.skipped, 1);
    }

    #[test]
    fn template_matches_builtin() {
        let t = MarkovFamily::template(
            "gms2",
            2,
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 0]],
            vec![
                vec![Entry::Param(0), Entry::Remainder, Entry::Const(0.0)],
                vec![Entry::Const(0.0), Entry::Const(0.0), Entry::Const(1.0)],
                vec![Entry::Param(1), Entry::OneMinus(1), Entry::Const(0.0)],
            ],
            vec![(0.0, 1.0), (0.0, 1.0)],
        )
        .unwrap();
        let b = MarkovFamily::builtin("gms-2step").unwrap();
        assert_eq!(t.evaluate(&[0.3, 0.7], 20).unwrap(), b.evaluate(&[0.3, 0.7], 20).unwrap());
    }
}
