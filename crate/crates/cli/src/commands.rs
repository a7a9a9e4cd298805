//! The `topo`, `pressure`, `markov` and `sweep` subcommands.

use intricacy_core::markov::{asc_finite, asc_lambda, asc_series_markov, lambda_weight, monte_carlo_chunk, summarize_samples, MC_CHUNK};
use intricacy_core::pressure::{asp_profiles, classical_pressure};
use intricacy_core::sweep::{assemble, grid_points, refine, MarkovFamily, Objective, SweepResult, BUILTIN_FAMILIES};
use intricacy_core::topo::{asc_series, int_series, profiles};
use intricacy_core::{CoefficientSystem, MarkovMeasure, McEstimate, SeriesResult, Sft};
use rayon::prelude::*;

use crate::cache;
use crate::config::Options;
use crate::error::{CliError, Result};
use crate::input;
use crate::output::{rounded_summary, Cell, Table};
use crate::reference;

fn load_sft(opts: &Options, cmd: &str) -> Result<Sft> {
    let path = opts.input.as_ref().ok_or_else(|| CliError::bad(format!("{cmd} needs --input <sft.json>")))?;
    let mut sft = input::load_sft(path)?;
    cache::attach(&mut sft);
    Ok(sft)
}

pub const TOPO_COLUMNS: [&str; 14] = [
    "n",
    "block_k",
    "h_top",
    "H_n",
    "Asc_n",
    "Int_n",
    "Acc_n",
    "Alt_n",
    "asc_series",
    "int_series",
    "series_tail_bound",
    "coeffs_spec",
    "paper_rounded",
    "provenance",
];

pub fn topo(opts: &Options) -> Result<Table> {
    let sft = load_sft(opts, "topo")?;
    let coeffs = CoefficientSystem::parse(&opts.coeffs)?;
    let ns = opts.horizons_or(10);
    let all = profiles(&sft, &coeffs, *ns.last().expect("nonempty"), opts.block_k)?;
    let h_top = sft.topological_entropy();
    let series = if sft.square_positive() { Some((asc_series(&sft, opts.terms)?, int_series(&sft, opts.terms)?)) } else { None };
    let mut t = Table::new(&TOPO_COLUMNS);
    for &n in &ns {
        let p = &all[n - 1];
        t.push(vec![
            n.into(),
            p.block_k.into(),
            h_top.into(),
            p.h.into(),
            p.asc.into(),
            p.int.into(),
            p.acc.into(),
            p.alt.into(),
            series.map(|s| s.0.value).into(),
            series.map(|s| s.1.value).into(),
            series.map(|s| s.0.tail_bound).into(),
            p.coeffs_spec.as_str().into(),
            rounded_summary(&[("entropy", h_top), ("H", p.h), ("asc", p.asc), ("int", p.int)]).into(),
            reference::topo_tag(&sft, &coeffs, n, p.block_k).into(),
        ]);
    }
    Ok(t)
}

pub const PRESSURE_COLUMNS: [&str; 6] = ["n", "Asp_n", "pressure", "coeffs_spec", "paper_rounded", "provenance"];

pub fn pressure(opts: &Options) -> Result<Table> {
    let sft = load_sft(opts, "pressure")?;
    let spec = opts.potential.as_ref().ok_or_else(|| CliError::bad("pressure needs --potential"))?;
    let f = input::load_potential(spec, sft.alphabet_size())?;
    let coeffs = CoefficientSystem::parse(&opts.coeffs)?;
    let ns = opts.horizons_or(10);
    let asp = asp_profiles(&sft, &f, &coeffs, *ns.last().expect("nonempty"))?;
    let p = classical_pressure(&sft, &f)?;
    let mut t = Table::new(&PRESSURE_COLUMNS);
    for &n in &ns {
        let a = asp[n - 1];
        t.push(vec![
            n.into(),
            a.into(),
            p.into(),
            coeffs.spec_string().into(),
            rounded_summary(&[("asp", a), ("pressure", p)]).into(),
            reference::pressure_tag(&sft, f.values(), &coeffs, n).into(),
        ]);
    }
    Ok(t)
}

pub const MARKOV_COLUMNS: [&str; 16] = [
    "family",
    "block_len",
    "p1",
    "p2",
    "h_mu",
    "asc_mu",
    "int_mu",
    "method",
    "n_or_K",
    "tail_bound",
    "stderr",
    "samples",
    "seed",
    "coeffs_spec",
    "paper_rounded",
    "provenance",
];

/// A built-in family name, or a path to a family JSON file.
pub fn resolve_family(name: &str) -> Result<MarkovFamily> {
    if BUILTIN_FAMILIES.contains(&name) {
        Ok(MarkovFamily::builtin(name)?)
    } else if name.ends_with(".json") || std::path::Path::new(name).is_file() {
        input::load_family(std::path::Path::new(name))
    } else {
        Err(CliError::bad(format!("unknown family '{name}' (built-in: {})", BUILTIN_FAMILIES.join(", "))))
    }
}

/// The measure named by `--input` or by `--family` and `--param`.
pub fn markov_source(opts: &Options) -> Result<(String, Vec<f64>, MarkovMeasure)> {
    match (&opts.input, &opts.family) {
        (Some(path), None) => Ok(("input".into(), Vec::new(), input::load_markov(path)?)),
        (None, Some(name)) => {
            let fam = resolve_family(name)?;
            if opts.param.len() != fam.dimension() {
                return Err(CliError::bad(format!("{} takes {} --param value(s)", fam.name(), fam.dimension())));
            }
            Ok((fam.name().to_string(), opts.param.clone(), fam.build(&opts.param)?))
        }
        _ => Err(CliError::bad("markov needs exactly one of --input and --family")),
    }
}

/// Series for general weights: `Asc^λ` and `Int^λ = 2 Asc^λ - h`, with tail
/// bound `log r · (1/2 - Σ_{i<=K} w_i)`.
pub fn lambda_series(m: &MarkovMeasure, coeffs: &CoefficientSystem, terms: usize) -> Result<SeriesResult> {
    if coeffs.is_uniform() {
        return Ok(asc_series_markov(m, terms)?);
    }
    let lambda = coeffs.measure().ok_or_else(|| CliError::bad("series need a coefficient system backed by a measure"))?;
    let asc = asc_lambda(m, &lambda, terms)?;
    let head: f64 = (1..=terms).map(|i| lambda_weight(&lambda, i)).sum();
    let h = m.entropy_rate();
    let tail = (m.alphabet_size() as f64).ln() * (0.5 - head).max(0.0);
    Ok(SeriesResult { h, asc, int: 2.0 * asc - h, terms, tail_bound: tail })
}

/// Monte Carlo estimate with chunks evaluated in parallel and reduced in
/// sample order, so the result does not depend on the thread count.
pub fn parallel_monte_carlo(m: &MarkovMeasure, n: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(CliError::bad("at least one sample is required"));
    }
    let chunks: Vec<Vec<f64>> =
        (0..samples.div_ceil(MC_CHUNK)).into_par_iter().map(|c| monte_carlo_chunk(m, n, samples, seed, c)).collect::<Result<_, _>>()?;
    Ok(summarize_samples(&chunks.concat(), n, seed))
}

pub fn markov(opts: &Options) -> Result<Table> {
    let (family, theta, m) = markov_source(opts)?;
    let coeffs = CoefficientSystem::parse(&opts.coeffs)?;
    let p = |i: usize| Cell::from(theta.get(i).copied());
    let mut t = Table::new(&MARKOV_COLUMNS);
    let base = |t: &mut Table, h: f64, asc: f64, int: f64, rest: [Cell; 6], tag: Option<&str>| {
        let [method, n_or_k, tail, stderr, samples, seed] = rest;
        t.push(vec![
            family.as_str().into(),
            m.block_len().into(),
            p(0),
            p(1),
            h.into(),
            asc.into(),
            int.into(),
            method,
            n_or_k,
            tail,
            stderr,
            samples,
            seed,
            coeffs.spec_string().into(),
            rounded_summary(&[("h", h), ("asc", asc), ("int", int)]).into(),
            tag.into(),
        ]);
    };
    let s = lambda_series(&m, &coeffs, opts.terms)?;
    let tag = if coeffs.is_uniform() { reference::markov_tag(&family, &theta, opts.terms) } else { None };
    base(&mut t, s.h, s.asc, s.int, ["series".into(), s.terms.into(), s.tail_bound.into(), Cell::Empty, Cell::Empty, Cell::Empty], tag);
    if let Some(ns) = &opts.n {
        for &n in &ns.0 {
            let r = asc_finite(&m, &coeffs, n)?;
            base(&mut t, r.h, r.asc, r.int, ["finite".into(), n.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty], None);
        }
    }
    if opts.samples > 0 {
        let seed = opts.seed.expect("validated");
        for n in opts.horizons_or(16) {
            let e = parallel_monte_carlo(&m, n, opts.samples, seed)?;
            base(
                &mut t,
                m.entropy_rate(),
                e.mean,
                2.0 * e.mean - m.entropy_rate(),
                ["mc".into(), n.into(), Cell::Empty, e.stderr.into(), e.samples.into(), e.seed.into()],
                None,
            );
        }
    }
    Ok(t)
}

/// Grid scan with points evaluated in parallel, followed by refinement of
/// every strict grid local maximum.
pub fn parallel_sweep(family: &MarkovFamily, objective: Objective, step: f64, terms: usize) -> Result<SweepResult> {
    if terms < 10 {
        return Err(CliError::bad("sweeps need at least 10 series terms"));
    }
    let (points, shape) = grid_points(family, step)?;
    let evals = points
        .par_iter()
        .map(|t| match family.evaluate(t, terms) {
            Ok(s) => Some(s),
            Err(e) => {
                log::info!("skipping {t:?}: {e}");
                None
            }
        })
        .collect();
    let mut res = assemble(family, objective, step, terms, points, shape, evals)?;
    if res.skipped > 0 {
        log::warn!("{} grid point(s) skipped", res.skipped);
    }
    refine(&mut res, family);
    Ok(res)
}

pub const SWEEP_COLUMNS: [&str; 14] = [
    "kind",
    "family",
    "objective",
    "p1",
    "p2",
    "h_mu",
    "asc_mu",
    "int_mu",
    "value",
    "boundary",
    "iterations",
    "converged",
    "paper_rounded",
    "provenance",
];

pub fn sweep(opts: &Options) -> Result<Table> {
    let family = match (&opts.input, &opts.family) {
        (Some(path), None) => input::load_family(path)?,
        (None, Some(name)) => resolve_family(name)?,
        _ => return Err(CliError::bad("sweep needs exactly one of --input and --family")),
    };
    let res = parallel_sweep(&family, opts.objective, opts.step, opts.terms)?;
    let mut t = Table::new(&SWEEP_COLUMNS);
    let obj = res.objective;
    let row = |t: &mut Table, kind: &str, theta: &[f64], extra: [Cell; 3], tag: Option<&str>| {
        let s = family.evaluate(theta, res.terms).ok();
        let v = s.as_ref().map(|s| obj.of(s));
        let rounded = s.as_ref().map(|s| rounded_summary(&[("h", s.h), ("asc", s.asc), ("int", s.int)]));
        let [boundary, iterations, converged] = extra;
        t.push(vec![
            kind.into(),
            res.family.as_str().into(),
            obj.name().into(),
            theta.first().copied().into(),
            theta.get(1).copied().into(),
            s.as_ref().map(|s| s.h).into(),
            s.as_ref().map(|s| s.asc).into(),
            s.as_ref().map(|s| s.int).into(),
            v.into(),
            boundary,
            iterations,
            converged,
            rounded.into(),
            tag.into(),
        ]);
    };
    for gp in &res.grid {
        let e = gp.eval.as_ref();
        t.push(vec![
            "grid".into(),
            res.family.as_str().into(),
            obj.name().into(),
            gp.theta.first().copied().into(),
            gp.theta.get(1).copied().into(),
            e.map(|s| s.h).into(),
            e.map(|s| s.asc).into(),
            e.map(|s| s.int).into(),
            e.map(|s| obj.of(s)).into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    let tag = |theta: &[f64]| reference::maximiser_tag(&res.family, obj, theta, 0.01);
    for lm in &res.local_maxima {
        row(&mut t, "local_max", &lm.theta, [Cell::Empty, Cell::Empty, Cell::Empty], None);
        if let Some(r) = &lm.refined {
            row(&mut t, "refined", &r.theta, [Cell::Empty, r.iterations.into(), r.converged.into()], tag(&r.theta));
        }
    }
    row(&mut t, "best", &res.best.theta, [res.best.boundary.into(), Cell::Empty, Cell::Empty], tag(&res.best.theta));
    Ok(t)
}
