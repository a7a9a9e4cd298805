//! Command-line configuration.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use intricacy_core::sweep::Objective;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Parser)]
#[command(name = "intricacy", version, about = "Intricacy, average sample complexity and pressure for shifts of finite type and Markov measures")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Complexity profiles (H_n, Asc_n, Int_n, Acc_n, Alt_n) of a shift of finite type
    Topo,
    /// Average sample pressure of a single-coordinate potential
    Pressure,
    /// Entropy, Asc and Int of a Markov measure (series, finite horizon, Monte Carlo)
    Markov,
    /// Grid scan and refinement over a Markov family
    Sweep,
    /// Oracle and property suites
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Horizons given as `10`, `4-12` or `4,8,10`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Horizons(pub Vec<usize>);

impl FromStr for Horizons {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("'{t}' is not a horizon"));
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (num(a)?, num(b)?);
                    if a > b {
                        return Err(format!("empty range '{part}'"));
                    }
                    out.extend(a..=b);
                }
                None => out.push(num(part)?),
            }
        }
        if out.is_empty() || out.contains(&0) {
            return Err("horizons must be positive".into());
        }
        out.sort_unstable();
        out.dedup();
        Ok(Horizons(out))
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Input file: SFT (topo, pressure), Markov measure (markov) or family template (sweep)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Horizon(s): `10`, `4-12` or `4,8,10`
    #[arg(long, global = true)]
    pub n: Option<Horizons>,

    /// Block cover rank k (0 = time-0 cover)
    #[arg(long = "block-k", global = true, default_value_t = 0)]
    pub block_k: usize,

    /// Series terms K
    #[arg(long, global = true, default_value_t = 20)]
    pub terms: usize,

    /// `uniform` | `neural` | `psym:<p>` | `measure:<x1>=<m1>,...[;lebesgue=<m>]`
    #[arg(long, global = true, default_value = "uniform")]
    pub coeffs: String,

    /// Potential file, or inline values such as `0,0,1`
    #[arg(long, global = true)]
    pub potential: Option<String>,

    /// Family: full2-1step, gms-1step, gms-2step, or a path to a family template JSON
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// Family parameter (repeatable)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub param: Vec<f64>,

    /// Sweep objective: h, asc or int
    #[arg(long, global = true, default_value = "asc")]
    pub objective: Objective,

    /// Sweep grid step
    #[arg(long, global = true, default_value_t = 0.005)]
    pub step: f64,

    /// Monte Carlo samples (0 disables)
    #[arg(long, global = true, default_value_t = 0)]
    pub samples: usize,

    /// Monte Carlo seed (required with --samples)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file (default: standard output)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Check suite: all, coeffs, counts, product, subadditivity, profiles, markov, lambda, pressure
    #[arg(long, global = true, default_value = "all")]
    pub suite: String,

    /// Largest horizon for the enumeration-heavy check suites
    #[arg(long = "max-n", global = true, default_value_t = 8)]
    pub max_n: usize,
}

impl Options {
    pub fn validate(&self) -> Result<()> {
        if self.samples > 0 && self.seed.is_none() {
            return Err(CliError::bad("--seed is required when --samples is positive"));
        }
        if self.threads == Some(0) {
            return Err(CliError::bad("--threads must be positive"));
        }
        if self.terms == 0 {
            return Err(CliError::bad("--terms must be positive"));
        }
        if !(self.step > 0.0 && self.step <= 0.1) {
            return Err(CliError::bad("--step must lie in (0, 0.1]"));
        }
        if self.max_n == 0 {
            return Err(CliError::bad("--max-n must be positive"));
        }
        Ok(())
    }

    pub fn horizons_or(&self, default: usize) -> Vec<usize> {
        self.n.as_ref().map_or_else(|| vec![default], |h| h.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_forms() {
        assert_eq!("10".parse::<Horizons>().unwrap().0, vec![10]);
        assert_eq!("4-6,2,5".parse::<Horizons>().unwrap().0, vec![2, 4, 5, 6]);
        assert!("0".parse::<Horizons>().is_err());
        assert!("6-4".parse::<Horizons>().is_err());
        assert!("x".parse::<Horizons>().is_err());
    }

    #[test]
    fn flags_parse() {
        let c = RunConfig::try_parse_from([
            "intricacy", "markov", "--family", "gms-2step", "--param", "0.483", "--param", "0.569", "--samples", "10",
            "--seed", "3", "--format", "json",
        ])
        .unwrap();
        assert_eq!(c.command, Command::Markov);
        assert_eq!(c.opts.param, vec![0.483, 0.569]);
        assert_eq!(c.opts.format, Format::Json);
        c.opts.validate().unwrap();
    }

    #[test]
    fn seed_required() {
        let c = RunConfig::try_parse_from(["intricacy", "markov", "--samples", "10"]).unwrap();
        assert_eq!(c.opts.validate().unwrap_err().exit_code(), 1);
    }
}
