//! JSON input formats.

use std::collections::BTreeMap;
use std::path::Path;

use intricacy_core::sft::{parse_symbol, parse_word};
use intricacy_core::sweep::{Entry, MarkovFamily};
use intricacy_core::{MarkovMeasure, Potential, Sft};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::bad(format!("malformed {what} file: {e}")))
}

/// `{"alphabet_size": r, "adjacency": [[0/1,...],...]}` or
/// `{"alphabet_size": r, "forbidden_words": ["11", ...]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftFile {
    pub alphabet_size: usize,
    pub adjacency: Option<Vec<Vec<u8>>>,
    pub forbidden_words: Option<Vec<String>>,
}

impl SftFile {
    pub fn build(&self) -> Result<Sft> {
        match (&self.adjacency, &self.forbidden_words) {
            (Some(rows), None) => {
                if rows.len() != self.alphabet_size {
                    return Err(CliError::bad(format!(
                        "adjacency has {} rows but alphabet_size is {}",
                        rows.len(),
                        self.alphabet_size
                    )));
                }
                Ok(Sft::from_adjacency(rows)?)
            }
            (None, Some(words)) => {
                let words = words.iter().map(|w| parse_word(w)).collect::<Result<Vec<_>, _>>()?;
                Ok(Sft::from_forbidden(self.alphabet_size, &words)?)
            }
            _ => Err(CliError::bad("exactly one of adjacency and forbidden_words must be given")),
        }
    }
}

pub fn parse_sft(text: &str) -> Result<Sft> {
    parse::<SftFile>(text, "SFT")?.build()
}

pub fn load_sft(path: &Path) -> Result<Sft> {
    parse_sft(&read(path)?)
}

/// `{"block_len": 1, "P": [[...]], "p": [...]}` or
/// `{"block_len": 2, "states": ["00","01","10"], "P": [[...]]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovFile {
    #[serde(default = "one")]
    pub block_len: usize,
    pub alphabet_size: Option<usize>,
    pub states: Option<Vec<String>>,
    #[serde(rename = "P")]
    pub transition: Vec<Vec<f64>>,
    #[serde(rename = "p")]
    pub stationary: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

fn parse_states(states: &Option<Vec<String>>, block_len: usize, count: usize) -> Result<Vec<Vec<u8>>> {
    match states {
        Some(s) => Ok(s.iter().map(|w| parse_word(w)).collect::<Result<Vec<_>, _>>()?),
        None if block_len == 1 => Ok((0..count).map(|a| vec![a as u8]).collect()),
        None => Err(CliError::bad("states are required when block_len > 1")),
    }
}

fn infer_alphabet(explicit: Option<usize>, states: &[Vec<u8>]) -> usize {
    explicit.unwrap_or_else(|| states.iter().flatten().map(|&a| usize::from(a) + 1).max().unwrap_or(1).max(2))
}

impl MarkovFile {
    pub fn build(&self) -> Result<MarkovMeasure> {
        let states = parse_states(&self.states, self.block_len, self.transition.len())?;
        let r = infer_alphabet(self.alphabet_size, &states);
        Ok(MarkovMeasure::with_states(self.block_len, r, states, &self.transition, self.stationary.as_deref())?)
    }
}

pub fn parse_markov(text: &str) -> Result<MarkovMeasure> {
    parse::<MarkovFile>(text, "Markov")?.build()
}

pub fn load_markov(path: &Path) -> Result<MarkovMeasure> {
    parse_markov(&read(path)?)
}

/// `{"values": {"0": 0.0, "1": 1.0, ...}}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    pub values: BTreeMap<String, f64>,
}

impl PotentialFile {
    pub fn build(&self, alphabet_size: usize) -> Result<Potential> {
        let mut values = vec![None; alphabet_size];
        for (k, &v) in &self.values {
            let mut chars = k.chars();
            let sym = match (chars.next().and_then(parse_symbol), chars.next()) {
                (Some(s), None) => usize::from(s),
                _ => return Err(CliError::bad(format!("'{k}' is not a symbol"))),
            };
            if sym >= alphabet_size {
                return Err(CliError::bad(format!("symbol '{k}' is outside the alphabet")));
            }
            values[sym] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| CliError::bad(format!("potential has no value for symbol {i}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Potential::new(values)?)
    }
}

/// A potential from a file path or an inline list such as `0,0,1`.
pub fn load_potential(spec: &str, alphabet_size: usize) -> Result<Potential> {
    let inline: Option<Vec<f64>> = spec.split(',').map(|t| t.trim().parse().ok()).collect();
    if let Some(values) = inline {
        if values.len() != alphabet_size {
            return Err(CliError::bad(format!(
                "potential has {} values but the alphabet has {alphabet_size} symbols",
                values.len()
            )));
        }
        return Ok(Potential::new(values)?);
    }
    parse::<PotentialFile>(&read(Path::new(spec))?, "potential")?.build(alphabet_size)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TemplateEntry {
    Number(f64),
    Text(String),
}

impl TemplateEntry {
    fn to_entry(&self) -> Result<Entry> {
        let param = |t: &str| -> Option<usize> { t.strip_prefix('p')?.parse().ok() };
        match self {
            TemplateEntry::Number(x) => Ok(Entry::Const(*x)),
            TemplateEntry::Text(t) => {
                let t = t.replace(' ', "");
                if t == "rest" {
                    Ok(Entry::Remainder)
                } else if let Some(i) = param(&t) {
                    Ok(Entry::Param(i))
                } else if let Some(i) = t.strip_prefix("1-").and_then(param) {
                    Ok(Entry::OneMinus(i))
                } else {
                    Err(CliError::bad(format!("template entry '{t}' is not a number, pK, 1-pK or rest")))
                }
            }
        }
    }
}

/// Custom family: a transition template whose entries are numbers, `"p0"`,
/// `"1-p0"`, `"p1"`, ... or `"rest"` (one minus the rest of the row).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub name: Option<String>,
    #[serde(default = "one")]
    pub block_len: usize,
    pub alphabet_size: Option<usize>,
    pub states: Option<Vec<String>>,
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(rename = "P")]
    pub template: Vec<Vec<TemplateEntry>>,
}

impl FamilyFile {
    pub fn build(&self) -> Result<MarkovFamily> {
        let states = parse_states(&self.states, self.block_len, self.template.len())?;
        let r = infer_alphabet(self.alphabet_size, &states);
        let entries =
            self.template.iter().map(|row| row.iter().map(TemplateEntry::to_entry).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let bounds = match &self.bounds {
            Some(b) => b.iter().map(|&[lo, hi]| (lo, hi)).collect(),
            None => {
                let d = entries
                    .iter()
                    .flatten()
                    .filter_map(|e| match e {
                        Entry::Param(i) | Entry::OneMinus(i) => Some(i + 1),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                vec![(0.0, 1.0); d]
            }
        };
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        Ok(MarkovFamily::template(&name, self.block_len, r, states, entries, bounds)?)
    }
}

pub fn parse_family(text: &str) -> Result<MarkovFamily> {
    parse::<FamilyFile>(text, "family")?.build()
}

pub fn load_family(path: &Path) -> Result<MarkovFamily> {
    parse_family(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use intricacy_core::markov::examples::gms2;
    use intricacy_core::sft::examples::golden_mean;
    use intricacy_core::SubsetSpec;

    #[test]
    fn sft_forms() {
        let a = parse_sft(r#"{"alphabet_size": 2, "forbidden_words": ["11"]}"#).unwrap();
        let b = parse_sft(r#"{"alphabet_size": 2, "adjacency": [[1,1],[1,0]]}"#).unwrap();
        let s = SubsetSpec::from_elements(3, &[0, 2]).unwrap();
        assert_eq!(a.count_words_at(&s), 4u128);
        assert_eq!(b.count_words_at(&s), 4u128);
        assert!(parse_sft(r#"{"alphabet_size": 2}"#).is_err());
        assert!(parse_sft(r#"{"alphabet_size": 3, "adjacency": [[1,1],[1,0]]}"#).is_err());
        assert!(parse_sft(r#"{"alphabet_size": 2, "adjacency": [[0,0],[0,0]]}"#).is_err());
    }

    #[test]
    fn markov_forms() {
        let m = parse_markov(r#"{"block_len": 2, "states": ["00","01","10"], "P": [[0.3,0.7,0],[0,0,1],[0.8,0.19999999999999996,0]]}"#).unwrap();
        assert_eq!(m, gms2(0.3, 0.8).unwrap());
        let b = parse_markov(r#"{"P": [[0.5,0.5],[0.5,0.5]], "p": [0.5, 0.5]}"#).unwrap();
        assert_eq!(b.stationary(), &[0.5, 0.5]);
        assert!(parse_markov(r#"{"P": [[0.5,0.6],[0.5,0.5]]}"#).is_err());
    }

    #[test]
    fn potentials() {
        let p = PotentialFile { values: [("0".into(), 0.0), ("2".into(), 1.0), ("1".into(), 0.5)].into() };
        assert_eq!(p.build(3).unwrap().values(), &[0.0, 0.5, 1.0]);
        assert!(p.build(2).is_err());
        assert!(p.build(4).is_err());
        assert_eq!(load_potential("0, 0, 1", 3).unwrap().values(), &[0.0, 0.0, 1.0]);
        assert!(load_potential("0,1", 3).is_err());
    }

    #[test]
    fn family_template() {
        let f = parse_family(
            r#"{"name": "gms-2step-json", "block_len": 2, "states": ["00","01","10"],
                "P": [["p0","rest",0],[0,0,1],["p1","1-p1",0]]}"#,
        )
        .unwrap();
        assert_eq!(f.dimension(), 2);
        assert_eq!(f.build(&[0.483, 0.569]).unwrap(), gms2(0.483, 0.569).unwrap());
        assert!(f.build(&[0.483, 0.569]).unwrap().check_support(&golden_mean()).is_ok());
        assert!(parse_family(r#"{"P": [["q","rest"],[1,0]]}"#).is_err());
    }
}
