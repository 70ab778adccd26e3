//! Flags, config files and their merge.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};

/// Default output directory when neither `--out`, the config file nor the environment names one.
pub const DEFAULT_OUT_DIR: &str = "pgrand-out";
pub const OUT_DIR_ENV: &str = "PGRAND_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Corrected,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Optimal,
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Decoded pattern equals the sampled one.
    Exact,
    /// Residual error acts trivially on the kept pairs.
    Logical,
}

/// Every tunable. Flags override the config file; unset values fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    /// Bell pairs per block [build-lut, simulate: 32; sweeps: per figure]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,

    /// Kept (output) pairs [build-lut: n/2; simulate: n/2, n/4, n/8]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<usize>>,

    /// Largest guessed error weight [build-lut, simulate: 4; figures: per figure]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<usize>>,

    /// Depolarizing probability of the raw pairs [0.01]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,

    /// Depolarizing probability of resource-state qubits [mb-range: 0 to 0.07 in steps of 0.0025]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,

    /// Input Werner fidelities [hashing: 0.83, 0.85, 0.9, 0.95, 0.99]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,

    /// Error-probability targets for the maximum-yield sweep [1e-2, 1e-3, 1e-4]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub pe_target: Option<Vec<f64>>,

    /// Hashing slack exponents x in delta = n^(-1/x) [2, 2.5, 3, 3.5]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub delta_exp: Option<Vec<f64>>,

    /// Two-qubit gates per random encoder [ceil(0.14 n log2(n)^2)]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates: Option<usize>,

    /// Shots per encoder [1000]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,

    /// Independent random encoders per point [20]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoders: Option<usize>,

    /// Master seed [0]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Worker threads, 0 for one per core [0]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,

    /// Lookup-table memory budget, bytes with optional K/M/G/T suffix [8G]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mem_budget: Option<String>,

    /// Output directory [$PGRAND_OUT_DIR, else ./pgrand-out]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Lookup-table file for build-lut [<out>/lut-n<n>-k<k>-t<t>-seed<seed>.bin]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lut: Option<PathBuf>,

    /// Figures to emit [analytic: 4; compare: 9, 11, 14]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub fig: Option<Vec<u32>>,

    /// Tables to emit [1-6]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub which: Option<Vec<u32>>,

    /// Hashing slack choice [optimal, reference]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Vec<Strategy>>,

    /// Exponent of the hashing bound's collision term [corrected]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,

    /// Oxford recurrence rounds [1, 2, 3]
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub rounds: Option<Vec<u32>>,

    /// Monte Carlo success criterion [exact]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<Criterion>,

    /// Draw and cancel explicit measurement masks in every shot [false]
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masking: Option<bool>,

    /// Largest block size searched [per command]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,

    /// Points per fidelity axis in sweeps [per figure]
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,

    /// External protocol tables (CSV with f_in,p_suc,f_out,yield), named by file stem
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub external: Option<Vec<PathBuf>>,

    /// TOML file with any of the keys above (kebab-case); flags take precedence
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn one_or_many<'de, D, T>(d: D) -> Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(Some(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    }))
}

impl Params {
    pub fn from_toml_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// `self` wins wherever it is set.
    pub fn overlay(self, base: Params) -> anyhow::Result<Self> {
        let mut merged = serde_json::to_value(base)?;
        let top = serde_json::to_value(&self)?;
        let (Some(m), Some(t)) = (merged.as_object_mut(), top.as_object()) else {
            unreachable!("structs serialize to objects")
        };
        for (key, v) in t {
            m.insert(key.clone(), v.clone());
        }
        let mut out: Params = serde_json::from_value(merged)?;
        out.config = self.config;
        Ok(out)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn mem_budget_bytes(&self) -> anyhow::Result<u64> {
        self.mem_budget.as_deref().map_or(Ok(8 << 30), parse_bytes)
    }
}

/// `"512M"` → 536870912. Binary multiples.
pub fn parse_bytes(s: &str) -> anyhow::Result<u64> {
    let s = s.trim();
    let (digits, shift) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 10),
        Some('M') => (&s[..s.len() - 1], 20),
        Some('G') => (&s[..s.len() - 1], 30),
        Some('T') => (&s[..s.len() - 1], 40),
        _ => (s, 0),
    };
    let v: u64 = digits
        .trim()
        .parse()
        .with_context(|| format!("mem-budget must be an integer with optional K/M/G/T suffix, got {s:?}"))?;
    v.checked_mul(1u64 << shift)
        .with_context(|| format!("mem-budget {s:?} overflows"))
}

/// Exactly one value, or the default when unset.
pub fn single<T: Copy>(list: &Option<Vec<T>>, name: &str, default: T) -> anyhow::Result<T> {
    match list.as_deref() {
        None => Ok(default),
        Some([x]) => Ok(*x),
        Some(v) => bail!("--{name} takes a single value here, got {}", v.len()),
    }
}

pub fn list<T: Clone>(list: &Option<Vec<T>>, default: &[T]) -> Vec<T> {
    list.clone().unwrap_or_else(|| default.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_suffixes() {
        assert_eq!(parse_bytes("1024").unwrap(), 1024);
        assert_eq!(parse_bytes("2k").unwrap(), 2048);
        assert_eq!(parse_bytes("8G").unwrap(), 8 << 30);
        assert!(parse_bytes("lots").is_err());
        assert!(parse_bytes("99999999999T").is_err());
    }

    #[test]
    fn toml_accepts_scalars_and_lists() {
        let p = Params::from_toml("n = 32\nk = [16, 8]\np = 0.01\ntrials = 10\nsign = \"printed\"\n").unwrap();
        assert_eq!(p.n, Some(vec![32]));
        assert_eq!(p.k, Some(vec![16, 8]));
        assert_eq!(p.sign, Some(Sign::Printed));
        assert!(Params::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Params::from_toml("n = 32\ntrials = 10").unwrap();
        let flags = Params {
            trials: Some(5),
            ..Params::default()
        };
        let merged = flags.overlay(file).unwrap();
        assert_eq!(merged.n, Some(vec![32]));
        assert_eq!(merged.trials, Some(5));
    }

    #[test]
    fn single_rejects_lists() {
        assert_eq!(single(&None, "n", 3).unwrap(), 3);
        assert_eq!(single(&Some(vec![4]), "n", 3).unwrap(), 4);
        assert!(single(&Some(vec![4, 5]), "n", 3).is_err());
    }
}
