//! Command-line parameters, the flat `key = value` config file, and defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    /// Optimal measure-and-prepare (classical) protocol.
    MpOptimal,
    /// Standard teleportation over a (possibly noisy) resource.
    Sqt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Noise {
    /// Perfect |Φ₁⟩.
    Ideal,
    PhaseFlip,
    Depolarizing,
    Adc,
    /// Bell-diagonal resource given by --w1, --w2, --w3.
    BellDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn name_of<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_owned())
        .unwrap_or_default()
}

/// Flags shared by every subcommand. All are optional so that config-file
/// values can fill the gaps; flags always win.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long, global = true, value_enum)]
    pub protocol: Option<Protocol>,
    #[arg(long, global = true, value_enum)]
    pub noise: Option<Noise>,
    /// Noise parameter on Alice's half.
    #[arg(long, global = true)]
    pub pa: Option<f64>,
    /// Noise parameter on Bob's half.
    #[arg(long, global = true)]
    pub pb: Option<f64>,
    /// Phase-flip contraction c = 1 − (1 − pA)(1 − pB); a list for `figure 1`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub w1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub w2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub w3: Option<f64>,
    /// Beta prior α values, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Beta prior β (shared by every α).
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Step prior thresholds, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub threshold: Option<Vec<f64>>,
    /// Sample or sweep size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Random seed. Falls back to the config file, then TELEFID_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid size: points per density curve, or points per axis of a (pA, pB) grid.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Output file (directory for `figure`). Standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` file; keys are flag names without dashes.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 1;

const KEYS: &[&str] = &[
    "protocol",
    "noise",
    "pa",
    "pb",
    "c",
    "w1",
    "w2",
    "w3",
    "alpha",
    "beta",
    "threshold",
    "n",
    "seed",
    "grid",
    "out",
    "format",
    "threads",
];

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Invalid(format!("config line {}: expected key = value", i + 1))
        })?;
        let key = key.trim().trim_start_matches("--").to_owned();
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Invalid(format!(
                "config line {}: unknown key '{key}'",
                i + 1
            )));
        }
        map.insert(key, value.trim().to_owned());
    }
    Ok(map)
}

fn parse<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Invalid(format!("invalid value '{raw}' for {key}")))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>, CliError> {
    raw.split(',').map(|s| parse(key, s.trim())).collect()
}

fn parse_enum<T: ValueEnum>(key: &str, raw: &str) -> Result<T, CliError> {
    T::from_str(raw, true)
        .map_err(|_| CliError::Invalid(format!("invalid value '{raw}' for {key}")))
}

impl Params {
    /// Fills unset flags from the config file (if any) and the seed from
    /// TELEFID_SEED as a last resort.
    pub fn merged(mut self) -> Result<Params, CliError> {
        if let Some(path) = self.config.clone() {
            let map = read_config_file(&path)?;
            for (key, raw) in &map {
                let k = key.as_str();
                match k {
                    "protocol" if self.protocol.is_none() => {
                        self.protocol = Some(parse_enum(k, raw)?)
                    }
                    "noise" if self.noise.is_none() => self.noise = Some(parse_enum(k, raw)?),
                    "format" if self.format.is_none() => self.format = Some(parse_enum(k, raw)?),
                    "pa" if self.pa.is_none() => self.pa = Some(parse(k, raw)?),
                    "pb" if self.pb.is_none() => self.pb = Some(parse(k, raw)?),
                    "w1" if self.w1.is_none() => self.w1 = Some(parse(k, raw)?),
                    "w2" if self.w2.is_none() => self.w2 = Some(parse(k, raw)?),
                    "w3" if self.w3.is_none() => self.w3 = Some(parse(k, raw)?),
                    "beta" if self.beta.is_none() => self.beta = Some(parse(k, raw)?),
                    "n" if self.n.is_none() => self.n = Some(parse(k, raw)?),
                    "seed" if self.seed.is_none() => self.seed = Some(parse(k, raw)?),
                    "grid" if self.grid.is_none() => self.grid = Some(parse(k, raw)?),
                    "threads" if self.threads.is_none() => self.threads = Some(parse(k, raw)?),
                    "out" if self.out.is_none() => self.out = Some(PathBuf::from(raw)),
                    "c" if self.c.is_none() => self.c = Some(parse_list(k, raw)?),
                    "alpha" if self.alpha.is_none() => self.alpha = Some(parse_list(k, raw)?),
                    "threshold" if self.threshold.is_none() => {
                        self.threshold = Some(parse_list(k, raw)?)
                    }
                    _ => {}
                }
            }
        }
        if self.seed.is_none() {
            if let Ok(raw) = std::env::var("TELEFID_SEED") {
                self.seed = Some(parse("TELEFID_SEED", raw.trim())?);
            }
        }
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    /// Every parameter that was set, for the output header. `out`, `config`
    /// and `threads` are left out: they do not change the content.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        if let Some(v) = &self.protocol {
            m.insert("protocol".into(), name_of(v));
        }
        if let Some(v) = &self.noise {
            m.insert("noise".into(), name_of(v));
        }
        for (k, v) in [
            ("pa", self.pa),
            ("pb", self.pb),
            ("w1", self.w1),
            ("w2", self.w2),
            ("w3", self.w3),
            ("beta", self.beta),
        ] {
            if let Some(v) = v {
                m.insert(k.into(), v.to_string());
            }
        }
        for (k, v) in [
            ("c", &self.c),
            ("alpha", &self.alpha),
            ("threshold", &self.threshold),
        ] {
            if let Some(v) = v {
                m.insert(k.into(), list(v));
            }
        }
        if let Some(v) = self.n {
            m.insert("n".into(), v.to_string());
        }
        if let Some(v) = self.grid {
            m.insert("grid".into(), v.to_string());
        }
        m.insert("format".into(), name_of(&self.format()));
        m
    }
}
