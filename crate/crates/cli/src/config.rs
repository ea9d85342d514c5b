//! Run configuration: defaults, optional JSON file, command-line overrides.

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use bpec::channel::default_transient_len;
use bpec::montecarlo::{SimConfig, DEFAULT_GUARD_COEFF};
use bpec::{ModeParams, Scheme};
use serde::{Deserialize, Serialize};

/// Parses `0.75`, `32/35` or `1e-3`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
            let den: f64 = den.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
            if den == 0.0 {
                bail!("zero denominator in {s:?}");
            }
            num / den
        }
        None => s.parse().with_context(|| format!("not a number: {s:?}"))?,
    };
    if !v.is_finite() {
        bail!("not a finite number: {s:?}");
    }
    Ok(v)
}

/// Accepts numbers or fraction strings in JSON config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NumberOrString", into = "f64")]
pub struct Number(pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrString {
    Num(f64),
    Str(String),
}

impl TryFrom<NumberOrString> for Number {
    type Error = String;
    fn try_from(v: NumberOrString) -> Result<Self, String> {
        match v {
            NumberOrString::Num(x) => Ok(Number(x)),
            NumberOrString::Str(s) => parse_number(&s).map(Number).map_err(|e| e.to_string()),
        }
    }
}

impl From<Number> for f64 {
    fn from(n: Number) -> f64 {
        n.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum SchemeArg {
    #[serde(alias = "intermodal", alias = "inter_modal")]
    #[value(alias = "intermodal")]
    #[serde(rename = "inter")]
    Inter,
    #[serde(alias = "intramodal", alias = "intra_modal")]
    #[value(alias = "intramodal")]
    #[serde(rename = "intra")]
    Intra,
    #[serde(alias = "nofeedback", alias = "no_feedback")]
    #[value(alias = "nofeedback")]
    #[serde(rename = "nofb")]
    Nofb,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Inter => Scheme::InterModal,
            SchemeArg::Intra => Scheme::IntraModal,
            SchemeArg::Nofb => Scheme::NoFeedback,
        }
    }
}

/// `start:stop:step` grid over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl EtaGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        // Counting steps in integers keeps 0:1:0.01 at exactly 101 points.
        let steps = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=steps).map(|i| (self.start + i as f64 * self.step).min(self.stop)).collect()
    }
}

impl FromStr for EtaGrid {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            bail!("grid must be start:stop:step, got {s:?}");
        };
        let g = EtaGrid { start: parse_number(start)?, stop: parse_number(stop)?, step: parse_number(step)? };
        if !(0.0 <= g.start && g.start <= g.stop && g.stop <= 1.0) {
            bail!("grid needs 0 <= start <= stop <= 1, got {s:?}");
        }
        if g.step <= 0.0 && g.start < g.stop {
            bail!("grid step must be positive, got {s:?}");
        }
        Ok(g)
    }
}

impl<'de> Deserialize<'de> for EtaGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Settings a config file may provide; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub delta_a: Option<Number>,
    pub delta_b: Option<Number>,
    pub delta_t: Option<Number>,
    pub eta: Option<Number>,
    pub eta_grid: Option<EtaGrid>,
    pub n: Option<usize>,
    pub n_t: Option<usize>,
    pub scheme: Option<SchemeArg>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub guard_coeff: Option<Number>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fields of `over` win.
    pub fn merged(self, over: FileConfig) -> FileConfig {
        FileConfig {
            delta_a: over.delta_a.or(self.delta_a),
            delta_b: over.delta_b.or(self.delta_b),
            delta_t: over.delta_t.or(self.delta_t),
            eta: over.eta.or(self.eta),
            eta_grid: over.eta_grid.or(self.eta_grid),
            n: over.n.or(self.n),
            n_t: over.n_t.or(self.n_t),
            scheme: over.scheme.or(self.scheme),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            guard_coeff: over.guard_coeff.or(self.guard_coeff),
        }
    }
}

pub const DEFAULT_DELTA_A: f64 = 0.75;
pub const DEFAULT_DELTA_B: f64 = 0.0;
pub const DEFAULT_ETA: f64 = 32.0 / 35.0;
pub const DEFAULT_N: usize = 100_000;
pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GRID: EtaGrid = EtaGrid { start: 0.0, stop: 1.0, step: 0.01 };

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_t: f64,
    pub eta: f64,
    pub n: usize,
    pub n_t: usize,
    pub scheme: SchemeArg,
    pub trials: usize,
    pub seed: u64,
    pub guard_coeff: f64,
    #[serde(skip)]
    pub eta_grid: EtaGrid,
}

impl RunConfig {
    pub fn resolve(c: FileConfig) -> Result<Self> {
        let num = |v: Option<Number>, d: f64| v.map_or(d, |x| x.0);
        let delta_b = num(c.delta_b, DEFAULT_DELTA_B);
        let n = c.n.unwrap_or(DEFAULT_N);
        let cfg = RunConfig {
            delta_a: num(c.delta_a, DEFAULT_DELTA_A),
            delta_b,
            delta_t: num(c.delta_t, delta_b),
            eta: num(c.eta, DEFAULT_ETA),
            n,
            n_t: c.n_t.unwrap_or_else(|| default_transient_len(n)),
            scheme: c.scheme.unwrap_or(SchemeArg::Inter),
            trials: c.trials.unwrap_or(DEFAULT_TRIALS),
            seed: c.seed.unwrap_or(DEFAULT_SEED),
            guard_coeff: num(c.guard_coeff, DEFAULT_GUARD_COEFF),
            eta_grid: c.eta_grid.unwrap_or(DEFAULT_GRID),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        self.params()?;
        if !(0.0..=1.0).contains(&self.delta_t) {
            bail!("delta_t = {} is not a probability in [0, 1]", self.delta_t);
        }
        if self.n == 0 {
            bail!("n must be positive");
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if !(self.guard_coeff >= 0.0 && self.guard_coeff.is_finite()) {
            bail!("guard_coeff must be a finite non-negative number");
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ModeParams<f64>> {
        ModeParams::new(self.delta_a, self.delta_b, self.eta).map_err(|e| anyhow!(e))
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        Ok(SimConfig::new(self.params()?, self.n, self.scheme.into())
            .with_transient(self.n_t, self.delta_t)
            .with_guard(self.guard_coeff))
    }
}
