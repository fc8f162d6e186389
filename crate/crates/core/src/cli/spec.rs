//! Experiment specifications and the flat `key = value` config grammar.
//!
//! ```text
//! # comment
//! experiment = converge
//! n = 200
//! delta0_deg = 5
//! ```
//!
//! Blank lines and `#` comments are ignored; a key may appear once per
//! source. Values from a later source (command-line flags) replace values
//! from an earlier one (the config file). See `docs/config.md` for the keys.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Run,
    Converge,
    Scaling,
    AsyncSweep,
    ImproveProb,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Run,
        ExperimentKind::Converge,
        ExperimentKind::Scaling,
        ExperimentKind::AsyncSweep,
        ExperimentKind::ImproveProb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Run => "run",
            ExperimentKind::Converge => "converge",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::AsyncSweep => "async-sweep",
            ExperimentKind::ImproveProb => "improve-prob",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "experiment",
                    s,
                    "run | converge | scaling | async-sweep | improve-prob",
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveSelector {
    Snr,
    ModPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitSelector {
    Random,
    Zeros,
}

/// Centre offset of the uniform perturbation measure, in degrees.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSetting {
    None,
    Constant(f64),
    /// Drawn once per network from `U(-Δ₀/2, Δ₀/2)` per coordinate.
    Random,
    PerCoordinate(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Alpha(f64),
    Epsilon(f64),
}

/// A fully validated experiment description. Angles are in degrees, as
/// written in config files; they are converted to radians when the search
/// template is built.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub objective: ObjectiveSelector,
    pub signal_power: f64,
    pub noise_power: f64,
    pub delta0_deg: f64,
    pub shift: ShiftSetting,
    /// One N, or the list of N for `scaling`.
    pub n: Vec<usize>,
    /// One ρ, or the list of ρ for `async-sweep`.
    pub rho: Vec<f64>,
    pub threshold: Threshold,
    pub runs: usize,
    pub channels: usize,
    /// `None` selects the default `200 N / p`.
    pub budget: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    pub init: InitSelector,
    pub continue_after_hit: bool,
    pub traces: bool,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Converge,
            objective: ObjectiveSelector::Snr,
            signal_power: 1.0,
            noise_power: 1.0,
            delta0_deg: 5.0,
            shift: ShiftSetting::None,
            n: vec![200],
            rho: vec![100.0],
            threshold: Threshold::Alpha(0.9),
            runs: 50,
            channels: 5,
            budget: None,
            seed: 1,
            samples: 10_000,
            init: InitSelector::Random,
            continue_after_hit: false,
            traces: false,
            out: None,
        }
    }
}

pub const KEYS: [&str; 19] = [
    "experiment",
    "objective",
    "signal_power",
    "noise_power",
    "delta0_deg",
    "shift_deg",
    "n",
    "rho",
    "alpha",
    "epsilon",
    "runs",
    "channels",
    "budget",
    "seed",
    "samples",
    "init",
    "continue_after_hit",
    "traces",
    "out",
];

/// Raw key/value pairs collected from config text and flags, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses config text. Unknown keys, lines without `=` and repeated keys
    /// are rejected with the offending line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("unknown key `{key}` (known keys: {})", KEYS.join(", ")),
                });
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Sets `key`, replacing any earlier value. `alpha` and `epsilon` replace
    /// each other.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::invalid(key, "", format!("one of {}", KEYS.join(", "))));
        }
        match key {
            "alpha" => {
                self.entries.remove("epsilon");
            }
            "epsilon" => {
                self.entries.remove("alpha");
            }
            _ => {}
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Applies `overrides` on top of `self`.
    pub fn merge(&mut self, overrides: &RawConfig) -> Result<()> {
        for (k, v) in &overrides.entries {
            self.set(k, v.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str, accepted: &str) -> Result<T> {
    v.parse().map_err(|_| Error::invalid(key, v, accepted))
}

fn parse_list<T: FromStr>(key: &str, v: &str, accepted: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(|s| parse_num(key, s.trim(), accepted))
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::invalid(key, v, "true | false")),
    }
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl ExperimentSpec {
    /// Types and validates raw key/values, filling defaults.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let mut s = ExperimentSpec::default();
        if let Some(v) = raw.get("experiment") {
            s.kind = v.parse()?;
        }
        if let Some(v) = raw.get("objective") {
            s.objective = match v {
                "snr" => ObjectiveSelector::Snr,
                "modpi" => ObjectiveSelector::ModPi,
                _ => return Err(Error::invalid("objective", v, "snr | modpi")),
            };
        }
        if let Some(v) = raw.get("signal_power") {
            s.signal_power = parse_num("signal_power", v, "finite value > 0")?;
        }
        if let Some(v) = raw.get("noise_power") {
            s.noise_power = parse_num("noise_power", v, "finite value > 0")?;
        }
        if let Some(v) = raw.get("delta0_deg") {
            s.delta0_deg = parse_num("delta0_deg", v, "degrees in (0, 180]")?;
        }
        if let Some(v) = raw.get("shift_deg") {
            const ACC: &str = "none | random | degrees | comma-separated degrees per transmitter";
            s.shift = match v {
                "none" => ShiftSetting::None,
                "random" => ShiftSetting::Random,
                _ if v.contains(',') => ShiftSetting::PerCoordinate(parse_list("shift_deg", v, ACC)?),
                _ => ShiftSetting::Constant(parse_num("shift_deg", v, ACC)?),
            };
        }
        if let Some(v) = raw.get("n") {
            s.n = parse_list("n", v, "integer N >= 1, or a comma-separated list")?;
        }
        if let Some(v) = raw.get("rho") {
            s.rho = parse_list("rho", v, "percent in (0, 100], or a comma-separated list")?;
        }
        match (raw.get("alpha"), raw.get("epsilon")) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "alpha/epsilon",
                    "both set",
                    "at most one of alpha, epsilon",
                ))
            }
            (Some(a), None) => s.threshold = Threshold::Alpha(parse_num("alpha", a, "0 < alpha <= 1")?),
            (None, Some(e)) => {
                s.threshold = Threshold::Epsilon(parse_num("epsilon", e, "finite epsilon > 0")?)
            }
            (None, None) => {}
        }
        if let Some(v) = raw.get("runs") {
            s.runs = parse_num("runs", v, "integer >= 1")?;
        }
        if let Some(v) = raw.get("channels") {
            s.channels = parse_num("channels", v, "integer >= 1")?;
        }
        if let Some(v) = raw.get("budget") {
            s.budget = match v {
                "auto" => None,
                _ => Some(parse_num("budget", v, "auto | integer >= 1")?),
            };
        }
        if let Some(v) = raw.get("seed") {
            s.seed = parse_num("seed", v, "unsigned 64-bit integer")?;
        }
        if let Some(v) = raw.get("samples") {
            s.samples = parse_num("samples", v, "integer >= 1")?;
        }
        if let Some(v) = raw.get("init") {
            s.init = match v {
                "random" => InitSelector::Random,
                "zeros" => InitSelector::Zeros,
                _ => return Err(Error::invalid("init", v, "random | zeros")),
            };
        }
        if let Some(v) = raw.get("continue_after_hit") {
            s.continue_after_hit = parse_bool("continue_after_hit", v)?;
        }
        if let Some(v) = raw.get("traces") {
            s.traces = parse_bool("traces", v)?;
        }
        if let Some(v) = raw.get("out") {
            s.out = (!v.is_empty()).then(|| PathBuf::from(v));
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64, acc: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(key, v, acc))
            }
        };
        positive("signal_power", self.signal_power, "finite value > 0")?;
        positive("noise_power", self.noise_power, "finite value > 0")?;
        if !(self.delta0_deg > 0.0 && self.delta0_deg <= 180.0) {
            return Err(Error::invalid("delta0_deg", self.delta0_deg, "degrees in (0, 180]"));
        }
        match self.threshold {
            Threshold::Alpha(a) if !(a > 0.0 && a <= 1.0) => {
                return Err(Error::invalid("alpha", a, "0 < alpha <= 1"))
            }
            Threshold::Epsilon(e) => positive("epsilon", e, "finite epsilon > 0")?,
            _ => {}
        }
        for &rho in &self.rho {
            if !(rho > 0.0 && rho <= 100.0) {
                return Err(Error::invalid("rho", rho, "0 < rho <= 100"));
            }
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(Error::invalid("n", fmt_list(&self.n), "integers N >= 1"));
        }
        for (key, v) in [
            ("runs", self.runs),
            ("channels", self.channels),
            ("samples", self.samples),
            ("budget", self.budget.unwrap_or(1)),
        ] {
            if v == 0 {
                return Err(Error::invalid(key, 0, format!("{key} >= 1")));
            }
        }
        match &self.shift {
            ShiftSetting::Constant(c) if !c.is_finite() => {
                return Err(Error::invalid("shift_deg", c, "finite degrees"))
            }
            ShiftSetting::PerCoordinate(v) => {
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("shift_deg", fmt_list(v), "finite degrees"));
                }
                if self.n.len() != 1 || v.len() != self.n[0] {
                    return Err(Error::invalid(
                        "shift_deg",
                        format!("{} values", v.len()),
                        "one value per transmitter with a single N",
                    ));
                }
            }
            _ => {}
        }

        if self.kind == ExperimentKind::Scaling {
            if self.n.len() < 2 {
                return Err(Error::invalid(
                    "n",
                    fmt_list(&self.n),
                    "at least two values for scaling (a line fit needs two points)",
                ));
            }
            if self.n.windows(2).any(|w| w[1] <= w[0]) || self.n[0] < 2 {
                return Err(Error::invalid("n", fmt_list(&self.n), "strictly increasing N >= 2"));
            }
        } else if self.n.len() != 1 {
            return Err(Error::invalid(
                "n",
                fmt_list(&self.n),
                format!("a single N for `{}`", self.kind),
            ));
        }
        if self.kind != ExperimentKind::AsyncSweep && self.rho.len() != 1 {
            return Err(Error::invalid(
                "rho",
                fmt_list(&self.rho),
                format!("a single rho for `{}`", self.kind),
            ));
        }
        if self.rho.is_empty() {
            return Err(Error::invalid("rho", "", "at least one value in (0, 100]"));
        }
        Ok(())
    }

    /// Canonical config text; [`parse_spec`] maps it back to an equal spec.
    pub fn to_config_text(&self) -> String {
        let mut lines = vec![
            format!("experiment = {}", self.kind),
            format!(
                "objective = {}",
                match self.objective {
                    ObjectiveSelector::Snr => "snr",
                    ObjectiveSelector::ModPi => "modpi",
                }
            ),
            format!("signal_power = {}", self.signal_power),
            format!("noise_power = {}", self.noise_power),
            format!("delta0_deg = {}", self.delta0_deg),
            format!(
                "shift_deg = {}",
                match &self.shift {
                    ShiftSetting::None => "none".to_string(),
                    ShiftSetting::Random => "random".to_string(),
                    ShiftSetting::Constant(c) => c.to_string(),
                    ShiftSetting::PerCoordinate(v) if v.len() == 1 => format!("{},", v[0]),
                    ShiftSetting::PerCoordinate(v) => fmt_list(v),
                }
            ),
            format!("n = {}", fmt_list(&self.n)),
            format!("rho = {}", fmt_list(&self.rho)),
            match self.threshold {
                Threshold::Alpha(a) => format!("alpha = {a}"),
                Threshold::Epsilon(e) => format!("epsilon = {e}"),
            },
            format!("runs = {}", self.runs),
            format!("channels = {}", self.channels),
            format!(
                "budget = {}",
                self.budget.map_or("auto".to_string(), |b| b.to_string())
            ),
            format!("seed = {}", self.seed),
            format!("samples = {}", self.samples),
            format!(
                "init = {}",
                match self.init {
                    InitSelector::Random => "random",
                    InitSelector::Zeros => "zeros",
                }
            ),
            format!("continue_after_hit = {}", self.continue_after_hit),
            format!("traces = {}", self.traces),
        ];
        if let Some(out) = &self.out {
            lines.push(format!("out = {}", out.display()));
        }
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }

    /// Text that identifies the computation: the canonical config without
    /// the output location.
    pub fn identity_text(&self) -> String {
        let mut s = self.clone();
        s.out = None;
        s.to_config_text()
    }
}

/// Parses config text, applies `overrides`, and validates the result.
pub fn parse_spec(text: &str, overrides: &RawConfig) -> Result<ExperimentSpec> {
    let mut raw = RawConfig::parse(text)?;
    raw.merge(overrides)?;
    ExperimentSpec::from_raw(&raw)
}
