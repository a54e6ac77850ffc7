//! Campaign configuration and the key-value config file format.
//!
//! Config files are plain `key = value` lines with `#` comments:
//!
//! ```text
//! k = 26
//! n = 32
//! modulation = 16
//! n_r = 25
//! w_th = 3
//! eb_n0_db = 0, 2, 4
//! decoders = bit, bit-sorted, symbol, symbol-sorted, uncoded
//! target_block_errors = 100
//! max_trials = 30000
//! master_seed = 1
//! pch = off
//! noise = on
//! ```

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("key {key:?}: cannot parse {value:?}")]
    BadValue { key: String, value: String },
    #[error("missing required key {0:?}")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

/// Which decoder consumes the detected word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Bit,
    BitSorted,
    Symbol,
    SymbolSorted,
    /// Baseline: bypass decoding, demap directly.
    Uncoded,
}

impl DecoderKind {
    pub const ALL_GRAND: [DecoderKind; 4] = [
        DecoderKind::Bit,
        DecoderKind::BitSorted,
        DecoderKind::Symbol,
        DecoderKind::SymbolSorted,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Bit => "bit",
            DecoderKind::BitSorted => "bit-sorted",
            DecoderKind::Symbol => "symbol",
            DecoderKind::SymbolSorted => "symbol-sorted",
            DecoderKind::Uncoded => "uncoded",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "bit" => Ok(DecoderKind::Bit),
            "bit-sorted" => Ok(DecoderKind::BitSorted),
            "symbol" => Ok(DecoderKind::Symbol),
            "symbol-sorted" => Ok(DecoderKind::SymbolSorted),
            "uncoded" => Ok(DecoderKind::Uncoded),
            other => Err(ConfigError::BadValue {
                key: "decoders".into(),
                value: other.into(),
            }),
        }
    }
}

/// Channel mode of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PchMode {
    /// Finite-antenna Rayleigh channel with zero-forcing detection.
    Off,
    /// Perfect channel hardening; `array_gain` selects the literal hardened
    /// model (per-stream SNR `snr * N_R / N_T`) versus the plain-SNR
    /// convention used by the analytical probability terms.
    On { array_gain: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub k: usize,
    pub n: usize,
    pub modulation: u32,
    pub n_r: usize,
    pub w_th: u32,
    pub eb_n0_db: Vec<f64>,
    pub decoders: Vec<DecoderKind>,
    pub target_block_errors: u64,
    pub max_trials: u64,
    pub master_seed: u64,
    pub code_seed: Option<u64>,
    pub pch: PchMode,
    pub noise: bool,
}

impl SimConfig {
    pub fn bits_per_symbol(&self) -> u32 {
        self.modulation.trailing_zeros()
    }

    pub fn n_t(&self) -> usize {
        self.n / self.bits_per_symbol() as usize
    }

    pub fn code_rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Ergodic receive SNR for one grid point: `log2(M) * (k/n) * Eb/N0`.
    pub fn snr_linear(&self, eb_n0_db: f64) -> f64 {
        self.bits_per_symbol() as f64 * self.code_rate() * 10f64.powf(eb_n0_db / 10.0)
    }

    pub fn effective_code_seed(&self) -> u64 {
        self.code_seed.unwrap_or(self.master_seed)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = self.modulation;
        if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) {
            return Err(ConfigError::Invalid(format!(
                "modulation {m} is not a square power of two"
            )));
        }
        if self.k == 0 || self.k >= self.n {
            return Err(ConfigError::Invalid(format!(
                "need 0 < k < n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        let b = self.bits_per_symbol() as usize;
        if !self.n.is_multiple_of(b) {
            return Err(ConfigError::Invalid(format!(
                "n = {} not divisible by log2(M) = {b}",
                self.n
            )));
        }
        if self.n_r < self.n_t() {
            return Err(ConfigError::Invalid(format!(
                "N_R = {} below N_T = {}",
                self.n_r,
                self.n_t()
            )));
        }
        if self.eb_n0_db.is_empty() {
            return Err(ConfigError::Invalid("empty Eb/N0 grid".into()));
        }
        if self.decoders.is_empty() {
            return Err(ConfigError::Invalid("no decoders enabled".into()));
        }
        if self.w_th as usize > self.n {
            return Err(ConfigError::Invalid(format!(
                "w_th = {} exceeds n = {}",
                self.w_th, self.n
            )));
        }
        if self.max_trials == 0 || self.target_block_errors == 0 {
            return Err(ConfigError::Invalid(
                "max_trials and target_block_errors must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Parses the key-value config format.
    pub fn from_str_config(text: &str) -> Result<Self, ConfigError> {
        let mut k = None;
        let mut n = None;
        let mut modulation = None;
        let mut n_r = None;
        let mut w_th = None;
        let mut eb_n0_db: Option<Vec<f64>> = None;
        let mut decoders: Option<Vec<DecoderKind>> = None;
        let mut target_block_errors = 100u64;
        let mut max_trials = 1_000_000u64;
        let mut master_seed = 0u64;
        let mut code_seed = None;
        let mut pch = PchMode::Off;
        let mut noise = true;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    text: raw.to_string(),
                })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |k: &str, v: &str| ConfigError::BadValue {
                key: k.into(),
                value: v.into(),
            };
            match key {
                "k" => k = Some(value.parse().map_err(|_| bad(key, value))?),
                "n" => n = Some(value.parse().map_err(|_| bad(key, value))?),
                "modulation" | "m" => {
                    modulation = Some(value.parse().map_err(|_| bad(key, value))?)
                }
                "n_r" => n_r = Some(value.parse().map_err(|_| bad(key, value))?),
                "w_th" => w_th = Some(value.parse().map_err(|_| bad(key, value))?),
                "eb_n0_db" => {
                    let grid = value
                        .split(',')
                        .map(|v| v.trim().parse::<f64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| bad(key, value))?;
                    eb_n0_db = Some(grid);
                }
                "decoders" => {
                    let list = value
                        .split(',')
                        .map(|v| v.parse::<DecoderKind>())
                        .collect::<Result<Vec<_>, _>>()?;
                    decoders = Some(list);
                }
                "target_block_errors" => {
                    target_block_errors = value.parse().map_err(|_| bad(key, value))?
                }
                "max_trials" => max_trials = value.parse().map_err(|_| bad(key, value))?,
                "master_seed" => master_seed = value.parse().map_err(|_| bad(key, value))?,
                "code_seed" => code_seed = Some(value.parse().map_err(|_| bad(key, value))?),
                "pch" => {
                    pch = match value {
                        "off" => PchMode::Off,
                        "on" => PchMode::On { array_gain: false },
                        "on-array-gain" => PchMode::On { array_gain: true },
                        _ => return Err(bad(key, value)),
                    }
                }
                "noise" => {
                    noise = match value {
                        "on" => true,
                        "off" => false,
                        _ => return Err(bad(key, value)),
                    }
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.into(),
                    })
                }
            }
        }

        let cfg = SimConfig {
            k: k.ok_or(ConfigError::Missing("k"))?,
            n: n.ok_or(ConfigError::Missing("n"))?,
            modulation: modulation.ok_or(ConfigError::Missing("modulation"))?,
            n_r: n_r.ok_or(ConfigError::Missing("n_r"))?,
            w_th: w_th.ok_or(ConfigError::Missing("w_th"))?,
            eb_n0_db: eb_n0_db.ok_or(ConfigError::Missing("eb_n0_db"))?,
            decoders: decoders.unwrap_or_else(|| DecoderKind::ALL_GRAND.to_vec()),
            target_block_errors,
            max_trials,
            master_seed,
            code_seed,
            pch,
            noise,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
