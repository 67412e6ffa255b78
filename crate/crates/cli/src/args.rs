use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use coherent_id::Amplitude;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const CURVE_MIN: f64 = 0.0;
pub const CURVE_MAX: f64 = 3.0;
pub const CURVE_STEPS: usize = 301;
pub const SIM_T1: f64 = 0.5;
pub const SIM_SHOTS: u64 = 100_000;
pub const DB_SHOTS: u64 = 100_000;
pub const VERIFY_D: usize = 3;
pub const VERIFY_N_MAX: usize = 20;
pub const VERIFY_SEED: u64 = 1;
pub const VERIFY_SAMPLES: u64 = 500;

/// Complex amplitude given as `re`, `re,im`, `[re, im]` or `{"re":..,"im":..}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amp(pub Amplitude);

impl FromStr for Amp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.starts_with('[') || s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| format!("bad amplitude {s:?}: {e}"));
        }
        let mut parts = s.splitn(2, ',');
        let parse = |p: Option<&str>| -> Result<f64, String> {
            match p {
                None => Ok(0.0),
                Some(t) => t.trim().parse().map_err(|_| format!("bad amplitude component {t:?}")),
            }
        };
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        Amplitude::new(re, im).map(Amp).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl Serialize for Amp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Amp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
            Full { re: f64, #[serde(default)] im: f64 },
            Text(String),
        }
        let amp = match Repr::deserialize(d)? {
            Repr::Real(re) => Amplitude::new(re, 0.0),
            Repr::Pair([re, im]) => Amplitude::new(re, im),
            Repr::Full { re, im } => Amplitude::new(re, im),
            Repr::Text(t) => return t.parse().map_err(serde::de::Error::custom),
        };
        amp.map(Amp).map_err(serde::de::Error::custom)
    }
}

/// JSON array given inline on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonList<T>(pub Vec<T>);

impl<T: serde::de::DeserializeOwned> FromStr for JsonList<T> {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| format!("bad JSON list: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurvesArgs {
    /// Smallest |α₁ − α₂|.
    #[arg(long, default_value_t = CURVE_MIN, allow_negative_numbers = true)]
    pub min: f64,
    /// Largest |α₁ − α₂|.
    #[arg(long, default_value_t = CURVE_MAX, allow_negative_numbers = true)]
    pub max: f64,
    /// Grid points, at least 2.
    #[arg(long, default_value_t = CURVE_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Default for CurvesArgs {
    fn default() -> Self {
        Self { min: CURVE_MIN, max: CURVE_MAX, steps: CURVE_STEPS, format: Format::Csv, output: None }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateArgs {
    /// First reference, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<Amp>,
    /// Second reference, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<Amp>,
    /// Which reference is fed as the unknown state.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub truth: Option<u8>,
    /// Transmittivity of the cloning splitter.
    #[arg(long, default_value_t = SIM_T1)]
    pub t1: f64,
    #[arg(long, default_value_t = SIM_SHOTS)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-shot CSV (seed, shot, clicks, outcome).
    #[arg(long)]
    pub shots_csv: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Default for SimulateArgs {
    fn default() -> Self {
        Self {
            alpha1: None,
            alpha2: None,
            truth: None,
            t1: SIM_T1,
            shots: SIM_SHOTS,
            seed: None,
            shots_csv: None,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyArgs {
    /// Run the Fock-space battery. With neither flag both batteries run.
    #[arg(long)]
    pub fock: bool,
    /// Run the three-qudit battery.
    #[arg(long)]
    pub qudit: bool,
    #[arg(long, default_value_t = VERIFY_N_MAX)]
    pub n_max: usize,
    #[arg(long, default_value_t = VERIFY_D)]
    pub d: usize,
    #[arg(long, default_value_t = VERIFY_SEED)]
    pub seed: u64,
    /// Haar pairs for the no-error checks.
    #[arg(long, default_value_t = VERIFY_SAMPLES)]
    pub samples: u64,
    /// Skip the brute-force quadrature of the comparator operator.
    #[arg(long)]
    pub no_quadrature: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Default for VerifyArgs {
    fn default() -> Self {
        Self {
            fock: false,
            qudit: false,
            n_max: VERIFY_N_MAX,
            d: VERIFY_D,
            seed: VERIFY_SEED,
            samples: VERIFY_SAMPLES,
            no_quadrature: false,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatabaseArgs {
    /// Number of references; inferred from --refs when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// References on a ring of this modulus.
    #[arg(long, conflicts_with = "refs")]
    pub ring_alpha: Option<f64>,
    /// References as a JSON array, e.g. `[[0,0],[1,0],[0,1]]`.
    #[arg(long)]
    pub refs: Option<JsonList<Amp>>,
    /// Priors as a JSON array; uniform when omitted.
    #[arg(long)]
    pub priors: Option<JsonList<f64>>,
    #[arg(long, default_value_t = DB_SHOTS)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Default for DatabaseArgs {
    fn default() -> Self {
        Self { n: None, ring_alpha: None, refs: None, priors: None, shots: DB_SHOTS, seed: None, output: None }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<Amp>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<Amp>,
    /// Prior of the first reference.
    #[arg(long)]
    pub eta1: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
