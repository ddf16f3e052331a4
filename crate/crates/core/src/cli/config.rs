//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "subshift": { "kind": "fibonacci" },
//!   "sampling": { "window_radius": 0, "p": { "a": 1.0, "b": 2.0 } },
//!   "grid": { "step": 0.01 },
//!   "n_steps": 1000,
//!   "sizes": [200, 1000],
//!   "orders": [{ "step": 0.01, "n_steps": 1000 }, { "step": 0.005, "n_steps": 4000 }],
//!   "seed": 7
//! }
//! ```
//!
//! Every field except `subshift` has a default. A grid without `lo`/`hi`
//! spans `[−3K − 0.5, 3K + 0.5]`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cocycle::{required_sites, spread_offsets, MIN_LYAPUNOV_STEPS, MIN_UNIFORMITY_OFFSETS};
use crate::error::{Error, Result};
use crate::operator::{assemble_coefficients, CoefficientWindow, CombesThomasOptions, SamplingFunctions};
use crate::spectrum::{EnergyGrid, Threshold, TrendOrder};
use crate::subshift::{Alphabet, OrbitWindow, SubshiftSpec, Word, MIN_SAMPLING_RATIO};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubshiftConfig {
    Fibonacci,
    Substitution {
        alphabet: Vec<String>,
        /// Image of every letter, e.g. `{"a": "ab", "b": "a"}`.
        rules: BTreeMap<String, String>,
        /// The legal pair `[left, right]` around the origin.
        seed: [String; 2],
    },
    Sturmian {
        alpha: Alpha,
        #[serde(default)]
        theta: f64,
    },
    Periodic {
        alphabet: Vec<String>,
        word: String,
    },
}

/// Rotation number: a decimal, `"golden"`, or a continued fraction
/// `[a0; a1, a2, …]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alpha {
    Value(f64),
    Preset(String),
    ContinuedFraction { continued_fraction: Vec<u64> },
}

impl Alpha {
    pub fn value(&self) -> Result<f64> {
        match self {
            Alpha::Value(x) => Ok(*x),
            Alpha::Preset(name) if name == "golden" => Ok((5f64.sqrt() - 1.0) / 2.0),
            Alpha::Preset(name) => Err(config_error(format!("unknown alpha preset {name:?}"))),
            Alpha::ContinuedFraction { continued_fraction } => {
                let (&last, rest) = continued_fraction
                    .split_last()
                    .ok_or_else(|| config_error("continued fraction must be nonempty"))?;
                if !rest.is_empty() && last == 0 {
                    return Err(config_error("partial quotients after a0 must be positive"));
                }
                let mut x = last as f64;
                for &a in rest.iter().rev() {
                    if x == 0.0 {
                        return Err(config_error("partial quotients after a0 must be positive"));
                    }
                    x = a as f64 + x.recip();
                }
                Ok(x)
            }
        }
    }
}

impl SubshiftConfig {
    pub fn build(&self) -> Result<SubshiftSpec> {
        let spec = match self {
            SubshiftConfig::Fibonacci => SubshiftSpec::fibonacci(),
            SubshiftConfig::Substitution { alphabet, rules, seed } => {
                let alphabet = Alphabet::new(alphabet.clone())?;
                let mut images = Vec::with_capacity(alphabet.len());
                for label in alphabet.labels() {
                    let image = rules
                        .get(label)
                        .ok_or_else(|| config_error(format!("no rule for letter {label:?}")))?;
                    images.push(alphabet.parse_word(image)?);
                }
                if let Some(extra) = rules.keys().find(|k| alphabet.index_of(k).is_none()) {
                    return Err(config_error(format!("rule for unknown letter {extra:?}")));
                }
                let letter = |l: &str| {
                    alphabet
                        .index_of(l)
                        .ok_or_else(|| config_error(format!("seed letter {l:?} not in alphabet")))
                };
                let seed = (letter(&seed[0])?, letter(&seed[1])?);
                SubshiftSpec::Substitution {
                    alphabet,
                    rules: images,
                    seed,
                }
            }
            SubshiftConfig::Sturmian { alpha, theta } => SubshiftSpec::Sturmian {
                alpha: alpha.value()?,
                theta: *theta,
            },
            SubshiftConfig::Periodic { alphabet, word } => {
                let alphabet = Alphabet::new(alphabet.clone())?;
                let word = alphabet.parse_word(word)?;
                SubshiftSpec::periodic(alphabet, word)
            }
        };
        spec.validate().map_err(as_config)?;
        Ok(spec)
    }
}

/// Tables keyed by rendered window words; `q` defaults to zero on every key
/// of `p`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default)]
    pub window_radius: usize,
    pub p: BTreeMap<String, f64>,
    #[serde(default)]
    pub q: Option<BTreeMap<String, f64>>,
}

impl SamplingConfig {
    pub fn build(&self, alphabet: &Alphabet) -> Result<SamplingFunctions<f64>> {
        let parse = |table: &BTreeMap<String, f64>| -> Result<BTreeMap<Word, f64>> {
            table.iter().map(|(k, &v)| Ok((alphabet.parse_word(k)?, v))).collect()
        };
        let p = parse(&self.p)?;
        let q = match &self.q {
            Some(q) => parse(q)?,
            None => p.keys().map(|w| (w.clone(), 0.0)).collect(),
        };
        SamplingFunctions::new(self.window_radius, p, q).map_err(as_config)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    #[serde(default = "default_step")]
    pub step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            lo: None,
            hi: None,
            step: default_step(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetMode {
    #[default]
    Even,
    Random,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetConfig {
    #[serde(default = "default_offset_count")]
    pub count: usize,
    #[serde(default)]
    pub mode: OffsetMode,
}

impl Default for OffsetConfig {
    fn default() -> Self {
        OffsetConfig {
            count: default_offset_count(),
            mode: OffsetMode::Even,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformityConfig {
    #[serde(default = "default_uniformity_energies")]
    pub energies: Vec<f64>,
    /// Base step count; spreads are taken at `n`, `2n`, `4n`. Defaults to
    /// a quarter of `n_steps`.
    pub n: Option<u64>,
}

impl Default for UniformityConfig {
    fn default() -> Self {
        UniformityConfig {
            energies: default_uniformity_energies(),
            n: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub subshift: SubshiftConfig,
    #[serde(default)]
    pub sampling: Option<SamplingConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_n_steps")]
    pub n_steps: u64,
    #[serde(default)]
    pub offsets: OffsetConfig,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    /// Resolution levels of the measure trend; defaults to the grid step
    /// and `n_steps`.
    #[serde(default)]
    pub orders: Vec<TrendOrder>,
    /// Zero-set threshold; `null` selects the automatic rule.
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default = "default_isolation_eps")]
    pub isolation_eps: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Radius `N` of the written orbit window `ω(−N..=N)`.
    #[serde(default = "default_orbit_radius")]
    pub orbit_radius: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_sample_length")]
    pub sample_length: usize,
    /// Energy probed by `combes-thomas`.
    pub energy: Option<f64>,
    /// The `combes-thomas` section is `[−r, r]`.
    #[serde(default = "default_section_radius")]
    pub section_radius: usize,
    #[serde(default)]
    pub uniformity: UniformityConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_step() -> f64 {
    0.01
}
fn default_offset_count() -> usize {
    MIN_UNIFORMITY_OFFSETS
}
fn default_uniformity_energies() -> Vec<f64> {
    vec![0.0]
}
fn default_n_steps() -> u64 {
    1000
}
fn default_sizes() -> Vec<usize> {
    vec![200, 1000]
}
fn default_isolation_eps() -> f64 {
    0.05
}
fn default_tol() -> f64 {
    1e-10
}
fn default_orbit_radius() -> usize {
    100
}
fn default_n_max() -> usize {
    30
}
fn default_sample_length() -> usize {
    100_000
}
fn default_section_radius() -> usize {
    200
}

pub(crate) fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Relabels validation failures of the library as configuration errors.
pub(crate) fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Config(m),
        Error::NonExtendableSeed { .. } | Error::UnknownWord(_) => Error::Config(e.to_string()),
        other => other,
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_error(format!("invalid config: {e}")))
    }

    /// Checks every parameter before any computation starts.
    pub fn validate(&self) -> Result<Validated> {
        let spec = self.subshift.build()?;
        let alphabet = spec.alphabet();
        let sampling = match &self.sampling {
            Some(s) => s.build(&alphabet)?,
            None => SamplingFunctions::constant(alphabet.len(), 1.0, 0.0).map_err(as_config)?,
        };
        if self.n_steps < MIN_LYAPUNOV_STEPS {
            return Err(config_error(format!("n_steps must be at least {MIN_LYAPUNOV_STEPS}")));
        }
        if self.offsets.count == 0 {
            return Err(config_error("offsets.count must be positive"));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_error("sizes must be positive and strictly increasing"));
        }
        if !(self.tol > 0.0) {
            return Err(config_error("tol must be positive"));
        }
        if !(self.isolation_eps >= 0.0) {
            return Err(config_error("isolation_eps must be nonnegative"));
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0) {
                return Err(config_error("threshold must be positive"));
            }
        }
        let bound = sampling.bound();
        let grid = match (self.grid.lo, self.grid.hi) {
            (None, None) => EnergyGrid::auto(bound, self.grid.step),
            (Some(lo), Some(hi)) => EnergyGrid::uniform(lo, hi, self.grid.step),
            _ => Err(config_error("grid needs both lo and hi, or neither")),
        }
        .map_err(as_config)?;
        let orders = if self.orders.is_empty() {
            vec![TrendOrder {
                step: self.grid.step,
                n_steps: self.n_steps,
            }]
        } else {
            self.orders.clone()
        };
        for o in &orders {
            if !(o.step > 0.0) || o.n_steps < MIN_LYAPUNOV_STEPS {
                return Err(config_error(format!(
                    "each order needs step > 0 and n_steps >= {MIN_LYAPUNOV_STEPS}"
                )));
            }
        }
        if self.n_max == 0 || self.sample_length < MIN_SAMPLING_RATIO * self.n_max {
            return Err(config_error(format!(
                "need n_max >= 1 and sample_length >= {MIN_SAMPLING_RATIO}·n_max"
            )));
        }
        if self.section_radius < 4 {
            return Err(config_error("section_radius must be at least 4"));
        }
        if self.uniformity.energies.is_empty() {
            return Err(config_error("uniformity.energies must be nonempty"));
        }
        let uniformity_n = self.uniformity.n.unwrap_or((self.n_steps / 4).max(1));
        if uniformity_n == 0 {
            return Err(config_error("uniformity.n must be positive"));
        }
        if let Some(e) = self.energy {
            if !e.is_finite() {
                return Err(config_error("energy must be finite"));
            }
        }

        let max_steps = orders
            .iter()
            .map(|o| o.n_steps)
            .chain([self.n_steps, 4 * uniformity_n])
            .max()
            .expect("nonempty");
        let max_size = *self.sizes.last().expect("nonempty");
        // Room for the longest product at offsets spread over a window twice
        // its length, the largest centred section and the resolvent section.
        let coeff_radius = (2 * max_steps as usize)
            .max(max_size / 2 + 1)
            .max(self.section_radius + 1)
            + 2;
        Ok(Validated {
            spec,
            sampling,
            grid,
            orders,
            uniformity_n,
            coeff_radius: coeff_radius as i64,
            threshold: self.threshold.map_or(Threshold::Auto, Threshold::Fixed),
        })
    }

    pub fn combes_thomas_options(&self) -> CombesThomasOptions {
        CombesThomasOptions {
            tol: self.tol.min(1e-10),
            ..Default::default()
        }
    }
}

/// A configuration after validation, with derived quantities.
#[derive(Clone, Debug)]
pub struct Validated {
    pub spec: SubshiftSpec,
    pub sampling: SamplingFunctions<f64>,
    pub grid: EnergyGrid,
    pub orders: Vec<TrendOrder>,
    pub uniformity_n: u64,
    /// Coefficients are assembled on `[−coeff_radius, coeff_radius]`.
    pub coeff_radius: i64,
    pub threshold: Threshold,
}

impl Validated {
    pub fn orbit(&self, radius: usize) -> Result<OrbitWindow> {
        self.spec.orbit(radius)
    }

    pub fn coefficients(&self) -> Result<CoefficientWindow<f64>> {
        let r = self.coeff_radius;
        let orbit = self.spec.orbit(r as usize + self.sampling.window_radius())?;
        assemble_coefficients(&orbit, &self.sampling, -r, r)
    }
}

/// Base offsets for products of `steps` steps, evenly spread over the
/// window or drawn without replacement from a ChaCha stream seeded by
/// `seed`.
pub fn choose_offsets(
    coeffs: &CoefficientWindow<f64>,
    steps: u64,
    offsets: &OffsetConfig,
    seed: u64,
) -> Result<Vec<i64>> {
    match offsets.mode {
        OffsetMode::Even => spread_offsets(coeffs, steps as i64, offsets.count),
        OffsetMode::Random => {
            let (lo_rel, hi_rel) = required_sites(steps as i64, 0);
            let (k_lo, k_hi) = (coeffs.lo() - lo_rel, coeffs.hi() - hi_rel);
            let available = (k_hi - k_lo + 1).max(0) as usize;
            if available < offsets.count {
                return Err(config_error(format!(
                    "only {available} admissible offsets for {steps} steps, {} requested",
                    offsets.count
                )));
            }
            // Mixing in the step count gives each order its own draw.
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ steps.rotate_left(32));
            let mut picked: Vec<i64> = sample(&mut rng, available, offsets.count)
                .into_iter()
                .map(|i| k_lo + i as i64)
                .collect();
            picked.sort_unstable();
            Ok(picked)
        }
    }
}
