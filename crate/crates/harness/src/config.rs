//! The experiment configuration: one JSON document with sections
//! `{experiment, protocol, market, policies, mc, output}`, every field
//! defaulted, overridable from the command line by dotted paths (e.g.
//! `--protocol.alpha 1.0`, `--policies.0.strategy.rate 0.2`).

use std::path::PathBuf;

use polyvote_core::{
    BidderPolicy, MarketParams, NoiseSpec, PriceModel, ProtocolParams, StopRule, StrategyKind,
};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

/// Which experiment a run performs; fixed by the CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    #[default]
    Simulate,
    Tails,
    Roots,
    Phase,
    Trade,
    Fluid,
    OracleCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Tails => "tails",
            ExperimentKind::Roots => "roots",
            ExperimentKind::Phase => "phase",
            ExperimentKind::Trade => "trade",
            ExperimentKind::Fluid => "fluid",
            ExperimentKind::OracleCheck => "oracle-check",
        }
    }
}

// ====================================================================
// Sections
// ====================================================================

/// Chain parameters. Default: one bidder with a single stake at `α = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_stakes")]
    pub initial_stakes: Vec<f64>,
}

fn default_alpha() -> f64 {
    1.0
}

fn default_stakes() -> Vec<f64> {
    vec![1.0]
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            initial_stakes: default_stakes(),
        }
    }
}

impl ProtocolSection {
    pub fn resolve(&self) -> Result<ProtocolParams, HarnessError> {
        Ok(ProtocolParams::new(self.alpha, self.initial_stakes.clone())?)
    }
}

/// Price model selector (tagged by `kind`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PriceModelSection {
    Calibrated,
    IndependentGeometric {
        #[serde(default)]
        r_p: f64,
    },
}

/// Innovation selector (tagged by `kind`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseSection {
    Unit,
    LogNormal {
        #[serde(default = "default_sigma")]
        sigma: f64,
    },
}

fn default_sigma() -> f64 {
    0.1
}

/// Market parameters. Defaults: 2% risk-free, 5% stake return, unit
/// initial price, calibrated model with mean-one log-normal noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketSection {
    #[serde(default = "default_r_free")]
    pub r_free: f64,
    #[serde(default = "default_r_cryp")]
    pub r_cryp: f64,
    #[serde(default = "default_p0")]
    pub p0: f64,
    #[serde(default = "default_price_model")]
    pub price_model: PriceModelSection,
    #[serde(default = "default_noise")]
    pub noise: NoiseSection,
}

fn default_r_free() -> f64 {
    0.02
}

fn default_r_cryp() -> f64 {
    0.05
}

fn default_p0() -> f64 {
    1.0
}

fn default_price_model() -> PriceModelSection {
    PriceModelSection::Calibrated
}

fn default_noise() -> NoiseSection {
    NoiseSection::LogNormal {
        sigma: default_sigma(),
    }
}

impl Default for MarketSection {
    fn default() -> Self {
        Self {
            r_free: default_r_free(),
            r_cryp: default_r_cryp(),
            p0: default_p0(),
            price_model: default_price_model(),
            noise: default_noise(),
        }
    }
}

impl MarketSection {
    pub fn resolve(&self) -> Result<MarketParams, HarnessError> {
        let model = match self.price_model {
            PriceModelSection::Calibrated => PriceModel::Calibrated,
            PriceModelSection::IndependentGeometric { r_p } => {
                PriceModel::IndependentGeometric { r_p }
            }
        };
        let noise = match self.noise {
            NoiseSection::Unit => NoiseSpec::Unit,
            NoiseSection::LogNormal { sigma } => NoiseSpec::LogNormal { sigma },
        };
        Ok(MarketParams::new(
            self.r_free,
            self.r_cryp,
            self.p0,
            model,
            noise,
        )?)
    }
}

/// Strategy selector (tagged by `kind`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrategySection {
    NonParticipation,
    NoTrading,
    ProportionalSell {
        #[serde(default = "default_rate")]
        rate: f64,
    },
    PeriodicBuy {
        #[serde(default = "default_amount")]
        amount: f64,
        #[serde(default = "default_period")]
        period: u64,
    },
    RandomFeasible {
        #[serde(default = "default_intensity")]
        intensity: f64,
    },
}

fn default_rate() -> f64 {
    0.05
}

fn default_amount() -> f64 {
    0.5
}

fn default_period() -> u64 {
    5
}

fn default_intensity() -> f64 {
    0.5
}

impl StrategySection {
    fn resolve(self) -> StrategyKind {
        match self {
            StrategySection::NonParticipation => StrategyKind::NonParticipation,
            StrategySection::NoTrading => StrategyKind::NoTrading,
            StrategySection::ProportionalSell { rate } => StrategyKind::ProportionalSell { rate },
            StrategySection::PeriodicBuy { amount, period } => {
                StrategyKind::PeriodicBuy { amount, period }
            }
            StrategySection::RandomFeasible { intensity } => {
                StrategyKind::RandomFeasible { intensity }
            }
        }
    }

    fn default_label(self) -> &'static str {
        match self {
            StrategySection::NonParticipation => "non-participation",
            StrategySection::NoTrading => "no-trading",
            StrategySection::ProportionalSell { .. } => "proportional-sell",
            StrategySection::PeriodicBuy { .. } => "periodic-buy",
            StrategySection::RandomFeasible { .. } => "random-feasible",
        }
    }
}

/// Stop-rule selector (tagged by `kind`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StopSection {
    AtTerminal,
    ShareBelow { level: f64 },
    PriceAbove { level: f64 },
}

impl StopSection {
    fn resolve(self) -> StopRule {
        match self {
            StopSection::AtTerminal => StopRule::AtTerminal,
            StopSection::ShareBelow { level } => StopRule::ShareBelow { level },
            StopSection::PriceAbove { level } => StopRule::PriceAbove { level },
        }
    }
}

/// One trading policy: discounting, horizon, strategy, stop rule, and an
/// optional display label (defaults to the strategy name).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_terminal_time")]
    pub terminal_time: u64,
    #[serde(default = "default_strategy")]
    pub strategy: StrategySection,
    #[serde(default = "default_stop")]
    pub stop: StopSection,
}

fn default_delta() -> f64 {
    0.95
}

fn default_terminal_time() -> u64 {
    40
}

fn default_strategy() -> StrategySection {
    StrategySection::NoTrading
}

fn default_stop() -> StopSection {
    StopSection::AtTerminal
}

impl Default for PolicySection {
    fn default() -> Self {
        Self {
            label: None,
            delta: default_delta(),
            terminal_time: default_terminal_time(),
            strategy: default_strategy(),
            stop: default_stop(),
        }
    }
}

impl PolicySection {
    pub fn resolve(&self) -> Result<(String, BidderPolicy), HarnessError> {
        let policy = BidderPolicy::new(
            self.delta,
            self.terminal_time,
            self.strategy.resolve(),
            self.stop.resolve(),
        )?;
        let label = self
            .label
            .clone()
            .unwrap_or_else(|| self.strategy.default_label().to_string());
        Ok((label, policy))
    }
}

/// The default policy roster: the whole built-in family under one
/// discount and horizon, mirroring what the trading comparisons expect.
pub fn default_policies() -> Vec<PolicySection> {
    [
        StrategySection::NonParticipation,
        StrategySection::NoTrading,
        StrategySection::ProportionalSell {
            rate: default_rate(),
        },
        StrategySection::PeriodicBuy {
            amount: default_amount(),
            period: default_period(),
        },
        StrategySection::RandomFeasible {
            intensity: default_intensity(),
        },
    ]
    .into_iter()
    .map(|strategy| PolicySection {
        strategy,
        ..PolicySection::default()
    })
    .collect()
}

/// Monte Carlo controls, including kind-specific knobs; unused fields are
/// simply ignored by an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    /// Replication count R.
    #[serde(default = "default_replications")]
    pub replications: u64,
    /// Round horizon for `simulate`.
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    /// Master seed; the `POLYVOTE_SEED` environment variable overrides it.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads; 0 picks the machine default.
    #[serde(default)]
    pub threads: usize,
    /// `simulate`: record every `record_stride`-th round per replication
    /// instead of finals only (0 = finals only).
    #[serde(default)]
    pub record_stride: u64,
    /// `tails`: horizon ladder.
    #[serde(default = "default_horizons")]
    pub horizons: Vec<u64>,
    /// `tails`: deviation levels λ (volume threshold `λ t^{1/(1+α)}`).
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    /// `phase`: volume ladder.
    #[serde(default = "default_volumes")]
    pub volumes: Vec<u64>,
    /// `phase`: deviation threshold ε for `P(|π_T/π_0 − 1| > ε)`.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// `phase`: horizon constant c in `T(N) = c·N^{1+α}` (the timescale on
    /// which shares converge; doubling it moves estimates by well under
    /// one standard error).
    #[serde(default = "default_horizon_factor")]
    pub horizon_factor: f64,
    /// `fluid`: scale ladder.
    #[serde(default = "default_scales")]
    pub scales: Vec<u64>,
    /// `oracle-check`: acceptable total-variation distance between the
    /// exact law and the sampled one.
    #[serde(default = "default_tv_threshold")]
    pub tv_threshold: f64,
}

fn default_replications() -> u64 {
    1_000
}

fn default_horizon() -> u64 {
    1_000
}

fn default_seed() -> u64 {
    2_026
}

fn default_horizons() -> Vec<u64> {
    vec![1_000, 2_000, 4_000, 8_000]
}

fn default_lambdas() -> Vec<f64> {
    vec![2.2f64.sqrt()]
}

fn default_volumes() -> Vec<u64> {
    vec![200, 800, 3_200]
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_horizon_factor() -> f64 {
    50.0
}

fn default_scales() -> Vec<u64> {
    vec![100, 1_000, 10_000]
}

fn default_tv_threshold() -> f64 {
    0.01
}

impl Default for McSection {
    fn default() -> Self {
        Self {
            replications: default_replications(),
            horizon: default_horizon(),
            seed: default_seed(),
            threads: 0,
            record_stride: 0,
            horizons: default_horizons(),
            lambdas: default_lambdas(),
            volumes: default_volumes(),
            epsilon: default_epsilon(),
            horizon_factor: default_horizon_factor(),
            scales: default_scales(),
            tv_threshold: default_tv_threshold(),
        }
    }
}

/// Where to write things; unset paths skip the artifact. The JSON report
/// always also goes to stdout.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub ledger_csv: Option<PathBuf>,
}

/// The whole configuration document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub protocol: ProtocolSection,
    #[serde(default)]
    pub market: MarketSection,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicySection>,
    #[serde(default)]
    pub mc: McSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl Default for Config {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({})).expect("empty config must deserialize")
    }
}

impl Config {
    /// Validates cross-field constraints that serde cannot express.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.mc.replications == 0 {
            return Err(HarnessError::Config(
                "mc.replications must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn resolved_policies(&self) -> Result<Vec<(String, BidderPolicy)>, HarnessError> {
        self.policies.iter().map(|p| p.resolve()).collect()
    }

    /// The fully resolved document, embedded in reports for re-running.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

// ====================================================================
// Dotted-path overrides
// ====================================================================

/// Interprets an override value: anything that parses as JSON (numbers,
/// booleans, arrays, null, quoted strings) is taken as such; the rest is
/// a bare string, so `--market.price_model.kind calibrated` works without
/// quoting.
fn parse_override(raw: &str) -> serde_json::Value {
    serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()))
}

/// Sets `path` (dot-separated; numeric segments index arrays) inside a
/// JSON document, creating intermediate objects as needed.
pub fn apply_dotted_override(
    doc: &mut serde_json::Value,
    path: &str,
    raw: &str,
) -> Result<(), HarnessError> {
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(HarnessError::Config(format!(
            "override path '{path}' has an empty segment"
        )));
    }
    let mut cursor = doc;
    for (i, segment) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        if let Ok(index) = segment.parse::<usize>() {
            let array = cursor.as_array_mut().ok_or_else(|| {
                HarnessError::Config(format!(
                    "override path '{path}': segment '{segment}' indexes a non-array"
                ))
            })?;
            if index >= array.len() {
                return Err(HarnessError::Config(format!(
                    "override path '{path}': index {index} is out of bounds (length {})",
                    array.len()
                )));
            }
            if last {
                array[index] = parse_override(raw);
                return Ok(());
            }
            cursor = &mut array[index];
        } else {
            if !cursor.is_object() {
                return Err(HarnessError::Config(format!(
                    "override path '{path}': segment '{segment}' descends into a non-object"
                )));
            }
            let object = cursor.as_object_mut().expect("checked above");
            if last {
                object.insert((*segment).to_string(), parse_override(raw));
                return Ok(());
            }
            cursor = object
                .entry((*segment).to_string())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
        }
    }
    Ok(())
}
