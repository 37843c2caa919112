//! The trading layer: price processes, feasibility constraints, portfolio
//! accounting, and built-in strategies.
//!
//! A trading bidder (index 0 in the chain) may each round trade `ν` stakes
//! at the prevailing unit price `P_t` against a counterparty (the last
//! bidder, usually "the rest of the market") and park cash `b ≥ 0` at the
//! risk-free rate. The accounting identity per round is
//!
//! ```text
//! c_t = (1 + r_free) b_{t−1} − b_t − ν_t P_t            (1 ≤ t < τ)
//! c_τ = (1 + r_free) b_{τ−1} + n'_τ P_τ                 (exit round)
//! ```
//!
//! with `b_0 = 0`, no shorting (`b ≥ 0`, `0 ≤ n' + ν ≤ N_t`), and
//! `ν = b = 0` at exit. The realized objective is the discounted cash
//! stream `Σ δ^t c_t`, which decomposes exactly into the discounted
//! position value `Π_τ` plus a bank-carry correction — see
//! [`utility_decomposition`].
//!
//! Two price models ship. The **calibrated** model sets
//! `P_{t+1} = (1+r_cryp) N_t P_t / (N_t + N_t^{−α}) · ξ_{t+1}` with
//! independent mean-one innovations `ξ`, which makes the market value
//! `M_t = N_t P_t` drift by exactly `1 + r_cryp` per round in conditional
//! mean (the expected next volume is `N_t + N_t^{−α}`). The
//! **independent-geometric** model keeps the price process fully
//! independent of the chain, `P_{t+1} = P_t (1+r_p) ξ_{t+1}`, and attains
//! that drift only up to a factor `1 + N_t^{−(1+α)}`.

use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use thiserror::Error;

use crate::chain::{self, ChainError, ProtocolParams, SystemState};

/// A feasibility violation; returned as a value by [`validate_decision`].
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ConstraintViolation {
    #[error("risk-free holding must be nonnegative, got {bank}")]
    NegativeBank { bank: f64 },
    #[error("post-trade stake {post_trade} would be negative (shorting)")]
    NegativeHoldings { post_trade: f64 },
    #[error("post-trade stake {post_trade} exceeds the volume {volume}")]
    ExceedsVolume { post_trade: f64, volume: f64 },
    #[error("the exit round requires nu = 0 and bank = 0, got nu {nu}, bank {bank}")]
    NonzeroAtExit { nu: f64, bank: f64 },
    #[error("decision values must be finite, got nu {nu}, bank {bank}")]
    NonFinite { nu: f64, bank: f64 },
}

/// Errors from the trading layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TradingError {
    #[error("{name} must be finite and nonnegative, got {value}")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("initial price must be positive and finite, got {0}")]
    InvalidInitialPrice(f64),
    #[error("{name} must lie in [{lo}, {hi}], got {value}")]
    ParameterOutOfRange {
        name: &'static str,
        lo: f64,
        hi: f64,
        value: f64,
    },
    #[error("discount factor must lie in (0, 1], got {0}")]
    InvalidDiscount(f64),
    #[error("terminal time must be at least 1")]
    ZeroTerminalTime,
    #[error("sampled price must be positive and finite, got {0}")]
    NonPositivePrice(f64),
    #[error("infeasible decision: {0}")]
    Infeasible(#[from] ConstraintViolation),
    #[error("the ledger was already closed at round {0}")]
    LedgerClosed(u64),
    #[error("the ledger has no liquidation record")]
    IncompleteLedger,
    #[error("round {0} has no ledger record")]
    MissingRecord(u64),
    #[error("a nonzero trade needs a counterparty bidder")]
    NoCounterparty,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

// ====================================================================
// Market parameters
// ====================================================================

/// How the unit price evolves between rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriceModel {
    /// Drift conditioned on the current volume so that `E(M_{t+1} | G_t)
    /// = (1 + r_cryp) M_t` holds exactly.
    Calibrated,
    /// `P_{t+1} = P_t (1 + r_p) ξ`, fully independent of the chain.
    IndependentGeometric { r_p: f64 },
}

/// The innovation family for `ξ`; every variant has mean exactly 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    /// `ξ ≡ 1`: degenerate noise, for exact one-step identity checks.
    Unit,
    /// Log-normal with location `−σ²/2`, so `E ξ = 1` analytically.
    LogNormal { sigma: f64 },
}

/// Market-side parameters: rates, initial price, price model, and noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    r_free: f64,
    r_cryp: f64,
    p0: f64,
    price_model: PriceModel,
    noise: NoiseSpec,
}

impl MarketParams {
    pub fn new(
        r_free: f64,
        r_cryp: f64,
        p0: f64,
        price_model: PriceModel,
        noise: NoiseSpec,
    ) -> Result<Self, TradingError> {
        if !r_free.is_finite() || r_free < 0.0 {
            return Err(TradingError::InvalidRate {
                name: "risk-free rate",
                value: r_free,
            });
        }
        if !r_cryp.is_finite() || r_cryp < 0.0 {
            return Err(TradingError::InvalidRate {
                name: "stake return rate",
                value: r_cryp,
            });
        }
        if !p0.is_finite() || p0 <= 0.0 {
            return Err(TradingError::InvalidInitialPrice(p0));
        }
        if let PriceModel::IndependentGeometric { r_p } = price_model {
            if !r_p.is_finite() || r_p < 0.0 {
                return Err(TradingError::InvalidRate {
                    name: "geometric price rate",
                    value: r_p,
                });
            }
        }
        if let NoiseSpec::LogNormal { sigma } = noise {
            if !sigma.is_finite() || sigma < 0.0 {
                return Err(TradingError::InvalidRate {
                    name: "noise sigma",
                    value: sigma,
                });
            }
        }
        Ok(Self {
            r_free,
            r_cryp,
            p0,
            price_model,
            noise,
        })
    }

    pub fn r_free(&self) -> f64 {
        self.r_free
    }

    pub fn r_cryp(&self) -> f64 {
        self.r_cryp
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn price_model(&self) -> PriceModel {
        self.price_model
    }

    pub fn noise(&self) -> NoiseSpec {
        self.noise
    }
}

/// Draws one mean-one innovation.
fn sample_noise<R: Rng + ?Sized>(noise: NoiseSpec, rng: &mut R) -> f64 {
    match noise {
        NoiseSpec::Unit => 1.0,
        NoiseSpec::LogNormal { sigma } => {
            if sigma == 0.0 {
                1.0
            } else {
                LogNormal::new(-0.5 * sigma * sigma, sigma)
                    .expect("validated sigma")
                    .sample(rng)
            }
        }
    }
}

/// Advances the unit price one round, given the pre-round volume `N_t`.
/// `alpha` is the chain exponent; the calibrated model needs it to form
/// the expected next volume `N_t + N_t^{−α}`.
pub fn price_step<R: Rng + ?Sized>(
    market: &MarketParams,
    alpha: f64,
    volume: f64,
    price: f64,
    rng: &mut R,
) -> Result<f64, TradingError> {
    debug_assert!(volume >= 1.0 && price > 0.0);
    let xi = sample_noise(market.noise, rng);
    let next = match market.price_model {
        PriceModel::Calibrated => {
            (1.0 + market.r_cryp) * volume * price / (volume + volume.powf(-alpha)) * xi
        }
        PriceModel::IndependentGeometric { r_p } => price * (1.0 + r_p) * xi,
    };
    if !next.is_finite() || next <= 0.0 {
        return Err(TradingError::NonPositivePrice(next));
    }
    Ok(next)
}

// ====================================================================
// Policies
// ====================================================================

/// A built-in trading rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategyKind {
    /// Liquidate everything at round 0 and never participate; realizes
    /// the undiscounted benchmark `n_0 P_0`.
    NonParticipation,
    /// Hold stakes untouched (`ν = b = 0`) until exit.
    NoTrading,
    /// Sell `rate ∈ [0, 1]` of the pre-trade stake every round.
    ProportionalSell { rate: f64 },
    /// Buy `amount` stakes (cash-funded) every `period` rounds, clamped
    /// to what the volume allows.
    PeriodicBuy { amount: f64, period: u64 },
    /// Uniformly random feasible trade and bank position, scaled by
    /// `intensity ∈ [0, 1]`; exercises every constraint boundary.
    RandomFeasible { intensity: f64 },
}

/// When the bidder exits (always capped by the terminal time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Exit exactly at the terminal time.
    AtTerminal,
    /// Exit the first round the bidder's share drops below `level`.
    ShareBelow { level: f64 },
    /// Exit the first round the price exceeds `level`.
    PriceAbove { level: f64 },
}

/// A bidder's full trading policy: discounting, horizon, strategy, and
/// stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidderPolicy {
    delta: f64,
    terminal_time: u64,
    strategy: StrategyKind,
    stop_rule: StopRule,
}

impl BidderPolicy {
    pub fn new(
        delta: f64,
        terminal_time: u64,
        strategy: StrategyKind,
        stop_rule: StopRule,
    ) -> Result<Self, TradingError> {
        if !delta.is_finite() || delta <= 0.0 || delta > 1.0 {
            return Err(TradingError::InvalidDiscount(delta));
        }
        if terminal_time == 0 {
            return Err(TradingError::ZeroTerminalTime);
        }
        match strategy {
            StrategyKind::ProportionalSell { rate } => {
                if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
                    return Err(TradingError::ParameterOutOfRange {
                        name: "sell rate",
                        lo: 0.0,
                        hi: 1.0,
                        value: rate,
                    });
                }
            }
            StrategyKind::PeriodicBuy { amount, period } => {
                if !amount.is_finite() || amount < 0.0 {
                    return Err(TradingError::InvalidRate {
                        name: "buy amount",
                        value: amount,
                    });
                }
                if period == 0 {
                    return Err(TradingError::ParameterOutOfRange {
                        name: "buy period",
                        lo: 1.0,
                        hi: f64::INFINITY,
                        value: 0.0,
                    });
                }
            }
            StrategyKind::RandomFeasible { intensity } => {
                if !intensity.is_finite() || !(0.0..=1.0).contains(&intensity) {
                    return Err(TradingError::ParameterOutOfRange {
                        name: "intensity",
                        lo: 0.0,
                        hi: 1.0,
                        value: intensity,
                    });
                }
            }
            StrategyKind::NonParticipation | StrategyKind::NoTrading => {}
        }
        Ok(Self {
            delta,
            terminal_time,
            strategy,
            stop_rule,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn terminal_time(&self) -> u64 {
        self.terminal_time
    }

    pub fn strategy(&self) -> StrategyKind {
        self.strategy
    }

    pub fn stop_rule(&self) -> StopRule {
        self.stop_rule
    }
}

// ====================================================================
// Ledger
// ====================================================================

/// A round's worth of portfolio accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRecord {
    pub t: u64,
    /// Stakes traded this round (`ν_t`; positive = buy).
    pub nu: f64,
    /// Risk-free holding after this round (`b_t`).
    pub bank: f64,
    /// Unit price `P_t`.
    pub price: f64,
    /// Realized cash flow `c_t`.
    pub cash_flow: f64,
    /// Stake before trading (`n'_t`).
    pub pre_trade_stake: f64,
    /// Stake after trading (`n'_t + ν_t`; zero on the exit row, whose
    /// holdings convert to cash instead of trading).
    pub post_trade_stake: f64,
    /// Volume `N_t`.
    pub volume: f64,
}

/// Per-bidder trading history. One record per round from 1 through exit
/// (the exit record may be at round 0 for immediate liquidation); the
/// account rate `r_free` is fixed at opening so every cash flow can be
/// recomputed from neighboring records.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioLedger {
    initial_stake: f64,
    initial_price: f64,
    initial_volume: f64,
    r_free: f64,
    records: Vec<LedgerRecord>,
    exit_time: Option<u64>,
}

impl PortfolioLedger {
    /// Opens an account at round 0 with no bank holding.
    pub fn new(initial_stake: f64, initial_price: f64, initial_volume: f64, r_free: f64) -> Self {
        Self {
            initial_stake,
            initial_price,
            initial_volume,
            r_free,
            records: Vec::new(),
            exit_time: None,
        }
    }

    pub fn initial_stake(&self) -> f64 {
        self.initial_stake
    }

    pub fn initial_price(&self) -> f64 {
        self.initial_price
    }

    pub fn initial_volume(&self) -> f64 {
        self.initial_volume
    }

    pub fn r_free(&self) -> f64 {
        self.r_free
    }

    pub fn records(&self) -> &[LedgerRecord] {
        &self.records
    }

    /// The round the position was liquidated, if it has been.
    pub fn exit_time(&self) -> Option<u64> {
        self.exit_time
    }

    pub fn is_complete(&self) -> bool {
        self.exit_time.is_some()
    }

    /// The bank holding carried into the next round (`b_{t−1}` for the
    /// upcoming round `t`); zero before any record exists.
    pub fn current_bank(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.bank)
    }
}

/// A strategy's per-round output: trade `ν` and bank position `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeDecision {
    pub nu: f64,
    pub bank: f64,
}

impl TradeDecision {
    pub const HOLD: TradeDecision = TradeDecision { nu: 0.0, bank: 0.0 };
}

/// Checks a decision against the no-shorting box: `b ≥ 0`,
/// `0 ≤ n' + ν ≤ N_t`, and `ν = b = 0` when exiting. The first violated
/// constraint is returned as a value.
pub fn validate_decision(
    decision: TradeDecision,
    state: &SystemState,
    at_exit: bool,
) -> Result<(), ConstraintViolation> {
    let TradeDecision { nu, bank } = decision;
    if !nu.is_finite() || !bank.is_finite() {
        return Err(ConstraintViolation::NonFinite { nu, bank });
    }
    if bank < 0.0 {
        return Err(ConstraintViolation::NegativeBank { bank });
    }
    let post_trade = state.stakes()[0] + nu;
    if post_trade < 0.0 {
        return Err(ConstraintViolation::NegativeHoldings { post_trade });
    }
    if post_trade > state.volume() {
        return Err(ConstraintViolation::ExceedsVolume {
            post_trade,
            volume: state.volume(),
        });
    }
    if at_exit && (nu != 0.0 || bank != 0.0) {
        return Err(ConstraintViolation::NonzeroAtExit { nu, bank });
    }
    Ok(())
}

/// Validates and books one trading round: records the cash flow
/// `c_t = (1 + r_free) b_{t−1} − b_t − ν_t P_t` and settles the stake
/// movement against the rest of the market, leaving the volume
/// unchanged. Purchases drain the other bidders greedily from the back
/// of the roster, so any buy within the aggregate headroom
/// `N_t − n_{0,t}` settles even when no single bidder holds that much;
/// sales credit the last bidder. The next voting round then runs on the
/// post-trade stakes.
pub fn apply_trading_step(
    state: &mut SystemState,
    ledger: &mut PortfolioLedger,
    decision: TradeDecision,
    price: f64,
) -> Result<(), TradingError> {
    if let Some(t) = ledger.exit_time {
        return Err(TradingError::LedgerClosed(t));
    }
    validate_decision(decision, state, false)?;
    if decision.nu != 0.0 && state.stakes().len() == 1 {
        return Err(TradingError::NoCounterparty);
    }
    let prev_bank = ledger.current_bank();
    let pre_trade = state.stakes()[0];
    if decision.nu > 0.0 {
        let mut remaining = decision.nu;
        for seller in (1..state.stakes().len()).rev() {
            if remaining <= 0.0 {
                break;
            }
            let take = remaining.min(state.stakes()[seller]);
            if take > 0.0 {
                state.transfer_stake(seller, 0, take)?;
                remaining -= take;
            }
        }
        // The other bidders' aggregate holdings can lag the tracked
        // volume by accumulated rounding dust; anything beyond that
        // scale would be an internal inconsistency.
        if remaining > state.volume() * 1e-9 {
            return Err(TradingError::Infeasible(ConstraintViolation::ExceedsVolume {
                post_trade: pre_trade + decision.nu,
                volume: state.volume(),
            }));
        }
    } else if decision.nu < 0.0 {
        let buyer = state.stakes().len() - 1;
        state.transfer_stake(0, buyer, -decision.nu)?;
    }
    let cash_flow = (1.0 + ledger.r_free) * prev_bank - decision.bank - decision.nu * price;
    ledger.records.push(LedgerRecord {
        t: state.t(),
        nu: decision.nu,
        bank: decision.bank,
        price,
        cash_flow,
        pre_trade_stake: pre_trade,
        post_trade_stake: state.stakes()[0],
        volume: state.volume(),
    });
    Ok(())
}

/// Closes the position: books `c_τ = (1 + r_free) b_{τ−1} + n'_τ P_τ`
/// with `ν_τ = b_τ = 0` and marks the exit round. Returns the final cash
/// flow; a second call is an error.
pub fn liquidate(
    ledger: &mut PortfolioLedger,
    state: &SystemState,
    price: f64,
) -> Result<f64, TradingError> {
    if let Some(t) = ledger.exit_time {
        return Err(TradingError::LedgerClosed(t));
    }
    let prev_bank = ledger.current_bank();
    let pre_trade = state.stakes()[0];
    let cash_flow = (1.0 + ledger.r_free) * prev_bank + pre_trade * price;
    ledger.records.push(LedgerRecord {
        t: state.t(),
        nu: 0.0,
        bank: 0.0,
        price,
        cash_flow,
        pre_trade_stake: pre_trade,
        post_trade_stake: 0.0,
        volume: state.volume(),
    });
    ledger.exit_time = Some(state.t());
    Ok(cash_flow)
}

// ====================================================================
// Valuation
// ====================================================================

/// The discounted position value
/// `Π_t = δ^t n'_t P_t − Σ_{j=1}^{t−1} δ^j ν_j P_j`, with
/// `Π_0 = n_0 P_0`. Its one-step conditional increment under the
/// calibrated price model is `δ^t π_t M_t (δ(1+r_cryp) − 1)`, which makes
/// `Π` a super-, sub-, or exact martingale according to the sign of
/// `δ(1+r_cryp) − 1`.
pub fn pi_value(ledger: &PortfolioLedger, t: u64, delta: f64) -> Result<f64, TradingError> {
    if t == 0 {
        return Ok(ledger.initial_stake * ledger.initial_price);
    }
    let at_t = ledger
        .records
        .iter()
        .find(|r| r.t == t)
        .ok_or(TradingError::MissingRecord(t))?;
    let mut value = delta.powi(t as i32) * at_t.pre_trade_stake * at_t.price;
    for r in ledger.records.iter().filter(|r| r.t >= 1 && r.t < t) {
        value -= delta.powi(r.t as i32) * r.nu * r.price;
    }
    Ok(value)
}

/// The realized objective `Σ_{t} δ^t c_t` over the completed ledger (the
/// round-0 exit row of immediate liquidation enters undiscounted).
pub fn utility(ledger: &PortfolioLedger, delta: f64) -> Result<f64, TradingError> {
    if !ledger.is_complete() {
        return Err(TradingError::IncompleteLedger);
    }
    Ok(ledger
        .records
        .iter()
        .map(|r| delta.powi(r.t as i32) * r.cash_flow)
        .sum())
}

/// The exact split of the realized objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityDecomposition {
    /// `Π_τ`: discounted terminal position plus realized trade proceeds.
    pub pi_terminal: f64,
    /// `Σ δ^t ((1+r_free) δ − 1) b_t`: the cost (or gain) of carrying
    /// bank holdings; vanishes identically when `b ≡ 0` or
    /// `(1+r_free) δ = 1`.
    pub bank_carry: f64,
}

/// Splits the utility as `Σ δ^t c_t = Π_τ + Σ δ^t ((1+r_free)δ − 1) b_t`;
/// the two sides agree within `1e-10` per trajectory (telescoping the
/// bank column), which the property tests fuzz.
pub fn utility_decomposition(
    ledger: &PortfolioLedger,
    delta: f64,
) -> Result<UtilityDecomposition, TradingError> {
    let exit = ledger.exit_time.ok_or(TradingError::IncompleteLedger)?;
    let pi_terminal = pi_value(ledger, exit, delta)?;
    let coefficient = (1.0 + ledger.r_free) * delta - 1.0;
    let bank_carry = ledger
        .records
        .iter()
        .map(|r| delta.powi(r.t as i32) * coefficient * r.bank)
        .sum();
    Ok(UtilityDecomposition {
        pi_terminal,
        bank_carry,
    })
}

// ====================================================================
// Strategies
// ====================================================================

/// What a strategy sees when deciding at round `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub t: u64,
    pub pre_trade_stake: f64,
    pub volume: f64,
    pub price: f64,
    pub prev_bank: f64,
    pub terminal_time: u64,
}

/// Largest buy the built-in strategies will attempt: the distance to the
/// volume cap, shaved by a volume-scaled margin. Stake arithmetic lets
/// the sum of holdings drift a few ulps (at the volume's magnitude)
/// below the tracked volume, so buying the exact headroom could
/// overdraw the counterparty at settlement.
fn buy_headroom(obs: &Observation) -> f64 {
    (obs.volume - obs.pre_trade_stake - obs.volume * 1e-12).max(0.0)
}

/// Evaluates a built-in strategy. Decisions are clamped into the feasible
/// box of [`validate_decision`], so they always validate; the random
/// strategy consumes exactly two uniforms per call so its stream stays
/// aligned across configurations.
pub fn builtin_strategy<R: Rng + ?Sized>(
    kind: StrategyKind,
    obs: &Observation,
    rng: &mut R,
) -> TradeDecision {
    match kind {
        StrategyKind::NonParticipation | StrategyKind::NoTrading => TradeDecision::HOLD,
        StrategyKind::ProportionalSell { rate } => TradeDecision {
            nu: -(rate * obs.pre_trade_stake),
            bank: 0.0,
        },
        StrategyKind::PeriodicBuy { amount, period } => {
            if obs.t % period == 0 {
                TradeDecision {
                    nu: amount.min(buy_headroom(obs)),
                    bank: 0.0,
                }
            } else {
                TradeDecision::HOLD
            }
        }
        StrategyKind::RandomFeasible { intensity } => {
            let u_trade: f64 = rng.random();
            let u_bank: f64 = rng.random();
            let raw = intensity * obs.pre_trade_stake * (2.0 * u_trade - 1.0);
            let nu = raw.max(-obs.pre_trade_stake).min(buy_headroom(obs));
            let bank = intensity * u_bank * obs.pre_trade_stake * obs.price;
            TradeDecision { nu, bank }
        }
    }
}

// ====================================================================
// Trajectory runner
// ====================================================================

/// Summary of one completed trading trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyOutcome {
    /// Realized `Σ δ^t c_t`.
    pub utility: f64,
    /// `Π_τ` at the exit round.
    pub pi_terminal: f64,
    pub exit_time: u64,
    pub final_price: f64,
    pub final_volume: f64,
}

/// A finished run: the outcome plus the full per-round ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct TradingResult {
    pub outcome: StrategyOutcome,
    pub ledger: PortfolioLedger,
}

/// Runs one full trading trajectory: chain, price, and policy together.
///
/// Bidder 0 is the trader and the last bidder the counterparty. Each
/// round the price moves first (it depends on the pre-round volume), then
/// the voting round runs on post-trade stakes, then the bidder observes
/// and either exits (terminal time reached or stop rule triggered) or
/// trades. The three random streams are deliberately separate so that
/// chain and price draws can be shared across strategies for
/// common-random-number comparisons.
pub fn run_trading_trajectory<R1, R2, R3>(
    params: &ProtocolParams,
    market: &MarketParams,
    policy: &BidderPolicy,
    chain_rng: &mut R1,
    price_rng: &mut R2,
    strategy_rng: &mut R3,
) -> Result<TradingResult, TradingError>
where
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
    R3: Rng + ?Sized,
{
    let mut state = params.initial_state();
    let mut price = market.p0();
    let mut ledger = PortfolioLedger::new(
        state.stakes()[0],
        price,
        state.volume(),
        market.r_free(),
    );

    if policy.strategy() == StrategyKind::NonParticipation {
        liquidate(&mut ledger, &state, price)?;
    } else {
        for t in 1..=policy.terminal_time() {
            price = price_step(market, params.alpha(), state.volume(), price, price_rng)?;
            chain::step_in_place(&mut state, params, chain_rng);
            debug_assert_eq!(state.t(), t);
            let pre_trade = state.stakes()[0];
            let stop = t == policy.terminal_time()
                || match policy.stop_rule() {
                    StopRule::AtTerminal => false,
                    StopRule::ShareBelow { level } => pre_trade / state.volume() < level,
                    StopRule::PriceAbove { level } => price > level,
                };
            if stop {
                liquidate(&mut ledger, &state, price)?;
                break;
            }
            let obs = Observation {
                t,
                pre_trade_stake: pre_trade,
                volume: state.volume(),
                price,
                prev_bank: ledger.current_bank(),
                terminal_time: policy.terminal_time(),
            };
            let decision = builtin_strategy(policy.strategy(), &obs, strategy_rng);
            apply_trading_step(&mut state, &mut ledger, decision, price)?;
        }
    }

    let exit_time = ledger.exit_time().expect("loop always liquidates");
    let realized = utility(&ledger, policy.delta())?;
    let pi_terminal = pi_value(&ledger, exit_time, policy.delta())?;
    Ok(TradingResult {
        outcome: StrategyOutcome {
            utility: realized,
            pi_terminal,
            exit_time,
            final_price: price,
            final_volume: state.volume(),
        },
        ledger,
    })
}

// ====================================================================
// Tests
// ====================================================================
