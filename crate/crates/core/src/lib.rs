//! Core library for a proof-of-stake voting rule with sublinear voting
//! power: a bidder holding `n` of `N` total stakes wins a round's new
//! stake with probability `n / N^{1+α}`, so rounds stay idle with
//! probability `1 − N^{−α}` and the chain slows down as it grows.
//!
//! The crate splits into four layers:
//!
//! - [`chain`] — protocol parameters, system state, and the round
//!   samplers (single-round stepping, geometric fast-forwarding, and
//!   recorded trajectories).
//! - [`oracle`] — exact finite-horizon distributions and moments by
//!   dynamic programming over reachable stake configurations; the
//!   ground truth the samplers are tested against.
//! - [`asymptotics`] — the large-deviation rate function for the volume
//!   growth `N_t / t^{1/(1+α)}`, its roots, tail bounds, the sharpened
//!   two-scale bounds at `α = 1`, and the fluid (mean-path) limit.
//! - [`trading`] — price processes, budget-feasible trading, portfolio
//!   accounting, built-in strategies, and the combined
//!   chain/price/policy trajectory runner.
//!
//! Everything random is driven by caller-supplied RNGs (the trajectory
//! helpers seed `ChaCha8` internally from explicit seeds), so every
//! simulation is reproducible bit-for-bit from its seed.

pub mod asymptotics;
pub mod chain;
pub mod oracle;
pub mod trading;

pub use asymptotics::{
    fluid_path, growth_constant, improved_bounds_alpha1, rate_function, rate_function_report,
    rate_roots, tail_bound, AsymptoticsError, ImprovedBoundsReport, RateFunctionReport,
};
pub use chain::{
    fast_forward, simulate_trajectory, step, step_in_place, ChainError, ProtocolParams,
    StateRecord, StepOutcome, SystemState, Trajectory,
};
pub use oracle::{
    conditional_power_mean, conditional_share_mean, exact_central_moments, joint_distribution,
    volume_distribution, volume_marginal, DiscreteDistribution, JointState, MomentReport,
    OracleError,
};
pub use trading::{
    apply_trading_step, builtin_strategy, liquidate, pi_value, price_step, run_trading_trajectory,
    utility, utility_decomposition, validate_decision, BidderPolicy, ConstraintViolation,
    LedgerRecord, MarketParams, NoiseSpec, Observation, PortfolioLedger, PriceModel, StopRule,
    StrategyKind, StrategyOutcome, TradeDecision, TradingError, TradingResult, UtilityDecomposition,
};
