//! End-to-end trading invariants: every built-in strategy produces
//! feasible, auditable ledgers; the utility decomposition closes; and
//! shared random streams give identical chain and price paths across
//! strategies (the basis for common-random-number comparisons).

use polyvote_core::chain::ProtocolParams;
use polyvote_core::trading::{
    run_trading_trajectory, utility_decomposition, BidderPolicy, MarketParams, NoiseSpec,
    PortfolioLedger, PriceModel, StopRule, StrategyKind,
};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Recomputes every cash flow from neighboring records and checks the
/// feasibility box row by row.
fn audit_ledger(ledger: &PortfolioLedger, participated: bool) {
    let exit = ledger.exit_time().expect("ledger must be complete");
    let records = ledger.records();
    assert!(!records.is_empty());
    let last = records.len() - 1;
    let mut prev_bank = 0.0;
    for (i, r) in records.iter().enumerate() {
        if participated {
            assert_eq!(r.t, (i + 1) as u64, "rounds must be contiguous from 1");
        } else {
            assert_eq!(r.t, 0, "immediate liquidation books a single round-0 row");
        }
        if i == last {
            assert_eq!(r.t, exit);
            assert_eq!(r.nu, 0.0, "no trade on the exit row");
            assert_eq!(r.bank, 0.0, "no bank holding on the exit row");
            let expected = (1.0 + ledger.r_free()) * prev_bank + r.pre_trade_stake * r.price;
            assert!(
                (r.cash_flow - expected).abs() < 1e-9,
                "exit cash flow {} vs {}",
                r.cash_flow,
                expected
            );
        } else {
            let expected = (1.0 + ledger.r_free()) * prev_bank - r.bank - r.nu * r.price;
            assert!(
                (r.cash_flow - expected).abs() < 1e-9,
                "cash flow {} vs {} at round {}",
                r.cash_flow,
                expected,
                r.t
            );
            assert!(
                (r.post_trade_stake - (r.pre_trade_stake + r.nu)).abs() < 1e-12,
                "stake bookkeeping broken at round {}",
                r.t
            );
            assert!(r.bank >= 0.0);
            assert!(r.post_trade_stake >= 0.0);
            assert!(r.post_trade_stake <= r.volume * (1.0 + 1e-12));
        }
        prev_bank = r.bank;
    }
}

fn strategy_strategy() -> impl Strategy<Value = StrategyKind> {
    prop_oneof![
        Just(StrategyKind::NonParticipation),
        Just(StrategyKind::NoTrading),
        (0.0f64..=1.0).prop_map(|rate| StrategyKind::ProportionalSell { rate }),
        (0.0f64..=3.0, 1u64..=5).prop_map(|(amount, period)| StrategyKind::PeriodicBuy {
            amount,
            period
        }),
        (0.0f64..=1.0).prop_map(|intensity| StrategyKind::RandomFeasible { intensity }),
    ]
}

fn stop_strategy() -> impl Strategy<Value = StopRule> {
    prop_oneof![
        Just(StopRule::AtTerminal),
        (0.0f64..=0.5).prop_map(|level| StopRule::ShareBelow { level }),
        (0.5f64..=3.0).prop_map(|level| StopRule::PriceAbove { level }),
    ]
}

fn market_strategy() -> impl Strategy<Value = MarketParams> {
    (
        0.0f64..=0.1,
        0.0f64..=0.1,
        0.2f64..=5.0,
        prop_oneof![
            Just(PriceModel::Calibrated),
            (0.0f64..=0.1).prop_map(|r_p| PriceModel::IndependentGeometric { r_p }),
        ],
        prop_oneof![
            Just(NoiseSpec::Unit),
            (0.0f64..=0.3).prop_map(|sigma| NoiseSpec::LogNormal { sigma }),
        ],
    )
        .prop_map(|(r_free, r_cryp, p0, model, noise)| {
            MarketParams::new(r_free, r_cryp, p0, model, noise).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Every built-in strategy under every market completes without
    /// error, and the resulting ledger passes a full row-by-row audit.
    #[test]
    fn built_in_strategies_always_produce_auditable_ledgers(
        alpha in 0.0f64..=2.0,
        n0 in 1u32..=20,
        counter in 1u32..=80,
        market in market_strategy(),
        delta in 0.9f64..=1.0,
        horizon in 1u64..=50,
        strategy in strategy_strategy(),
        stop in stop_strategy(),
        seed: u64,
    ) {
        let params =
            ProtocolParams::new(alpha, vec![f64::from(n0), f64::from(counter)]).unwrap();
        let policy = BidderPolicy::new(delta, horizon, strategy, stop).unwrap();
        let mut c = ChaCha8Rng::seed_from_u64(seed);
        let mut p = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut s = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
        let result = run_trading_trajectory(&params, &market, &policy, &mut c, &mut p, &mut s)
            .expect("built-in strategies must stay feasible");
        audit_ledger(
            &result.ledger,
            strategy != StrategyKind::NonParticipation,
        );
        prop_assert!(result.outcome.exit_time <= horizon);
        prop_assert!(result.outcome.utility.is_finite());
    }

    /// The objective splits exactly into position value plus bank carry.
    #[test]
    fn utility_decomposition_closes_on_random_runs(
        alpha in 0.0f64..=2.0,
        market in market_strategy(),
        delta in 0.9f64..=1.0,
        horizon in 1u64..=50,
        intensity in 0.0f64..=1.0,
        seed: u64,
    ) {
        let params = ProtocolParams::new(alpha, vec![10.0, 90.0]).unwrap();
        let policy = BidderPolicy::new(
            delta,
            horizon,
            StrategyKind::RandomFeasible { intensity },
            StopRule::AtTerminal,
        )
        .unwrap();
        let mut c = ChaCha8Rng::seed_from_u64(seed);
        let mut p = ChaCha8Rng::seed_from_u64(seed ^ 0xdead_beef);
        let mut s = ChaCha8Rng::seed_from_u64(seed ^ 0xcafe);
        let result =
            run_trading_trajectory(&params, &market, &policy, &mut c, &mut p, &mut s).unwrap();
        let split = utility_decomposition(&result.ledger, delta).unwrap();
        let gap = (result.outcome.utility - (split.pi_terminal + split.bank_carry)).abs();
        prop_assert!(gap < 1e-10, "decomposition gap {gap}");
    }
}

/// Strategies sharing chain and price streams see bitwise-identical
/// volume and price paths: trades move stakes between bidders but never
/// change the volume, and the chain consumes exactly one variate per
/// round regardless of who wins. This is what makes common-random-number
/// strategy comparisons valid.
#[test]
fn shared_streams_give_identical_volume_and_price_paths() {
    let params = ProtocolParams::new(1.0, vec![10.0, 90.0]).unwrap();
    let market = MarketParams::new(
        0.02,
        0.05,
        1.0,
        PriceModel::Calibrated,
        NoiseSpec::LogNormal { sigma: 0.1 },
    )
    .unwrap();
    let horizon = 40;
    let strategies = [
        StrategyKind::NoTrading,
        StrategyKind::ProportionalSell { rate: 0.2 },
        StrategyKind::PeriodicBuy {
            amount: 1.0,
            period: 3,
        },
        StrategyKind::RandomFeasible { intensity: 0.8 },
    ];
    let mut paths: Vec<Vec<(f64, f64)>> = Vec::new();
    for (i, strategy) in strategies.into_iter().enumerate() {
        let policy = BidderPolicy::new(0.95, horizon, strategy, StopRule::AtTerminal).unwrap();
        let mut c = ChaCha8Rng::seed_from_u64(777);
        let mut p = ChaCha8Rng::seed_from_u64(888);
        let mut s = ChaCha8Rng::seed_from_u64(999 + i as u64);
        let result =
            run_trading_trajectory(&params, &market, &policy, &mut c, &mut p, &mut s).unwrap();
        paths.push(
            result
                .ledger
                .records()
                .iter()
                .map(|r| (r.volume, r.price))
                .collect(),
        );
    }
    for other in &paths[1..] {
        assert_eq!(&paths[0], other, "volume/price paths must not depend on trades");
    }
}

/// With `δ (1 + r_cryp) = 1` under the calibrated price model, the
/// discounted position value is a martingale, so holding without trading
/// has mean objective `n₀ P₀`.
#[test]
fn holding_is_mean_preserving_when_discount_offsets_drift() {
    let params = ProtocolParams::new(1.0, vec![10.0, 90.0]).unwrap();
    let r_cryp = 0.05;
    let market = MarketParams::new(
        0.02,
        r_cryp,
        1.0,
        PriceModel::Calibrated,
        NoiseSpec::LogNormal { sigma: 0.1 },
    )
    .unwrap();
    let policy = BidderPolicy::new(
        1.0 / (1.0 + r_cryp),
        30,
        StrategyKind::NoTrading,
        StopRule::AtTerminal,
    )
    .unwrap();
    let reps = 4_000;
    let mut total = 0.0;
    let mut total_sq = 0.0;
    for rep in 0..reps {
        let mut c = ChaCha8Rng::seed_from_u64(3 * rep);
        let mut p = ChaCha8Rng::seed_from_u64(3 * rep + 1);
        let mut s = ChaCha8Rng::seed_from_u64(3 * rep + 2);
        let result =
            run_trading_trajectory(&params, &market, &policy, &mut c, &mut p, &mut s).unwrap();
        total += result.outcome.utility;
        total_sq += result.outcome.utility * result.outcome.utility;
    }
    let mean = total / reps as f64;
    let variance = (total_sq / reps as f64 - mean * mean).max(0.0);
    let se = (variance / reps as f64).sqrt();
    assert!(
        (mean - 10.0).abs() < 4.0 * se,
        "mean objective {mean} strays from 10 by more than 4 SE ({se})"
    );
}

/// A share-threshold stop rule exits early with a clean final row.
#[test]
fn share_threshold_stops_produce_clean_exits() {
    let params = ProtocolParams::new(0.5, vec![10.0, 90.0]).unwrap();
    let market = MarketParams::new(
        0.0,
        0.0,
        1.0,
        PriceModel::IndependentGeometric { r_p: 0.0 },
        NoiseSpec::Unit,
    )
    .unwrap();
    // Selling 30% per round drives the share below 5% within a few
    // rounds, well before the 100-round horizon.
    let policy = BidderPolicy::new(
        0.99,
        100,
        StrategyKind::ProportionalSell { rate: 0.3 },
        StopRule::ShareBelow { level: 0.05 },
    )
    .unwrap();
    let mut c = ChaCha8Rng::seed_from_u64(51);
    let mut p = ChaCha8Rng::seed_from_u64(52);
    let mut s = ChaCha8Rng::seed_from_u64(53);
    let result =
        run_trading_trajectory(&params, &market, &policy, &mut c, &mut p, &mut s).unwrap();
    assert!(
        result.outcome.exit_time < 100,
        "stop rule should fire early, exited at {}",
        result.outcome.exit_time
    );
    audit_ledger(&result.ledger, true);
}
