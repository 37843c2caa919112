//! Strategy comparison under common random numbers: runs every
//! configured bidder policy against the same chain and price paths,
//! estimates expected discounted utility per policy, and reports
//! pairwise utility differences whose standard errors benefit from the
//! shared randomness.
//!
//! Stream layout: each replication owns `2 + P` streams — one for the
//! chain, one for the price noise, and one per policy for strategy
//! randomization. Trades never change the stake volume, so two policies
//! sharing the chain and price streams see bitwise-identical volume and
//! price paths; utility differences then measure only the strategies.

use polyvote_core::chain::ProtocolParams;
use polyvote_core::trading::{run_trading_trajectory, BidderPolicy, MarketParams, StrategyOutcome};

use crate::config::Config;
use crate::error::HarnessError;
use crate::mc::{stream_rng, try_run_replications};
use crate::report::{mean_and_se, CsvTable, Estimate, ExperimentReport, RunOutput};

use super::simulate::format_float;

/// Monte Carlo summary for one policy.
#[derive(Debug, Clone)]
pub struct PolicyStats {
    pub label: String,
    pub replications: u64,
    pub mean_utility: f64,
    pub se_utility: f64,
    pub mean_pi_terminal: f64,
    pub mean_exit_time: f64,
}

/// Paired utility difference between two policies run on shared paths.
#[derive(Debug, Clone)]
pub struct PairDiff {
    pub a: String,
    pub b: String,
    pub mean_diff: f64,
    pub se_diff: f64,
}

/// Runs all policies over `replications` shared path pairs.
pub fn compare(
    params: &ProtocolParams,
    market: &MarketParams,
    policies: &[(String, BidderPolicy)],
    replications: u64,
    seed: u64,
    threads: usize,
) -> Result<(Vec<PolicyStats>, Vec<PairDiff>), HarnessError> {
    if policies.is_empty() {
        return Err(HarnessError::Config("at least one policy is required".into()));
    }
    let components = 2 + policies.len() as u64;
    let per_rep: Vec<Vec<StrategyOutcome>> = try_run_replications(replications, threads, |rep| -> Result<Vec<StrategyOutcome>, HarnessError> {
        let base = rep * components;
        let mut row = Vec::with_capacity(policies.len());
        for (s, (_, policy)) in policies.iter().enumerate() {
            let mut chain_rng = stream_rng(seed, base);
            let mut price_rng = stream_rng(seed, base + 1);
            let mut strategy_rng = stream_rng(seed, base + 2 + s as u64);
            let result = run_trading_trajectory(
                params,
                market,
                policy,
                &mut chain_rng,
                &mut price_rng,
                &mut strategy_rng,
            )?;
            row.push(result.outcome);
        }
        Ok(row)
    })?;

    let mut stats = Vec::with_capacity(policies.len());
    for (s, (label, _)) in policies.iter().enumerate() {
        let utilities: Vec<f64> = per_rep.iter().map(|row| row[s].utility).collect();
        let (mean_utility, se_utility) = mean_and_se(&utilities);
        let mean_pi_terminal =
            per_rep.iter().map(|row| row[s].pi_terminal).sum::<f64>() / replications as f64;
        let mean_exit_time =
            per_rep.iter().map(|row| row[s].exit_time as f64).sum::<f64>() / replications as f64;
        stats.push(PolicyStats {
            label: label.clone(),
            replications,
            mean_utility,
            se_utility,
            mean_pi_terminal,
            mean_exit_time,
        });
    }

    let mut diffs = Vec::new();
    for a in 0..policies.len() {
        for b in (a + 1)..policies.len() {
            let column: Vec<f64> = per_rep
                .iter()
                .map(|row| row[a].utility - row[b].utility)
                .collect();
            let (mean_diff, se_diff) = mean_and_se(&column);
            diffs.push(PairDiff {
                a: policies[a].0.clone(),
                b: policies[b].0.clone(),
                mean_diff,
                se_diff,
            });
        }
    }
    Ok((stats, diffs))
}

/// Full per-round ledger of the first policy's first replication, in
/// the audit column layout `t,nu,b,price,cash_flow,stakes,volume`.
pub fn first_replication_ledger(
    params: &ProtocolParams,
    market: &MarketParams,
    policies: &[(String, BidderPolicy)],
    seed: u64,
) -> Result<CsvTable, HarnessError> {
    let (_, policy) = policies
        .first()
        .ok_or_else(|| HarnessError::Config("at least one policy is required".into()))?;
    let mut chain_rng = stream_rng(seed, 0);
    let mut price_rng = stream_rng(seed, 1);
    let mut strategy_rng = stream_rng(seed, 2);
    let result = run_trading_trajectory(
        params,
        market,
        policy,
        &mut chain_rng,
        &mut price_rng,
        &mut strategy_rng,
    )?;

    let mut rows = Vec::new();
    let starts_later = result
        .ledger
        .records()
        .first()
        .map(|r| r.t >= 1)
        .unwrap_or(true);
    if starts_later {
        // Snapshot row for the pre-trading state.
        rows.push(vec![
            "0".to_string(),
            "0".to_string(),
            "0".to_string(),
            format_float(market.p0()),
            "0".to_string(),
            format_float(params.initial_stakes()[0]),
            format_float(params.initial_volume()),
        ]);
    }
    for r in result.ledger.records() {
        rows.push(vec![
            r.t.to_string(),
            format_float(r.nu),
            format_float(r.bank),
            format_float(r.price),
            format_float(r.cash_flow),
            format_float(r.post_trade_stake),
            format_float(r.volume),
        ]);
    }
    Ok(CsvTable {
        header: vec!["t", "nu", "b", "price", "cash_flow", "stakes", "volume"],
        rows,
    })
}

pub fn run(config: &Config) -> Result<RunOutput, HarnessError> {
    let params = config.protocol.resolve()?;
    let market = config.market.resolve()?;
    let policies = config.resolved_policies()?;
    let (stats, diffs) = compare(
        &params,
        &market,
        &policies,
        config.mc.replications,
        config.mc.seed,
        config.mc.threads,
    )?;

    let mut estimates = Vec::new();
    for s in &stats {
        estimates.push(Estimate::new(
            format!("utility[{}]", s.label),
            s.mean_utility,
            s.se_utility,
        ));
        estimates.push(Estimate::new(
            format!("pi_terminal[{}]", s.label),
            s.mean_pi_terminal,
            0.0,
        ));
        estimates.push(Estimate::new(
            format!("exit_time[{}]", s.label),
            s.mean_exit_time,
            0.0,
        ));
    }
    for d in &diffs {
        estimates.push(Estimate::new(
            format!("diff[{}-{}]", d.a, d.b),
            d.mean_diff,
            d.se_diff,
        ));
    }

    let rows = stats
        .iter()
        .map(|s| {
            vec![
                s.label.clone(),
                s.replications.to_string(),
                format_float(s.mean_utility),
                format_float(s.se_utility),
                format_float(s.mean_pi_terminal),
                format_float(s.mean_exit_time),
            ]
        })
        .collect();

    let ledger_csv = if config.output.ledger_csv.is_some() {
        Some(first_replication_ledger(
            &params,
            &market,
            &policies,
            config.mc.seed,
        )?)
    } else {
        None
    };

    Ok(RunOutput {
        report: ExperimentReport {
            experiment: config.experiment.name().to_string(),
            master_seed: config.mc.seed,
            replications: config.mc.replications,
            wall_clock_secs: 0.0,
            estimates,
            config_echo: config.echo(),
        },
        main_csv: Some(CsvTable {
            header: vec![
                "policy",
                "replications",
                "mean_utility",
                "se_utility",
                "mean_pi_terminal",
                "mean_exit_time",
            ],
            rows,
        }),
        ledger_csv,
    })
}
