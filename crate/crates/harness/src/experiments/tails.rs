//! Empirical tail probabilities of the volume growth: for each horizon
//! `t` and level `λ` the frequency of `N_t` beyond `λ t^{1/(1+α)}`
//! (upper tail for λ above the growth constant, lower tail below), with
//! Wilson intervals and the normalized log-rate `−ln p̂ / t^{1/(1+α)}`
//! for comparison against the analytic rate function.

use polyvote_core::asymptotics::growth_constant;
use polyvote_core::chain::{fast_forward, ProtocolParams};

use crate::config::Config;
use crate::error::HarnessError;
use crate::mc::{run_replications, stream_rng};
use crate::report::{wilson_interval, CsvTable, Estimate, ExperimentReport, RunOutput};

use super::simulate::format_float;

/// One (horizon, level) cell of the tail table.
#[derive(Debug, Clone)]
pub struct TailCell {
    pub t: u64,
    pub lambda: f64,
    /// Upper tail (`N_t` above the threshold) or lower tail (below).
    pub upper: bool,
    pub hits: u64,
    pub replications: u64,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// `−ln p̂ / t^{1/(1+α)}`; `None` when no event was observed (the
    /// probability is then censored at `< 1/R`, not zero).
    pub normalized_rate: Option<f64>,
}

/// Runs the ladder: each replication walks the sorted horizons once, so
/// the per-horizon samples share paths (a trend table, not independent
/// columns).
pub fn estimate(
    params: &ProtocolParams,
    horizons: &[u64],
    lambdas: &[f64],
    replications: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<TailCell>, HarnessError> {
    if horizons.is_empty() {
        return Err(HarnessError::Config("mc.horizons must be nonempty".into()));
    }
    if lambdas.is_empty() {
        return Err(HarnessError::Config("mc.lambdas must be nonempty".into()));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::Config(
            "mc.horizons must be strictly increasing".into(),
        ));
    }
    let alpha = params.alpha();
    let center = growth_constant(alpha);

    let finals: Vec<Vec<f64>> = run_replications(replications, threads, |rep| {
        let mut rng = stream_rng(seed, rep);
        let mut state = params.initial_state();
        let mut at_checkpoints = Vec::with_capacity(horizons.len());
        for &t in horizons {
            let remaining = t - state.t();
            fast_forward(&mut state, params, remaining, &mut rng);
            at_checkpoints.push(state.volume());
        }
        at_checkpoints
    })?;

    let mut cells = Vec::new();
    for (ti, &t) in horizons.iter().enumerate() {
        let scale = (t as f64).powf(1.0 / (1.0 + alpha));
        for &lambda in lambdas {
            let upper = lambda >= center;
            let threshold = lambda * scale;
            let hits = finals
                .iter()
                .map(|f| f[ti])
                .filter(|&v| if upper { v > threshold } else { v < threshold })
                .count() as u64;
            let p_hat = hits as f64 / replications as f64;
            let (wilson_low, wilson_high) = wilson_interval(hits, replications, 1.96);
            cells.push(TailCell {
                t,
                lambda,
                upper,
                hits,
                replications,
                p_hat,
                wilson_low,
                wilson_high,
                normalized_rate: (hits > 0).then(|| -p_hat.ln() / scale),
            });
        }
    }
    Ok(cells)
}

pub fn run(config: &Config) -> Result<RunOutput, HarnessError> {
    let params = config.protocol.resolve()?;
    let cells = estimate(
        &params,
        &config.mc.horizons,
        &config.mc.lambdas,
        config.mc.replications,
        config.mc.seed,
        config.mc.threads,
    )?;

    let estimates = cells
        .iter()
        .map(|c| {
            Estimate::new(
                format!("p[t={},lambda={:.6}]", c.t, c.lambda),
                c.p_hat,
                (c.p_hat * (1.0 - c.p_hat) / c.replications as f64).sqrt(),
            )
        })
        .collect();

    let rows = cells
        .iter()
        .map(|c| {
            vec![
                c.t.to_string(),
                format_float(c.lambda),
                if c.upper { "upper" } else { "lower" }.to_string(),
                c.hits.to_string(),
                c.replications.to_string(),
                format_float(c.p_hat),
                format_float(c.wilson_low),
                format_float(c.wilson_high),
                c.normalized_rate.map(format_float).unwrap_or_default(),
                (c.hits == 0).to_string(),
            ]
        })
        .collect();

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
                "t",
                "lambda",
                "side",
                "hits",
                "replications",
                "p_hat",
                "wilson_low",
                "wilson_high",
                "normalized_rate",
                "censored",
            ],
            rows,
        }),
        ledger_csv: None,
    })
}
