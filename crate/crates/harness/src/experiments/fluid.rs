//! Deterministic-limit check: rescales simulated volume paths onto the
//! unit interval and measures their uniform distance to the closed-form
//! limit path `X(u) = ((1+α)u)^{1/(1+α)}`. With `n` rounds mapped to
//! `u = t/n` and volume scaled by `n^{−1/(1+α)}`, the distance should
//! shrink as the scale `n` grows.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use polyvote_core::asymptotics::fluid_path;

use crate::config::Config;
use crate::error::HarnessError;
use crate::mc::{run_replications, stream_rng};
use crate::report::{mean_and_se, CsvTable, Estimate, ExperimentReport, RunOutput};

use super::simulate::format_float;

/// Distance summary at one scale.
#[derive(Debug, Clone)]
pub struct ScaleStats {
    pub scale: u64,
    pub replications: u64,
    pub mean_sup_distance: f64,
    pub se_sup_distance: f64,
    /// Mean of the rescaled terminal volume `N_n · n^{−1/(1+α)}`; the
    /// limit path ends at `((1+α))^{1/(1+α)}`.
    pub mean_end_value: f64,
}

/// Sup distance between one rescaled volume path and the limit path.
fn sup_distance(initial_volume: f64, alpha: f64, scale: u64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let beta = 1.0 / (1.0 + alpha);
    let normalizer = (scale as f64).powf(-beta);
    let mut volume = initial_volume;
    let mut sup = (volume * normalizer - fluid_path(0.0, alpha)).abs();
    for t in 1..=scale {
        let p = volume.powf(-alpha);
        if rng.random::<f64>() < p {
            volume += 1.0;
        }
        let d = (volume * normalizer - fluid_path(t as f64 / scale as f64, alpha)).abs();
        if d > sup {
            sup = d;
        }
    }
    (sup, volume * normalizer)
}

/// Runs the distance estimate over a ladder of scales.
pub fn ladder(
    alpha: f64,
    initial_volume: f64,
    scales: &[u64],
    replications: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<ScaleStats>, HarnessError> {
    if scales.is_empty() {
        return Err(HarnessError::Config("mc.scales must be nonempty".into()));
    }
    if scales.iter().any(|&n| n == 0) {
        return Err(HarnessError::Config("mc.scales must be positive".into()));
    }
    let components = scales.len() as u64;
    let mut out = Vec::with_capacity(scales.len());
    for (si, &scale) in scales.iter().enumerate() {
        let samples: Vec<(f64, f64)> = run_replications(replications, threads, |rep| {
            let mut rng = stream_rng(seed, rep * components + si as u64);
            sup_distance(initial_volume, alpha, scale, &mut rng)
        })?;
        let sups: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let (mean_sup_distance, se_sup_distance) = mean_and_se(&sups);
        let mean_end_value =
            samples.iter().map(|s| s.1).sum::<f64>() / replications as f64;
        out.push(ScaleStats {
            scale,
            replications,
            mean_sup_distance,
            se_sup_distance,
            mean_end_value,
        });
    }
    Ok(out)
}

pub fn run(config: &Config) -> Result<RunOutput, HarnessError> {
    let params = config.protocol.resolve()?;
    let alpha = params.alpha();
    let stats = ladder(
        alpha,
        params.initial_volume(),
        &config.mc.scales,
        config.mc.replications,
        config.mc.seed,
        config.mc.threads,
    )?;

    let mut estimates = Vec::new();
    for s in &stats {
        estimates.push(Estimate::new(
            format!("sup_distance[n={}]", s.scale),
            s.mean_sup_distance,
            s.se_sup_distance,
        ));
        estimates.push(Estimate::new(
            format!("end_value[n={}]", s.scale),
            s.mean_end_value,
            0.0,
        ));
    }

    let limit_end = fluid_path(1.0, alpha);
    let rows = stats
        .iter()
        .map(|s| {
            vec![
                s.scale.to_string(),
                s.replications.to_string(),
                format_float(s.mean_sup_distance),
                format_float(s.se_sup_distance),
                format_float(s.mean_end_value),
                format_float(limit_end),
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
                "scale",
                "replications",
                "mean_sup_distance",
                "se_sup_distance",
                "mean_end_value",
                "limit_end_value",
            ],
            rows,
        }),
        ledger_csv: None,
    })
}
