//! Plain chain simulation: R independent trajectories, reporting final
//! volumes and their fluid-normalized values (volume over
//! `((1+α)t)^{1/(1+α)}`), with optional per-round recording.

use polyvote_core::asymptotics::fluid_path;
use polyvote_core::chain::{fast_forward, ProtocolParams};

use crate::config::Config;
use crate::error::HarnessError;
use crate::mc::{run_replications, stream_rng};
use crate::report::{CsvTable, Estimate, ExperimentReport, RunOutput};

/// Final volumes of `replications` independent runs over `horizon`
/// rounds, one stream per replication.
pub fn final_volumes(
    params: &ProtocolParams,
    horizon: u64,
    replications: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<f64>, HarnessError> {
    run_replications(replications, threads, |rep| {
        let mut rng = stream_rng(seed, rep);
        let mut state = params.initial_state();
        fast_forward(&mut state, params, horizon, &mut rng);
        state.volume()
    })
}

/// Volume recorded at every `stride`-th round (plus round 0 and the
/// horizon) for each replication.
fn recorded_volumes(
    params: &ProtocolParams,
    horizon: u64,
    stride: u64,
    replications: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<Vec<(u64, f64)>>, HarnessError> {
    run_replications(replications, threads, |rep| {
        let mut rng = stream_rng(seed, rep);
        let mut state = params.initial_state();
        let mut records = vec![(0, state.volume())];
        while state.t() < horizon {
            let step = stride.min(horizon - state.t());
            fast_forward(&mut state, params, step, &mut rng);
            records.push((state.t(), state.volume()));
        }
        records
    })
}

pub fn run(config: &Config) -> Result<RunOutput, HarnessError> {
    let params = config.protocol.resolve()?;
    let alpha = params.alpha();
    let horizon = config.mc.horizon;
    let reps = config.mc.replications;
    let seed = config.mc.seed;

    let normalizer = |t: u64, volume: f64| -> Option<f64> {
        (t > 0).then(|| volume / fluid_path(t as f64, alpha))
    };

    let (estimates, main_csv);
    if config.mc.record_stride > 0 {
        let paths = recorded_volumes(
            &params,
            horizon,
            config.mc.record_stride,
            reps,
            seed,
            config.mc.threads,
        )?;
        let finals: Vec<f64> = paths.iter().map(|p| p.last().unwrap().1).collect();
        estimates = build_estimates(&finals, horizon, alpha);
        let mut rows = Vec::new();
        for (rep, path) in paths.iter().enumerate() {
            for &(t, volume) in path {
                rows.push(vec![
                    rep.to_string(),
                    t.to_string(),
                    format_float(volume),
                    normalizer(t, volume).map(format_float).unwrap_or_default(),
                ]);
            }
        }
        main_csv = CsvTable {
            header: vec!["replication", "t", "volume", "normalized"],
            rows,
        };
    } else {
        let finals = final_volumes(&params, horizon, reps, seed, config.mc.threads)?;
        estimates = build_estimates(&finals, horizon, alpha);
        let rows = finals
            .iter()
            .enumerate()
            .map(|(rep, &volume)| {
                vec![
                    rep.to_string(),
                    horizon.to_string(),
                    format_float(volume),
                    normalizer(horizon, volume)
                        .map(format_float)
                        .unwrap_or_default(),
                ]
            })
            .collect();
        main_csv = CsvTable {
            header: vec!["replication", "t", "volume", "normalized"],
            rows,
        };
    }

    Ok(RunOutput {
        report: ExperimentReport {
            experiment: config.experiment.name().to_string(),
            master_seed: seed,
            replications: reps,
            wall_clock_secs: 0.0,
            estimates,
            config_echo: config.echo(),
        },
        main_csv: Some(main_csv),
        ledger_csv: None,
    })
}

fn build_estimates(finals: &[f64], horizon: u64, alpha: f64) -> Vec<Estimate> {
    let mut estimates = vec![Estimate::from_samples("mean_final_volume", finals)];
    if horizon > 0 {
        let scale = fluid_path(horizon as f64, alpha);
        let normalized: Vec<f64> = finals.iter().map(|v| v / scale).collect();
        estimates.push(Estimate::from_samples("mean_normalized_final", &normalized));
    }
    estimates
}

pub(crate) fn format_float(x: f64) -> String {
    // Shortest representation that round-trips, so CSV consumers can
    // reproduce the exact binary values.
    format!("{x}")
}
