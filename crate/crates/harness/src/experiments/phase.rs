//! Share-stability sweep across bidder scales: for each volume `N` in a
//! ladder and three bidder classes (large `n₀ = N/10`, medium `n₀ = 2`,
//! small `n₀ = N^{−1/2}`), estimates the distribution of the share ratio
//! `π_T/π_0` at the convergence horizon `T(N) = c·N^{1+α}`.
//!
//! Sampling shortcut, exact in law: conditional on the number of mints
//! `m` over `T` rounds, each mint goes to a bidder with probability equal
//! to its current share, a self-reinforcing and exchangeable sequence;
//! integrating out the order, the number of mints won by a bidder
//! starting with `n₀` of `N` stakes is Beta-Binomial(m; n₀, N − n₀).
//! The mint times depend only on the volume path, so the pair (m,
//! winner counts) factorizes exactly, and the exponent α enters only
//! through the law of `m`. One volume path per replication is shared by
//! all three classes, which also correlates the classes the way a real
//! chain would.

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution};

use crate::config::Config;
use crate::error::HarnessError;
use crate::mc::{run_replications, stream_rng};
use crate::report::{mean_and_se, sample_variance, CsvTable, Estimate, ExperimentReport, RunOutput};

use super::simulate::format_float;

/// The three bidder scales of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BidderClass {
    /// `n₀ = N/10`: share deviations die out as `N` grows.
    Large,
    /// `n₀ = 2`: ratio variance stays in a constant band.
    Medium,
    /// `n₀ = N^{−1/2}`: ratio variance grows with `N`.
    Small,
}

pub const CLASSES: [BidderClass; 3] = [BidderClass::Large, BidderClass::Medium, BidderClass::Small];

impl BidderClass {
    pub fn label(self) -> &'static str {
        match self {
            BidderClass::Large => "large",
            BidderClass::Medium => "medium",
            BidderClass::Small => "small",
        }
    }

    pub fn initial_stake(self, volume: u64) -> f64 {
        match self {
            BidderClass::Large => volume as f64 / 10.0,
            BidderClass::Medium => 2.0,
            BidderClass::Small => (volume as f64).powf(-0.5),
        }
    }
}

/// One (volume, class) cell of the sweep.
#[derive(Debug, Clone)]
pub struct PhaseCell {
    pub volume: u64,
    pub class_label: &'static str,
    pub n0: f64,
    pub horizon: u64,
    pub replications: u64,
    pub mean_ratio: f64,
    pub se_mean_ratio: f64,
    pub var_ratio: f64,
    pub se_var_ratio: f64,
    /// `P(|π_T/π_0 − 1| > ε)`.
    pub dev_freq: f64,
    /// Scaling diagnostic `Var · n₀` (constant across `N` exactly when
    /// the variance scales like `1/n₀`).
    pub var_scaled: f64,
}

/// Mints over `rounds` rounds of the volume process started at `start`,
/// one geometric variate per mint. At exponent 0 every round mints.
fn mint_count<R: Rng + ?Sized>(start: f64, alpha: f64, rounds: u64, rng: &mut R) -> u64 {
    if alpha == 0.0 {
        return rounds;
    }
    let mut volume = start;
    let mut t = 0u64;
    let mut mints = 0u64;
    while t < rounds {
        let p = volume.powf(-alpha);
        let gap = if p >= 1.0 {
            1.0
        } else {
            let u = 1.0 - rng.random::<f64>();
            (u.ln() / (1.0 - p).ln()).ceil().max(1.0)
        };
        if gap > (rounds - t) as f64 {
            break;
        }
        t += gap as u64;
        volume += 1.0;
        mints += 1;
    }
    mints
}

/// Number of `m` reinforcing draws won from initial weights `(a, b)`.
fn beta_binomial<R: Rng + ?Sized>(m: u64, a: f64, b: f64, rng: &mut R) -> u64 {
    if m == 0 {
        return 0;
    }
    let p: f64 = Beta::new(a, b).expect("positive shape parameters").sample(rng);
    Binomial::new(m, p.clamp(0.0, 1.0))
        .expect("probability in range")
        .sample(rng)
}

/// Runs the sweep over a volume ladder.
pub fn sweep(
    alpha: f64,
    volumes: &[u64],
    epsilon: f64,
    horizon_factor: f64,
    replications: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<PhaseCell>, HarnessError> {
    if volumes.is_empty() {
        return Err(HarnessError::Config("mc.volumes must be nonempty".into()));
    }
    if volumes.iter().any(|&v| v < 20) {
        return Err(HarnessError::Config(
            "mc.volumes must be at least 20 so every class has positive stake headroom".into(),
        ));
    }
    if !(epsilon > 0.0) || !(horizon_factor > 0.0) {
        return Err(HarnessError::Config(
            "mc.epsilon and mc.horizon_factor must be positive".into(),
        ));
    }

    // Four streams per (replication, volume): the volume path plus one
    // per class.
    let components = (volumes.len() * 4) as u64;
    let mut cells = Vec::new();
    for (vi, &volume) in volumes.iter().enumerate() {
        let horizon = (horizon_factor * (volume as f64).powf(1.0 + alpha)).round() as u64;
        let ratios: Vec<[f64; 3]> = run_replications(replications, threads, |rep| {
            let base = rep * components + (vi * 4) as u64;
            let mints = {
                let mut rng = stream_rng(seed, base);
                mint_count(volume as f64, alpha, horizon, &mut rng)
            };
            let mut out = [0.0; 3];
            for (ci, class) in CLASSES.iter().enumerate() {
                let n0 = class.initial_stake(volume);
                let mut rng = stream_rng(seed, base + 1 + ci as u64);
                let won = beta_binomial(mints, n0, volume as f64 - n0, &mut rng);
                let share = (n0 + won as f64) / (volume + mints) as f64;
                out[ci] = share / (n0 / volume as f64);
            }
            out
        })?;

        for (ci, class) in CLASSES.iter().enumerate() {
            let column: Vec<f64> = ratios.iter().map(|r| r[ci]).collect();
            let (mean_ratio, se_mean_ratio) = mean_and_se(&column);
            let var_ratio = sample_variance(&column);
            let m4 = column
                .iter()
                .map(|x| (x - mean_ratio).powi(4))
                .sum::<f64>()
                / replications as f64;
            let se_var_ratio =
                ((m4 - var_ratio * var_ratio).max(0.0) / replications as f64).sqrt();
            let dev_freq = column.iter().filter(|&&r| (r - 1.0).abs() > epsilon).count() as f64
                / replications as f64;
            let n0 = class.initial_stake(volume);
            cells.push(PhaseCell {
                volume,
                class_label: class.label(),
                n0,
                horizon,
                replications,
                mean_ratio,
                se_mean_ratio,
                var_ratio,
                se_var_ratio,
                dev_freq,
                var_scaled: var_ratio * n0,
            });
        }
    }
    Ok(cells)
}

pub fn run(config: &Config) -> Result<RunOutput, HarnessError> {
    let cells = sweep(
        config.protocol.alpha,
        &config.mc.volumes,
        config.mc.epsilon,
        config.mc.horizon_factor,
        config.mc.replications,
        config.mc.seed,
        config.mc.threads,
    )?;

    let mut estimates = Vec::new();
    for c in &cells {
        let tag = format!("[N={},class={}]", c.volume, c.class_label);
        estimates.push(Estimate::new(
            format!("mean_ratio{tag}"),
            c.mean_ratio,
            c.se_mean_ratio,
        ));
        estimates.push(Estimate::new(
            format!("var_ratio{tag}"),
            c.var_ratio,
            c.se_var_ratio,
        ));
        estimates.push(Estimate::new(
            format!("dev_freq{tag}"),
            c.dev_freq,
            (c.dev_freq * (1.0 - c.dev_freq) / c.replications as f64).sqrt(),
        ));
    }

    let rows = cells
        .iter()
        .map(|c| {
            vec![
                c.volume.to_string(),
                c.class_label.to_string(),
                format_float(c.n0),
                c.horizon.to_string(),
                c.replications.to_string(),
                format_float(c.mean_ratio),
                format_float(c.var_ratio),
                format_float(c.dev_freq),
                format_float(c.var_scaled),
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
                "volume",
                "class",
                "n0",
                "horizon",
                "replications",
                "mean_ratio",
                "var_ratio",
                "dev_freq",
                "var_scaled",
            ],
            rows,
        }),
        ledger_csv: None,
    })
}
