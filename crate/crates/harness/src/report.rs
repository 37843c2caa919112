//! Self-describing experiment reports and the small statistics helpers
//! shared by every experiment: mean / standard-error pairs and Wilson
//! score intervals for frequencies.

use serde::Serialize;

/// One named estimator: point estimate plus standard error (sample
/// standard deviation over √R for mean-type estimators; 0 for exact
/// quantities).
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn new(name: impl Into<String>, value: f64, std_error: f64) -> Self {
        Self {
            name: name.into(),
            value,
            std_error,
        }
    }

    /// An exactly computed quantity: standard error 0.
    pub fn exact(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, value, 0.0)
    }

    /// Mean and standard error of a sample.
    pub fn from_samples(name: impl Into<String>, samples: &[f64]) -> Self {
        let (mean, se) = mean_and_se(samples);
        Self::new(name, mean, se)
    }
}

/// The JSON report every run emits: what was estimated, under which seed
/// and replication count, and the fully resolved configuration so the run
/// can be repeated from the report alone.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub master_seed: u64,
    pub replications: u64,
    pub wall_clock_secs: f64,
    pub estimates: Vec<Estimate>,
    pub config_echo: serde_json::Value,
}

/// A CSV table with a fixed header, produced by an experiment and written
/// by the CLI layer.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a finished experiment hands back to the CLI.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: ExperimentReport,
    pub main_csv: Option<CsvTable>,
    pub ledger_csv: Option<CsvTable>,
}

/// Sample mean and standard error `s/√R`; (mean, 0) for fewer than two
/// samples.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    let variance = ss / (n - 1) as f64;
    (mean, (variance / n as f64).sqrt())
}

/// Unbiased sample variance; 0 for fewer than two samples.
pub fn sample_variance(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
}

/// Wilson score interval for a binomial proportion at normal quantile
/// `z`; well-behaved at 0 and n successes, unlike the Wald interval.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "Wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - spread).max(0.0), (center + spread).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mean_and_se_match_hand_values() {
        let (mean, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mean, 2.5);
        // Sample variance 5/3; SE = sqrt(5/12).
        assert_relative_eq!(se, (5.0f64 / 12.0).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn degenerate_samples_have_zero_se() {
        let (mean, se) = mean_and_se(&[7.0]);
        assert_eq!((mean, se), (7.0, 0.0));
        let (mean, se) = mean_and_se(&[2.0, 2.0, 2.0]);
        assert_eq!((mean, se), (2.0, 0.0));
    }

    #[test]
    fn wilson_interval_brackets_the_proportion_and_stays_in_range() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(hi - lo < 0.2);

        // Zero successes: lower end exactly 0, upper end positive.
        let (lo, hi) = wilson_interval(0, 1000, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);

        // All successes mirror that at 1.
        let (lo, hi) = wilson_interval(1000, 1000, 1.96);
        assert!(lo > 0.99 && lo < 1.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn variance_matches_hand_value() {
        assert_relative_eq!(
            sample_variance(&[1.0, 2.0, 3.0, 4.0]),
            5.0 / 3.0,
            max_relative = 1e-15
        );
        assert_eq!(sample_variance(&[5.0]), 0.0);
    }
}
