//! Deterministic solver run: the deviation-rate roots for the configured
//! exponent, their residuals, the growth constant, and — at exponent 1 —
//! the sharpened two-scale thresholds.

use polyvote_core::asymptotics::{improved_bounds_alpha1, rate_function, rate_function_report};

use crate::config::Config;
use crate::error::HarnessError;
use crate::report::{CsvTable, Estimate, ExperimentReport, RunOutput};

use super::simulate::format_float;

pub fn run(config: &Config) -> Result<RunOutput, HarnessError> {
    let alpha = config.protocol.alpha;
    let report = rate_function_report(alpha)?;
    let residual_minus = rate_function(report.lambda_minus, alpha)?.abs();
    let residual_plus = rate_function(report.lambda_plus, alpha)?.abs();

    let mut estimates = vec![
        Estimate::exact("alpha", alpha),
        Estimate::exact("lambda_minus", report.lambda_minus),
        Estimate::exact("lambda_plus", report.lambda_plus),
        Estimate::exact("growth_constant", report.growth_constant),
        Estimate::exact("residual_minus", residual_minus),
        Estimate::exact("residual_plus", residual_plus),
    ];
    // The two-scale sharpening is specific to exponent 1.
    if alpha == 1.0 {
        let improved = improved_bounds_alpha1()?;
        estimates.extend([
            Estimate::exact("theta_lower", improved.theta_lower),
            Estimate::exact("lambda_minus_improved", improved.lambda_minus_improved),
            Estimate::exact("theta_upper", improved.theta_upper),
            Estimate::exact("lambda_plus_improved", improved.lambda_plus_improved),
        ]);
    }

    let rows = estimates
        .iter()
        .map(|e| vec![e.name.clone(), format_float(e.value)])
        .collect();

    Ok(RunOutput {
        report: ExperimentReport {
            experiment: config.experiment.name().to_string(),
            master_seed: config.mc.seed,
            replications: 0,
            wall_clock_secs: 0.0,
            estimates,
            config_echo: config.echo(),
        },
        main_csv: Some(CsvTable {
            header: vec!["name", "value"],
            rows,
        }),
        ledger_csv: None,
    })
}
