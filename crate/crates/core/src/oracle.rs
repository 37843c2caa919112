//! Exact ground truth on small instances.
//!
//! Everything here is computed by exhaustive forward dynamic programming
//! over the chain's transition kernel — no sampling, no asymptotics — so
//! the results can serve as the reference against which Monte Carlo output
//! and closed-form claims are checked:
//!
//! * [`volume_distribution`] — the exact law of the volume `N_t`;
//! * [`joint_distribution`] — the exact law of the full stake vector;
//! * [`conditional_share_mean`] / [`conditional_power_mean`] — one-step
//!   conditional means of the share `π` (which is preserved exactly) and
//!   of the voting power `θ` (which contracts by `1 − N^{-α} + (N+1)^{-α}`);
//! * [`exact_central_moments`] — central moments of `π_{k,t}` about
//!   `π_{k,0}`, computed two independent ways and cross-checked.
//!
//! Oracles must be exact or refuse: state-space growth beyond the
//! configured limits is reported as an error, never silently truncated.
//! All arithmetic is double precision; hand-derived fractions in the tests
//! pin the small cases to full precision.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chain::{ChainError, ProtocolParams, SystemState};

/// Round-count cap for [`volume_distribution`]; the support (and the DP
/// cost, quadratically) grows with `t`.
pub const DEFAULT_VOLUME_ROUNDS_LIMIT: u64 = 10_000;

/// State-count cap for [`joint_distribution`].
pub const DEFAULT_JOINT_STATE_LIMIT: usize = 1_000_000;

/// Absolute tolerance for the direct-vs-recursive moment cross-check.
pub const MOMENT_CONSISTENCY_TOLERANCE: f64 = 1e-10;

/// Errors from the exact oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// The requested horizon exceeds the configured round limit.
    #[error("horizon {requested} exceeds the volume-law limit {limit}")]
    RoundsLimit { requested: u64, limit: u64 },
    /// The joint state space outgrew the configured limit.
    #[error("joint state space reached {attained} states at round {round}, over the limit {limit}")]
    StateSpaceLimit {
        attained: usize,
        limit: usize,
        round: u64,
    },
    /// The joint law is only defined for whole-unit initial stakes.
    #[error("joint law needs integer initial stakes, bidder {index} holds {value}")]
    NonIntegerStake { index: usize, value: f64 },
    /// A probability table failed validation.
    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },
    /// The two independent moment computations disagree; this signals an
    /// implementation bug, not a numerical limitation.
    #[error("{moment} mismatch: direct {direct} vs recursive {recursive}")]
    InternalConsistency {
        moment: &'static str,
        direct: f64,
        recursive: f64,
    },
    /// Invalid chain inputs.
    #[error(transparent)]
    Chain(#[from] ChainError),
}

// ====================================================================
// Probability tables
// ====================================================================

/// An exact probability table over an ordered list of states.
///
/// Invariants: probabilities are finite, nonnegative, and sum to 1 within
/// `1e-12`; states are pairwise distinct (guaranteed by the constructors in
/// this module, which enumerate supports in a canonical order).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution<S> {
    states: Vec<S>,
    probabilities: Vec<f64>,
}

impl<S> DiscreteDistribution<S> {
    /// Validates and builds a table. The caller is responsible for state
    /// uniqueness; mass validation happens here.
    pub fn new(states: Vec<S>, probabilities: Vec<f64>) -> Result<Self, OracleError> {
        if states.len() != probabilities.len() {
            return Err(OracleError::InvalidDistribution {
                reason: format!(
                    "{} states but {} probabilities",
                    states.len(),
                    probabilities.len()
                ),
            });
        }
        if states.is_empty() {
            return Err(OracleError::InvalidDistribution {
                reason: "empty support".to_string(),
            });
        }
        for (i, &p) in probabilities.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(OracleError::InvalidDistribution {
                    reason: format!("probability {p} at position {i}"),
                });
            }
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(OracleError::InvalidDistribution {
                reason: format!("total mass {total} differs from 1 beyond 1e-12"),
            });
        }
        Ok(Self {
            states,
            probabilities,
        })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `(state, probability)` pairs in support order.
    pub fn iter(&self) -> impl Iterator<Item = (&S, f64)> {
        self.states.iter().zip(self.probabilities.iter().copied())
    }

    /// Sum of all probabilities (1 within `1e-12` by construction).
    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

impl<S: PartialEq> DiscreteDistribution<S> {
    /// Probability of one state; 0 if absent from the support.
    pub fn probability_of(&self, state: &S) -> f64 {
        self.states
            .iter()
            .position(|s| s == state)
            .map_or(0.0, |i| self.probabilities[i])
    }
}

/// A state of the joint law: the whole-unit stake vector and its total.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointState {
    pub stakes: Vec<u64>,
    pub volume: u64,
}

// ====================================================================
// Volume law
// ====================================================================

/// Exact law of the volume `N_t`, with the default round limit.
///
/// The volume chain ignores how stakes are split: starting from `x`, a
/// round mints a unit with probability `x^{-α}`. The support is
/// `{N0, N0+1, …, N0+t}` (entries the dynamics cannot reach keep
/// probability zero, e.g. `N_t = N0` for `t ≥ 1` when `N0 = 1`).
pub fn volume_distribution(
    n0: f64,
    alpha: f64,
    t: u64,
) -> Result<DiscreteDistribution<f64>, OracleError> {
    volume_distribution_with_limit(n0, alpha, t, DEFAULT_VOLUME_ROUNDS_LIMIT)
}

/// [`volume_distribution`] with an explicit round limit.
pub fn volume_distribution_with_limit(
    n0: f64,
    alpha: f64,
    t: u64,
    limit: u64,
) -> Result<DiscreteDistribution<f64>, OracleError> {
    // Parameter validation matches the chain's: the volume law is the law
    // of a single-bidder chain with stake n0.
    ProtocolParams::new(alpha, vec![n0])?;
    if t > limit {
        return Err(OracleError::RoundsLimit {
            requested: t,
            limit,
        });
    }
    let len = (t + 1) as usize;
    let mut probs = vec![0.0; len];
    probs[0] = 1.0;
    for round in 0..t {
        // Push mass upward in place, scanning offsets high-to-low so each
        // round reads pre-update values only.
        for j in (0..=(round as usize)).rev() {
            let mass = probs[j];
            if mass == 0.0 {
                continue;
            }
            let mint = (n0 + j as f64).powf(-alpha);
            probs[j + 1] += mass * mint;
            probs[j] = mass * (1.0 - mint);
        }
    }
    let states: Vec<f64> = (0..len).map(|j| n0 + j as f64).collect();
    DiscreteDistribution::new(states, probs)
}

// ====================================================================
// Joint law
// ====================================================================

/// Runs the joint forward DP for `t` rounds, invoking `per_round` on the
/// law of each round `0..t` before stepping it. The map key is the stake
/// vector (the volume is its sum); ordering is lexicographic, so iteration
/// is deterministic.
fn joint_dp(
    params: &ProtocolParams,
    t: u64,
    limit: usize,
    mut per_round: impl FnMut(u64, &BTreeMap<Vec<u64>, f64>),
) -> Result<BTreeMap<Vec<u64>, f64>, OracleError> {
    let alpha = params.alpha();
    let mut initial = Vec::with_capacity(params.num_bidders());
    for (index, &value) in params.initial_stakes().iter().enumerate() {
        if value.fract() != 0.0 {
            return Err(OracleError::NonIntegerStake { index, value });
        }
        initial.push(value as u64);
    }
    let mut law = BTreeMap::new();
    law.insert(initial, 1.0);
    for round in 0..t {
        per_round(round, &law);
        let mut next: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
        for (stakes, &mass) in &law {
            let volume: u64 = stakes.iter().sum();
            let vol = volume as f64;
            let mint = vol.powf(-alpha);
            let idle = mass * (1.0 - mint);
            if idle > 0.0 {
                *next.entry(stakes.clone()).or_insert(0.0) += idle;
            }
            for (k, &n) in stakes.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let win = mass * (n as f64 / vol) * mint;
                if win > 0.0 {
                    let mut grown = stakes.clone();
                    grown[k] += 1;
                    *next.entry(grown).or_insert(0.0) += win;
                }
            }
        }
        if next.len() > limit {
            return Err(OracleError::StateSpaceLimit {
                attained: next.len(),
                limit,
                round: round + 1,
            });
        }
        law = next;
    }
    Ok(law)
}

/// Exact law of the full stake vector after `t` rounds, with the default
/// state limit. Requires whole-unit initial stakes.
pub fn joint_distribution(
    params: &ProtocolParams,
    t: u64,
) -> Result<DiscreteDistribution<JointState>, OracleError> {
    joint_distribution_with_limit(params, t, DEFAULT_JOINT_STATE_LIMIT)
}

/// [`joint_distribution`] with an explicit state-count limit.
pub fn joint_distribution_with_limit(
    params: &ProtocolParams,
    t: u64,
    limit: usize,
) -> Result<DiscreteDistribution<JointState>, OracleError> {
    let law = joint_dp(params, t, limit, |_, _| {})?;
    let mut states = Vec::with_capacity(law.len());
    let mut probs = Vec::with_capacity(law.len());
    for (stakes, mass) in law {
        let volume = stakes.iter().sum();
        states.push(JointState { stakes, volume });
        probs.push(mass);
    }
    DiscreteDistribution::new(states, probs)
}

/// Collapses a joint law onto the volume, for cross-checking against
/// [`volume_distribution`] point by point.
pub fn volume_marginal(
    joint: &DiscreteDistribution<JointState>,
) -> Result<DiscreteDistribution<f64>, OracleError> {
    let mut by_volume: BTreeMap<u64, f64> = BTreeMap::new();
    for (state, p) in joint.iter() {
        *by_volume.entry(state.volume).or_insert(0.0) += p;
    }
    let states: Vec<f64> = by_volume.keys().map(|&v| v as f64).collect();
    let probs: Vec<f64> = by_volume.values().copied().collect();
    DiscreteDistribution::new(states, probs)
}

// ====================================================================
// One-step conditional means
// ====================================================================

/// `E(π_{k,t+1} | current state)` by the three-outcome decomposition:
/// the round is idle (share unchanged), another bidder wins (share diluted
/// to `n/(N+1)`), or bidder `k` wins (share becomes `(n+1)/(N+1)`). The
/// result equals `π_{k,t}` identically — the share is preserved in
/// conditional mean — which the tests assert to machine precision.
///
/// # Panics
/// If `k` is out of range.
pub fn conditional_share_mean(state: &SystemState, k: usize, alpha: f64) -> f64 {
    let n = state.stakes()[k];
    let vol = state.volume();
    debug_assert!(vol >= 1.0, "conditional means need volume at least 1");
    let mint = vol.powf(-alpha);
    let power_scale = vol.powf(-(1.0 + alpha));
    let idle_term = (n / vol) * (1.0 - mint);
    let other_wins = (n / (vol + 1.0)) * ((vol - n) * power_scale);
    let self_wins = ((n + 1.0) / (vol + 1.0)) * (n * power_scale);
    idle_term + other_wins + self_wins
}

/// `E(θ_{k,t+1} | current state) = θ_{k,t} · (1 − N^{-α} + (N+1)^{-α})`.
///
/// The factor is at most 1 (equal to 1 exactly when `α = 0`), so the
/// voting power contracts in conditional mean while the share does not.
///
/// # Panics
/// If `k` is out of range.
pub fn conditional_power_mean(state: &SystemState, k: usize, alpha: f64) -> f64 {
    let n = state.stakes()[k];
    let vol = state.volume();
    debug_assert!(vol >= 1.0, "conditional means need volume at least 1");
    let theta = n * vol.powf(-(1.0 + alpha));
    theta * (1.0 - vol.powf(-alpha) + (vol + 1.0).powf(-alpha))
}

// ====================================================================
// Central moments
// ====================================================================

/// Central moments of `π_{k,t}` about `π_{k,0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub t: u64,
    pub bidder: usize,
    /// `E π_{k,t}` — equals `π_{k,0}` (conditional-mean preservation).
    pub mean: f64,
    /// `E (π_{k,t} − π_{k,0})²`.
    pub variance: f64,
    /// `E (π_{k,t} − π_{k,0})³`.
    pub mu3: f64,
    /// `E (π_{k,t} − π_{k,0})⁴`; at least `variance²` by Jensen.
    pub mu4: f64,
}

/// Computes Var, μ3, μ4 of `π_{k,t}` about `π_{k,0}` two independent ways
/// and returns the direct values after cross-checking.
///
/// Route (a) reads the centered moments off the exact joint law at round
/// `t`. Route (b) steps one-round recursions built from the conditional
/// increment moments: writing `D = π_t − π_0` and `Δ = π_{t+1} − π_t`,
///
/// ```text
/// E(Δ  | F_t) = 0
/// E(Δ² | F_t) = π(1−π)            / (N^α (N+1)²)
/// E(Δ³ | F_t) = π(1−π)(1−2π)      / (N^α (N+1)³)
/// E(Δ⁴ | F_t) = π(1−π)(π³+(1−π)³) / (N^α (N+1)⁴)
/// ```
///
/// so `Var` gains `E(Δ²)`, `μ3` gains `E(Δ³) + 3·E(D·Δ²)`, and `μ4` gains
/// `E(Δ⁴) + 4·E(D·Δ³) + 6·E(D²·Δ²)` per round, with the outer expectations
/// taken under the exact joint law of round `t`. A disagreement beyond
/// [`MOMENT_CONSISTENCY_TOLERANCE`] is reported as an internal error.
pub fn exact_central_moments(
    params: &ProtocolParams,
    t: u64,
    k: usize,
) -> Result<MomentReport, OracleError> {
    exact_central_moments_with_limit(params, t, k, DEFAULT_JOINT_STATE_LIMIT)
}

/// [`exact_central_moments`] with an explicit state-count limit.
pub fn exact_central_moments_with_limit(
    params: &ProtocolParams,
    t: u64,
    k: usize,
    limit: usize,
) -> Result<MomentReport, OracleError> {
    if k >= params.num_bidders() {
        return Err(OracleError::Chain(ChainError::BidderOutOfRange {
            index: k,
            count: params.num_bidders(),
        }));
    }
    let alpha = params.alpha();
    let pi0 = params.initial_stakes()[k] / params.initial_volume();

    let mut var_rec = 0.0;
    let mut mu3_rec = 0.0;
    let mut mu4_rec = 0.0;
    let final_law = joint_dp(params, t, limit, |_, law| {
        for (stakes, &mass) in law {
            let volume: u64 = stakes.iter().sum();
            let vol = volume as f64;
            let pi = stakes[k] as f64 / vol;
            let mint = vol.powf(-alpha);
            let grown = vol + 1.0;
            let v2 = pi * (1.0 - pi) * mint / (grown * grown);
            let v3 = pi * (1.0 - pi) * (1.0 - 2.0 * pi) * mint / grown.powi(3);
            let v4 =
                pi * (1.0 - pi) * (pi.powi(3) + (1.0 - pi).powi(3)) * mint / grown.powi(4);
            let d = pi - pi0;
            var_rec += mass * v2;
            mu3_rec += mass * (v3 + 3.0 * d * v2);
            mu4_rec += mass * (v4 + 4.0 * d * v3 + 6.0 * d * d * v2);
        }
    })?;

    let mut mean = 0.0;
    let mut variance = 0.0;
    let mut mu3 = 0.0;
    let mut mu4 = 0.0;
    for (stakes, &mass) in &final_law {
        let volume: u64 = stakes.iter().sum();
        let pi = stakes[k] as f64 / volume as f64;
        let d = pi - pi0;
        mean += mass * pi;
        variance += mass * d * d;
        mu3 += mass * d * d * d;
        mu4 += mass * d * d * d * d;
    }

    for (moment, direct, recursive) in [
        ("variance", variance, var_rec),
        ("third central moment", mu3, mu3_rec),
        ("fourth central moment", mu4, mu4_rec),
    ] {
        if (direct - recursive).abs() > MOMENT_CONSISTENCY_TOLERANCE {
            return Err(OracleError::InternalConsistency {
                moment,
                direct,
                recursive,
            });
        }
    }

    Ok(MomentReport {
        t,
        bidder: k,
        mean,
        variance,
        mu3,
        mu4,
    })
}

// ====================================================================
// Tests
// ====================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(alpha: f64, stakes: &[f64]) -> ProtocolParams {
        ProtocolParams::new(alpha, stakes.to_vec()).expect("valid test params")
    }

    #[test]
    fn volume_law_small_cases_match_hand_enumeration() {
        // From volume 1 the first mint is certain; afterwards each round
        // mints with probability 1/x.
        let d = volume_distribution(1.0, 1.0, 2).unwrap();
        assert_eq!(d.states(), &[1.0, 2.0, 3.0]);
        assert_abs_diff_eq!(d.probabilities()[0], 0.0);
        assert_abs_diff_eq!(d.probabilities()[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probabilities()[2], 0.5, epsilon = 1e-15);

        let d = volume_distribution(1.0, 1.0, 3).unwrap();
        assert_abs_diff_eq!(d.probability_of(&2.0), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability_of(&3.0), 7.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability_of(&4.0), 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn volume_law_is_a_point_mass_when_alpha_is_zero() {
        let d = volume_distribution(5.0, 0.0, 17).unwrap();
        for (state, p) in d.iter() {
            if *state == 22.0 {
                assert_abs_diff_eq!(p, 1.0, epsilon = 1e-15);
            } else {
                assert_abs_diff_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn volume_law_total_mass_is_one_at_depth() {
        let d = volume_distribution(2.0, 0.7, 200).unwrap();
        assert_abs_diff_eq!(d.total_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn volume_law_rejects_horizons_over_the_limit() {
        let err = volume_distribution_with_limit(1.0, 1.0, 101, 100).unwrap_err();
        assert!(matches!(
            err,
            OracleError::RoundsLimit {
                requested: 101,
                limit: 100
            }
        ));
    }

    #[test]
    fn joint_law_one_round_matches_hand_enumeration() {
        let d = joint_distribution(&params(1.0, &[1.0, 1.0]), 1).unwrap();
        assert_eq!(d.len(), 3);
        let p = |stakes: &[u64]| {
            d.probability_of(&JointState {
                stakes: stakes.to_vec(),
                volume: stakes.iter().sum(),
            })
        };
        assert_abs_diff_eq!(p(&[1, 1]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p(&[2, 1]), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p(&[1, 2]), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn joint_law_single_bidder_is_deterministic() {
        let d = joint_distribution(&params(0.3, &[1.0]), 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.states()[0].stakes, vec![2]);
        assert_abs_diff_eq!(d.probabilities()[0], 1.0);
    }

    #[test]
    fn joint_law_two_rounds_stay_path_probability() {
        // Staying at (1,1) for two rounds costs (1/2)² at α = 1.
        let d = joint_distribution(&params(1.0, &[1.0, 1.0]), 2).unwrap();
        let stay = d.probability_of(&JointState {
            stakes: vec![1, 1],
            volume: 2,
        });
        assert_abs_diff_eq!(stay, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.total_mass(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn joint_law_rejects_fractional_stakes() {
        let err = joint_distribution(&params(1.0, &[1.5, 0.5]), 1).unwrap_err();
        assert!(matches!(err, OracleError::NonIntegerStake { index: 0, .. }));
    }

    #[test]
    fn joint_law_reports_state_space_blowup_with_attained_size() {
        let err = joint_distribution_with_limit(&params(1.0, &[1.0, 1.0, 1.0]), 4, 5).unwrap_err();
        match err {
            OracleError::StateSpaceLimit { attained, limit, .. } => {
                assert!(attained > limit);
            }
            other => panic!("expected a state-space limit error, got {other:?}"),
        }
    }

    #[test]
    fn joint_marginal_reproduces_the_volume_law() {
        let p = params(0.5, &[2.0, 1.0]);
        let joint = joint_distribution(&p, 5).unwrap();
        let marginal = volume_marginal(&joint).unwrap();
        let direct = volume_distribution(3.0, 0.5, 5).unwrap();
        for (state, prob) in direct.iter() {
            assert_abs_diff_eq!(marginal.probability_of(state), prob, epsilon = 1e-12);
        }
    }

    #[test]
    fn share_mean_is_preserved_one_step() {
        let s = SystemState::new(vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(conditional_share_mean(&s, 0, 1.0), 0.5, max_relative = 1e-14);

        let s = SystemState::new(vec![2.0, 1.0]).unwrap();
        assert_relative_eq!(
            conditional_share_mean(&s, 0, 1.0),
            2.0 / 3.0,
            max_relative = 1e-14
        );

        let s = SystemState::new(vec![0.0, 3.0]).unwrap();
        assert_eq!(conditional_share_mean(&s, 0, 1.0), 0.0);
    }

    #[test]
    fn power_mean_matches_enumeration_and_contracts() {
        // stakes (1,1), α = 1: θ = 1/4 and the factor is 1 − 1/2 + 1/3.
        let s = SystemState::new(vec![1.0, 1.0]).unwrap();
        let direct = 0.5 * 0.25 + 0.25 * (2.0 / 9.0) + 0.25 * (1.0 / 9.0);
        assert_relative_eq!(conditional_power_mean(&s, 0, 1.0), 5.0 / 24.0, max_relative = 1e-14);
        assert_relative_eq!(conditional_power_mean(&s, 0, 1.0), direct, max_relative = 1e-14);
        assert!(conditional_power_mean(&s, 0, 1.0) <= s.voting_powers(1.0).unwrap()[0]);

        // α = 0: the factor is exactly 1, so power behaves like share.
        assert_relative_eq!(
            conditional_power_mean(&s, 0, 0.0),
            s.voting_powers(0.0).unwrap()[0],
            max_relative = 1e-15
        );

        // Zero stake is absorbing.
        let s = SystemState::new(vec![0.0, 2.0]).unwrap();
        assert_eq!(conditional_power_mean(&s, 0, 1.0), 0.0);
    }

    #[test]
    fn moments_at_time_zero_vanish() {
        let report = exact_central_moments(&params(1.0, &[3.0, 2.0]), 0, 0).unwrap();
        assert_eq!(report.variance, 0.0);
        assert_eq!(report.mu3, 0.0);
        assert_eq!(report.mu4, 0.0);
        assert_abs_diff_eq!(report.mean, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn one_round_share_variance_matches_hand_value() {
        // stakes (1,1), α = 1: Var(π_{1,1}) = (1/4) / (2 · 9) = 1/72.
        let report = exact_central_moments(&params(1.0, &[1.0, 1.0]), 1, 0).unwrap();
        assert_relative_eq!(report.variance, 1.0 / 72.0, max_relative = 1e-13);
        // Symmetric bidders: the centered third moment vanishes.
        assert_abs_diff_eq!(report.mu3, 0.0, epsilon = 1e-16);
        assert_relative_eq!(report.mean, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn one_round_third_moment_matches_hand_value_when_asymmetric() {
        // stakes (2,1), α = 1: the three outcomes give
        // μ3 = (2/9)(1/12)³ + (1/9)(−1/6)³ = −1/2592.
        let report = exact_central_moments(&params(1.0, &[2.0, 1.0]), 1, 0).unwrap();
        assert_relative_eq!(report.mu3, -1.0 / 2592.0, max_relative = 1e-12);
    }

    #[test]
    fn moment_report_satisfies_jensen() {
        let report = exact_central_moments(&params(1.0, &[2.0, 1.0]), 6, 0).unwrap();
        assert!(report.variance >= 0.0);
        assert!(report.mu4 >= report.variance * report.variance);
    }

    #[test]
    fn moment_routes_agree_on_a_deeper_asymmetric_case() {
        // Exercises every recursion term with nonzero centering.
        let report = exact_central_moments(&params(1.0, &[2.0, 1.0]), 8, 1).unwrap();
        assert!(report.variance > 0.0);
        assert_relative_eq!(report.mean, 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn distribution_validation_rejects_bad_tables() {
        assert!(DiscreteDistribution::new(vec![1.0, 2.0], vec![0.5]).is_err());
        assert!(DiscreteDistribution::<f64>::new(vec![], vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 2.0], vec![0.7, 0.7]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 2.0], vec![-0.1, 1.1]).is_err());
    }
}
