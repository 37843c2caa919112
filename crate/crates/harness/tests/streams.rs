//! Stream-hygiene checks for the replication RNG layout.
//!
//! Every replication draws from its own stream of a counter-based generator.
//! These tests make sure the streams actually behave like independent
//! sources: no first-draw collisions across a large batch, full decoupling
//! from the master seed, and Monte Carlo error that shrinks like the square
//! root of the replication count.

use polyvote_core::chain::ProtocolParams;
use polyvote_harness::experiments::simulate;
use polyvote_harness::mc::stream_rng;
use polyvote_harness::report::mean_and_se;
use rand::Rng;
use std::collections::HashSet;

#[test]
fn first_draws_of_many_streams_never_collide() {
    let mut seen = HashSet::with_capacity(100_000);
    for stream in 0..100_000u64 {
        let draw = stream_rng(2026, stream).random::<u64>();
        assert!(
            seen.insert(draw),
            "stream {stream} repeats an earlier first draw ({draw:#x})"
        );
    }
}

#[test]
fn changing_the_master_seed_changes_every_stream() {
    for stream in 0..64u64 {
        let a = stream_rng(1, stream).random::<u64>();
        let b = stream_rng(2, stream).random::<u64>();
        assert_ne!(
            a, b,
            "stream {stream} produced the same first draw under two master seeds"
        );
    }
}

#[test]
fn streams_are_stable_across_instantiations() {
    for stream in [0u64, 1, 17, 9999] {
        let mut rng_a = stream_rng(42, stream);
        let mut rng_b = stream_rng(42, stream);
        let draws_a: Vec<u64> = (0..8).map(|_| rng_a.random()).collect();
        let draws_b: Vec<u64> = (0..8).map(|_| rng_b.random()).collect();
        assert_eq!(
            draws_a, draws_b,
            "re-instantiating stream {stream} must replay the same draws"
        );
    }
}

#[test]
fn standard_errors_shrink_like_root_replications() {
    let params = ProtocolParams::new(1.0, vec![1.0]).expect("valid params");
    let se_of = |replications: u64| {
        let finals = simulate::final_volumes(&params, 400, replications, 77, 0)
            .expect("simulation batch");
        mean_and_se(&finals).1
    };
    let coarse = se_of(1_000);
    let fine = se_of(16_000);
    assert!(coarse > 0.0 && fine > 0.0, "standard errors must be positive");
    // 16x the replications should cut the standard error by about 4x;
    // the wide window absorbs the sampling noise of the SE estimates
    // themselves.
    let ratio = coarse / fine;
    assert!(
        (2.8..5.7).contains(&ratio),
        "SE ratio {ratio:.3} is far from the 4.0 predicted by 1/sqrt(R) scaling"
    );
}
