mod common;

use nrt::data::generate_synthetic;
use nrt::model::{Corpus, DocumentNetwork, Hyperparameters};
use nrt::samplers::run_chain;
use nrt::{run_slice, run_truncated, Chain, NrtError, SamplerConfig, SamplerMode};

const MODES: [SamplerMode; 2] = [SamplerMode::Truncated, SamplerMode::Slice];

fn small() -> (Corpus, DocumentNetwork) {
    let (corpus, network, _) = generate_synthetic(2, 12, 10, 30, 3).unwrap();
    (corpus, network)
}

fn hyper() -> Hyperparameters {
    Hyperparameters {
        truncation_k: 20,
        ..Default::default()
    }
}

#[test]
fn same_seed_gives_identical_traces() {
    let (corpus, network) = small();
    for mode in MODES {
        let config = SamplerConfig::new(mode, 30, 5, 11);
        let (_, a) = run_chain(&corpus, &network, &hyper(), &config).unwrap();
        let (_, b) = run_chain(&corpus, &network, &hyper(), &config).unwrap();
        assert_eq!(a.deterministic_view(), b.deterministic_view(), "{mode}");
        assert_eq!(a.snapshots, b.snapshots);

        let other = SamplerConfig::new(mode, 30, 5, 12);
        let (_, c) = run_chain(&corpus, &network, &hyper(), &other).unwrap();
        assert_ne!(a.deterministic_view(), c.deterministic_view(), "{mode}");
    }
}

#[test]
fn zero_iterations_returns_the_initial_state() {
    let (corpus, network) = small();
    for mode in MODES {
        let config = SamplerConfig::new(mode, 0, 0, 1);
        let (state, trace) = run_chain(&corpus, &network, &hyper(), &config).unwrap();
        assert!(trace.is_empty());
        state.check_invariants(&corpus).unwrap();
    }
}

#[test]
fn trace_and_snapshot_lengths() {
    let (corpus, network) = small();
    let mut config = SamplerConfig::new(SamplerMode::Slice, 25, 5, 2);
    config.snapshot_every = 4;
    let (_, trace) = run_slice(&corpus, &network, &hyper(), &config).unwrap();
    assert_eq!(trace.len(), 25);
    assert_eq!(trace.retained(5).count(), 20);
    assert_eq!(trace.snapshots.len(), 5);
    assert!(trace.records.iter().enumerate().all(|(i, r)| r.iteration == i + 1));
    assert!(trace.snapshots.iter().all(|s| s.topics.len() == s.pi.len() && s.pi.len() == s.theta.len()));
}

#[test]
fn invariants_hold_after_every_sweep() {
    let (corpus, network) = small();
    for mode in MODES {
        let mut config = SamplerConfig::new(mode, 40, 0, 5);
        config.check_invariants = true;
        let mut chain = Chain::new(&corpus, &network, hyper(), config).unwrap();
        while !chain.is_finished() {
            let record = chain.step().unwrap();
            assert!(record.log_likelihood.is_finite());
            assert!(record.active_topics >= 1);
        }
    }
}

#[test]
fn runners_reject_the_wrong_mode() {
    let (corpus, network) = small();
    let slice = SamplerConfig::new(SamplerMode::Slice, 2, 0, 1);
    let truncated = SamplerConfig::new(SamplerMode::Truncated, 2, 0, 1);
    assert!(matches!(run_truncated(&corpus, &network, &hyper(), &slice), Err(NrtError::InvalidConfig(_))));
    assert!(matches!(run_slice(&corpus, &network, &hyper(), &truncated), Err(NrtError::InvalidConfig(_))));
}

#[test]
fn invalid_configurations_are_rejected() {
    let (corpus, network) = small();
    let config = SamplerConfig::new(SamplerMode::Truncated, 10, 10, 1);
    assert!(run_chain(&corpus, &network, &hyper(), &config).is_err());

    let config = SamplerConfig::new(SamplerMode::Truncated, 10, 0, 1);
    let wrong = DocumentNetwork::empty(3);
    assert!(run_chain(&corpus, &wrong, &hyper(), &config).is_err());

    let bad = Hyperparameters {
        alpha0: 0.0,
        ..hyper()
    };
    assert!(run_chain(&corpus, &network, &bad, &config).is_err());
}

#[test]
fn from_state_continues_a_chain() {
    let (corpus, network) = small();
    let config = SamplerConfig::new(SamplerMode::Slice, 10, 0, 8);
    let (state, _) = run_chain(&corpus, &network, &hyper(), &config).unwrap();
    let mut chain = Chain::from_state(&corpus, &network, hyper(), config.clone(), state.clone()).unwrap();
    chain.step().unwrap();
    assert_eq!(chain.iteration(), 1);

    // a truncated state has no slice variables
    let truncated = SamplerConfig::new(SamplerMode::Truncated, 10, 0, 8);
    let (state, _) = run_chain(&corpus, &network, &hyper(), &truncated).unwrap();
    assert!(Chain::from_state(&corpus, &network, hyper(), config, state).is_err());
}
