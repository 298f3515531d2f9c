//! Harness-level behavior: config parsing, experiment orchestration, CSV
//! emission, state-count reports, the nonoptimality demonstration, and SVG
//! plotting.

use std::collections::HashMap;
use std::fs;

use fsband::bandit::BernoulliBandit;
use fsband::dist::DiscreteDist;
use fsband::pfa::{Observation, Pfa, StateId};
use fsband_cli::config::{steps_with_stride, KeyValues};
use fsband_cli::error::CliError;
use fsband_cli::experiment::{curve_csv, run_experiment, run_replications, summary_csv};
use fsband_cli::protocol::ProtocolSpec;
use fsband_cli::{demo, plot, states, sweep, BanditSource};

/// One-state automaton that always plays `arm` out of `arms`.
fn always_play(arm: usize, arms: usize) -> Pfa<f64> {
    let mut row = HashMap::new();
    for a in 0..arms {
        for r in 0..=1u8 {
            row.insert(
                Observation::new(a, r),
                DiscreteDist::point(StateId(0)),
            );
        }
    }
    Pfa::from_parts(
        vec!["only".into()],
        StateId(0),
        arms,
        vec![DiscreteDist::point(arm)],
        vec![row],
    )
    .unwrap()
}

fn temp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fsband-test-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn config_parses_comments_defaults_and_overrides() {
    let text = "
        # experiment
        protocol = aspiration
        arms = 4        # K
        m = 10
        horizon = 1000
        reps = 3
        out = /tmp/unused
    ";
    let kv = KeyValues::parse(text).unwrap();
    let config = kv.into_config().unwrap();
    assert_eq!(config.arms, 4);
    assert_eq!(config.horizon, 1000);
    assert_eq!(config.reps, 3);
    assert_eq!(config.seed, 0);
    // Default stride is horizon/500, floored at 1.
    assert_eq!(config.stride, 2);
    assert_eq!(config.bandit, BanditSource::Generated);
    match config.protocol {
        ProtocolSpec::Aspiration(p) => {
            assert_eq!((p.arms, p.ranks, p.win, p.lose), (4, 10, 20, 3));
        }
        other => panic!("wrong protocol {other:?}"),
    }
}

#[test]
fn config_rejects_unknown_keys() {
    let err = KeyValues::parse("protocol = aspiration\nhorizn = 10\n").unwrap_err();
    assert!(err.to_string().contains("unknown key `horizn`"));
    let mut kv = KeyValues::default();
    assert!(kv.set("bogus", "1").is_err());
}

#[test]
fn config_rejects_conflicting_bandit_sources() {
    let text = "
        protocol = thompson
        means = 0.1, 0.9
        generator = uniform-alpha
        horizon = 10
        reps = 1
        out = /tmp/unused
    ";
    let err = KeyValues::parse(text).unwrap().into_config().unwrap_err();
    assert!(err.to_string().contains("mutually exclusive"));
}

#[test]
fn config_rejects_arms_means_mismatch() {
    let text = "
        protocol = thompson
        arms = 3
        means = 0.1, 0.9
        horizon = 10
        reps = 1
        out = /tmp/unused
    ";
    let err = KeyValues::parse(text).unwrap().into_config().unwrap_err();
    assert!(err.to_string().contains("arms = 3 but means lists 2"));
}

#[test]
fn config_infers_arms_from_means() {
    let text = "
        protocol = thompson
        means = 0.1, 0.9, 0.5
        horizon = 10
        reps = 1
        out = /tmp/unused
    ";
    let config = KeyValues::parse(text).unwrap().into_config().unwrap();
    assert_eq!(config.arms, 3);
    assert_eq!(config.bandit, BanditSource::Explicit(vec![0.1, 0.9, 0.5]));
}

#[test]
fn steps_with_stride_hits_the_horizon() {
    assert_eq!(steps_with_stride(10, 3), vec![3, 6, 9, 10]);
    assert_eq!(steps_with_stride(9, 3), vec![3, 6, 9]);
    assert_eq!(steps_with_stride(1, 1), vec![1]);
}

#[test]
fn unknown_protocol_and_figure_are_errors() {
    let kv = KeyValues::default();
    assert!(ProtocolSpec::from_keys("ucb", 3, &kv).is_err());
    assert!(sweep::Figure::from_name("volume").is_err());
}

#[test]
fn thompson_on_a_separated_pair_reaches_a_small_gap() {
    let spec = ProtocolSpec::Thompson { arms: 2 };
    let source = BanditSource::Explicit(vec![0.9, 0.1]);
    let steps = steps_with_stride(10_000, 500);
    let result = run_replications(&spec, &source, 10_000, 100, 0, &steps).unwrap();
    assert!(
        result.summary.mean_final_gap <= 0.02,
        "gap {}",
        result.summary.mean_final_gap
    );
}

#[test]
fn one_replication_one_step_yields_a_single_curve_row() {
    let dir = temp_dir("tiny");
    let text = format!(
        "protocol = thompson\nmeans = 0.5\nhorizon = 1\nreps = 1\nout = {}",
        dir.display()
    );
    let config = KeyValues::parse(&text).unwrap().into_config().unwrap();
    run_experiment(&config).unwrap();
    let curve = fs::read_to_string(dir.join("curve.csv")).unwrap();
    let lines: Vec<&str> = curve.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "step,mean_cum_regret,stderr,reps");
    assert!(lines[1].starts_with("1,"));
    let summary = fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert!(summary.starts_with(
        "protocol,params,mean_final_gap,gap_stderr,mean_cum_regret_at_horizon,reps,seed"
    ));
}

#[test]
fn curve_final_row_matches_the_summary_regret() {
    let spec = ProtocolSpec::EpsilonGreedy {
        arms: 3,
        plays_per_arm: 5,
        epsilon: 0.2,
    };
    let steps = steps_with_stride(2000, 100);
    let result = run_replications(&spec, &BanditSource::Generated, 2000, 20, 7, &steps).unwrap();
    let last = *result.curve.mean.last().unwrap();
    assert!((last - result.summary.mean_cum_regret_at_horizon).abs() < 1e-9);
    // And the CSV rendering carries both with the same fixed precision.
    let curve_text = curve_csv(&result.curve);
    let summary_text = summary_csv(std::slice::from_ref(&result.summary));
    let last_row = curve_text.lines().last().unwrap();
    let regret_col = last_row.split(',').nth(1).unwrap();
    assert!(summary_text.contains(regret_col));
}

#[test]
fn identical_seeds_give_identical_output_bytes() {
    let spec = ProtocolSpec::Elimination(fsband::protocols::EliminationParams {
        arms: 5,
        margin: 3,
        stop_scale: 50,
    });
    let steps = steps_with_stride(3000, 250);
    let render = || {
        let result =
            run_replications(&spec, &BanditSource::Generated, 3000, 16, 99, &steps).unwrap();
        (
            curve_csv(&result.curve),
            summary_csv(std::slice::from_ref(&result.summary)),
        )
    };
    assert_eq!(render(), render());
}

#[test]
fn state_count_report_examples() {
    // Small parameterizations where compilation is instant.
    let spec = ProtocolSpec::Aspiration(fsband::protocols::AspirationParams {
        arms: 3,
        ranks: 5,
        win: 2,
        lose: 1,
    });
    match states::state_count_report(&spec).unwrap() {
        states::StateCountReport::Finite {
            formula, compiled, ..
        } => {
            assert_eq!(formula, 45);
            assert_eq!(compiled, 45);
        }
        other => panic!("unexpected report {other:?}"),
    }

    let spec = ProtocolSpec::Elimination(fsband::protocols::EliminationParams {
        arms: 4,
        margin: 2,
        stop_scale: 10,
    });
    match states::state_count_report(&spec).unwrap() {
        states::StateCountReport::Finite {
            formula, compiled, ..
        } => {
            assert_eq!(formula, 60);
            assert_eq!(compiled, 60);
        }
        other => panic!("unexpected report {other:?}"),
    }

    let spec = ProtocolSpec::Thompson { arms: 3 };
    assert!(matches!(
        states::state_count_report(&spec).unwrap(),
        states::StateCountReport::InfiniteState { .. }
    ));
}

#[test]
fn ete_state_formula_matches_compiled_count() {
    let spec = ProtocolSpec::ExploreThenExploit {
        arms: 3,
        plays_per_arm: 2,
    };
    match states::state_count_report(&spec).unwrap() {
        states::StateCountReport::Finite {
            formula, compiled, ..
        } => {
            assert_eq!(formula, compiled as u128);
        }
        other => panic!("unexpected report {other:?}"),
    }
}

#[test]
fn demo_hardwired_machine_plateaus_at_the_permuted_gap() {
    // A machine that always plays arm 1 against (0.2, 0.6): the worst
    // relabeling is the one that keeps the best mean on arm 2, for an
    // average regret of exactly 0.4 at every horizon.
    let pfa = always_play(0, 2);
    let bandit = BernoulliBandit::new(vec![0.2, 0.6]).unwrap();
    let report = demo::nonoptimality_demo(&pfa, &bandit, &[10, 100], 5, 0).unwrap();
    assert!(!report.sampled);
    assert_eq!(report.results.len(), 2);
    assert!((report.plateau - 0.4).abs() < 1e-9);
}

#[test]
fn demo_rejects_non_generic_bandits_naming_the_clause() {
    let pfa = always_play(0, 2);
    let tied = BernoulliBandit::new(vec![0.5, 0.5]).unwrap();
    match demo::nonoptimality_demo(&pfa, &tied, &[10], 1, 0).unwrap_err() {
        CliError::NonGeneric(clause) => assert!(clause.contains("distinct")),
        other => panic!("unexpected error {other}"),
    }
    let zero = BernoulliBandit::new(vec![0.4, 0.0]).unwrap();
    match demo::nonoptimality_demo(&pfa, &zero, &[10], 1, 0).unwrap_err() {
        CliError::NonGeneric(clause) => assert!(clause.contains("positive")),
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn demo_enumerates_small_and_samples_large_permutation_groups() {
    let pfa3 = always_play(0, 3);
    let bandit3 = BernoulliBandit::new(vec![0.1, 0.3, 0.5]).unwrap();
    let report = demo::nonoptimality_demo(&pfa3, &bandit3, &[20], 2, 0).unwrap();
    assert!(!report.sampled);
    assert_eq!(report.results.len(), 6);

    // 6! = 720 > 120: sampled.
    let pfa6 = always_play(0, 6);
    let bandit6 = BernoulliBandit::new(vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
    let report = demo::nonoptimality_demo(&pfa6, &bandit6, &[20], 1, 0).unwrap();
    assert!(report.sampled);
    assert_eq!(report.results.len(), demo::MAX_PERMUTATIONS);
}

#[test]
fn demo_rejects_unordered_horizons() {
    let pfa = always_play(0, 2);
    let bandit = BernoulliBandit::new(vec![0.2, 0.6]).unwrap();
    assert!(demo::nonoptimality_demo(&pfa, &bandit, &[100, 10], 1, 0).is_err());
    assert!(demo::nonoptimality_demo(&pfa, &bandit, &[], 1, 0).is_err());
}

#[test]
fn quick_sweep_writes_one_curve_per_setting_plus_a_summary() {
    let dir = temp_dir("sweep");
    let results = sweep::figure_sweep(sweep::Figure::MSweep, &dir, true, 0).unwrap();
    assert_eq!(results.len(), 4);
    for m in [50, 100, 200, 500] {
        let path = dir.join(format!("m{m}_curve.csv"));
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("step,mean_cum_regret,stderr,reps"));
        assert!(text.lines().last().unwrap().starts_with("10000,"));
    }
    let summary = fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    assert!(summary.contains("aspiration,arms=50;m=200;m1=20;m2=3;rng=chacha8"));
}

#[test]
fn plot_renders_curves_and_rejects_other_files() {
    let dir = temp_dir("plot");
    let a = dir.join("a_curve.csv");
    let b = dir.join("b_curve.csv");
    fs::write(
        &a,
        "step,mean_cum_regret,stderr,reps\n1,0.5,0.0,2\n10,4.0,0.1,2\n",
    )
    .unwrap();
    fs::write(
        &b,
        "step,mean_cum_regret,stderr,reps\n1,0.2,0.0,2\n10,1.5,0.1,2\n",
    )
    .unwrap();
    let out = dir.join("chart.svg");
    plot::plot_curves(&[a.clone(), b], &out).unwrap();
    let svg = fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains("a_curve"));

    let bad = dir.join("not_a_curve.csv");
    fs::write(&bad, "foo,bar\n1,2\n").unwrap();
    assert!(plot::plot_curves(&[bad], &dir.join("bad.svg")).is_err());
}
