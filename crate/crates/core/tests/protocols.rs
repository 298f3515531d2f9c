//! Agent behavior: aspiration (one- and two-phase), elimination,
//! explore-then-exploit, epsilon-greedy, Thompson Sampling, and the shared
//! call discipline.

use fsband::bandit::BernoulliBandit;
use fsband::pfa::{Observation, PfaSource};
use fsband::protocols::{
    compile_elimination, play, Agent, AspirationAgent, AspirationParams, EliminationAgent,
    EliminationParams, EpsilonGreedyAgent, ExploreThenExploitAgent, ProtocolError, ThompsonAgent,
    TwoPhaseAspirationAgent, TwoPhaseParams,
};
use fsband::rng::{seeded, ChaCha8Rng};

type Asp = AspirationAgent<f64>;
type TwoPhase = TwoPhaseAspirationAgent<f64>;

fn asp_params(arms: usize, ranks: usize, win: i64, lose: i64) -> AspirationParams {
    AspirationParams {
        arms,
        ranks,
        win,
        lose,
    }
}

/// Feeds one choose/observe cycle with a fixed reward.
fn feed(agent: &mut dyn Agent<f64>, reward: u8, rng: &mut ChaCha8Rng) {
    let arm = agent.choose(rng);
    agent.observe(arm, reward, rng).unwrap();
}

#[test]
fn aspiration_starts_at_top_rank_first_arm_zero_counter() {
    let agent = Asp::new(asp_params(5, 100, 20, 3)).unwrap();
    assert_eq!(agent.level(), 100);
    assert_eq!(agent.arm_under_test(), 0);
    assert_eq!(agent.counter(), 0);
    assert_eq!(agent.committed(), None);
}

#[test]
fn aspiration_rejects_bad_parameters() {
    assert!(Asp::new(asp_params(0, 100, 20, 3)).is_err());
    assert!(Asp::new(asp_params(5, 0, 20, 3)).is_err());
    assert!(Asp::new(asp_params(5, 100, 0, 3)).is_err());
    assert!(Asp::new(asp_params(5, 100, 20, 0)).is_err());
}

#[test]
fn top_rank_success_increments_counter_half_percent_of_the_time() {
    // At (100, 1, 0) with m = 100 a success raises c with probability 0.005.
    let mut rng = seeded(1);
    let n = 200_000;
    let mut ups = 0u32;
    for _ in 0..n {
        let mut agent = Asp::new(asp_params(2, 100, 20, 3)).unwrap();
        feed(&mut agent, 1, &mut rng);
        if agent.counter() == 1 {
            ups += 1;
        } else {
            assert_eq!(agent.counter(), 0);
        }
    }
    let freq = f64::from(ups) / f64::from(n);
    // 3-sigma band around 0.005 for 200,000 Bernoulli trials.
    let se = (0.005f64 * 0.995 / f64::from(n)).sqrt();
    assert!((freq - 0.005).abs() < 3.0 * se, "frequency {freq}");
}

/// Feeds reward 0 until the counter hits `target` (must be reachable by
/// decrements alone from the current state).
fn drive_counter_down(agent: &mut Asp, target: i64, rng: &mut ChaCha8Rng) {
    while agent.counter() != target {
        let before = (agent.level(), agent.arm_under_test());
        feed(agent, 0, rng);
        assert_eq!((agent.level(), agent.arm_under_test()), before);
    }
}

#[test]
fn last_arm_losing_drops_the_rank_and_restarts_the_cycle() {
    // M2 = 3: from (r, K, -2) a firing decrement goes to (r-1, 1, 0).
    let mut rng = seeded(2);
    let mut agent = Asp::new(asp_params(1, 100, 20, 3)).unwrap();
    // K = 1, so the only arm is the last arm.
    drive_counter_down(&mut agent, -2, &mut rng);
    while agent.counter() == -2 {
        feed(&mut agent, 0, &mut rng);
    }
    assert_eq!(agent.level(), 99);
    assert_eq!(agent.arm_under_test(), 0);
    assert_eq!(agent.counter(), 0);
}

#[test]
fn mid_cycle_loss_advances_to_the_next_arm_at_the_same_rank() {
    // K = 3, state (50, 2, -2): the firing decrement moves to (50, 3, 0).
    let mut rng = seeded(3);
    let mut agent = Asp::new(asp_params(3, 50, 20, 3)).unwrap();
    // Start is (50, 1, 0); knock out arm 1 first.
    drive_counter_down(&mut agent, -2, &mut rng);
    while agent.arm_under_test() == 0 {
        feed(&mut agent, 0, &mut rng);
    }
    assert_eq!((agent.level(), agent.arm_under_test(), agent.counter()), (50, 1, 0));
    drive_counter_down(&mut agent, -2, &mut rng);
    while agent.counter() == -2 {
        feed(&mut agent, 0, &mut rng);
    }
    assert_eq!((agent.level(), agent.arm_under_test(), agent.counter()), (50, 2, 0));
}

#[test]
fn rank_clamps_at_one_and_keeps_cycling() {
    let mut rng = seeded(4);
    let mut agent = Asp::new(asp_params(1, 2, 20, 1)).unwrap();
    // M2 = 1 fires an advance on every successful virtual-arm comparison;
    // two rank drops reach 1, after which the rank must stay clamped.
    for _ in 0..5000 {
        feed(&mut agent, 0, &mut rng);
        assert!(agent.level() >= 1);
    }
    assert_eq!(agent.level(), 1);
}

#[test]
fn reaching_the_win_threshold_commits_forever() {
    let mut rng = seeded(5);
    let mut agent = Asp::new(asp_params(4, 10, 3, 2)).unwrap();
    while agent.committed().is_none() {
        feed(&mut agent, 1, &mut rng);
    }
    let arm = agent.committed().unwrap();
    assert_eq!(agent.exploit_choice(), arm);
    for reward in [0, 1, 0, 0, 1] {
        assert_eq!(agent.choose(&mut rng), arm);
        agent.observe(arm, reward, &mut rng).unwrap();
    }
}

#[test]
fn two_phase_coarse_descent_is_square_root_of_ranks() {
    let params = TwoPhaseParams::with_default_coarse(asp_params(5, 100, 20, 3));
    assert_eq!(params.coarse_descent(), 10);
    assert_eq!(params.coarse_win, 5);
    assert_eq!(params.coarse_lose, 1);
    let small = TwoPhaseParams::with_default_coarse(asp_params(5, 2, 20, 3));
    assert_eq!(small.coarse_descent(), 1);
}

#[test]
fn two_phase_coarse_win_restarts_fine_phase_one_coarse_step_up() {
    // Descend the coarse phase to rank 60, then win there: the fine phase
    // must restart at rank 70 with the strict thresholds.
    let mut rng = seeded(6);
    let params = TwoPhaseParams::with_default_coarse(asp_params(1, 100, 20, 3));
    let mut agent = TwoPhase::new(params).unwrap();
    assert!(agent.in_coarse_phase());
    while agent.level() > 60 {
        feed(&mut agent, 0, &mut rng);
        assert!(agent.in_coarse_phase());
    }
    assert_eq!(agent.level(), 60);
    while agent.in_coarse_phase() {
        feed(&mut agent, 1, &mut rng);
    }
    assert_eq!(agent.level(), 70);
    assert_eq!(agent.arm_under_test(), 0);
    assert_eq!(agent.counter(), 0);
    assert_eq!(agent.committed(), None);
}

#[test]
fn two_phase_fine_start_is_capped_at_the_top_rank() {
    // Winning immediately at rank m must not restart above m.
    let mut rng = seeded(7);
    let params = TwoPhaseParams::with_default_coarse(asp_params(1, 100, 20, 3));
    let mut agent = TwoPhase::new(params).unwrap();
    while agent.in_coarse_phase() {
        feed(&mut agent, 1, &mut rng);
        assert_eq!(agent.level(), 100);
    }
    assert_eq!(agent.level(), 100);
}

#[test]
fn two_phase_commits_only_in_the_fine_phase() {
    let mut rng = seeded(8);
    let params = TwoPhaseParams::with_default_coarse(asp_params(2, 16, 4, 2));
    let mut agent = TwoPhase::new(params).unwrap();
    while agent.committed().is_none() {
        feed(&mut agent, 1, &mut rng);
        if agent.committed().is_some() {
            assert!(!agent.in_coarse_phase());
        }
    }
    let arm = agent.committed().unwrap();
    for _ in 0..10 {
        assert_eq!(agent.choose(&mut rng), arm);
        agent.observe(arm, 0, &mut rng).unwrap();
    }
}

#[test]
fn elimination_rejects_bad_parameters() {
    let params = |arms, margin, stop_scale| EliminationParams {
        arms,
        margin,
        stop_scale,
    };
    assert!(EliminationAgent::<f64>::new(params(1, 20, 1000)).is_err());
    assert!(EliminationAgent::<f64>::new(params(2, 0, 1000)).is_err());
    assert!(EliminationAgent::<f64>::new(params(2, 20, 0)).is_err());
}

#[test]
fn elimination_margin_one_on_a_deterministic_bandit() {
    // Bandit (1.0, 0.0), M = 1: champion succeeds (c = 1), challenger fails
    // its reply (c stays at M), so arm 2 is eliminated after one play each
    // and arm 1 is played forever.
    let params = EliminationParams {
        arms: 2,
        margin: 1,
        stop_scale: 1_000_000,
    };
    let mut agent = EliminationAgent::<f64>::new(params).unwrap();
    let bandit = BernoulliBandit::new(vec![1.0, 0.0]).unwrap();
    let mut rng = seeded(9);
    let (actions, _) = play(&mut agent, &bandit, 10, &mut rng).unwrap();
    assert_eq!(actions[0], 0);
    assert_eq!(actions[1], 1);
    assert!(actions[2..].iter().all(|&a| a == 0));
    assert_eq!(agent.winner(), Some(0));
}

#[test]
fn elimination_alternates_champion_and_challenger() {
    let params = EliminationParams {
        arms: 2,
        margin: 1_000,
        stop_scale: 1_000_000,
    };
    let mut agent = EliminationAgent::<f64>::new(params).unwrap();
    let bandit = BernoulliBandit::new(vec![0.5, 0.5]).unwrap();
    let mut rng = seeded(10);
    let (actions, _) = play(&mut agent, &bandit, 100, &mut rng).unwrap();
    for (t, &a) in actions.iter().enumerate() {
        assert_eq!(a, t % 2, "step {t}");
    }
}

#[test]
fn elimination_tied_stop_keeps_the_incumbent_champion() {
    // N = 1 stops after every round; all-zero rewards keep c = 0, so the
    // champion (lower index) must survive every duel.
    let params = EliminationParams {
        arms: 3,
        margin: 50,
        stop_scale: 1,
    };
    let mut agent = EliminationAgent::<f64>::new(params).unwrap();
    let mut rng = seeded(11);
    // Round one: arms 1 and 2; stop with c = 0 keeps arm 1 against arm 3.
    feed(&mut agent, 0, &mut rng);
    feed(&mut agent, 0, &mut rng);
    assert_eq!(agent.current_pair(), Some((0, 2)));
    feed(&mut agent, 0, &mut rng);
    feed(&mut agent, 0, &mut rng);
    assert_eq!(agent.winner(), Some(0));
    for _ in 0..10 {
        assert_eq!(agent.choose(&mut rng), 0);
        agent.observe(0, 0, &mut rng).unwrap();
    }
}

#[test]
fn elimination_trailing_challenger_wins_a_stop() {
    // Challenger leads (c < 0) when the stop fires: it replaces the champion.
    let params = EliminationParams {
        arms: 3,
        margin: 50,
        stop_scale: 1,
    };
    let mut agent = EliminationAgent::<f64>::new(params).unwrap();
    let mut rng = seeded(12);
    // Champion (arm 1) fails, challenger (arm 2) succeeds: c = -1, stop.
    feed(&mut agent, 0, &mut rng);
    feed(&mut agent, 1, &mut rng);
    assert_eq!(agent.current_pair(), Some((1, 2)));
}

#[test]
fn elimination_stop_probability_is_one_over_n() {
    // Read the exact stop mass off the compiled machine: at a
    // challenger-turn state with both plays seen and no threshold hit, the
    // transition mixes 1/N mass toward the next duel.
    let machine = compile_elimination::<f64>(EliminationParams {
        arms: 3,
        margin: 3,
        stop_scale: 10,
    })
    .unwrap();
    let start = machine.start();
    // Champion (arm 1) success: hand over to the challenger at c = 1.
    let to_chall = machine.transition(start, Observation::new(0, 1)).unwrap();
    let chall_state = to_chall.entries().first().unwrap().0;
    assert_eq!(machine.state_label(chall_state), "(1,2,chall,1)");
    // Challenger (arm 2) success: c = 0, round over, 1/10 stop mass.
    let mix = machine
        .transition(chall_state, Observation::new(1, 1))
        .unwrap();
    let stay = machine.state_label(start);
    let mut stop_mass = 0.0;
    for (target, p) in mix.entries() {
        if machine.state_label(*target) == stay {
            assert!((p - 0.9).abs() < 1e-12);
        } else {
            // Tie: incumbent champion survives into the next duel.
            assert_eq!(machine.state_label(*target), "(1,3,champ,0)");
            stop_mass += p;
        }
    }
    assert!((stop_mass - 0.1).abs() < 1e-12);
}

#[test]
fn elimination_runs_at_most_arms_minus_one_duels() {
    let params = EliminationParams {
        arms: 6,
        margin: 2,
        stop_scale: 5,
    };
    let bandit = BernoulliBandit::new(vec![0.9, 0.1, 0.5, 0.3, 0.7, 0.2]).unwrap();
    let mut rng = seeded(13);
    for _ in 0..50 {
        let mut agent = EliminationAgent::<f64>::new(params).unwrap();
        let mut duels = 0;
        let mut last_pair: Option<(usize, usize)> = None;
        for _ in 0..10_000 {
            let pair = agent.current_pair();
            if pair != last_pair {
                if pair.is_some() {
                    duels += 1;
                    // Challenger indices strictly increase across duels.
                    if let (Some((_, prev_j)), Some((_, j))) = (last_pair, pair) {
                        assert!(j > prev_j);
                    }
                }
                last_pair = pair;
            }
            if agent.winner().is_some() {
                break;
            }
            let arm = agent.choose(&mut rng);
            let reward = bandit.pull(arm, &mut rng).unwrap();
            agent.observe(arm, reward, &mut rng).unwrap();
        }
        assert!(duels <= 5, "ran {duels} duels");
    }
}

#[test]
fn explore_then_exploit_commits_after_exact_budget() {
    let mut agent = ExploreThenExploitAgent::<f64>::new(3, 4).unwrap();
    let mut rng = seeded(14);
    for step in 0..12 {
        assert_eq!(agent.committed(), None, "committed early at step {step}");
        let arm = agent.choose(&mut rng);
        assert_eq!(arm, step / 4);
        agent.observe(arm, 0, &mut rng).unwrap();
    }
    assert!(agent.committed().is_some());
}

#[test]
fn explore_then_exploit_picks_the_higher_sample_and_breaks_ties_low() {
    let mut rng = seeded(15);
    // arm1 -> 1, arm2 -> 0: commit to arm 1.
    let mut agent = ExploreThenExploitAgent::<f64>::new(2, 1).unwrap();
    feed(&mut agent, 1, &mut rng);
    feed(&mut agent, 0, &mut rng);
    assert_eq!(agent.committed(), Some(0));
    assert_eq!(agent.exploit_choice(), 0);

    // All samples identical: the tie goes to the lowest index.
    let mut agent = ExploreThenExploitAgent::<f64>::new(3, 2).unwrap();
    for _ in 0..6 {
        feed(&mut agent, 1, &mut rng);
    }
    assert_eq!(agent.committed(), Some(0));

    // Second arm strictly better.
    let mut agent = ExploreThenExploitAgent::<f64>::new(2, 1).unwrap();
    feed(&mut agent, 0, &mut rng);
    feed(&mut agent, 1, &mut rng);
    assert_eq!(agent.committed(), Some(1));
}

#[test]
fn epsilon_zero_is_pure_greedy_after_exploration() {
    let mut agent = EpsilonGreedyAgent::<f64>::new(2, 1, 0.0).unwrap();
    let bandit = BernoulliBandit::new(vec![1.0, 0.0]).unwrap();
    let mut rng = seeded(16);
    let (actions, _) = play(&mut agent, &bandit, 200, &mut rng).unwrap();
    assert_eq!(&actions[..2], &[0, 1]);
    assert!(actions[2..].iter().all(|&a| a == 0));
    assert_eq!(agent.exploit_choice(), 0);
}

#[test]
fn epsilon_one_plays_uniformly_at_random() {
    let mut agent = EpsilonGreedyAgent::<f64>::new(2, 1, 1.0).unwrap();
    let bandit = BernoulliBandit::new(vec![1.0, 0.0]).unwrap();
    let mut rng = seeded(17);
    let (actions, rewards) = play(&mut agent, &bandit, 10_000, &mut rng).unwrap();
    let arm0 = actions.iter().filter(|&&a| a == 0).count() as f64 / actions.len() as f64;
    assert!((arm0 - 0.5).abs() < 0.02, "arm-1 frequency {arm0}");
    // Mean reward approaches the average of the means.
    let mean = rewards.iter().map(|&r| f64::from(r)).sum::<f64>() / rewards.len() as f64;
    assert!((mean - 0.5).abs() < 0.02, "mean reward {mean}");
}

#[test]
fn epsilon_greedy_rejects_out_of_range_epsilon() {
    assert!(EpsilonGreedyAgent::<f64>::new(2, 1, -0.1).is_err());
    assert!(EpsilonGreedyAgent::<f64>::new(2, 1, 1.1).is_err());
}

#[test]
fn thompson_posterior_update_and_mean() {
    let mut agent = ThompsonAgent::<f64>::new(2).unwrap();
    assert_eq!(agent.posterior(0), (1, 1));
    let mut rng = seeded(18);
    let arm = agent.choose(&mut rng);
    agent.observe(arm, 1, &mut rng).unwrap();
    assert_eq!(agent.posterior(arm), (2, 1));
    assert!((agent.posterior_mean(arm) - 2.0 / 3.0).abs() < 1e-15);
    // (s+1)/(s+f+2) with s=1, f=0.
}

#[test]
fn thompson_converges_to_the_better_arm() {
    // Fraction of optimal plays over steps 9,000-10,000 averaged over 100
    // replications must reach 0.95 on a well-separated pair.
    let bandit = BernoulliBandit::new(vec![0.9, 0.1]).unwrap();
    let mut optimal = 0u64;
    for rep in 0..100u64 {
        let mut rng = fsband::rng::replication_rng(19, rep);
        let mut agent = ThompsonAgent::<f64>::new(2).unwrap();
        let (actions, _) = play(&mut agent, &bandit, 10_000, &mut rng).unwrap();
        optimal += actions[9_000..].iter().filter(|&&a| a == 0).count() as u64;
    }
    let fraction = optimal as f64 / (100.0 * 1000.0);
    assert!(fraction >= 0.95, "optimal fraction {fraction}");
}

fn all_agents() -> Vec<Box<dyn Agent<f64>>> {
    vec![
        Box::new(Asp::new(asp_params(3, 10, 3, 2)).unwrap()),
        Box::new(
            TwoPhase::new(TwoPhaseParams::with_default_coarse(asp_params(3, 9, 3, 2))).unwrap(),
        ),
        Box::new(
            EliminationAgent::<f64>::new(EliminationParams {
                arms: 3,
                margin: 2,
                stop_scale: 10,
            })
            .unwrap(),
        ),
        Box::new(ExploreThenExploitAgent::<f64>::new(3, 2).unwrap()),
        Box::new(EpsilonGreedyAgent::<f64>::new(3, 2, 0.1).unwrap()),
        Box::new(ThompsonAgent::<f64>::new(3).unwrap()),
    ]
}

#[test]
fn call_discipline_violations_are_rejected_by_every_agent() {
    let mut rng = seeded(20);
    for mut agent in all_agents() {
        // Observe before any choose.
        assert!(matches!(
            agent.observe(0, 1, &mut rng).unwrap_err(),
            ProtocolError::ObserveWithoutChoose { arm: 0 }
        ));
        let arm = agent.choose(&mut rng);
        // Wrong arm.
        let wrong = (arm + 1) % 3;
        assert!(matches!(
            agent.observe(wrong, 1, &mut rng).unwrap_err(),
            ProtocolError::ObserveWrongArm { .. }
        ));
        // Bad reward.
        assert!(matches!(
            agent.observe(arm, 2, &mut rng).unwrap_err(),
            ProtocolError::BadReward(2)
        ));
        // The correct call still goes through after the rejections.
        agent.observe(arm, 1, &mut rng).unwrap();
        // Double observe.
        assert!(agent.observe(arm, 1, &mut rng).is_err());
    }
}

#[test]
fn choose_stays_in_range_for_every_agent() {
    let bandit = BernoulliBandit::new(vec![0.2, 0.5, 0.8]).unwrap();
    for (i, mut agent) in all_agents().into_iter().enumerate() {
        let mut rng = seeded(21 + i as u64);
        let (actions, _) = play(agent.as_mut(), &bandit, 2000, &mut rng).unwrap();
        assert!(actions.iter().all(|&a| a < 3));
        assert!(agent.exploit_choice() < 3);
    }
}
