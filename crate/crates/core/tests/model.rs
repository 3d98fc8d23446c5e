use fitscape_core::model::{step, Event, PopulationState, Simulation, Site, SiteId};
use fitscape_core::rng::{StreamRng, UniformSource};
use fitscape_core::stats::{focal_mutant_track, FocalWindow};
use fitscape_core::Params;
use proptest::prelude::*;

fn params(p: f64, r: f64, steps: u64, seed: u64) -> Params {
    Params::new(p, r, steps, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn population_is_conserved_step_by_step(
        p in 0.05f64..=1.0, r in 0.01f64..0.99, seed in any::<u64>(), steps in 1u64..3_000,
    ) {
        let prm = params(p, r, steps, seed);
        let mut sim = Simulation::new(prm).unwrap();
        for _ in 0..steps {
            let before = sim.state().total() as i64;
            let ev = sim.step();
            let st = sim.state();
            prop_assert_eq!(st.total() as i64, before + ev.delta());
            prop_assert_eq!(st.total(), st.sites().map(|(_, s)| s.count).sum::<u64>());
            prop_assert!(st.sites().all(|(_, s)| s.count > 0));
        }
        prop_assert!(sim.state().check_invariants().is_ok());
    }

    #[test]
    fn live_fitnesses_are_distinct_and_in_unit_interval(
        p in 0.5f64..=1.0, r in 0.05f64..0.95, seed in any::<u64>(),
    ) {
        let st = Simulation::new(params(p, r, 5_000, seed)).unwrap().run(&mut []).unwrap();
        let mut fs: Vec<f64> = st.sites().map(|(_, s)| s.fitness).collect();
        prop_assert!(fs.iter().all(|f| (0.0..1.0).contains(f)));
        let n = fs.len();
        fs.sort_by(f64::total_cmp);
        fs.dedup();
        prop_assert_eq!(fs.len(), n);
    }

    #[test]
    fn deaths_always_hit_the_least_fit_site(
        p in 0.3f64..0.9, r in 0.05f64..0.95, seed in any::<u64>(),
    ) {
        let mut sim = Simulation::new(params(p, r, 0, seed)).unwrap();
        for _ in 0..2_000 {
            let min_before = sim.state().min_fitness();
            if let Event::Death { fitness, .. } = sim.step() {
                prop_assert_eq!(Some(fitness), min_before);
            }
        }
    }
}

#[test]
fn same_seed_same_state() {
    let a = Simulation::new(params(0.75, 0.5, 50_000, 9))
        .unwrap()
        .run(&mut [])
        .unwrap();
    let b = Simulation::new(params(0.75, 0.5, 50_000, 9))
        .unwrap()
        .run(&mut [])
        .unwrap();
    let (mut wa, mut wb) = (Vec::new(), Vec::new());
    a.write_sites_csv(&mut wa).unwrap();
    b.write_sites_csv(&mut wb).unwrap();
    assert_eq!(wa, wb);
    let c = Simulation::new(params(0.75, 0.5, 50_000, 10))
        .unwrap()
        .run(&mut [])
        .unwrap();
    let mut wc = Vec::new();
    c.write_sites_csv(&mut wc).unwrap();
    assert_ne!(wa, wc);
}

#[test]
fn attachment_is_proportional_to_counts() {
    let st = PopulationState::from_sites(&[
        Site {
            fitness: 0.1,
            count: 1,
            birth_time: 0,
        },
        Site {
            fitness: 0.5,
            count: 3,
            birth_time: 0,
        },
        Site {
            fitness: 0.9,
            count: 6,
            birth_time: 0,
        },
    ])
    .unwrap();
    let n = 200_000u64;
    let mut hits = [0u64; 3];
    let mut rng = StreamRng::new(4);
    for _ in 0..n {
        hits[st.sample_attachment(rng.next_uniform()).unwrap().0] += 1;
    }
    for (i, w) in [0.1, 0.3, 0.6].iter().enumerate() {
        let sd = (n as f64 * w * (1.0 - w)).sqrt();
        assert!(
            (hits[i] as f64 - n as f64 * w).abs() < 4.0 * sd,
            "site {i}: {}",
            hits[i]
        );
    }
}

#[test]
fn total_population_is_a_reflected_random_walk() {
    // Off zero the total moves up with probability p regardless of the
    // configuration; at zero a death is a hold.
    let p = 0.55;
    let mut sim = Simulation::new(params(p, 0.3, 0, 12)).unwrap();
    let (mut ups, mut moves, mut holds_at_zero, mut deaths_at_zero) = (0u64, 0u64, 0u64, 0u64);
    for _ in 0..200_000 {
        let before = sim.state().total();
        let ev = sim.step();
        if before == 0 {
            if ev.delta() == 0 {
                holds_at_zero += 1;
            }
            if matches!(ev, Event::Death { .. }) {
                deaths_at_zero += 1;
            }
            continue;
        }
        moves += 1;
        if ev.delta() == 1 {
            ups += 1;
        }
    }
    assert_eq!(deaths_at_zero, 0);
    let sd = (moves as f64 * p * (1.0 - p)).sqrt();
    assert!((ups as f64 - moves as f64 * p).abs() < 4.0 * sd);
    let _ = holds_at_zero;
}

#[test]
fn focal_counts_match_a_replay_of_the_event_log() {
    let prm = params(0.75, 0.5, 3_000, 21);
    let checkpoints = vec![200, 500, 1_000, 2_000, 3_000];
    let track = focal_mutant_track(
        Simulation::new(prm).unwrap(),
        FocalWindow::from(200),
        &checkpoints,
    )
    .unwrap();

    // Brute force: log every event and recount the followed site by hand.
    let mut state = PopulationState::new();
    let mut rng = StreamRng::new(prm.seed);
    let mut focal: Option<SiteId> = None;
    let mut count = 0i64;
    let mut expected = Vec::new();
    for n in 1..=3_000u64 {
        let ev = step(&mut state, &prm, &mut rng);
        match ev {
            Event::MutantBirth {
                site,
                from_empty: false,
                ..
            } if focal.is_none() && n >= 200 => {
                focal = Some(site);
                count = 1;
            }
            Event::AttachBirth { site, .. } if Some(site) == focal => count += 1,
            Event::Death { site, .. } if Some(site) == focal => count -= 1,
            _ => {}
        }
        if checkpoints.contains(&n) {
            expected.push(count.max(0) as u64);
        }
    }
    assert_eq!(Some(track.site), focal);
    assert_eq!(track.counts, expected);
}

#[test]
fn empty_start_founds_a_site_on_birth() {
    let prm = params(1.0, 0.5, 1, 3);
    let st = Simulation::new(prm)
        .unwrap()
        .with_state(PopulationState::empty())
        .run(&mut [])
        .unwrap();
    assert_eq!(st.total(), 1);
    assert_eq!(st.site_count(), 1);
}
