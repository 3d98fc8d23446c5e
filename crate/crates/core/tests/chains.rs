use fitscape_core::chains::{
    bas_step, eps_coupled_step, lr_probs, project_lr, BasState, EpsilonFamily, LRState, Move,
};
use fitscape_core::model::Simulation;
use fitscape_core::rng::{StreamRng, UniformSource};
use fitscape_core::Params;
use proptest::prelude::*;

fn params(p: f64, r: f64) -> Params {
    Params::new(p, r, 0, 0).unwrap()
}

#[test]
fn mass_split_kernel_is_calibrated_along_a_real_run() {
    // Sum of predicted left-move probabilities along one trajectory must
    // match the number of observed left moves (martingale CLT, 4 sigma).
    let prm = Params::new(0.75, 0.5, 0, 17).unwrap();
    let f = 0.5;
    let mut sim = Simulation::new(prm).unwrap();
    let (mut predicted, mut variance, mut observed) = (0.0, 0.0, 0.0);
    for _ in 0..30_000 {
        let before = project_lr(sim.state(), f);
        let q: f64 = lr_probs(&before, &prm)
            .iter()
            .filter(|t| t.mv == Move::Left)
            .map(|t| t.prob)
            .sum();
        sim.step();
        let after = project_lr(sim.state(), f);
        predicted += q;
        variance += q * (1.0 - q);
        if after.left == before.left + 1 {
            observed += 1.0;
        }
    }
    assert!(
        (observed - predicted).abs() < 4.0 * variance.sqrt(),
        "{observed} vs {predicted}"
    );
}

#[test]
fn fixed_share_chain_obeys_the_law_of_large_numbers() {
    // eps = 1, f = 0.4: left drift 0.275 and total drift 0.5, so L/N -> 0.55.
    let prm = params(0.75, 0.5);
    let mut fam = EpsilonFamily::new(vec![1.0], LRState::new(0, 0, 0.4), &prm);
    let mut rng = StreamRng::new(5);
    for _ in 0..200_000 {
        eps_coupled_step(&mut fam, rng.next_uniform());
    }
    let s = fam.states[0];
    let share = s.left as f64 / s.total() as f64;
    assert!((share - 0.55).abs() < 0.02, "share {share}");
}

#[test]
fn one_dim_uniform_chain_has_homogeneous_increments_off_zero() {
    let prm = params(0.75, 0.5);
    let mut s = BasState::Sites(5);
    let mut rng = StreamRng::new(8);
    let mut tally = [0u64; 3];
    let mut n = 0u64;
    for _ in 0..200_000 {
        let BasState::Sites(before) = s else {
            unreachable!()
        };
        s = bas_step(&s, &prm, rng.next_uniform());
        let BasState::Sites(after) = s else {
            unreachable!()
        };
        if before == 0 {
            continue;
        }
        n += 1;
        tally[(after as i64 - before as i64 + 1) as usize] += 1;
    }
    let expect = [1.0 - 0.75, 0.75 * 0.5, 0.75 * 0.5];
    for i in 0..3 {
        let sd = (n as f64 * expect[i] * (1.0 - expect[i])).sqrt();
        assert!((tally[i] as f64 - n as f64 * expect[i]).abs() < 4.0 * sd);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupled_family_stays_ordered(
        p in 0.3f64..0.99, r in 0.05f64..0.95, f in 0.0f64..1.0, seed in any::<u64>(),
        left in 0u64..5, right in 0u64..5,
    ) {
        let prm = params(p, r);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let mut fam = EpsilonFamily::new(grid, LRState::new(left, right, f), &prm);
        let mut rng = StreamRng::new(seed);
        for _ in 0..2_000 {
            eps_coupled_step(&mut fam, rng.next_uniform());
            prop_assert!(fam.first_violation().is_none());
        }
        let n = fam.states[0].total();
        prop_assert!(fam.states.iter().all(|s| s.total() == n));
    }

    #[test]
    fn mass_split_kernel_sums_to_one(
        p in 0.01f64..=1.0, r in 0.01f64..0.99, f in 0.0f64..=1.0, left in 0u64..20, right in 0u64..20,
    ) {
        let total: f64 = lr_probs(&LRState::new(left, right, f), &params(p, r)).iter().map(|t| t.prob).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
