use fitscape_core::chains::{eps_coupled_step, lr_step, CouplingLayout, EpsilonFamily, LRState};
use fitscape_core::rng::{StreamRng, UniformSource};
use fitscape_core::Params;
use serde_json::{json, Value};

use crate::args::CouplingArgs;
use crate::error::{CliError, CliResult};
use crate::output::{json_num, OutputDir};
use crate::parallel::map_replicates;
use crate::Report;

#[derive(Debug, Clone)]
struct CouplingRun {
    replicate: u64,
    /// `(step, description)` of the first broken ordering.
    violation: Option<(u64, String)>,
    /// `(step, description)` of the first step where the mass-split chain
    /// left the band formed by the two extreme chains.
    escape: Option<(u64, String)>,
    final_states: Vec<LRState>,
    mass_split: LRState,
}

fn grid_of(args: &CouplingArgs) -> CliResult<Vec<f64>> {
    let grid = if args.grid.is_empty() {
        if args.grid_size < 2 {
            return Err(CliError::Usage("--grid-size must be at least 2".into()));
        }
        let n = (args.grid_size - 1) as f64;
        (0..args.grid_size).map(|i| i as f64 / n).collect()
    } else {
        args.grid.clone()
    };
    if grid.iter().any(|e| !(0.0..=1.0).contains(e)) {
        return Err(CliError::Usage("epsilon values must lie in [0, 1]".into()));
    }
    Ok(grid)
}

fn run_one(args: &CouplingArgs, params: &Params, grid: &[f64], i: u64) -> CouplingRun {
    let start = LRState::new(1, 0, args.f);
    let layout = if args.broken_layout {
        CouplingLayout::Alternating
    } else {
        CouplingLayout::Monotone
    };
    let mut fam = EpsilonFamily::new(grid.to_vec(), start, params).with_layout(layout);
    let mut lr = start;
    let mut rng = StreamRng::for_replicate(args.seed, i);
    let band = (grid.contains(&0.0) && grid.contains(&1.0)).then_some(());
    let mut escape = None;
    let mut violation = None;
    for n in 1..=args.steps {
        let u = rng.next_uniform();
        eps_coupled_step(&mut fam, u);
        lr = lr_step(&lr, params, u);
        if let Some(v) = fam.first_violation() {
            violation = Some((
                n,
                format!(
                    "eps={} has (L, R)=({}, {}) but eps={} has ({}, {})",
                    fam.grid[v.lower],
                    v.lower_state.left,
                    v.lower_state.right,
                    fam.grid[v.upper],
                    v.upper_state.left,
                    v.upper_state.right
                ),
            ));
            break;
        }
        if band.is_some() && escape.is_none() {
            let lo = fam.state_for(0.0).copied().unwrap_or(start);
            let hi = fam.state_for(1.0).copied().unwrap_or(start);
            if !(lo.left <= lr.left && lr.left <= hi.left) {
                escape = Some((
                    n,
                    format!("L={} outside [{}, {}]", lr.left, lo.left, hi.left),
                ));
            }
        }
    }
    CouplingRun {
        replicate: i,
        violation,
        escape,
        final_states: fam.states.clone(),
        mass_split: lr,
    }
}

pub fn run(args: &CouplingArgs, out: &mut OutputDir) -> CliResult<Report> {
    let params = Params::new(args.p, args.r, args.steps, args.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let grid = {
        let mut g = grid_of(args)?;
        g.sort_by(f64::total_cmp);
        g
    };
    let runs = map_replicates(args.replicates.max(1), |i| {
        Ok(run_one(args, &params, &grid, i))
    })?;

    let sandwich_checked = grid.contains(&0.0) && grid.contains(&1.0);
    let first_violation = runs.iter().find(|r| r.violation.is_some());
    let first_escape = runs.iter().find(|r| r.escape.is_some());
    let describe = |r: &CouplingRun, which: &Option<(u64, String)>| {
        which
            .as_ref()
            .map(|(n, msg)| json!({"replicate": r.replicate, "step": n, "detail": msg}))
    };
    let summary = json!({
        "grid": grid.iter().map(|&e| json_num(e)).collect::<Vec<_>>(),
        "split_fitness": json_num(args.f),
        "steps": args.steps,
        "replicates": runs.len(),
        "layout": if args.broken_layout { "alternating" } else { "monotone" },
        "ordered": first_violation.is_none(),
        "first_violation": first_violation.and_then(|r| describe(r, &r.violation)),
        "runs_with_violation": runs.iter().filter(|r| r.violation.is_some()).count(),
        "sandwich_checked": sandwich_checked,
        "sandwich_holds": if sandwich_checked { Value::Bool(first_escape.is_none()) } else { Value::Null },
        "first_escape": first_escape.and_then(|r| describe(r, &r.escape)),
        "final_states": runs.first().map(|r| {
            grid.iter().zip(&r.final_states).map(|(&e, s)| json!({
                "eps": json_num(e), "left": s.left, "right": s.right
            })).collect::<Vec<_>>()
        }),
        "mass_split_final": runs.first().map(|r| json!({"left": r.mass_split.left, "right": r.mass_split.right})),
    });
    out.write_json("coupling.json", &summary)?;

    let mut report = Report::default();
    report.note("ordered", first_violation.is_none());
    match (first_violation, first_escape) {
        (Some(r), _) => {
            let (n, msg) = r.violation.clone().unwrap();
            report.violation = Some(format!("replicate {} step {n}: {msg}", r.replicate));
        }
        (None, Some(r)) => {
            let (n, msg) = r.escape.clone().unwrap();
            report.violation = Some(format!(
                "replicate {} step {n}: mass-split chain {msg}",
                r.replicate
            ));
        }
        (None, None) => report.line(format!(
            "{} runs x {} steps: coupling ordered{}",
            runs.len(),
            args.steps,
            if sandwich_checked {
                ", sandwich holds"
            } else {
                ""
            }
        )),
    }
    Ok(report)
}
