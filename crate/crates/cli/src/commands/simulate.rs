use fitscape_core::model::{Event, Observer, PopulationState, Simulation};
use fitscape_core::stats::{fitness_cdf, ks_distance, mass_ratio};
use serde_json::json;

use crate::args::SimulateArgs;
use crate::error::CliResult;
use crate::output::{cell, json_num, replicate_name, OutputDir};
use crate::parallel::map_replicates;
use crate::Report;

/// One trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub step: u64,
    pub total: u64,
    pub sites: usize,
    pub left: u64,
    pub min_fitness: Option<f64>,
}

impl TrajectoryRow {
    pub fn right(&self) -> u64 {
        self.total - self.left
    }
}

/// Samples `(N, S, L, R, min fitness)` every `every` steps, keeping the mass
/// at or below `split` up to date from the event stream.
#[derive(Debug, Clone)]
pub struct TrajectoryRecorder {
    split: f64,
    every: u64,
    left: u64,
    pub rows: Vec<TrajectoryRow>,
}

impl TrajectoryRecorder {
    /// Starts from the current `state` and records it as the first row.
    pub fn new(state: &PopulationState, split: f64, every: u64) -> Self {
        let left = state
            .sites()
            .filter(|(_, s)| s.fitness <= split)
            .map(|(_, s)| s.count)
            .sum();
        let mut rec = Self {
            split,
            every: every.max(1),
            left,
            rows: Vec::new(),
        };
        rec.record(state);
        rec
    }

    fn record(&mut self, state: &PopulationState) {
        self.rows.push(TrajectoryRow {
            step: state.step(),
            total: state.total(),
            sites: state.site_count(),
            left: self.left,
            min_fitness: state.min_fitness(),
        });
    }
}

impl Observer for TrajectoryRecorder {
    fn observe(&mut self, step: u64, state: &PopulationState, event: &Event) -> Result<(), String> {
        match *event {
            Event::MutantBirth { fitness, .. } | Event::AttachBirth { fitness, .. } => {
                if fitness <= self.split {
                    self.left += 1;
                }
            }
            Event::Death { fitness, .. } => {
                if fitness <= self.split {
                    self.left -= 1;
                }
            }
            Event::Hold => {}
        }
        if step.is_multiple_of(self.every) {
            self.record(state);
        }
        Ok(())
    }
}

pub fn run(args: &SimulateArgs, out: &mut OutputDir) -> CliResult<Report> {
    let params = args.model.params()?;
    let split = args
        .fc_override
        .unwrap_or_else(|| params.critical_fitness().min(1.0));
    let reps = args.replicates.max(1);
    let runs = map_replicates(reps, |i| {
        let mut sim = Simulation::for_replicate(params, i)?;
        sim.burn_in(args.burn_in.min(params.steps));
        let mut rec = TrajectoryRecorder::new(sim.state(), split, args.sample_every);
        let state = sim.run(&mut [&mut rec])?;
        if rec.rows.last().map(|r| r.step) != Some(state.step()) {
            rec.record(&state);
        }
        Ok((state, rec.rows))
    })?;

    let mut report = Report::default();
    let mut per_rep = Vec::new();
    for (i, (state, rows)) in runs.iter().enumerate() {
        let i = i as u64;
        out.write_with(&replicate_name("sites", "csv", i, reps), |w| {
            state.write_sites_csv(w)
        })?;
        out.write_csv(
            &replicate_name("traj", "csv", i, reps),
            &["n", "N", "S", "L_fc", "R_fc", "min_fitness"],
            rows.iter().map(|r| {
                [
                    r.step.to_string(),
                    r.total.to_string(),
                    r.sites.to_string(),
                    r.left.to_string(),
                    r.right().to_string(),
                    r.min_fitness.map(cell).unwrap_or_default(),
                ]
            }),
        )?;
        let ratio = mass_ratio(state, split).ok();
        let ks = if split < 1.0 {
            fitness_cdf(state).and_then(|c| ks_distance(&c, split)).ok()
        } else {
            None
        };
        report.line(format!(
            "replicate {i}: N={} S={} R/N={} KS={}",
            state.total(),
            state.site_count(),
            ratio.map_or("-".into(), |x| format!("{x:.4}")),
            ks.map_or("-".into(), |x| format!("{x:.4}")),
        ));
        per_rep.push(json!({
            "replicate": i,
            "total": state.total(),
            "sites": state.site_count(),
            "mass_ratio": ratio.map_or(serde_json::Value::Null, json_num),
            "ks": ks.map_or(serde_json::Value::Null, json_num),
        }));
    }
    report.note("split_fitness", json_num(split));
    report.note("replicates_summary", per_rep);
    Ok(report)
}
