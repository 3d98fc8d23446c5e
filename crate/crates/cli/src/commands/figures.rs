use fitscape_core::model::Simulation;

use crate::args::Fig1Args;
use crate::error::CliResult;
use crate::output::{cell, json_num, OutputDir};
use crate::Report;

/// Site sizes of one final snapshot, ready for a log2-count vs fitness plot.
pub fn fig1(args: &Fig1Args, out: &mut OutputDir) -> CliResult<Report> {
    let params = args.model.params()?;
    let mut sim = Simulation::for_replicate(params, 0)?;
    sim.burn_in(args.burn_in.min(params.steps));
    let state = sim.run(&mut [])?;
    let fc = params.critical_fitness();
    out.write_csv(
        "fig1.csv",
        &["fitness", "count", "log2_count", "birth_time", "fc"],
        state.sites_by_fitness().map(|(_, s)| {
            [
                cell(s.fitness),
                s.count.to_string(),
                cell((s.count as f64).log2()),
                s.birth_time.to_string(),
                cell(fc),
            ]
        }),
    )?;
    let mut report = Report::default();
    report.note("fc", json_num(fc));
    report.note("reference_counts", vec![64u64, 256]);
    report.note("total", state.total());
    report.note("sites", state.site_count());
    report.line(format!(
        "N={} S={} fc={}",
        state.total(),
        state.site_count(),
        cell(fc)
    ));
    Ok(report)
}
