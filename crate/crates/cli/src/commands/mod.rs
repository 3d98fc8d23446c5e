mod coupling;
mod figures;
mod growth;
mod histograms;
mod meanfield;
mod simulate;
mod theory;

use crate::args::Command;
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::Report;

pub use histograms::{default_laws, pooled_histogram, HistogramModel};
pub use simulate::TrajectoryRecorder;

pub(crate) fn dispatch(command: &Command, out: &mut OutputDir) -> CliResult<Report> {
    match command {
        Command::Simulate(a) => simulate::run(a, out),
        Command::Fig1(a) => figures::fig1(a, out),
        Command::Fig2(a) => histograms::fig2(a, out),
        Command::Adjudicate(a) => histograms::adjudicate(a, out),
        Command::Bas(a) => histograms::bas(a, out),
        Command::PureBirth(a) => histograms::pure_birth(a, out),
        Command::CouplingCheck(a) => coupling::run(a, out),
        Command::MutantGrowth(a) => growth::run(a, out),
        Command::Meanfield(a) => meanfield::run(a, out),
        Command::Theory(a) => theory::run(a, out),
        Command::Replay(_) => unreachable!("replay is resolved before dispatch"),
    }
}
