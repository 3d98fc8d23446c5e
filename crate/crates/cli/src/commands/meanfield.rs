use fitscape_core::model::{PopulationState, Simulation};
use fitscape_core::stats::{geometric_checkpoints, power_fit, slope_fit};
use fitscape_core::theory::classify_phase;
use fitscape_core::Params;
use serde_json::json;

use crate::args::MeanfieldArgs;
use crate::error::{CliError, CliResult};
use crate::output::{cell, json_num, OutputDir};
use crate::parallel::map_replicates;
use crate::Report;

/// Seed-averaged site count and gap `1 - min fitness` at each checkpoint.
fn sample_growth(
    params: Params,
    replicates: u64,
    checkpoints: &[u64],
) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let runs = map_replicates(replicates, |i| {
        let mut sim = Simulation::for_replicate(params, i)?;
        let mut sites = Vec::with_capacity(checkpoints.len());
        let mut gaps = Vec::with_capacity(checkpoints.len());
        for &c in checkpoints {
            sim.burn_in(c.saturating_sub(sim.state().step()));
            let st: &PopulationState = sim.state();
            sites.push(st.site_count() as f64);
            gaps.push(st.min_fitness().map_or(f64::NAN, |m| 1.0 - m));
        }
        Ok((sites, gaps))
    })?;
    let k = checkpoints.len();
    let n = runs.len() as f64;
    let mut sites = vec![0.0; k];
    let mut gaps = vec![0.0; k];
    for (s, g) in &runs {
        for j in 0..k {
            sites[j] += s[j] / n;
            gaps[j] += g[j] / n;
        }
    }
    Ok((sites, gaps))
}

/// Least-squares exponent over the points with positive, finite values.
fn fit_positive(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let (x, y): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.is_finite() && **y > 0.0)
        .map(|(a, b)| (*a, *b))
        .unzip();
    power_fit(&x, &y).ok().map(|f| (f.slope, f.rmse))
}

pub fn run(args: &MeanfieldArgs, out: &mut OutputDir) -> CliResult<Report> {
    if !(args.r > 0.0 && args.r < 1.0) {
        return Err(CliError::Usage(format!("r={} outside (0, 1)", args.r)));
    }
    if args.p_grid.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
        return Err(CliError::Usage("every p must lie in (0, 1]".into()));
    }
    // Fit over the last decade of the horizon.
    let checkpoints = geometric_checkpoints((args.steps / 10).max(1), args.steps, 1.25);
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut report = Report::default();
    let phase0 = classify_phase(0.75, args.r);
    report.line(format!(
        "critical points for r={}: {:.6}, {:.6}, {:.6}",
        args.r, phase0.pc0, phase0.pc1, phase0.pc2
    ));
    for &p in &args.p_grid {
        let phase = classify_phase(p, args.r);
        let predicted = phase.site_growth_exponent();
        let (fitted, gap_slope) = if args.simulate {
            let params = Params::new(p, args.r, args.steps, args.seed)?;
            let (sites, gaps) = sample_growth(params, args.replicates.max(1), &checkpoints)?;
            let xs: Vec<f64> = checkpoints.iter().map(|&c| c as f64).collect();
            let fitted = fit_positive(&xs, &sites);
            let (gx, gy): (Vec<f64>, Vec<f64>) = xs
                .iter()
                .zip(&gaps)
                .filter(|(_, g)| g.is_finite() && **g > 0.0)
                .map(|(x, g)| (x.ln(), g.ln()))
                .unzip();
            (fitted, slope_fit(&gx, &gy).ok())
        } else {
            (None, None)
        };
        rows.push([
            cell(p),
            phase.gamma.map(cell).unwrap_or_default(),
            phase.phase.to_string(),
            predicted.map(cell).unwrap_or_default(),
            fitted.map(|f| cell(f.0)).unwrap_or_default(),
            fitted.map(|f| cell(f.1)).unwrap_or_default(),
            gap_slope.map(cell).unwrap_or_default(),
        ]);
        table.push(json!({
            "p": json_num(p),
            "phase": phase.phase,
            "gamma": phase.gamma.map(json_num),
            "predicted_exponent": predicted.map(json_num),
            "fitted_exponent": fitted.map(|f| json_num(f.0)),
        }));
        report.line(format!(
            "p={:<8.5} phase {} gamma={} predicted={} fitted={}",
            p,
            phase.phase,
            phase.gamma.map_or("-".into(), |g| format!("{g:.4}")),
            predicted.map_or("-".into(), |g| format!("{g:.4}")),
            fitted.map_or("-".into(), |f| format!("{:.4}", f.0)),
        ));
    }
    out.write_csv(
        "phases.csv",
        &[
            "p",
            "gamma",
            "phase",
            "predicted_exponent",
            "fitted_exponent",
            "fit_rmse",
            "min_fitness_gap_slope",
        ],
        rows,
    )?;
    report.note(
        "critical_points",
        vec![
            json_num(phase0.pc0),
            json_num(phase0.pc1),
            json_num(phase0.pc2),
        ],
    );
    report.note("phases", table);
    Ok(report)
}
