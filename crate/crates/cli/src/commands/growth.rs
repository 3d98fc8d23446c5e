use fitscape_core::model::Simulation;
use fitscape_core::stats::{
    focal_mutant_track, geometric_checkpoints, power_fit, FocalSummary, FocalTrack, FocalWindow,
};
use fitscape_core::theory::{
    expected_focal_growth, focal_exponent_check_chain, focal_exponent_hat_chain, GrowthMode,
};
use fitscape_core::{ModelError, Params};
use serde_json::json;

use crate::args::GrowthArgs;
use crate::error::{CliError, CliResult};
use crate::output::{cell, json_num, OutputDir};
use crate::parallel::map_replicates;
use crate::Report;

/// Gives up on a replicate after this many empty windows.
const MAX_ATTEMPTS: u64 = 100_000;

/// Mean-size prediction `E[X_n]` for a site founded at `ell`.
pub fn predicted_size(ell: u64, n: u64, p: f64, r: f64) -> CliResult<f64> {
    if n <= ell {
        return Ok(1.0);
    }
    let mode = if p >= 1.0 {
        GrowthMode::ExactProduct
    } else {
        GrowthMode::GammaRatio
    };
    Ok(expected_focal_growth(ell as f64, n as f64, p, r, mode)?)
}

/// Follows one mutant per replicate. Replicate `i` uses stream
/// `i + a * replicates` on its `a`-th attempt, until a mutant qualifies.
pub fn track_replicates(
    params: Params,
    window: FocalWindow,
    checkpoints: &[u64],
    replicates: u64,
) -> CliResult<(Vec<FocalTrack>, u64)> {
    let runs = map_replicates(replicates, |i| {
        for a in 0..MAX_ATTEMPTS {
            let sim = Simulation::for_replicate(params, i + a * replicates)?;
            match focal_mutant_track(sim, window, checkpoints) {
                Ok(track) => return Ok((track, a)),
                Err(ModelError::NoFocalMutant) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        Err(CliError::Model(ModelError::NoFocalMutant))
    })?;
    let resampled = runs.iter().map(|(_, a)| a).sum();
    Ok((runs.into_iter().map(|(t, _)| t).collect(), resampled))
}

pub fn run(args: &GrowthArgs, out: &mut OutputDir) -> CliResult<Report> {
    let params = Params::new(args.p, args.r, args.steps, args.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if args.p <= 0.5 {
        return Err(CliError::Usage("mutant growth needs p > 1/2".into()));
    }
    if args.birth_step == 0 || args.birth_step >= args.steps {
        return Err(CliError::Usage("need 0 < --birth-step < --steps".into()));
    }
    let mut window = if args.first_after {
        FocalWindow::from(args.birth_step)
    } else {
        FocalWindow::exactly(args.birth_step)
    };
    let min_fitness = args.min_fitness.or_else(|| {
        let fc = params.critical_fitness();
        (args.p < 1.0 && fc < 1.0).then_some(fc)
    });
    if let Some(m) = min_fitness {
        window = window.above(m);
    }
    let checkpoints = geometric_checkpoints(args.birth_step, args.steps, 1.25);
    let (tracks, resampled) =
        track_replicates(params, window, &checkpoints, args.replicates.max(2))?;
    let mut summary = FocalSummary::new(checkpoints.clone());
    for t in &tracks {
        summary.push(t);
    }

    let (check, hat) = (
        focal_exponent_check_chain(args.p, args.r),
        focal_exponent_hat_chain(args.p, args.r),
    );
    let ell = args.birth_step as f64;
    let mut rows = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, &n) in checkpoints.iter().enumerate() {
        let mean = summary.mean(i);
        let pred = predicted_size(args.birth_step, n, args.p, args.r)?;
        let scale = n as f64 / ell;
        if n > args.birth_step && mean > 0.0 {
            xs.push(n as f64);
            ys.push(mean);
        }
        rows.push([
            n.to_string(),
            cell(mean),
            cell(summary.std_error(i)),
            cell(pred),
            cell(mean / pred),
            cell(scale.powf(check)),
            cell(scale.powf(hat)),
        ]);
    }
    out.write_csv(
        "focal.csv",
        &[
            "n",
            "count",
            "std_error",
            "prediction",
            "ratio",
            "powerlaw_check",
            "powerlaw_hat",
        ],
        rows,
    )?;

    let last = checkpoints.len() - 1;
    let final_mean = summary.mean(last);
    let final_se = summary.std_error(last);
    let final_pred = predicted_size(args.birth_step, args.steps, args.p, args.r)?;
    let within = (final_mean - final_pred).abs() <= 3.0 * final_se;
    let fit = power_fit(&xs, &ys).ok();
    let json = json!({
        "birth_step": args.birth_step,
        "steps": args.steps,
        "replicates": tracks.len(),
        "resampled": resampled,
        "min_fitness": min_fitness.map(json_num),
        "exact_birth": !args.first_after,
        "final_mean": json_num(final_mean),
        "final_std_error": json_num(final_se),
        "final_prediction": json_num(final_pred),
        "within_three_sigma": within,
        "fitted_exponent": fit.as_ref().map(|f| json_num(f.slope)),
        "fit_rmse": fit.as_ref().map(|f| json_num(f.rmse)),
        "exponent_check_chain": json_num(check),
        "exponent_hat_chain": json_num(hat),
        "prediction_mode": if args.p >= 1.0 { "exact-product" } else { "gamma-ratio" },
    });
    out.write_json("focal_summary.json", &json)?;

    let mut report = Report::default();
    report.note("resampled", resampled);
    report.note("within_three_sigma", within);
    report.line(format!(
        "final n={}: mean {:.4} +/- {:.4}, prediction {:.4} ({})",
        args.steps,
        final_mean,
        final_se,
        final_pred,
        if within {
            "within 3 sigma"
        } else {
            "outside 3 sigma"
        }
    ));
    if let Some(f) = fit {
        report.line(format!(
            "fitted exponent {:.4} (candidates {:.4}, {:.4})",
            f.slope, check, hat
        ));
    }
    Ok(report)
}
