use fitscape_core::chains::BasPopulation;
use fitscape_core::model::Simulation;
use fitscape_core::rng::StreamRng;
use fitscape_core::stats::{
    law_adjudicate, mean_site_size, size_histogram, FitnessWindow, Merge, SizeHistogram,
};
use fitscape_core::theory::{mass_balance_mean, LawKind, TheoreticalLaw};
use fitscape_core::Params;
use serde_json::{json, Value};

use crate::args::{resolve_laws, HistArgs, ModelArgs, PureBirthArgs};
use crate::error::{CliError, CliResult};
use crate::output::{cell, json_num, OutputDir};
use crate::parallel::map_replicates;
use crate::Report;

/// Which population process feeds the histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramModel {
    /// Preferential attachment, single-individual deaths.
    Preferential,
    /// Uniform attachment, whole-site deletions.
    Uniform,
}

/// Laws compared by default, in tie-breaking order.
pub fn default_laws(p: f64) -> Vec<LawKind> {
    if p >= 1.0 {
        vec![
            LawKind::PureBirth,
            LawKind::ProofConsistent,
            LawKind::BasGeometric,
        ]
    } else {
        vec![
            LawKind::TheoremStated,
            LawKind::ProofConsistent,
            LawKind::BasGeometric,
            LawKind::PureBirth,
        ]
    }
}

/// Final-state size histograms of `replicates` runs, merged in replicate order.
pub fn pooled_histogram(
    params: Params,
    replicates: u64,
    window: FitnessWindow,
    model: HistogramModel,
) -> CliResult<SizeHistogram> {
    let parts = map_replicates(replicates.max(1), |i| match model {
        HistogramModel::Preferential => {
            let state = Simulation::for_replicate(params, i)?.run(&mut [])?;
            Ok(size_histogram(&state, window))
        }
        HistogramModel::Uniform => {
            let mut rng = StreamRng::for_replicate(params.seed, i);
            let mut pop = BasPopulation::new();
            for _ in 0..params.steps {
                pop.step(&params, &mut rng);
            }
            Ok(pop.histogram(window))
        }
    })?;
    let mut pooled = SizeHistogram::new(window);
    for h in &parts {
        pooled.merge(h);
    }
    Ok(pooled)
}

fn window_for(params: &Params, all_sites: bool) -> FitnessWindow {
    if all_sites {
        FitnessWindow::FULL
    } else {
        FitnessWindow::new(params.critical_fitness().min(1.0), 1.0)
    }
}

/// Laws that are defined at these parameters, plus the names of those that are not.
fn build_laws(kinds: &[LawKind], p: f64, r: f64, k_max: u64) -> (Vec<TheoreticalLaw>, Vec<Value>) {
    let mut laws = Vec::new();
    let mut skipped = Vec::new();
    for &kind in kinds {
        match TheoreticalLaw::new(kind, p, r).and_then(|l| l.binned(k_max).map(|_| l)) {
            Ok(l) => laws.push(l),
            Err(e) => skipped.push(json!({"law": kind.name(), "reason": e.to_string()})),
        }
    }
    (laws, skipped)
}

/// `k, count, empirical_prob, <law>...`; the last row pools `k >= k_max`.
fn write_table(
    out: &mut OutputDir,
    name: &str,
    hist: &SizeHistogram,
    laws: &[TheoreticalLaw],
    k_max: u64,
) -> CliResult<()> {
    let counts = hist.binned_counts(k_max);
    let probs = hist.binned(k_max)?;
    let law_bins: Vec<Vec<f64>> = laws
        .iter()
        .map(|l| l.binned(k_max))
        .collect::<Result<_, _>>()?;
    let mut header = vec!["k".to_string(), "count".into(), "empirical_prob".into()];
    header.extend(laws.iter().map(|l| l.kind.name().to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..counts.len()).map(|i| {
        let mut row = vec![
            (i as u64 + 1).to_string(),
            counts[i].to_string(),
            cell(probs[i]),
        ];
        row.extend(law_bins.iter().map(|b| cell(b[i])));
        row
    });
    out.write_csv(name, &header, rows)
}

fn require_supercritical(params: &Params, all_sites: bool) -> CliResult<()> {
    if all_sites || params.supercritical() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "needs p r > 1 - p (got p={}, r={}); sites above the critical fitness do not persist",
            params.p, params.r
        )))
    }
}

pub fn fig2(args: &HistArgs, out: &mut OutputDir) -> CliResult<Report> {
    let params = args.model.params()?;
    require_supercritical(&params, args.all_sites)?;
    let window = window_for(&params, args.all_sites);
    let hist = pooled_histogram(
        params,
        args.replicates,
        window,
        HistogramModel::Preferential,
    )?;
    let kinds = resolve_laws(&args.laws, &default_laws(params.p));
    let (laws, skipped) = build_laws(&kinds, params.p, params.r, args.k_max);
    write_table(out, "fig2.csv", &hist, &laws, args.k_max)?;
    let mut report = Report::default();
    report.note("sites", hist.sites());
    report.note("window", vec![json_num(window.lo), json_num(window.hi)]);
    report.note("skipped_laws", skipped);
    report.line(format!(
        "{} sites in [{}, {}]",
        hist.sites(),
        window.lo,
        window.hi
    ));
    Ok(report)
}

fn adjudicate_histogram(
    model: &ModelArgs,
    replicates: u64,
    k_max: u64,
    kinds: &[LawKind],
    window: FitnessWindow,
    out: &mut OutputDir,
) -> CliResult<Report> {
    let params = model.params()?;
    let hist = pooled_histogram(params, replicates, window, HistogramModel::Preferential)?;
    let (laws, skipped) = build_laws(kinds, params.p, params.r, k_max);
    write_table(out, "hist.csv", &hist, &laws, k_max)?;
    let adj = law_adjudicate(&hist, &laws, k_max)?;
    let winner = adj.winner();
    let empirical_mean = mean_site_size(&hist)?;
    let balance = mass_balance_mean(params.p, params.r).ok();

    let mut report = Report::default();
    let consistent_tv = adj
        .distances
        .iter()
        .find(|d| d.kind == LawKind::ProofConsistent)
        .map(|d| d.tv);
    let discrepancy = match consistent_tv {
        Some(tv) if winner.kind != LawKind::ProofConsistent && winner.tv < tv => Some(format!(
            "{} fits better than the mass-balance-consistent law (TV {} < {})",
            winner.kind, winner.tv, tv
        )),
        _ => None,
    };
    let summary = json!({
        "k_max": k_max,
        "sites": hist.sites(),
        "individuals": hist.individuals(),
        "window": [json_num(window.lo), json_num(window.hi)],
        "empirical_mean": json_num(empirical_mean),
        "mass_balance_mean": balance.map_or(Value::Null, json_num),
        "laws": adj.distances.iter().map(|d| json!({
            "law": d.kind.name(),
            "shape": json_num(d.shape),
            "mean": json_num(d.mean),
            "tv": json_num(d.tv),
        })).collect::<Vec<_>>(),
        "skipped_laws": skipped,
        "winner": winner.kind.name(),
        "discrepancy": discrepancy,
    });
    out.write_json("adjudication.json", &summary)?;
    for d in &adj.distances {
        report.line(format!(
            "{:<14} shape={:<10.5} TV={:.5}",
            d.kind.name(),
            d.shape,
            d.tv
        ));
    }
    report.line(format!(
        "winner: {} (empirical mean {:.4}, mass-balance mean {})",
        winner.kind,
        empirical_mean,
        balance.map_or("-".into(), |m| format!("{m:.4}"))
    ));
    report.note("winner", winner.kind.name());
    report.note("sites", hist.sites());
    Ok(report)
}

pub fn adjudicate(args: &HistArgs, out: &mut OutputDir) -> CliResult<Report> {
    let params = args.model.params()?;
    require_supercritical(&params, false)?;
    let window = window_for(&params, args.all_sites);
    let kinds = resolve_laws(&args.laws, &default_laws(params.p));
    adjudicate_histogram(
        &args.model,
        args.replicates,
        args.k_max,
        &kinds,
        window,
        out,
    )
}

pub fn pure_birth(args: &PureBirthArgs, out: &mut OutputDir) -> CliResult<Report> {
    let model = ModelArgs {
        p: 1.0,
        r: args.r,
        steps: args.steps,
        seed: args.seed,
        out: args.out.clone(),
    };
    let kinds = resolve_laws(&args.laws, &default_laws(1.0));
    adjudicate_histogram(
        &model,
        args.replicates,
        args.k_max,
        &kinds,
        FitnessWindow::FULL,
        out,
    )
}

pub fn bas(args: &HistArgs, out: &mut OutputDir) -> CliResult<Report> {
    let params = args.model.params()?;
    require_supercritical(&params, args.all_sites)?;
    let window = window_for(&params, args.all_sites);
    let hist = pooled_histogram(params, args.replicates, window, HistogramModel::Uniform)?;
    let kinds = resolve_laws(
        &args.laws,
        &[LawKind::BasGeometric, LawKind::ProofConsistent],
    );
    let (laws, skipped) = build_laws(&kinds, params.p, params.r, args.k_max);
    write_table(out, "bas_hist.csv", &hist, &laws, args.k_max)?;
    let mean = mean_site_size(&hist)?;
    let adj = law_adjudicate(&hist, &laws, args.k_max)?;
    let summary = json!({
        "k_max": args.k_max,
        "sites": hist.sites(),
        "empirical_mean": json_num(mean),
        "laws": adj.distances.iter().map(|d| json!({
            "law": d.kind.name(),
            "shape": json_num(d.shape),
            "mean": json_num(d.mean),
            "tv": json_num(d.tv),
        })).collect::<Vec<_>>(),
        "skipped_laws": skipped,
        "winner": adj.winner().kind.name(),
    });
    out.write_json("bas.json", &summary)?;
    let mut report = Report::default();
    report.line(format!("{} sites, mean size {:.4}", hist.sites(), mean));
    for d in &adj.distances {
        report.line(format!(
            "{:<14} mean={:<10.5} TV={:.5}",
            d.kind.name(),
            d.mean,
            d.tv
        ));
    }
    report.note("sites", hist.sites());
    Ok(report)
}
