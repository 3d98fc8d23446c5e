use fitscape_core::theory::{
    classify_phase, critical_fitness, mass_balance_mean, moment_exists, TheoreticalLaw,
};
use serde_json::{json, Value};

use crate::args::{resolve_laws, TheoryArgs};
use crate::commands::default_laws;
use crate::error::{CliError, CliResult};
use crate::output::{cell, json_num, OutputDir};
use crate::Report;

/// Per-size probabilities of each law, without tail pooling.
pub fn run(args: &TheoryArgs, out: &mut OutputDir) -> CliResult<Report> {
    if !(args.p > 0.0 && args.p <= 1.0 && args.r > 0.0 && args.r < 1.0) {
        return Err(CliError::Usage(format!(
            "need 0 < p <= 1 and 0 < r < 1, got p={}, r={}",
            args.p, args.r
        )));
    }
    let kinds = resolve_laws(&args.laws, &default_laws(args.p));
    let mut report = Report::default();
    let mut laws = Vec::new();
    let mut law_notes = Vec::new();
    for kind in kinds {
        match TheoreticalLaw::new(kind, args.p, args.r) {
            Ok(l) => {
                report.line(format!(
                    "{:<14} shape={:.6} mean={:.6}",
                    kind.name(),
                    l.shape(),
                    l.mean()
                ));
                law_notes.push(json!({"law": kind.name(), "shape": json_num(l.shape()), "mean": json_num(l.mean())}));
                laws.push(l);
            }
            Err(e) => {
                report.line(format!("{:<14} undefined: {e}", kind.name()));
                law_notes.push(json!({"law": kind.name(), "undefined": e.to_string()}));
            }
        }
    }
    let mut header = vec!["k".to_string()];
    header.extend(laws.iter().map(|l| l.kind.name().to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    out.write_csv(
        "theory.csv",
        &header,
        (1..=args.k_max.max(1)).map(|k| {
            let mut row = vec![k.to_string()];
            row.extend(laws.iter().map(|l| cell(l.pmf(k))));
            row
        }),
    )?;

    let fc = critical_fitness(args.p, args.r);
    let balance = mass_balance_mean(args.p, args.r).ok();
    let phase = classify_phase(args.p, args.r);
    let moments: Vec<u32> = (1..=5)
        .filter(|&m| moment_exists(m, args.p, args.r))
        .collect();
    report.line(format!("critical fitness {fc:.6}"));
    report.line(format!(
        "mass-balance mean {}",
        balance.map_or("undefined".into(), |m| format!("{m:.6}"))
    ));
    report.line(format!("mean-field phase {}", phase.phase));
    report.line(format!("finite moments among 1..5: {moments:?}"));
    report.note("critical_fitness", json_num(fc));
    report.note("mass_balance_mean", balance.map_or(Value::Null, json_num));
    report.note("phase", phase.phase);
    report.note("finite_moments", moments);
    report.note("laws", law_notes);
    Ok(report)
}
