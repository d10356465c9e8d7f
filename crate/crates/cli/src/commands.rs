use serde_json::{json, Value};
use telefid::certification::{
    adc_grid, adc_reentry, certify, sweep_adc_grid, sweep_tetrahedron, CertRecord, SweepPoint,
};
use telefid::distributions::mc_sample;
use telefid::distributions::FidelityPdf;
use telefid::exec::Execution;
use telefid::mathkit::ks_statistic;

use crate::config::{Format, Params};
use crate::error::CliError;
use crate::model::{build, priors};
use crate::output::{emit, fmt_num, json_document, Cell, Meta, Table};
use crate::validate;

/// Sends a table (CSV) or `data` (JSON) to `--out`.
pub fn write(p: &Params, meta: &Meta, table: &Table, data: Option<Value>) -> Result<(), CliError> {
    let content = match p.format() {
        Format::Csv => table.to_csv(meta)?,
        Format::Json => json_document(meta, data.unwrap_or_else(|| table.to_json_value()))?,
    };
    emit(p.out.as_deref(), &content)
}

fn meta(p: &Params, command: &str) -> Meta {
    Meta::new(command, p.seed(), p.echo())
}

/// `n` evenly spaced points on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn grid_size(p: &Params, default: usize, min: usize) -> Result<usize, CliError> {
    let n = p.grid.unwrap_or(default);
    if n < min {
        return Err(CliError::Invalid(format!("--grid must be at least {min}")));
    }
    Ok(n)
}

/// Density rows over the continuous part, then one row per atom.
pub fn pdf_rows(law: &FidelityPdf, grid: usize) -> Vec<(f64, f64, &'static str)> {
    let mut rows = Vec::new();
    if let (Some(lo), Some(hi)) = (
        law.pieces.iter().map(|pc| pc.lo).reduce(f64::min),
        law.pieces.iter().map(|pc| pc.hi).reduce(f64::max),
    ) {
        for x in linspace(lo, hi, grid) {
            rows.push((x, law.density(x), "density"));
        }
    }
    for a in &law.atoms {
        rows.push((a.location, a.mass, "atom"));
    }
    rows
}

fn pdf_json(law: &FidelityPdf, rows: &[(f64, f64, &'static str)]) -> Value {
    json!({
        "atoms": law.atoms.iter().map(|a| json!({"location": a.location, "mass": a.mass})).collect::<Vec<_>>(),
        "pieces": law.pieces.iter().map(|pc| json!({
            "lo": pc.lo,
            "hi": pc.hi,
            "kind": pc.density.kind(),
            "breaks": pc.breaks,
        })).collect::<Vec<_>>(),
        "grid": rows.iter().filter(|r| r.2 == "density").map(|r| json!({"F": r.0, "pdf": r.1})).collect::<Vec<_>>(),
    })
}

pub fn pdf(p: &Params) -> Result<(), CliError> {
    let model = build(p)?;
    let grid = grid_size(p, 1001, 2)?;
    let rows = pdf_rows(&model.law, grid);
    let mut m = meta(p, "pdf");
    m.note("mean", fmt_num(model.law.mean()?));
    m.note("variance", fmt_num(model.law.variance()?));
    let mut t = Table::new(&["F", "pdf", "marker"]);
    for &(x, v, marker) in &rows {
        t.push(vec![x.into(), v.into(), marker.into()]);
    }
    write(p, &m, &t, Some(pdf_json(&model.law, &rows)))
}

pub fn sample(p: &Params) -> Result<(), CliError> {
    let model = build(p)?;
    let n = p.n.unwrap_or(100_000);
    if n == 0 {
        return Err(CliError::Invalid("--n must be at least 1".into()));
    }
    let s = mc_sample(model.ensemble.as_ref(), n, p.seed())?;
    let mut summary = vec![("mean", s.mean())];
    if n > 1 {
        summary.push(("variance", s.variance()));
        summary.push(("std_error", s.std_error()));
    }
    // Against a law with atoms the statistic only measures ties.
    if model.law.atoms.is_empty() {
        let cdf = model.law.cdf();
        summary.push(("ks", ks_statistic(&s.sorted(), |x| cdf.eval(x))?));
    }
    let mut t = Table::new(&["row", "value"]);
    for &v in &s.values {
        t.push(vec!["draw".into(), v.into()]);
    }
    for &(k, v) in &summary {
        t.push(vec![k.into(), v.into()]);
    }
    let data = json!({
        "values": s.values,
        "summary": summary.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
    });
    write(p, &meta(p, "sample"), &t, Some(data))
}

pub fn certify_cmd(p: &Params) -> Result<(), CliError> {
    let model = build(p)?;
    let priors = priors(p, &[2.0])?;
    let mut m = meta(p, "certify");
    m.note("mean_fidelity", fmt_num(model.law.mean()?));
    let mut t = Table::new(&["prior", "gamma", "certified", "near_boundary"]);
    for prior in &priors {
        let c = certify(&model.law, prior)?;
        t.push(vec![
            prior.label().into(),
            c.gamma.into(),
            c.certified.into(),
            c.near_boundary.into(),
        ]);
    }
    write(p, &m, &t, None)
}

/// Long format: one row per (point, prior).
pub fn record_table(records: &[CertRecord]) -> Table {
    let family = records.first().map(|r| r.point);
    let point_cols: &[&'static str] = match family {
        Some(SweepPoint::AmplitudeDamping { .. }) => &["pa", "pb"],
        _ => &["w1", "w2", "w3"],
    };
    let mut cols = vec!["index"];
    cols.extend_from_slice(point_cols);
    cols.extend_from_slice(&[
        "physical",
        "separable",
        "chsh_violating",
        "mean_fidelity",
        "prior",
        "gamma",
        "certified",
        "near_boundary",
    ]);
    let mut t = Table::new(&cols);
    for (i, r) in records.iter().enumerate() {
        let point: Vec<Cell> = match r.point {
            SweepPoint::BellDiagonal { w1, w2, w3 } => vec![w1.into(), w2.into(), w3.into()],
            SweepPoint::AmplitudeDamping { pa, pb } => vec![pa.into(), pb.into()],
        };
        for o in &r.outcomes {
            let mut row: Vec<Cell> = vec![i.into()];
            row.extend(point.iter().cloned());
            row.extend([
                r.physical.into(),
                r.separable.into(),
                r.chsh_violating.into(),
                r.mean_fidelity.into(),
                o.prior.clone().into(),
                o.result.gamma.into(),
                o.result.certified.into(),
                o.result.near_boundary.into(),
            ]);
            t.push(row);
        }
    }
    t
}

/// Certified counts per prior and CHSH violators left uncertified by the last prior.
pub fn tetra_notes(m: &mut Meta, records: &[CertRecord]) {
    let Some(first) = records.first() else {
        return;
    };
    for (k, o) in first.outcomes.iter().enumerate() {
        let n = records.iter().filter(|r| r.certified(k)).count();
        m.note(&format!("certified {}", o.prior), n);
    }
    let last = first.outcomes.len() - 1;
    let chsh = records
        .iter()
        .filter(|r| r.chsh_violating && !r.certified(last))
        .count();
    m.note(
        &format!("chsh_violating_uncertified {}", first.outcomes[last].prior),
        chsh,
    );
    let leaks = records
        .iter()
        .filter(|r| r.separable && r.certified(0))
        .count();
    m.note(
        &format!("separable_certified {}", first.outcomes[0].prior),
        leaks,
    );
}

pub fn sweep_tetra(p: &Params) -> Result<(), CliError> {
    let n = p.n.unwrap_or(20_000);
    let priors = priors(p, &[2.0, 3.0, 4.0, 5.0, 6.0])?;
    let records = sweep_tetrahedron(n, p.seed(), &priors, Execution::Parallel)?;
    let mut m = meta(p, "sweep-tetra");
    tetra_notes(&mut m, &records);
    let data = serde_json::to_value(&records).map_err(|e| CliError::Invalid(e.to_string()))?;
    write(p, &m, &record_table(&records), Some(data))
}

pub fn sweep_adc(p: &Params) -> Result<(), CliError> {
    let n = grid_size(p, 41, 2)?;
    let priors = priors(p, &[2.0, 3.0, 4.0, 5.0, 6.0])?;
    let records = sweep_adc_grid(&adc_grid(n), &priors, Execution::Parallel)?;
    let mut m = meta(p, "sweep-adc");
    for (k, prior) in priors.iter().enumerate() {
        let r = adc_reentry(&records, n, k);
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        m.note(
            &format!("reentry rows (fixed pa) {}", prior.label()),
            format!("[{}]", list(&r.rows)),
        );
        m.note(
            &format!("reentry columns (fixed pb) {}", prior.label()),
            format!("[{}]", list(&r.columns)),
        );
    }
    let data = serde_json::to_value(&records).map_err(|e| CliError::Invalid(e.to_string()))?;
    write(p, &m, &record_table(&records), Some(data))
}

pub fn validate_cmd(p: &Params) -> Result<(), CliError> {
    let results = validate::run(p.seed());
    let mut t = Table::new(&["check", "passed", "detail"]);
    for r in &results {
        t.push(vec![
            r.name.into(),
            r.passed.into(),
            r.detail.clone().into(),
        ]);
    }
    write(p, &meta(p, "validate"), &t, None)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Checks(failed));
    }
    Ok(())
}
