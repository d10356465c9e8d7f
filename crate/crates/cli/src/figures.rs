//! Data behind each figure, plus a JSON manifest describing the files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use telefid::certification::{
    adc_grid, adc_reentry, sweep_adc_grid, sweep_points, sweep_tetrahedron, vertex_region_points,
    ImportancePrior,
};
use telefid::distributions::{adc_mean, adc_support, pdf_adc, pdf_phase_flip};
use telefid::exec::Execution;
use telefid::states::Bell;

use crate::commands::{linspace, pdf_rows, record_table, tetra_notes};
use crate::config::{Format, Params};
use crate::error::CliError;
use crate::model::priors;
use crate::output::{fmt_num, json_document, Meta, Table, VERSION};

/// `p*` held fixed on the other half in figure 3.
const FIG3_FIXED: f64 = 0.85;
const FIG3_VARIED: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
/// Average fidelity of the surface highlighted in figure 6.
const FIG6_SURFACE: f64 = 0.8;
const FIG6_BAND: f64 = 5e-3;

#[derive(Debug, Serialize)]
struct FileEntry {
    path: String,
    format: &'static str,
    columns: BTreeMap<&'static str, &'static str>,
}

#[derive(Debug, Serialize)]
struct Manifest {
    figure: u8,
    tool: &'static str,
    version: &'static str,
    seed: u64,
    params: BTreeMap<String, String>,
    files: Vec<FileEntry>,
    summary: BTreeMap<String, String>,
}

const RECORD_COLUMNS: &[(&str, &str)] = &[
    ("index", "sweep point index"),
    ("physical", "resource is a valid state"),
    ("separable", "resource is separable"),
    ("chsh_violating", "resource violates the CHSH inequality"),
    ("mean_fidelity", "average fidelity"),
    ("prior", "importance prior label"),
    ("gamma", "certification functional for this prior"),
    ("certified", "gamma > 1e-12"),
    ("near_boundary", "|gamma| < 1e-9"),
];

struct Output {
    table: Table,
    name: String,
    columns: Vec<(&'static str, &'static str)>,
}

struct Figure {
    params: BTreeMap<String, String>,
    summary: BTreeMap<String, String>,
    outputs: Vec<Output>,
}

impl Figure {
    fn new(p: &Params) -> Self {
        Figure {
            params: p.echo(),
            summary: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.insert(k.to_owned(), v.to_string());
    }

    fn note(&mut self, k: &str, v: impl ToString) {
        self.summary.insert(k.to_owned(), v.to_string());
    }

    fn output(&mut self, name: String, table: Table, columns: &[(&'static str, &'static str)]) {
        self.outputs.push(Output {
            table,
            name,
            columns: columns.to_vec(),
        });
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn fig1(p: &Params, f: &mut Figure) -> Result<(), CliError> {
    let cs = p.c.clone().unwrap_or_else(|| vec![0.2, 0.5, 0.9]);
    let grid = p.grid.unwrap_or(1001);
    f.param("c", list(&cs));
    f.param("grid", grid);
    let mut t = Table::new(&["c", "F", "pdf", "marker"]);
    for &c in &cs {
        // c = 1 − (1 − pA)(1 − pB) with pB = 0.
        let law = pdf_phase_flip(c, 0.0)?;
        f.note(
            &format!("support c={c}"),
            format!(
                "[{}, {}]",
                fmt_num(law.support().0),
                fmt_num(law.support().1)
            ),
        );
        for (x, v, m) in pdf_rows(&law, grid) {
            t.push(vec![c.into(), x.into(), v.into(), m.into()]);
        }
    }
    f.output(
        "fig1".into(),
        t,
        &[
            ("c", "phase-flip contraction 1 - (1 - pA)(1 - pB)"),
            ("F", "fidelity"),
            ("pdf", "density at F, or atom mass"),
            ("marker", "density | atom"),
        ],
    );
    Ok(())
}

fn fig2(p: &Params, f: &mut Figure) -> Result<(), CliError> {
    let n = p.grid.unwrap_or(41);
    f.param("grid", n);
    let mut t = Table::new(&["pa", "pb", "fmin_k0", "fmax_k0", "fmin_k1", "fmax_k1"]);
    let mut k_gap = 0.0_f64;
    let mut order_ok = true;
    for (pa, pb) in adc_grid(n) {
        let (lo0, hi0) = adc_support(pa, pb, 0)?;
        let (lo1, hi1) = adc_support(pa, pb, 1)?;
        k_gap = k_gap.max((lo0 - lo1).abs()).max((hi0 - hi1).abs());
        order_ok &= lo0 <= hi0 && lo1 <= hi1;
        t.push(vec![
            pa.into(),
            pb.into(),
            lo0.into(),
            hi0.into(),
            lo1.into(),
            hi1.into(),
        ]);
    }
    f.note("max |F_k0 - F_k1|", fmt_num(k_gap));
    f.note("fmin <= fmax everywhere", order_ok);
    f.output(
        "fig2".into(),
        t,
        &[
            ("pa", "amplitude damping on Alice's half"),
            ("pb", "amplitude damping on Bob's half"),
            ("fmin_k0", "smallest fidelity, outcome class 0"),
            ("fmax_k0", "largest fidelity, outcome class 0"),
            ("fmin_k1", "smallest fidelity, outcome class 1"),
            ("fmax_k1", "largest fidelity, outcome class 1"),
        ],
    );
    Ok(())
}

fn fig3(p: &Params, f: &mut Figure) -> Result<(), CliError> {
    let grid = p.grid.unwrap_or(1001);
    f.param("grid", grid);
    f.param("fixed", FIG3_FIXED);
    f.param("varied", list(&FIG3_VARIED));
    let mut curves = Table::new(&["panel", "pa", "pb", "F", "pdf", "marker"]);
    let mut stats = Table::new(&["panel", "pa", "pb", "mean", "std"]);
    let mut worst = 0.0_f64;
    for &x in &FIG3_VARIED {
        let mut means = Vec::new();
        for (panel, pa, pb) in [("upper", x, FIG3_FIXED), ("lower", FIG3_FIXED, x)] {
            let law = pdf_adc(pa, pb)?;
            let mean = adc_mean(pa, pb)?;
            means.push(mean);
            stats.push(vec![
                panel.into(),
                pa.into(),
                pb.into(),
                mean.into(),
                law.variance()?.sqrt().into(),
            ]);
            for (fx, v, m) in pdf_rows(&law, grid) {
                curves.push(vec![
                    panel.into(),
                    pa.into(),
                    pb.into(),
                    fx.into(),
                    v.into(),
                    m.into(),
                ]);
            }
        }
        worst = worst.max((means[0] - means[1]).abs());
    }
    f.note("max |mean upper - mean lower| per column", fmt_num(worst));
    let ids = [
        (
            "panel",
            "upper: pB fixed, pA varied; lower: pA fixed, pB varied",
        ),
        ("pa", "amplitude damping on Alice's half"),
        ("pb", "amplitude damping on Bob's half"),
    ];
    let mut cols = ids.to_vec();
    cols.extend([
        ("F", "fidelity"),
        ("pdf", "density at F, or atom mass"),
        ("marker", "density | atom"),
    ]);
    f.output("fig3".into(), curves, &cols);
    let mut cols = ids.to_vec();
    cols.extend([
        ("mean", "average fidelity"),
        ("std", "standard deviation of the fidelity"),
    ]);
    f.output("fig3_stats".into(), stats, &cols);
    Ok(())
}

fn fig4(p: &Params, f: &mut Figure) -> Result<(), CliError> {
    let grid = p.grid.unwrap_or(1001);
    let priors = priors(p, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0])?;
    f.param("grid", grid);
    let mut t = Table::new(&["prior", "F", "W"]);
    for prior in &priors {
        for x in linspace(0.0, 1.0, grid) {
            t.push(vec![prior.label().into(), x.into(), prior.eval(x)?.into()]);
        }
    }
    f.output(
        "fig4".into(),
        t,
        &[
            ("prior", "importance prior label"),
            ("F", "fidelity"),
            ("W", "prior density at F"),
        ],
    );
    Ok(())
}

fn record_columns(point: &[(&'static str, &'static str)]) -> Vec<(&'static str, &'static str)> {
    let mut cols = point.to_vec();
    cols.extend_from_slice(RECORD_COLUMNS);
    cols
}

const BELL_POINT: &[(&str, &str)] = &[
    ("w1", "correlation matrix diagonal, x"),
    ("w2", "correlation matrix diagonal, y"),
    ("w3", "correlation matrix diagonal, z"),
];

fn fig5(p: &Params, f: &mut Figure) -> Result<(), CliError> {
    let n = p.n.unwrap_or(20_000);
    let priors = priors(p, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0])?;
    f.param("n", n);
    let records = sweep_tetrahedron(n, p.seed(), &priors, Execution::Parallel)?;
    let mut meta = Meta::new("", 0, BTreeMap::new());
    tetra_notes(&mut meta, &records);
    f.summary.extend(meta.notes);
    f.output(
        "fig5".into(),
        record_table(&records),
        &record_columns(BELL_POINT),
    );
    Ok(())
}

fn fig6(p: &Params, f: &mut Figure, vertex: Bell) -> Result<(), CliError> {
    let n = p.n.unwrap_or(20_000);
    let priors = match &p.alpha {
        Some(_) => priors(p, &[])?,
        None => vec![ImportancePrior::beta(8.0, p.beta.unwrap_or(1.0))?],
    };
    f.param("n", n);
    f.param("vertex", vertex.index());
    f.param("surface", FIG6_SURFACE);
    f.param("band", FIG6_BAND);
    let points = vertex_region_points(n, p.seed(), vertex);
    let records = sweep_points(&points, &priors, Execution::Parallel)?;
    let mut t = record_table(&records);
    t.columns.push("on_surface");
    let flags = records.iter().flat_map(|r| {
        std::iter::repeat_n(
            (r.mean_fidelity - FIG6_SURFACE).abs() <= FIG6_BAND,
            r.outcomes.len(),
        )
    });
    for (row, flag) in t.rows.iter_mut().zip(flags) {
        row.push(flag.into());
    }
    let on = records
        .iter()
        .filter(|r| (r.mean_fidelity - FIG6_SURFACE).abs() <= FIG6_BAND)
        .count();
    f.note("records on the surface", on);
    for (k, o) in records
        .first()
        .map(|r| r.outcomes.as_slice())
        .unwrap_or_default()
        .iter()
        .enumerate()
    {
        let cert = records
            .iter()
            .filter(|r| (r.mean_fidelity - FIG6_SURFACE).abs() <= FIG6_BAND && r.certified(k))
            .count();
        f.note(&format!("on the surface and certified {}", o.prior), cert);
    }
    let mut cols = record_columns(BELL_POINT);
    cols.push(("on_surface", "|mean_fidelity - 0.8| <= 5e-3"));
    f.output("fig6".into(), t, &cols);
    Ok(())
}

fn fig7(p: &Params, f: &mut Figure) -> Result<(), CliError> {
    let n = p.grid.unwrap_or(41);
    let priors = priors(p, &[2.0, 3.0, 4.0, 5.0, 6.0])?;
    f.param("grid", n);
    let records = sweep_adc_grid(&adc_grid(n), &priors, Execution::Parallel)?;
    for (k, prior) in priors.iter().enumerate() {
        let r = adc_reentry(&records, n, k);
        f.note(&format!("reentry rows {}", prior.label()), r.rows.len());
        f.note(
            &format!("reentry columns {}", prior.label()),
            r.columns.len(),
        );
    }
    f.output(
        "fig7".into(),
        record_table(&records),
        &record_columns(&[
            ("pa", "amplitude damping on Alice's half"),
            ("pb", "amplitude damping on Bob's half"),
        ]),
    );
    Ok(())
}

pub fn figure(p: &Params, id: u8, vertex: Bell) -> Result<(), CliError> {
    let mut f = Figure::new(p);
    match id {
        1 => fig1(p, &mut f)?,
        2 => fig2(p, &mut f)?,
        3 => fig3(p, &mut f)?,
        4 => fig4(p, &mut f)?,
        5 => fig5(p, &mut f)?,
        6 => fig6(p, &mut f, vertex)?,
        7 => fig7(p, &mut f)?,
        _ => {
            return Err(CliError::Invalid(format!(
                "figure id must be 1..7, got {id}"
            )))
        }
    }
    let dir = p.out.clone().unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    let (ext, format) = match p.format() {
        Format::Csv => ("csv", "csv"),
        Format::Json => ("json", "json"),
    };
    let mut meta = Meta::new(&format!("figure {id}"), p.seed(), f.params.clone());
    meta.notes = f.summary.clone();
    let mut files = Vec::new();
    for out in &f.outputs {
        let file = format!("{}.{ext}", out.name);
        let content = match p.format() {
            Format::Csv => out.table.to_csv(&meta)?,
            Format::Json => json_document(&meta, out.table.to_json_value())?,
        };
        write_file(&dir.join(&file), &content)?;
        files.push(FileEntry {
            path: file,
            format,
            columns: out.columns.iter().copied().collect(),
        });
    }
    let manifest = Manifest {
        figure: id,
        tool: "telefid",
        version: VERSION,
        seed: p.seed(),
        params: f.params,
        files,
        summary: f.summary,
    };
    let mut text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Invalid(e.to_string()))?;
    text.push('\n');
    write_file(&dir.join(format!("fig{id}.manifest.json")), &text)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)?;
    Ok(())
}
