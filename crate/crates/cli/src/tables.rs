use std::io::Write;
use std::process::ExitCode;

use iontrap::atomic::IonDatabase;
use iontrap::bounds::{reproduce_table_with, Table, TableId, TableSettings};
use serde::Serialize;

use crate::bound::{beta, leak, overheads};
use crate::cli::{Format, TablesArgs};
use crate::config::FileConfig;
use crate::output::{g6, to_json_6};
use crate::{parse_enum, pick, CliError, EXIT_TOLERANCE};

#[derive(Serialize)]
struct CsvRow<'a> {
    table: String,
    ion: &'a str,
    eta: String,
    computed: String,
    published: String,
    rel_deviation: String,
    within_tolerance: bool,
}

fn table_id(s: &str) -> TableId {
    match s.to_ascii_uppercase().as_str() {
        "T1" => TableId::T1,
        "T2" => TableId::T2,
        "T3" => TableId::T3,
        _ => TableId::T4,
    }
}

fn signed_percent(x: f64) -> String {
    format!("{}{}%", if x >= 0.0 { "+" } else { "" }, g6(100.0 * x))
}

fn render_text(t: &Table) -> String {
    let mut s = format!(
        "{:?}: {} (tolerance ±{}%)\n{:<5} {:<6} {:<10} {:<10} {:<10}\n",
        t.id,
        t.id.title(),
        g6(100.0 * t.tolerance),
        "ion",
        "eta",
        "computed",
        "published",
        "deviation"
    );
    for row in &t.rows {
        for c in &row.cells {
            s += &format!(
                "{:<5} {:<6} {:<10} {:<10} {:<10} {}\n",
                row.ion,
                g6(c.eta),
                g6(c.computed),
                g6(c.published),
                signed_percent(c.rel_deviation),
                if c.within_tolerance { "ok" } else { "OUT" }
            );
        }
    }
    s
}

fn render_csv(t: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &t.rows {
        for c in &row.cells {
            w.serialize(CsvRow {
                table: format!("{:?}", t.id),
                ion: &row.ion,
                eta: g6(c.eta),
                computed: g6(c.computed),
                published: g6(c.published),
                rel_deviation: g6(c.rel_deviation),
                within_tolerance: c.within_tolerance,
            })
            .map_err(|e| CliError::Internal(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn run(args: &TablesArgs, file: &FileConfig, db: &IonDatabase) -> Result<ExitCode, CliError> {
    let id = table_id(&args.table);
    let mut settings = TableSettings::default();
    if let Some(q) = overheads(
        false,
        pick(args.overheads.q, file.q),
        pick(args.overheads.c, file.c),
        pick(args.overheads.k, file.k),
    ) {
        settings.qec = q;
    }
    if let Some(eps) = pick(args.epsilon, file.epsilon) {
        settings.epsilon = eps;
    }
    if let Some(b) = pick(args.raman_beta, parse_enum("raman_beta", file.raman_beta.as_ref())?) {
        settings.raman_beta = beta(b);
    }
    if let Some(b) = pick(args.qec_raman_beta, parse_enum("qec_raman_beta", file.qec_raman_beta.as_ref())?) {
        settings.qec_raman_beta = beta(b);
    }
    if let Some(l) = pick(args.leak_branch, parse_enum("leak_branch", file.leak_branch.as_ref())?) {
        settings.leak_branch = leak(l);
    }
    let table = reproduce_table_with(id, db, &settings).map_err(|e| CliError::Input(e.to_string()))?;

    let body = match args.format {
        Format::Text => render_text(&table),
        Format::Csv => render_csv(&table)?,
        Format::Json => to_json_6(&table) + "\n",
    };
    match &args.out {
        Some(path) => std::fs::File::create(path)
            .and_then(|mut f| f.write_all(body.as_bytes()))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }

    let failing = table.failing_cells();
    if failing.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for row in &table.rows {
        for c in row.cells.iter().filter(|c| !c.within_tolerance) {
            eprintln!(
                "outside tolerance: {:?} {} eta={} computed={} published={}",
                table.id,
                row.ion,
                g6(c.eta),
                g6(c.computed),
                g6(c.published)
            );
        }
    }
    Ok(ExitCode::from(EXIT_TOLERANCE))
}
