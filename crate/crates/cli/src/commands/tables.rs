use cubic_kuramoto::search::{aggregate, cluster_and_fit};

use super::{read_reports, scatter_header, scatter_rows};
use crate::args::{FigureArgs, Format, Global, ReportsArgs};
use crate::failure::CmdResult;
use crate::output::{num, write_csv, write_json};

pub fn stats(global: &Global, args: &ReportsArgs) -> CmdResult {
    let reports = read_reports(&args.reports)?;
    let table = aggregate(&reports)?;
    if global.format == Format::Json {
        return write_json(&args.out, &table);
    }
    let width = table.iter().map(|r| r.counts.len()).max().unwrap_or(1);
    let mut header = vec!["n".to_string(), "total".to_string()];
    header.extend((0..width).map(|k| format!("count_{k}")));
    header.extend((0..width).map(|k| format!("f_{k}")));
    header.extend((0..width).map(|k| format!("f_{k}_stderr")));
    header.push("f_any".into());
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
            let mut row = vec![r.n.to_string(), r.total.to_string()];
            row.extend((0..width).map(|k| r.counts.get(k).copied().unwrap_or(0).to_string()));
            row.extend((0..width).map(|k| num(get(&r.fractions, k))));
            row.extend((0..width).map(|k| num(get(&r.fraction_stderr, k))));
            row.push(num(r.any_pattern));
            row
        })
        .collect();
    write_csv(&args.out, &header, &rows)
}

pub fn figure(global: &Global, args: &FigureArgs) -> CmdResult {
    let reports = read_reports(&args.reports)?;
    let rows = cluster_and_fit(&reports, args.cluster_gap);
    match global.format {
        Format::Json => write_json(&args.out, &rows),
        Format::Csv => write_csv(&args.out, &scatter_header(true), &scatter_rows(&rows, true)),
    }
}
