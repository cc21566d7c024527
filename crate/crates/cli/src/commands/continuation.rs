use cubic_kuramoto::continuation::{trace_branch, BranchPoint, ContinuationOptions, Homotopy};
use serde::Serialize;

use super::{read_graph, read_theta};
use crate::args::{ContinueArgs, Format, Global};
use crate::failure::{CmdResult, Failure};
use crate::output::{num, write_csv, write_json};

#[derive(Serialize)]
struct Row {
    p: f64,
    energy: f64,
    min_eig: f64,
    stable: bool,
    is_fold: bool,
}

pub fn run(global: &Global, args: &ContinueArgs) -> CmdResult {
    let a = read_graph(&args.graph_a)?;
    let b = read_graph(&args.graph_b)?;
    let h = Homotopy::new(&a, &b)?;
    let (_, theta) = read_theta(&args.start)?;
    if theta.len() != h.n() {
        return Err(Failure::input(format!(
            "start has {} phases, graphs have {} vertices",
            theta.len(),
            h.n()
        )));
    }
    let opts = ContinuationOptions::default();
    let start = BranchPoint::at(&h, 1.0, theta, opts.tol)
        .map_err(|e| Failure::numerical(format!("start is not a fixed point of graph A: {e}")))?;
    let branch = trace_branch(&h, &start, args.p_to, &opts)?;

    let rows: Vec<Row> = branch
        .points
        .iter()
        .map(|bp| Row {
            p: bp.p,
            energy: h.energy(bp.p, &bp.theta).expect("length checked"),
            min_eig: bp.min_eig,
            stable: bp.is_stable(),
            is_fold: bp.is_fold,
        })
        .collect();
    match global.format {
        Format::Json => write_json(&args.out, &rows)?,
        Format::Csv => {
            let header = ["p", "energy", "min_eig", "stable", "is_fold"].map(String::from);
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.p),
                        num(r.energy),
                        num(r.min_eig),
                        u8::from(r.stable).to_string(),
                        u8::from(r.is_fold).to_string(),
                    ]
                })
                .collect();
            write_csv(&args.out, &header, &body)?;
        }
    }
    if let Some(path) = &args.path_json {
        write_json(path, &branch)?;
    }
    if let Some(f) = branch.fold() {
        eprintln!("fold at p = {}", f.p);
    }
    if !branch.complete {
        let last = branch.points.last().map_or(1.0, |b| b.p);
        return Err(Failure::numerical(format!(
            "continuation stopped at p = {last}: step fell below the minimum"
        )));
    }
    Ok(())
}
