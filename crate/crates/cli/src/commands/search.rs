use std::fs;
use std::time::Instant;

use cubic_kuramoto::graphs::{is_connected, parse_cubic_dataset};
use cubic_kuramoto::search::{cluster_and_fit, search_graph, SearchConfig};
use cubic_kuramoto::Error;
use serde::Serialize;

use super::{scatter_header, scatter_rows};
use crate::args::{Format, Global, SearchArgs};
use crate::failure::{CmdResult, Failure};
use crate::output::{file_stem, write_csv, write_json};

#[derive(Serialize)]
struct Metadata {
    tool_version: &'static str,
    input: String,
    records: usize,
    searched: usize,
    skipped: Vec<String>,
    threads: usize,
    elapsed_seconds: f64,
}

pub fn run(global: &Global, args: &SearchArgs) -> CmdResult {
    let started = Instant::now();
    let text = fs::read(&args.input)
        .map_err(|e| Failure::input(format!("{}: {e}", args.input.display())))?;
    let label = args
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_string();
    fs::create_dir_all(&args.out)?;

    let records = parse_cubic_dataset(&text, &label);
    let take = args.limit.unwrap_or(usize::MAX);
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut seen = 0;
    for (line, parsed) in records.into_iter().take(take) {
        seen += 1;
        let g = match parsed {
            Ok(g) => g,
            Err(e @ Error::NotCubic(_)) => {
                eprintln!("warning: line {line}: {e}; skipped");
                skipped.push(format!("line {line}: {e}"));
                continue;
            }
            Err(e) => {
                return Err(Failure::input(format!(
                    "{}: line {line}: {e}",
                    args.input.display()
                )))
            }
        };
        if !is_connected(&g) {
            eprintln!("warning: line {line}: graph is disconnected; skipped");
            skipped.push(format!("line {line}: disconnected"));
            continue;
        }
        let cfg = SearchConfig {
            k_samp: args
                .k_samp
                .unwrap_or_else(|| SearchConfig::default_k_samp(g.n())),
            master_seed: global.seed,
            residual_tol: args.residual_tol,
            refine: !args.no_refine,
            t_max: args.t_max,
            dedup_energy_tol: args.dedup_energy_tol,
            accept_semidefinite: !args.strict,
        };
        if cfg.k_samp == 0 {
            return Err(Failure::usage("--ksamp must be at least 1"));
        }
        let report = search_graph(&g, &cfg)?;
        let id = g.id().unwrap_or_default();
        write_json(&args.out.join(format!("{}.json", file_stem(id))), &report)?;
        reports.push(report);
    }

    let rows = cluster_and_fit(&reports, args.cluster_gap);
    match global.format {
        Format::Csv => write_csv(
            &args.out.join("patterns.csv"),
            &scatter_header(false),
            &scatter_rows(&rows, false),
        )?,
        Format::Json => write_json(&args.out.join("patterns.json"), &rows)?,
    }
    write_json(
        &args.out.join("metadata.json"),
        &Metadata {
            tool_version: env!("CARGO_PKG_VERSION"),
            input: args.input.display().to_string(),
            records: seen,
            searched: reports.len(),
            skipped,
            threads: rayon::current_num_threads(),
            elapsed_seconds: started.elapsed().as_secs_f64(),
        },
    )?;
    eprintln!(
        "searched {} graphs, {} patterns",
        reports.len(),
        rows.len()
    );
    Ok(())
}
