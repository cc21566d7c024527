use std::fs;
use std::path::Path;

use cubic_kuramoto::dynamics::PhaseState;
use cubic_kuramoto::graphs::{parse_graph6_lines, CubicGraph};
use cubic_kuramoto::search::{GraphReport, ScatterRow};

use crate::failure::{CmdResult, Failure};
use crate::output::num;

pub mod analytic;
pub mod construct;
pub mod continuation;
pub mod search;
pub mod tables;
pub mod verify;

/// First record of a graph6 file as a cubic graph.
pub fn read_graph(path: &Path) -> CmdResult<CubicGraph> {
    let text = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let (line, parsed) = parse_graph6_lines(&text)
        .into_iter()
        .next()
        .ok_or_else(|| Failure::input(format!("{}: no graph6 record", path.display())))?;
    let g = parsed
        .and_then(CubicGraph::try_from)
        .map_err(|e| Failure::input(format!("{}: line {line}: {e}", path.display())))?;
    Ok(g)
}

/// Read a JSON object and return it with its `theta` array.
pub fn read_theta(path: &Path) -> CmdResult<(serde_json::Value, PhaseState)> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let theta: Vec<f64> = value
        .get("theta")
        .cloned()
        .ok_or_else(|| Failure::input(format!("{}: missing \"theta\"", path.display())))
        .and_then(|t| {
            serde_json::from_value(t)
                .map_err(|e| Failure::input(format!("{}: theta: {e}", path.display())))
        })?;
    Ok((value, PhaseState::new(theta)))
}

/// Every `GraphReport` JSON in `dir`, by file name. The metadata sidecar
/// and pattern tables are skipped.
pub fn read_reports(dir: &Path) -> CmdResult<Vec<GraphReport>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .filter(|p| {
            !matches!(
                p.file_name().and_then(|s| s.to_str()),
                Some("metadata.json" | "patterns.json")
            )
        })
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))
        })
        .collect()
}

pub fn scatter_header(with_fit: bool) -> Vec<String> {
    let mut h: Vec<String> = [
        "graph_id",
        "pattern_idx",
        "energy",
        "basin_fraction",
        "basin_stderr",
        "spectral_gap",
        "n_long_links",
        "max_winding",
        "cluster_id",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    if with_fit {
        h.insert(7, "long_link".into());
        h.push("fit".into());
    }
    h
}

pub fn scatter_rows(rows: &[ScatterRow], with_fit: bool) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let mut out = vec![
                r.graph_id.clone(),
                r.pattern_idx.to_string(),
                num(r.energy),
                num(r.basin_fraction),
                num(r.basin_stderr),
                num(r.spectral_gap),
                r.n_long_links.to_string(),
                r.max_winding.to_string(),
                r.cluster_id.to_string(),
            ];
            if with_fit {
                out.insert(7, u8::from(r.n_long_links > 0).to_string());
                out.push(num(r.fit));
            }
            out
        })
        .collect()
}
