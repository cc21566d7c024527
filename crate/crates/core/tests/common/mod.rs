#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use cubic_kuramoto::graphs::parse_cubic_dataset;
use cubic_kuramoto::CubicGraph;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn read_dataset(n: usize) -> Vec<u8> {
    let path = data_path(&format!("cub{n}.g6"));
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every record of the dataset for `n` vertices, ids `cub{n}:{k}`.
pub fn dataset(n: usize) -> Vec<CubicGraph> {
    parse_cubic_dataset(&read_dataset(n), &format!("cub{n}"))
        .into_iter()
        .map(|(line, g)| g.unwrap_or_else(|e| panic!("cub{n} line {line}: {e}")))
        .collect()
}

/// Graphs from the n = 10, 12 and 14 files, loaded once.
pub fn pool() -> &'static [CubicGraph] {
    static POOL: OnceLock<Vec<CubicGraph>> = OnceLock::new();
    POOL.get_or_init(|| [10, 12, 14].into_iter().flat_map(dataset).collect())
}
