//! Monte Carlo pattern discovery.
//!
//! Each trial draws a uniform initial condition on the torus, flows it to
//! an equilibrium, sharpens the limit with Newton, and classifies it.
//! Stable non-sync limits are bucketed by energy; bucket sizes estimate
//! basin widths. Trial seeds are a pure function of
//! `(master_seed, graph id, trial index)`, so results do not depend on
//! scheduling and growing `k_samp` only appends trials.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{
    classify, flow_to_equilibrium, newton_refine, Classification, ClassifyOptions,
    FixedPointReport, FlowOptions, FlowOutcome, NewtonOptions, PhaseState,
};
use crate::error::{Error, Result};
use crate::graphs::CubicGraph;

/// Residual at which the flow hands over to Newton when refining.
pub const HANDOFF_RESIDUAL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub k_samp: usize,
    pub master_seed: u64,
    pub residual_tol: f64,
    pub refine: bool,
    pub t_max: f64,
    pub dedup_energy_tol: f64,
    /// Count refined limits whose Jacobian is negative semidefinite but not
    /// strictly stable (extra zero eigenvalues) as marginal patterns. This
    /// is the acceptance test of the original survey; with it off only
    /// strictly stable points count.
    pub accept_semidefinite: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            k_samp: 5000,
            master_seed: 0,
            residual_tol: 1e-5,
            refine: true,
            t_max: 2000.0,
            dedup_energy_tol: 1e-6,
            accept_semidefinite: true,
        }
    }
}

impl SearchConfig {
    /// Trial count used when none is given: 5000 up to n = 12, 10000 above.
    pub fn default_k_samp(n: usize) -> usize {
        if n <= 12 {
            5000
        } else {
            10_000
        }
    }
}

/// Counter-based source of per-trial initial conditions for one graph.
#[derive(Debug, Clone)]
pub struct TrialSeeder {
    key: [u8; 32],
}

impl TrialSeeder {
    pub fn new(master_seed: u64, graph_id: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(master_seed.to_le_bytes());
        hasher.update(graph_id.as_bytes());
        Self {
            key: hasher.finalize().into(),
        }
    }

    /// I.i.d. uniform angles in `[0, 2π)` for trial `trial`.
    pub fn sample(&self, n: usize, trial: u64) -> PhaseState {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(trial);
        PhaseState::new((0..n).map(|_| rng.gen::<f64>() * TAU).collect())
    }
}

/// Initial condition for one trial of one graph.
pub fn sample_initial(n: usize, master_seed: u64, graph_id: &str, trial: u64) -> PhaseState {
    TrialSeeder::new(master_seed, graph_id).sample(n, trial)
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Sync,
    Pattern(Box<FixedPointReport>),
    /// Converged, but to a point that failed refinement or has a
    /// non-isolated / marginal spectrum.
    Degenerate,
    Unstable,
    Timeout,
}

fn try_refined(g: &CubicGraph, theta: &[f64]) -> Option<FixedPointReport> {
    let refined = newton_refine(g, theta, &NewtonOptions::default()).ok()?;
    classify(g, &refined, &ClassifyOptions::default()).ok()
}

/// Flow one initial condition to its limit and classify it.
pub fn run_trial(g: &CubicGraph, theta0: &[f64], cfg: &SearchConfig) -> Result<TrialOutcome> {
    let first_target = if cfg.refine {
        HANDOFF_RESIDUAL.max(cfg.residual_tol)
    } else {
        cfg.residual_tol
    };
    let flow = FlowOptions {
        t_max: cfg.t_max,
        residual_tol: first_target,
        sync_arc_exit: true,
        ..Default::default()
    };
    let theta = match flow_to_equilibrium(g, theta0, &flow)? {
        FlowOutcome::SyncArc { .. } => return Ok(TrialOutcome::Sync),
        FlowOutcome::Timeout { .. } => return Ok(TrialOutcome::Timeout),
        FlowOutcome::Converged { theta, .. } => theta,
    };

    let classify_opts = ClassifyOptions {
        residual_tol: cfg.residual_tol.max(first_target) * (1.0 + 1e-12),
        ..Default::default()
    };
    if !cfg.refine {
        let rep = classify(g, &theta, &classify_opts)?;
        return Ok(outcome_of(rep, false));
    }

    if let Some(rep) = try_refined(g, &theta) {
        if matches!(
            rep.classification,
            Classification::Sync | Classification::StablePattern
        ) {
            return Ok(outcome_of(rep, false));
        }
    }
    // Newton from the hand-off point failed or landed on a saddle: keep
    // flowing to the tight tolerance and try once more.
    let tight = FlowOptions {
        residual_tol: cfg.residual_tol,
        ..flow
    };
    let theta = match flow_to_equilibrium(g, &theta, &tight)? {
        FlowOutcome::SyncArc { .. } => return Ok(TrialOutcome::Sync),
        FlowOutcome::Timeout { .. } => return Ok(TrialOutcome::Timeout),
        FlowOutcome::Converged { theta, .. } => theta,
    };
    match try_refined(g, &theta) {
        Some(rep) => Ok(outcome_of(rep, cfg.accept_semidefinite)),
        None => {
            let rep = classify(g, &theta, &classify_opts)?;
            Ok(match rep.classification {
                Classification::Sync => TrialOutcome::Sync,
                Classification::Unstable => TrialOutcome::Unstable,
                _ => TrialOutcome::Degenerate,
            })
        }
    }
}

fn outcome_of(rep: FixedPointReport, accept_semidefinite: bool) -> TrialOutcome {
    match rep.classification {
        Classification::Sync => TrialOutcome::Sync,
        Classification::StablePattern => TrialOutcome::Pattern(Box::new(rep)),
        // No eigenvalue above eig_tol: negative semidefinite.
        Classification::Degenerate if accept_semidefinite => TrialOutcome::Pattern(Box::new(rep)),
        Classification::Degenerate => TrialOutcome::Degenerate,
        Classification::Unstable => TrialOutcome::Unstable,
    }
}

/// Hit count over `trials` with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinEstimate {
    pub hits: usize,
    pub trials: usize,
    pub fraction: f64,
    pub stderr: f64,
}

impl BasinEstimate {
    pub fn new(hits: usize, trials: usize) -> Self {
        let f = if trials == 0 {
            0.0
        } else {
            hits as f64 / trials as f64
        };
        let stderr = if trials == 0 {
            0.0
        } else {
            (f * (1.0 - f) / trials as f64).sqrt()
        };
        Self {
            hits,
            trials,
            fraction: f,
            stderr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternEntry {
    pub pattern: FixedPointReport,
    pub basin: BasinEstimate,
}

impl PatternEntry {
    /// Semidefinite but not strictly stable.
    pub fn is_marginal(&self) -> bool {
        self.pattern.classification == Classification::Degenerate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub graph_id: String,
    pub n: usize,
    pub k_samp: usize,
    pub master_seed: u64,
    /// Distinct patterns, by increasing energy.
    pub patterns: Vec<PatternEntry>,
    pub sync: BasinEstimate,
    pub degenerate: usize,
    pub unstable: usize,
    pub timeout: usize,
}

impl GraphReport {
    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    /// Sum of all outcome tallies; equals `k_samp`.
    pub fn tallied(&self) -> usize {
        self.sync.hits
            + self.patterns.iter().map(|p| p.basin.hits).sum::<usize>()
            + self.degenerate
            + self.unstable
            + self.timeout
    }
}

/// One group of near-equal energies.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCluster {
    /// Index (into the input) of the lowest-residual member.
    pub representative: usize,
    pub members: Vec<usize>,
}

/// Single-linkage grouping of patterns whose energies chain together with
/// gaps `<= tol`. Clusters come out by increasing energy.
pub fn dedup_by_energy(patterns: &[FixedPointReport], tol: f64) -> Vec<EnergyCluster> {
    let mut order: Vec<usize> = (0..patterns.len()).collect();
    order.sort_by(|&a, &b| {
        patterns[a]
            .energy
            .total_cmp(&patterns[b].energy)
            .then(a.cmp(&b))
    });
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last_energy = f64::NEG_INFINITY;
    for i in order {
        let e = patterns[i].energy;
        match clusters.last_mut() {
            Some(c) if e - last_energy <= tol => c.push(i),
            _ => clusters.push(vec![i]),
        }
        last_energy = e;
    }
    clusters
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            let representative = *members
                .iter()
                .min_by(|&&a, &&b| {
                    patterns[a]
                        .residual
                        .total_cmp(&patterns[b].residual)
                        .then(a.cmp(&b))
                })
                .expect("clusters are non-empty");
            EnergyCluster {
                representative,
                members,
            }
        })
        .collect()
}

/// Run `cfg.k_samp` trials on `g` and summarize them.
pub fn search_graph(g: &CubicGraph, cfg: &SearchConfig) -> Result<GraphReport> {
    let graph_id = g.id().unwrap_or("").to_string();
    let seeder = TrialSeeder::new(cfg.master_seed, &graph_id);
    let outcomes = (0..cfg.k_samp as u64)
        .into_par_iter()
        .map(|t| run_trial(g, &seeder.sample(g.n(), t), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(g, graph_id, cfg, outcomes))
}

/// Fold ordered trial outcomes into a report.
pub fn summarize(
    g: &CubicGraph,
    graph_id: String,
    cfg: &SearchConfig,
    outcomes: Vec<TrialOutcome>,
) -> GraphReport {
    let trials = outcomes.len();
    let (mut sync, mut degenerate, mut unstable, mut timeout) = (0, 0, 0, 0);
    let mut found = Vec::new();
    for o in outcomes {
        match o {
            TrialOutcome::Sync => sync += 1,
            TrialOutcome::Pattern(rep) => found.push(*rep),
            TrialOutcome::Degenerate => degenerate += 1,
            TrialOutcome::Unstable => unstable += 1,
            TrialOutcome::Timeout => timeout += 1,
        }
    }
    let patterns = dedup_by_energy(&found, cfg.dedup_energy_tol)
        .into_iter()
        .map(|c| PatternEntry {
            pattern: found[c.representative].clone(),
            basin: BasinEstimate::new(c.members.len(), trials),
        })
        .collect();
    GraphReport {
        graph_id,
        n: g.n(),
        k_samp: trials,
        master_seed: cfg.master_seed,
        patterns,
        sync: BasinEstimate::new(sync, trials),
        degenerate,
        unstable,
        timeout,
    }
}

/// One row of the pattern-count table for a vertex count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub total: usize,
    /// `counts[k]` graphs support exactly `k` patterns.
    pub counts: Vec<usize>,
    pub fractions: Vec<f64>,
    /// Binomial standard error of each fraction (for sampled datasets).
    pub fraction_stderr: Vec<f64>,
    /// Fraction of graphs with at least one pattern.
    pub any_pattern: f64,
}

/// Histogram of pattern counts, one row per vertex count present.
pub fn aggregate(reports: &[GraphReport]) -> Result<Vec<TableRow>> {
    let mut seen = HashSet::new();
    let mut by_n: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in reports {
        if !seen.insert((r.n, r.graph_id.as_str())) {
            return Err(Error::DuplicateGraphId(r.graph_id.clone()));
        }
        let counts = by_n.entry(r.n).or_default();
        let k = r.pattern_count();
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    Ok(by_n
        .into_iter()
        .map(|(n, counts)| {
            let total: usize = counts.iter().sum();
            let est: Vec<BasinEstimate> =
                counts.iter().map(|&c| BasinEstimate::new(c, total)).collect();
            TableRow {
                n,
                total,
                any_pattern: 1.0 - est[0].fraction,
                fractions: est.iter().map(|e| e.fraction).collect(),
                fraction_stderr: est.iter().map(|e| e.stderr).collect(),
                counts,
            }
        })
        .collect())
}

/// Per-pattern scatter data with energy-gap cluster labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub graph_id: String,
    pub pattern_idx: usize,
    pub energy: f64,
    pub basin_fraction: f64,
    pub basin_stderr: f64,
    pub spectral_gap: f64,
    pub n_long_links: usize,
    pub max_winding: i64,
    pub cluster_id: usize,
    /// `exp(−1.5 · energy)`, the empirical trend line.
    pub fit: f64,
}

pub const DEFAULT_CLUSTER_GAP: f64 = 2.5;

pub fn energy_fit(energy: f64) -> f64 {
    (-1.5 * energy).exp()
}

/// Label each energy with a cluster id, splitting the sorted energies at
/// gaps larger than `gap_threshold`.
pub fn cluster_energies(energies: &[f64], gap_threshold: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let mut labels = vec![0; energies.len()];
    let mut cluster = 0;
    for w in order.windows(2) {
        if energies[w[1]] - energies[w[0]] > gap_threshold {
            cluster += 1;
        }
        labels[w[1]] = cluster;
    }
    labels
}

/// Flatten every pattern of every report into scatter rows, clustered
/// jointly by energy.
pub fn cluster_and_fit(reports: &[GraphReport], gap_threshold: f64) -> Vec<ScatterRow> {
    let mut rows: Vec<ScatterRow> = reports
        .iter()
        .flat_map(|r| {
            r.patterns.iter().enumerate().map(|(i, p)| ScatterRow {
                graph_id: r.graph_id.clone(),
                pattern_idx: i,
                energy: p.pattern.energy,
                basin_fraction: p.basin.fraction,
                basin_stderr: p.basin.stderr,
                spectral_gap: p.pattern.spectral_gap,
                n_long_links: p.pattern.long_links(),
                max_winding: p.pattern.max_winding(),
                cluster_id: 0,
                fit: energy_fit(p.pattern.energy),
            })
        })
        .collect();
    let energies: Vec<f64> = rows.iter().map(|r| r.energy).collect();
    for (row, c) in rows
        .iter_mut()
        .zip(cluster_energies(&energies, gap_threshold))
    {
        row.cluster_id = c;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::LinkClass;

    fn fake(energy: f64, residual: f64) -> FixedPointReport {
        FixedPointReport {
            n: 2,
            theta: PhaseState::zeros(2),
            residual,
            energy,
            spectral_gap: 0.1,
            classification: Classification::StablePattern,
            zero_eigs: 1,
            links: vec![crate::dynamics::Link {
                u: 0,
                v: 1,
                delta: 2.0,
                class: LinkClass::Long,
            }],
            windings: vec![],
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_initial(12, 7, "g", 3);
        let b = sample_initial(12, 7, "g", 3);
        assert_eq!(a, b);
        assert_ne!(a, sample_initial(12, 7, "g", 4));
        assert_ne!(a, sample_initial(12, 7, "h", 3));
        assert_ne!(a, sample_initial(12, 8, "g", 3));
        assert!(a.iter().all(|&x| (0.0..TAU).contains(&x)));
    }

    #[test]
    fn sample_mean_is_pi() {
        let seeder = TrialSeeder::new(1, "moments");
        let draws = 10_000;
        let mut sum = 0.0;
        for t in 0..draws {
            sum += seeder.sample(1, t)[0];
        }
        let mean = sum / draws as f64;
        let sigma = TAU / 12f64.sqrt() / (draws as f64).sqrt();
        assert!((mean - std::f64::consts::PI).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn dedup_merges_within_tol() {
        let ps = vec![fake(3.5, 1e-13), fake(3.5 + 1e-9, 1e-14)];
        let c = dedup_by_energy(&ps, 1e-6);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].representative, 1);
        assert_eq!(c[0].members, vec![0, 1]);
    }

    #[test]
    fn dedup_keeps_distinct() {
        let ps = vec![fake(7.43, 0.0), fake(7.0, 0.0)];
        let c = dedup_by_energy(&ps, 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].representative, 1);
        assert!(dedup_by_energy(&[], 1e-6).is_empty());
    }

    #[test]
    fn dedup_chains() {
        let ps = vec![fake(1.0, 0.0), fake(1.0 + 8e-7, 0.0), fake(1.0 + 1.6e-6, 0.0)];
        assert_eq!(dedup_by_energy(&ps, 1e-6).len(), 1);
    }

    fn report(id: &str, n: usize, energies: &[f64]) -> GraphReport {
        GraphReport {
            graph_id: id.into(),
            n,
            k_samp: 100,
            master_seed: 0,
            patterns: energies
                .iter()
                .map(|&e| PatternEntry {
                    pattern: fake(e, 0.0),
                    basin: BasinEstimate::new(1, 100),
                })
                .collect(),
            sync: BasinEstimate::new(100 - energies.len(), 100),
            degenerate: 0,
            unstable: 0,
            timeout: 0,
        }
    }

    #[test]
    fn aggregate_histogram() {
        let reps = vec![
            report("a", 10, &[]),
            report("b", 10, &[3.0]),
            report("c", 10, &[]),
            report("d", 12, &[1.0, 2.0]),
        ];
        let rows = aggregate(&reps).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].counts, vec![2, 1]);
        assert_eq!(rows[0].total, 3);
        assert!((rows[0].any_pattern - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rows[1].counts, vec![0, 0, 1]);
        assert_eq!(reps[0].tallied(), 100);
    }

    #[test]
    fn aggregate_rejects_duplicates() {
        let reps = vec![report("a", 10, &[]), report("a", 10, &[])];
        assert_eq!(
            aggregate(&reps),
            Err(Error::DuplicateGraphId("a".into()))
        );
    }

    #[test]
    fn clustering_by_gaps() {
        assert_eq!(cluster_energies(&[7.0, 3.4, 3.6, 11.0], 2.5), vec![1, 0, 0, 2]);
        assert_eq!(cluster_energies(&[5.0], 2.5), vec![0]);
        assert!(cluster_energies(&[], 2.5).is_empty());
        let rows = cluster_and_fit(&[report("a", 10, &[0.0, 4.0])], 2.5);
        assert_eq!(rows[0].fit, 1.0);
        assert_eq!(rows[1].cluster_id, 1);
        assert_eq!(rows[1].n_long_links, 1);
    }

    #[test]
    fn basin_estimate() {
        let b = BasinEstimate::new(25, 100);
        assert_eq!(b.fraction, 0.25);
        assert!((b.stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert_eq!(BasinEstimate::new(0, 0).fraction, 0.0);
    }
}
