mod common;

use cubic_kuramoto::dynamics::{classify, Classification, ClassifyOptions};
use cubic_kuramoto::graphs::{double_ring, moebius_ladder, parse_graph6, twisted_ring};
use cubic_kuramoto::search::{search_graph, GraphReport, SearchConfig};
use cubic_kuramoto::CubicGraph;

fn search(g: CubicGraph, id: &str, k_samp: usize) -> GraphReport {
    let cfg = SearchConfig { k_samp, ..Default::default() };
    search_graph(&g.with_id(id), &cfg).unwrap()
}

/// `|fraction − expected| ≤ 3σ`, with σ the binomial error at `expected`.
fn within_3_sigma(hits: usize, trials: usize, expected: f64) -> bool {
    let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
    (hits as f64 / trials as f64 - expected).abs() <= 3.0 * sigma
}

#[test]
fn double_ring_10_basin_is_about_two_percent() {
    let r = search(double_ring(10).unwrap(), "dr10", 5000);
    assert_eq!(r.pattern_count(), 1);
    let p = &r.patterns[0];
    assert!(p.pattern.is_stable_pattern());
    assert!(within_3_sigma(p.basin.hits, 5000, 0.02), "{:?}", p.basin);
    assert!(r.sync.fraction > 0.96);
}

#[test]
fn moebius_10_matches_double_ring_10() {
    let dr = search(double_ring(10).unwrap(), "dr10", 5000);
    let mo = search(moebius_ladder(10).unwrap(), "mo10", 5000);
    assert_eq!(mo.pattern_count(), 1);
    assert!((dr.patterns[0].pattern.energy - mo.patterns[0].pattern.energy).abs() < 1e-9);
    let (a, b) = (&dr.patterns[0].basin, &mo.patterns[0].basin);
    assert!((a.fraction - b.fraction).abs() <= 3.0 * a.stderr.hypot(b.stderr));
}

#[test]
fn twisted_ring_10_basin_is_about_half_a_percent() {
    let r = search(twisted_ring(10).unwrap(), "tw10", 10_000);
    assert_eq!(r.pattern_count(), 1);
    assert!(within_3_sigma(r.patterns[0].basin.hits, 10_000, 0.005), "{:?}", r.patterns[0].basin);
}

#[test]
fn k4_only_synchronizes() {
    let g = CubicGraph::try_from(parse_graph6(b"C~").unwrap()).unwrap();
    let r = search(g, "k4", 1000);
    assert_eq!(r.pattern_count(), 0);
    assert_eq!(r.sync.hits + r.unstable + r.degenerate, 1000);
    assert_eq!(r.timeout, 0);
}

#[test]
fn outcome_tallies_cover_every_trial() {
    for g in common::dataset(10).into_iter().take(8) {
        let r = search_graph(&g, &SearchConfig { k_samp: 400, ..Default::default() }).unwrap();
        assert_eq!(r.tallied(), 400);
        let total = r.sync.fraction
            + r.patterns.iter().map(|p| p.basin.fraction).sum::<f64>()
            + (r.degenerate + r.unstable + r.timeout) as f64 / 400.0;
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn more_trials_never_lose_patterns() {
    // Trials are seeded by index, so a longer run extends a shorter one.
    for g in common::dataset(12).into_iter().take(40) {
        let short = search_graph(&g, &SearchConfig { k_samp: 300, ..Default::default() }).unwrap();
        let long = search_graph(&g, &SearchConfig { k_samp: 1200, ..Default::default() }).unwrap();
        assert!(long.pattern_count() >= short.pattern_count());
        for p in &short.patterns {
            assert!(
                long.patterns.iter().any(|q| (q.pattern.energy - p.pattern.energy).abs() < 1e-6),
                "{}: lost pattern at energy {}",
                g.id().unwrap(),
                p.pattern.energy
            );
        }
    }
}

#[test]
fn reported_patterns_reverify() {
    let opts = ClassifyOptions::default();
    for g in common::dataset(12) {
        let r = search_graph(&g, &SearchConfig { k_samp: 1000, ..Default::default() }).unwrap();
        for p in &r.patterns {
            let again = classify(&g, &p.pattern.theta, &opts).unwrap();
            assert_eq!(again.classification, p.pattern.classification);
            if p.is_marginal() {
                assert_eq!(again.classification, Classification::Degenerate);
                assert!(p.pattern.spectral_gap.abs() < 1e-6);
            } else {
                assert!(again.is_stable_pattern(), "{}", g.id().unwrap());
                assert!(again.residual < 1e-12);
                assert!(again.spectral_gap > 1e-6);
            }
            assert!(again.energy > 0.0);
        }
    }
}

#[test]
fn strict_mode_drops_marginal_patterns() {
    let g = &common::dataset(12);
    let strict = SearchConfig { k_samp: 1000, accept_semidefinite: false, ..Default::default() };
    for g in g.iter().take(30) {
        let r = search_graph(g, &strict).unwrap();
        assert!(r.patterns.iter().all(|p| p.pattern.is_stable_pattern()));
    }
}
