//! Deterministic constructors for the graph families with known patterns
//! (or with provably none).

use std::f64::consts::TAU;

use super::{CubicGraph, Edge};
use crate::analytic::beta_star;
use crate::dynamics::PhaseState;
use crate::error::{Error, Result};

fn ring(offset: usize, len: usize) -> impl Iterator<Item = Edge> {
    (0..len).map(move |i| (offset + i, offset + (i + 1) % len))
}

fn require_even_at_least(family: &'static str, n: usize, min: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::Domain {
            family,
            n,
            reason: "vertex count must be even",
        });
    }
    if n < min {
        return Err(Error::Domain {
            family,
            n,
            reason: "too few vertices for a stable pattern",
        });
    }
    Ok(())
}

/// Two rings on `0..n/2` and `n/2..n` joined by rungs `(j, n/2 + j)`.
pub fn double_ring(n: usize) -> Result<CubicGraph> {
    require_even_at_least("double-ring", n, 10)?;
    let h = n / 2;
    let edges = ring(0, h)
        .chain(ring(h, h))
        .chain((0..h).map(|j| (j, h + j)))
        .collect();
    CubicGraph::from_edges(n, edges)
}

/// An `n`-cycle with the diametric chords `(i, i + n/2)`.
pub fn moebius_ladder(n: usize) -> Result<CubicGraph> {
    require_even_at_least("moebius", n, 10)?;
    let h = n / 2;
    let edges = ring(0, n).chain((0..h).map(|i| (i, i + h))).collect();
    CubicGraph::from_edges(n, edges)
}

/// Ring position `s` such that the rungs at `s` and `s + 1` are crossed in
/// [`twisted_ring`] on two rings of length `m`.
pub fn twisted_swap_position(m: usize) -> usize {
    (m - 1) / 2
}

/// Double ring on `2m` vertices with the rungs at positions `s` and `s + 1`
/// crossed (outer `s` to inner `s + 1` and outer `s + 1` to inner `s`),
/// where `s = twisted_swap_position(m)`.
pub fn twisted_ring(n: usize) -> Result<CubicGraph> {
    require_even_at_least("twisted", n, 10)?;
    let m = n / 2;
    let s = twisted_swap_position(m);
    let rungs = (0..m).map(|j| {
        let partner = if j == s {
            s + 1
        } else if j == s + 1 {
            s
        } else {
            j
        };
        (j, m + partner)
    });
    let edges = ring(0, m).chain(ring(m, m)).chain(rungs).collect();
    CubicGraph::from_edges(n, edges)
}

/// Graph on `n >= 20` vertices built from `2m = 2⌊n/10⌋` five-rings carrying
/// the equidistant wave, joined only between equal-phase vertices.
///
/// Rings `0..m` and `m..2m` (the primed copies) are paired letter by letter:
/// letter `l` joins ring `i` to ring `m + (i + l) mod m`. For `n = 10m + 2r`
/// the first `r` letters each get a spliced pair of extra vertices.
pub fn high_energy_e(n: usize) -> Result<(CubicGraph, PhaseState)> {
    require_even_at_least("high-e", n, 20)?;
    let m = n / 10;
    let extra_pairs = (n - 10 * m) / 2;
    let vertex = |ring: usize, letter: usize| 5 * ring + letter;

    let mut edges: Vec<Edge> = (0..2 * m).flat_map(|r| ring(5 * r, 5)).collect();
    let mut pairings: Vec<Vec<Edge>> = (0..5)
        .map(|l| {
            (0..m)
                .map(|i| (vertex(i, l), vertex(m + (i + l) % m, l)))
                .collect()
        })
        .collect();

    let mut phases: Vec<f64> = (0..10 * m).map(|v| TAU * (v % 5) as f64 / 5.0).collect();
    for (l, pairing) in pairings.iter_mut().enumerate().take(extra_pairs) {
        // Break the first two pairs of this letter and splice in x1 - x2.
        let (a1, a2) = pairing[0];
        let (a3, a4) = pairing[1];
        pairing.drain(0..2);
        let x1 = phases.len();
        let x2 = x1 + 1;
        let phase = TAU * l as f64 / 5.0;
        phases.extend([phase, phase]);
        edges.extend([(x1, a1), (x1, a3), (x2, a2), (x2, a4), (x1, x2)]);
    }
    edges.extend(pairings.into_iter().flatten());

    let g = CubicGraph::from_edges(n, edges)?;
    Ok((g, PhaseState::new(phases)))
}

/// `m` copies of the crossed five-ring (`twisted_ring(10)`) carrying its
/// pattern, chained by crossing one rung between consecutive copies.
///
/// Copies `c` and `c + 1` exchange rung partners at outer position `c mod 5`.
pub fn high_energy_f(m: usize) -> Result<(CubicGraph, PhaseState)> {
    if m < 1 {
        return Err(Error::Domain {
            family: "high-f",
            n: 0,
            reason: "need at least one copy",
        });
    }
    let base = twisted_ring(10)?;
    let base_phases = crate::analytic::twisted_phases_with_root(5, beta_star().value);
    let n = 10 * m;
    let mut edges: Vec<Edge> = (0..m)
        .flat_map(|c| base.edges().iter().map(move |&(u, v)| (10 * c + u, 10 * c + v)))
        .collect();
    let rung_partner = |outer: usize| -> usize {
        *base
            .neighbors(outer)
            .iter()
            .find(|&&w| w >= 5)
            .expect("every outer vertex has one rung")
    };
    for c in 0..m.saturating_sub(1) {
        let p = c % 5;
        let q = rung_partner(p);
        let (a, a_in) = (10 * c + p, 10 * c + q);
        let (b, b_in) = (10 * (c + 1) + p, 10 * (c + 1) + q);
        for e in edges.iter_mut() {
            if *e == (a, a_in) {
                *e = (a, b_in);
            } else if *e == (b, b_in) {
                *e = (a_in, b);
            }
        }
    }
    let phases: Vec<f64> = (0..n).map(|v| base_phases[v % 10]).collect();
    let g = CubicGraph::from_edges(n, edges)?;
    Ok((g, PhaseState::new(phases)))
}

/// Path `0..n` closed off by short chords so that every chordless cycle has
/// at most four vertices.
///
/// Head chords `(0,2), (0,3), (1,4)` and their mirror image at the tail use
/// up the five vertices at each end. The `n - 10` interior vertices are
/// covered left to right by 4-blocks `{a..a+3}` with chords `(a,a+2),
/// (a+1,a+3)`, and, when `(n - 10) mod 4 == 2`, one final 6-block with
/// chords `(a,a+2), (a+1,a+4), (a+3,a+5)`.
pub fn patternless_chain(n: usize) -> Result<CubicGraph> {
    let unsupported = |reason| Error::Domain {
        family: "chain",
        n,
        reason,
    };
    if n % 2 == 1 {
        return Err(unsupported("vertex count must be even"));
    }
    if n != 10 && n < 14 {
        return Err(unsupported("supported sizes are 10 and even n >= 14"));
    }
    let last = n - 1;
    let mut edges: Vec<Edge> = (0..last).map(|i| (i, i + 1)).collect();
    edges.extend([(0, 2), (0, 3), (1, 4)]);
    edges.extend([(last, last - 2), (last, last - 3), (last - 1, last - 4)]);

    let interior = n - 10;
    let six_block = interior % 4 == 2;
    let fours = (interior - if six_block { 6 } else { 0 }) / 4;
    let mut a = 5;
    for _ in 0..fours {
        edges.extend([(a, a + 2), (a + 1, a + 3)]);
        a += 4;
    }
    if six_block {
        edges.extend([(a, a + 2), (a + 1, a + 4), (a + 3, a + 5)]);
    }
    CubicGraph::from_edges(n, edges)
}

/// The twelve-vertex graph carrying the long-link pattern, labeled as a
/// three-edge rewiring of `double_ring(12)`: edges `(0,1), (0,6), (2,8)`
/// are replaced by `(0,2), (0,8), (1,6)`.
pub fn g50_rewired() -> CubicGraph {
    let removed = [(0, 1), (0, 6), (2, 8)];
    let base = double_ring(12).expect("12 is supported");
    let edges = base
        .edges()
        .iter()
        .copied()
        .filter(|e| !removed.contains(e))
        .chain([(0, 2), (0, 8), (1, 6)])
        .collect();
    CubicGraph::from_edges(12, edges)
        .expect("rewiring keeps every degree at 3")
        .with_id("g50")
}

/// Fourteen-vertex cubic graph with two stable patterns (energies 7.0 and
/// about 7.43), in the vertex labeling of its graph6 record.
pub const TWO_PATTERN_GRAPH6: &str = "M??CBBOkBOB_B_@o?";

pub fn two_pattern_graph() -> CubicGraph {
    let g = super::parse_graph6(TWO_PATTERN_GRAPH6.as_bytes()).expect("valid record");
    CubicGraph::try_from(g)
        .expect("record is cubic")
        .with_id("two-pattern")
}
