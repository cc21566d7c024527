//! Closed-form patterns, roots, and energies for the constructed graph
//! families. These serve as exact oracles for the numerical pipeline.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::dynamics::{classify, Classification, ClassifyOptions, PhaseState};
use crate::error::{Error, Result};

/// A bracketed root of a scalar function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
}

/// Brent's method on `[lo, hi]`; requires a sign change.
pub fn brent(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<RootResult> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(RootResult {
            value: a,
            bracket: (lo, hi),
            residual: 0.0,
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            value: b,
            bracket: (lo, hi),
            residual: 0.0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BadBracket { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            break;
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Ok(RootResult {
        value: b,
        bracket: (lo, hi),
        residual: fb.abs(),
    })
}

const ROOT_XTOL: f64 = 1e-14;

fn twisted_residual_fn(m: usize) -> impl Fn(f64) -> f64 {
    let k = (m - 1) as f64;
    move |b: f64| 2.0 * (k * b).sin() + b.sin()
}

/// Root `b_m` of `2 sin((m−1)b) + sin(b)` in `(2π/m, 2π/(m−1))`, the
/// phase step of the crossed double ring on `2m` vertices.
pub fn twisted_root(m: usize) -> Result<RootResult> {
    if m < 5 {
        return Err(Error::Domain {
            family: "twisted",
            n: 2 * m,
            reason: "the root bracket only changes sign for m >= 5",
        });
    }
    brent(
        twisted_residual_fn(m),
        TAU / m as f64,
        TAU / (m - 1) as f64,
        ROOT_XTOL,
    )
}

/// Root of `2 sin(4x) + sin(x)` in `(2π/5, π/2)`.
pub fn beta_star() -> RootResult {
    brent(
        |x: f64| 2.0 * (4.0 * x).sin() + x.sin(),
        TAU / 5.0,
        FRAC_PI_2,
        ROOT_XTOL,
    )
    .expect("bracket changes sign")
}

/// Two-twist wave on the double ring: `θ_j = 4πj/n` on both rings.
///
/// With the Möbius ladder labeling (cycle `0..n`, chords `(i, i + n/2)`)
/// the same vector is the 2-twist of the `n`-cycle reduced mod 2π, so it
/// is a fixed point of both graphs.
pub fn double_ring_phases(n: usize) -> Result<PhaseState> {
    if n % 2 == 1 || n < 10 {
        return Err(Error::Domain {
            family: "double-ring",
            n,
            reason: "need even n >= 10",
        });
    }
    let h = n / 2;
    Ok(PhaseState::new(
        (0..n)
            .map(|v| 2.0 * TAU * (v % h) as f64 / n as f64)
            .collect(),
    ))
}

/// Pattern on `twisted_ring(2m)`: ring position `j` carries `j·b_m` before
/// the crossing and `−(m−j)·b_m` after it, identically on both rings.
pub fn twisted_phases(m: usize) -> Result<PhaseState> {
    let b = twisted_root(m)?.value;
    Ok(twisted_phases_with_root(m, b))
}

pub(crate) fn twisted_phases_with_root(m: usize, b: f64) -> PhaseState {
    let s = crate::graphs::twisted_swap_position(m);
    let ring: Vec<f64> = (0..m)
        .map(|j| {
            if j <= s {
                j as f64 * b
            } else {
                -((m - j) as f64) * b
            }
        })
        .collect();
    PhaseState::new(ring.iter().chain(ring.iter()).copied().collect())
}

/// Energy of an equidistant `m`-loop, `m(1 − cos(2π/m))`.
pub fn loop_energy(m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::Domain {
            family: "loop",
            n: m,
            reason: "a loop needs at least 3 vertices",
        });
    }
    let mf = m as f64;
    Ok(mf * (1.0 - (TAU / mf).cos()))
}

/// `10⌊n/10⌋(1 − cos(2π/5))`: energy of the five-ring construction.
pub fn e_energy(n: usize) -> Result<f64> {
    if n < 10 {
        return Err(Error::Domain {
            family: "high-e",
            n,
            reason: "need n >= 10",
        });
    }
    Ok(10.0 * (n / 10) as f64 * (1.0 - (TAU / 5.0).cos()))
}

/// Energy of one crossed five-ring at its pattern:
/// `8(1 − cos β*) + 4(1 − cos 4β*)`.
pub fn crossed_ring_energy() -> f64 {
    let b = beta_star().value;
    8.0 * (1.0 - b.cos()) + 4.0 * (1.0 - (4.0 * b).cos())
}

/// `⌊n/10⌋ · crossed_ring_energy()` for `n = 10m`.
pub fn f_energy(n: usize) -> Result<f64> {
    if n < 10 || n % 10 != 0 {
        return Err(Error::Domain {
            family: "high-f",
            n,
            reason: "need n = 10m with m >= 1",
        });
    }
    Ok((n / 10) as f64 * crossed_ring_energy())
}

/// The two angles of the long-link pattern on the twelve-vertex graph near
/// the double hexagon: `sin(b − a) = 2 sin a` and `sin(b − a) = sin b`.
pub fn g50_angles() -> (f64, f64) {
    let a = 2.0 * (0.25f64).asin();
    let b = PI - 15f64.sqrt().atan();
    (a, b)
}

/// Phase step of the low-energy pattern on [`two_pattern_graph`]:
/// the root `a = arccos(1/4)` of `2 sin(2a) − sin(a)`.
///
/// [`two_pattern_graph`]: crate::graphs::two_pattern_graph
pub fn two_pattern_low_angle() -> f64 {
    0.25f64.acos()
}

/// Low-energy pattern on the two-pattern graph. Edge differences are `a`
/// and `π − 2a`, with `a = arccos(1/4)`.
pub fn two_pattern_low_phases() -> PhaseState {
    let c = two_pattern_low_angle();
    let s = PI - 2.0 * c;
    let half = [0.0, -s, -s, -2.0 * s, 3.0 * c, 2.0 * c, c];
    PhaseState::new(half.iter().chain(half.iter()).copied().collect())
}

/// Higher-energy pattern on the two-pattern graph for parameters `(α, β)`:
/// edge differences `α`, `2α`, `β − α` and `π − 3β/2 + α/2`.
pub fn two_pattern_high_phases(alpha: f64, beta: f64) -> PhaseState {
    let (y, z) = (beta - alpha, alpha);
    let x = PI - 1.5 * beta + 0.5 * alpha;
    PhaseState::new(vec![
        0.0,
        -(x + y),
        -(x + y),
        0.0,
        y + 2.0 * z,
        y + z,
        y,
        2.0 * (y + z),
        -x,
        -x,
        2.0 * (y + z),
        y,
        y + z,
        y + 2.0 * z,
    ])
}

/// Residuals of the balance equations for the higher pattern:
/// `sin(β−α) − sin(2α) − sin(α)` and `sin(β−α) − 2 sin(3β/2 − α/2)`.
pub fn two_pattern_equations(alpha: f64, beta: f64) -> [f64; 2] {
    let d = (beta - alpha).sin();
    [
        d - (2.0 * alpha).sin() - alpha.sin(),
        d - 2.0 * (1.5 * beta - 0.5 * alpha).sin(),
    ]
}

/// The third angle of the higher pattern, fixed by `2γ + β − α = 2π`.
/// It equals the sum of the edge differences `α`, `β − α` and
/// `π − 3β/2 + α/2` along one face.
pub fn two_pattern_gamma(alpha: f64, beta: f64) -> f64 {
    PI - 0.5 * (beta - alpha)
}

/// A root of [`two_pattern_equations`] with the fixed point it induces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleRoot {
    pub alpha: f64,
    pub beta: f64,
    pub residual: f64,
    pub energy: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPatternAngles {
    /// `arccos(1/4)`.
    pub low: f64,
    /// The stable root.
    pub high: AngleRoot,
    /// The remaining nontrivial roots, all unstable or degenerate.
    pub others: Vec<AngleRoot>,
}

fn newton_2x2(mut alpha: f64, mut beta: f64) -> Option<(f64, f64)> {
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    for _ in 0..100 {
        let r = two_pattern_equations(alpha, beta);
        if norm(r) < 1e-15 {
            break;
        }
        let d = (beta - alpha).cos();
        let g = (1.5 * beta - 0.5 * alpha).cos();
        let j = [
            [-d - 2.0 * (2.0 * alpha).cos() - alpha.cos(), d],
            [-d + g, d - 3.0 * g],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return None;
        }
        let da = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let db = (r[1] * j[0][0] - r[0] * j[1][0]) / det;
        // Damped step: halve until the residual drops.
        let mut t = 1.0;
        loop {
            let (a1, b1) = (alpha - t * da, beta - t * db);
            if norm(two_pattern_equations(a1, b1)) < norm(r) || t < 1e-6 {
                alpha = a1;
                beta = b1;
                break;
            }
            t *= 0.5;
        }
    }
    (norm(two_pattern_equations(alpha, beta)) < 1e-12).then_some((alpha, beta))
}

/// Solves the two-parameter system by damped Newton from a grid of starts
/// and labels each nontrivial root by classifying its fixed point.
///
/// Roots are reduced to `α ∈ (0, π/2)` and `β ∈ [0, 4π)`; `β` enters as
/// `3β/2`, so its period is `4π`.
pub fn two_pattern_angles() -> TwoPatternAngles {
    let g = crate::graphs::two_pattern_graph();
    let opts = ClassifyOptions::default();
    let mut roots: Vec<AngleRoot> = Vec::new();
    const GRID: usize = 24;
    for i in 0..GRID {
        for j in 0..2 * GRID {
            let a0 = FRAC_PI_2 * (i as f64 + 0.5) / GRID as f64;
            let b0 = 2.0 * TAU * (j as f64 + 0.5) / (2 * GRID) as f64;
            let Some((a, b)) = newton_2x2(a0, b0) else {
                continue;
            };
            let a = a.rem_euclid(TAU);
            let b = b.rem_euclid(2.0 * TAU);
            if !(1e-6..FRAC_PI_2 - 1e-6).contains(&a) {
                continue;
            }
            if roots
                .iter()
                .any(|r| (r.alpha - a).abs() < 1e-8 && (r.beta - b).abs() < 1e-8)
            {
                continue;
            }
            let theta = two_pattern_high_phases(a, b);
            let Ok(report) = classify(&g, &theta, &opts) else {
                continue;
            };
            let [r0, r1] = two_pattern_equations(a, b);
            roots.push(AngleRoot {
                alpha: a,
                beta: b,
                residual: r0.hypot(r1),
                energy: report.energy,
                classification: report.classification,
            });
        }
    }
    roots.sort_by(|p, q| p.alpha.total_cmp(&q.alpha).then(p.beta.total_cmp(&q.beta)));
    let idx = roots
        .iter()
        .position(|r| r.classification == Classification::StablePattern)
        .expect("the system has a stable root");
    let high = roots.remove(idx);
    TwoPatternAngles {
        low: two_pattern_low_angle(),
        high,
        others: roots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_bad_bracket() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::BadBracket { .. })
        ));
    }

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn twisted_root_brackets() {
        for m in 5..=30 {
            let r = twisted_root(m).unwrap();
            assert!(r.bracket.0 < r.value && r.value < r.bracket.1, "m = {m}");
            assert!(r.residual < 1e-12, "m = {m}");
        }
        let r6 = twisted_root(6).unwrap();
        assert!(TAU / 6.0 < r6.value && r6.value < TAU / 5.0);
        assert!(twisted_root(4).is_err());
    }

    #[test]
    fn beta_star_matches_m5() {
        let b = beta_star();
        assert!(b.residual < 1e-12);
        assert!(TAU / 5.0 < b.value && b.value < FRAC_PI_2);
        assert!((b.value - twisted_root(5).unwrap().value).abs() < 1e-12);
        assert!((crossed_ring_energy() - 7.49165).abs() < 1e-4);
    }

    #[test]
    fn loop_energy_values() {
        assert!((loop_energy(4).unwrap() - 4.0).abs() < 1e-12);
        assert!((loop_energy(5).unwrap() - 3.4549).abs() < 1e-4);
        assert!(loop_energy(2).is_err());
        let mut prev = loop_energy(4).unwrap();
        for m in 5..200 {
            let e = loop_energy(m).unwrap();
            assert!(e < prev && e > 0.0);
            prev = e;
        }
        // The triangle exceeds the square: 3 (1 - cos 120°) = 4.5.
        assert!((loop_energy(3).unwrap() - 4.5).abs() < 1e-12);
    }

    #[test]
    fn e_and_f_energies() {
        assert!((e_energy(20).unwrap() - 13.82).abs() < 0.005);
        for m in 1..6 {
            let e = e_energy(10 * m).unwrap() / m as f64;
            assert!((e - 6.90983).abs() < 1e-5);
        }
        assert_eq!(e_energy(25).unwrap(), e_energy(20).unwrap());
        assert!(f_energy(15).is_err());
        assert!((f_energy(20).unwrap() / 2.0 - 7.49165).abs() < 1e-4);
    }

    #[test]
    fn g50_angle_identities() {
        let (a, b) = g50_angles();
        assert!((a - 0.50536).abs() < 1e-5);
        assert!((b - 1.8235).abs() < 1e-4);
        assert!(b > FRAC_PI_2);
        assert!(((b - a).sin() - 2.0 * a.sin()).abs() < 1e-12);
        assert!(((b - a).sin() - b.sin()).abs() < 1e-12);
    }

    #[test]
    fn two_pattern_low_is_stable_at_energy_7() {
        let g = crate::graphs::two_pattern_graph();
        let theta = two_pattern_low_phases();
        let a = two_pattern_low_angle();
        assert!((a - 1.31812).abs() < 1e-5);
        assert!((2.0 * (2.0 * a).sin() - a.sin()).abs() < 1e-12);
        let r = classify(&g, &theta, &ClassifyOptions::default()).unwrap();
        assert!(r.residual < 1e-12);
        assert_eq!(r.classification, Classification::StablePattern);
        assert!((r.energy - 7.0).abs() < 1e-12);
    }

    #[test]
    fn two_pattern_high_root() {
        let t = two_pattern_angles();
        assert!((t.high.alpha - 0.354475).abs() < 1e-6, "{:?}", t.high);
        assert!((t.high.beta - 1.864205).abs() < 1e-6, "{:?}", t.high);
        assert!(t.high.residual < 1e-12);
        assert!((t.high.energy - 7.43).abs() < 0.02);
        assert!(!t.others.is_empty());
        let (a, b) = (t.high.alpha, t.high.beta);
        let gamma = two_pattern_gamma(a, b);
        assert!((2.0 * gamma + b - a - TAU).abs() < 1e-12);
        assert!((gamma - (a + (b - a) + (PI - 1.5 * b + 0.5 * a))).abs() < 1e-12);
        for r in &t.others {
            assert_ne!(r.classification, Classification::StablePattern, "{r:?}");
            assert!(r.residual < 1e-12);
        }
    }

    #[test]
    fn twisted_phase_differences() {
        let m = 5;
        let b = twisted_root(m).unwrap().value;
        let theta = twisted_phases(m).unwrap();
        let g = crate::graphs::twisted_ring(2 * m).unwrap();
        let allowed = [0.0, b, (m - 1) as f64 * b];
        for &(u, v) in g.edges() {
            let d = (theta[u] - theta[v]).abs();
            assert!(
                allowed.iter().any(|a| (d - a).abs() < 1e-12),
                "edge ({u},{v}) diff {d}"
            );
        }
    }
}
