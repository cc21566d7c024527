//! The Kuramoto gradient flow on a cubic graph: field, energy, Jacobian,
//! integration to equilibrium, Newton refinement, and fixed-point
//! classification.
//!
//! ```text
//! dθ_v/dt = Σ_{w ∈ N(v)} sin(θ_w − θ_v) = −∂Φ/∂θ_v,
//! Φ(θ)    = Σ_{(v,w) ∈ E} (1 − cos(θ_v − θ_w)).
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::Deref;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{fundamental_cycles, is_graph_cycle, CubicGraph};

/// Phase angles in radians, one per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseState(Vec<f64>);

impl PhaseState {
    pub fn new(theta: Vec<f64>) -> Self {
        Self(theta)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn gauge_normalized(&self) -> Self {
        gauge_normalize(&self.0)
    }
}

impl Deref for PhaseState {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for PhaseState {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Wrap an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Shift so that vertex 0 sits at angle 0 and reduce every entry to
/// `[0, 2π)`.
pub fn gauge_normalize(theta: &[f64]) -> PhaseState {
    let Some(&base) = theta.first() else {
        return PhaseState(Vec::new());
    };
    PhaseState(
        theta
            .iter()
            .map(|&t| {
                let y = (t - base).rem_euclid(TAU);
                // rem_euclid can round up to exactly TAU for tiny negatives.
                if y >= TAU {
                    0.0
                } else {
                    y
                }
            })
            .collect(),
    )
}

fn check_len(g: &CubicGraph, theta: &[f64]) -> Result<()> {
    if theta.len() == g.n() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: g.n(),
            found: theta.len(),
        })
    }
}

pub(crate) fn field_into(g: &CubicGraph, theta: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        let tv = theta[v];
        *o = g.neighbors(v).iter().map(|&w| (theta[w] - tv).sin()).sum();
    }
}

pub(crate) fn energy_unchecked(g: &CubicGraph, theta: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|&(u, v)| 1.0 - (theta[u] - theta[v]).cos())
        .sum()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// The vector field at `theta`.
pub fn field(g: &CubicGraph, theta: &[f64]) -> Result<Vec<f64>> {
    check_len(g, theta)?;
    let mut out = vec![0.0; g.n()];
    field_into(g, theta, &mut out);
    Ok(out)
}

/// ℓ² norm of the vector field.
pub fn residual(g: &CubicGraph, theta: &[f64]) -> Result<f64> {
    Ok(norm(&field(g, theta)?))
}

/// The potential Φ whose negative gradient is the field.
pub fn energy(g: &CubicGraph, theta: &[f64]) -> Result<f64> {
    check_len(g, theta)?;
    Ok(energy_unchecked(g, theta))
}

/// Jacobian of the field: `cos(θ_w − θ_v)` on edges, rows summing to zero.
pub fn jacobian(g: &CubicGraph, theta: &[f64]) -> Result<DMatrix<f64>> {
    check_len(g, theta)?;
    let n = g.n();
    let mut jac = DMatrix::zeros(n, n);
    for &(u, v) in g.edges() {
        let c = (theta[u] - theta[v]).cos();
        jac[(u, v)] = c;
        jac[(v, u)] = c;
        jac[(u, u)] -= c;
        jac[(v, v)] -= c;
    }
    Ok(jac)
}

/// Number of 2π wraps of the phases around a cycle of the graph.
pub fn winding_number(g: &CubicGraph, theta: &[f64], cycle: &[usize]) -> Result<i64> {
    check_len(g, theta)?;
    if !is_graph_cycle(g, cycle) {
        return Err(Error::NotACycle);
    }
    Ok(winding_unchecked(theta, cycle))
}

fn winding_unchecked(theta: &[f64], cycle: &[usize]) -> i64 {
    let total: f64 = cycle
        .iter()
        .zip(cycle.iter().cycle().skip(1))
        .map(|(&a, &b)| wrap_angle(theta[b] - theta[a]))
        .sum();
    (total / TAU).round() as i64
}

/// True if every phase lies in an open arc shorter than π. From such a
/// state the flow on a connected graph converges to sync.
pub fn within_open_semicircle(theta: &[f64]) -> bool {
    if theta.len() < 2 {
        return true;
    }
    let mut wrapped: Vec<f64> = theta.iter().map(|t| t.rem_euclid(TAU)).collect();
    wrapped.sort_unstable_by(f64::total_cmp);
    let wrap_gap = wrapped[0] + TAU - wrapped[wrapped.len() - 1];
    let max_gap = wrapped
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(wrap_gap, f64::max);
    max_gap > PI + 1e-9
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub dt_initial: f64,
    pub dt_max: f64,
    pub dt_min: f64,
    pub t_max: f64,
    /// Stop once the field norm drops below this.
    pub residual_tol: f64,
    /// Largest energy increase tolerated on an accepted step.
    pub energy_slack: f64,
    /// Stop early (as [`FlowOutcome::SyncArc`]) once all phases fit in an
    /// open half circle.
    pub sync_arc_exit: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            dt_initial: 0.1,
            // Jacobian eigenvalues of a cubic graph lie in [−6, 6]; RK4 is
            // stable on the negative real axis up to |λ|·dt ≈ 2.78.
            dt_max: 0.4,
            dt_min: 1e-8,
            t_max: 2000.0,
            residual_tol: 1e-5,
            energy_slack: 1e-9,
            sync_arc_exit: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlowOutcome {
    Converged {
        theta: PhaseState,
        residual: f64,
        time: f64,
        steps: usize,
    },
    /// All phases entered an open half circle; the limit is sync.
    SyncArc { theta: PhaseState, time: f64 },
    Timeout {
        theta: PhaseState,
        residual: f64,
        time: f64,
    },
}

/// Integrate the gradient flow until the field norm falls below
/// `opts.residual_tol` or `opts.t_max` elapses.
pub fn flow_to_equilibrium(
    g: &CubicGraph,
    theta0: &[f64],
    opts: &FlowOptions,
) -> Result<FlowOutcome> {
    flow_observed(g, theta0, opts, |_, _, _| {})
}

/// As [`flow_to_equilibrium`], calling `observe(t, theta, energy)` after
/// every accepted step.
pub fn flow_observed(
    g: &CubicGraph,
    theta0: &[f64],
    opts: &FlowOptions,
    mut observe: impl FnMut(f64, &[f64], f64),
) -> Result<FlowOutcome> {
    check_len(g, theta0)?;
    let n = g.n();
    let mut theta = theta0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut trial = vec![0.0; n];

    let mut t = 0.0;
    let mut dt = opts.dt_initial;
    let mut steps = 0usize;
    field_into(g, &theta, &mut k1);
    let mut res = norm(&k1);
    let mut e = energy_unchecked(g, &theta);

    loop {
        if res < opts.residual_tol {
            return Ok(FlowOutcome::Converged {
                theta: PhaseState(theta),
                residual: res,
                time: t,
                steps,
            });
        }
        if opts.sync_arc_exit && steps % 8 == 0 && within_open_semicircle(&theta) {
            return Ok(FlowOutcome::SyncArc {
                theta: PhaseState(theta),
                time: t,
            });
        }
        if t >= opts.t_max || dt < opts.dt_min {
            return Ok(FlowOutcome::Timeout {
                theta: PhaseState(theta),
                residual: res,
                time: t,
            });
        }

        for i in 0..n {
            tmp[i] = theta[i] + 0.5 * dt * k1[i];
        }
        field_into(g, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = theta[i] + 0.5 * dt * k2[i];
        }
        field_into(g, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = theta[i] + dt * k3[i];
        }
        field_into(g, &tmp, &mut k4);
        for i in 0..n {
            trial[i] = theta[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }

        let e_new = energy_unchecked(g, &trial);
        if e_new <= e + opts.energy_slack {
            std::mem::swap(&mut theta, &mut trial);
            t += dt;
            e = e_new;
            steps += 1;
            field_into(g, &theta, &mut k1);
            res = norm(&k1);
            observe(t, &theta, e);
            dt = (2.0 * dt).min(opts.dt_max);
        } else {
            dt *= 0.5;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Starting residual above which refinement is refused, and the bound
    /// past which an iterate counts as diverged (times ten).
    pub capture_radius: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            capture_radius: 1e-3,
            tol: 1e-12,
            max_iter: 30,
        }
    }
}

/// Newton's method on the reduced system with vertex 0 pinned.
pub fn newton_refine(g: &CubicGraph, theta: &[f64], opts: &NewtonOptions) -> Result<PhaseState> {
    check_len(g, theta)?;
    let n = g.n();
    let base = theta[0];
    let mut x: Vec<f64> = theta.iter().map(|t| t - base).collect();
    let mut f = vec![0.0; n];
    field_into(g, &x, &mut f);
    let mut res = norm(&f);
    if res > opts.capture_radius {
        return Err(Error::NewtonDiverged { residual: res });
    }
    for _ in 0..opts.max_iter {
        if res < opts.tol {
            return Ok(PhaseState(x));
        }
        let jac = jacobian(g, &x)?;
        let reduced = jac.view((1, 1), (n - 1, n - 1)).into_owned();
        let rhs = DVector::from_iterator(n - 1, f[1..].iter().map(|v| -v));
        let step = reduced
            .lu()
            .solve(&rhs)
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularJacobian)?;
        for (xi, si) in x[1..].iter_mut().zip(step.iter()) {
            *xi += si;
        }
        field_into(g, &x, &mut f);
        res = norm(&f);
        if !(res <= 10.0 * opts.capture_radius) {
            return Err(Error::NewtonDiverged { residual: res });
        }
    }
    if res < opts.tol {
        Ok(PhaseState(x))
    } else {
        Err(Error::NewtonMaxIterations {
            iterations: opts.max_iter,
            residual: res,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Sync,
    StablePattern,
    Degenerate,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkClass {
    Short,
    Critical,
    Long,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub u: usize,
    pub v: usize,
    /// `θ_u − θ_v` wrapped into `(−π, π]`.
    pub delta: f64,
    pub class: LinkClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub cycle: Vec<usize>,
    pub w: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub residual_tol: f64,
    /// Eigenvalues with `|λ|` below this count as zero.
    pub eig_zero: f64,
    /// Stability needs every nonzero eigenvalue below `−eig_tol`.
    pub eig_tol: f64,
    /// Half-width of the band around π/2 classed as critical.
    pub critical_band: f64,
    /// Band used instead at degenerate points. Along an extra kernel
    /// direction Newton converges only linearly, which pins the angles to
    /// roughly the square root of the residual.
    pub degenerate_critical_band: f64,
    /// Largest wrapped edge difference still counted as synchronized.
    pub sync_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-5,
            eig_zero: 1e-8,
            eig_tol: 1e-6,
            critical_band: 1e-9,
            degenerate_critical_band: 1e-4,
            sync_tol: 1e-3,
        }
    }
}

/// A verified fixed point with everything the pattern catalog records.
/// Serializes to the Pattern JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub n: usize,
    pub theta: PhaseState,
    pub residual: f64,
    pub energy: f64,
    /// Minus the largest eigenvalue once the eigenvalue of the constant
    /// mode is removed: positive for a stable point.
    pub spectral_gap: f64,
    pub classification: Classification,
    #[serde(default)]
    pub zero_eigs: usize,
    pub links: Vec<Link>,
    pub windings: Vec<Winding>,
}

impl FixedPointReport {
    pub fn is_stable_pattern(&self) -> bool {
        self.classification == Classification::StablePattern
    }

    pub fn long_links(&self) -> usize {
        self.links
            .iter()
            .filter(|l| l.class == LinkClass::Long)
            .count()
    }

    pub fn max_winding(&self) -> i64 {
        self.windings.iter().map(|w| w.w.abs()).max().unwrap_or(0)
    }
}

pub fn classify_link(delta: f64, band: f64) -> LinkClass {
    let a = delta.abs();
    if (a - FRAC_PI_2).abs() <= band {
        LinkClass::Critical
    } else if a > FRAC_PI_2 {
        LinkClass::Long
    } else {
        LinkClass::Short
    }
}

/// Sorted (descending) spectrum of the Jacobian.
pub fn jacobian_spectrum(g: &CubicGraph, theta: &[f64]) -> Result<Vec<f64>> {
    let jac = jacobian(g, theta)?;
    let mut eig: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    eig.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// Classify a fixed point by the spectrum of its symmetric Jacobian.
pub fn classify(g: &CubicGraph, theta: &[f64], opts: &ClassifyOptions) -> Result<FixedPointReport> {
    check_len(g, theta)?;
    let residual = residual(g, theta)?;
    if !(residual < opts.residual_tol) {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: opts.residual_tol,
        });
    }
    let theta = gauge_normalize(theta);
    let eig = jacobian_spectrum(g, &theta)?;
    let zero_eigs = eig.iter().filter(|l| l.abs() < opts.eig_zero).count();
    // Drop the eigenvalue of the constant mode: the one nearest zero.
    let (const_idx, _) = eig
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("n >= 1");
    let top = eig
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != const_idx)
        .map(|(_, &l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let spectral_gap = if top.is_finite() { -top } else { 0.0 };

    let deltas: Vec<f64> = g
        .edges()
        .iter()
        .map(|&(u, v)| wrap_angle(theta[u] - theta[v]))
        .collect();
    let is_sync = deltas.iter().all(|d| d.abs() < opts.sync_tol);

    let classification = if is_sync {
        Classification::Sync
    } else if top > opts.eig_tol {
        Classification::Unstable
    } else if zero_eigs == 1 && top < -opts.eig_tol {
        Classification::StablePattern
    } else {
        Classification::Degenerate
    };

    let band = if classification == Classification::Degenerate {
        opts.degenerate_critical_band.max(opts.critical_band)
    } else {
        opts.critical_band
    };
    let links: Vec<Link> = g
        .edges()
        .iter()
        .zip(&deltas)
        .map(|(&(u, v), &delta)| Link {
            u,
            v,
            delta,
            class: classify_link(delta, band),
        })
        .collect();

    let windings = match fundamental_cycles(g) {
        Ok(cl) => cl
            .cycles
            .into_iter()
            .map(|c| {
                let w = winding_unchecked(&theta, &c);
                Winding { cycle: c, w }
            })
            .collect(),
        Err(_) => Vec::new(),
    };

    Ok(FixedPointReport {
        n: g.n(),
        energy: energy_unchecked(g, &theta),
        theta,
        residual,
        spectral_gap,
        classification,
        zero_eigs,
        links,
        windings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{double_ring, parse_graph6};

    fn k4() -> CubicGraph {
        CubicGraph::try_from(parse_graph6(b"C~").unwrap()).unwrap()
    }

    fn double_ring_pattern(n: usize) -> Vec<f64> {
        let h = n / 2;
        (0..n).map(|v| 4.0 * PI * (v % h) as f64 / n as f64).collect()
    }

    #[test]
    fn sync_field_is_zero() {
        let g = k4();
        assert!(field(&g, &[0.0; 4]).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn k4_four_twist_is_fixed_but_unstable() {
        let g = k4();
        let theta = [0.0, FRAC_PI_2, PI, 1.5 * PI];
        assert!(residual(&g, &theta).unwrap() < 1e-15);
        let rep = classify(&g, &theta, &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.classification, Classification::Unstable);
    }

    #[test]
    fn length_mismatch() {
        let g = k4();
        assert!(matches!(
            field(&g, &[0.0; 3]),
            Err(Error::LengthMismatch {
                expected: 4,
                found: 3
            })
        ));
        assert!(energy(&g, &[0.0; 5]).is_err());
        assert!(jacobian(&g, &[]).is_err());
    }

    #[test]
    fn jacobian_at_sync_is_negative_laplacian() {
        let g = k4();
        let jac = jacobian(&g, &[0.0; 4]).unwrap();
        let lap = g.laplacian();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(jac[(i, j)], -lap[i][j]);
            }
        }
        let eig = jacobian_spectrum(&g, &[0.0; 4]).unwrap();
        let expect = [0.0, -4.0, -4.0, -4.0];
        for (a, b) in eig.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_sync_classification() {
        let rep = classify(&k4(), &[0.3; 4], &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.classification, Classification::Sync);
        assert!((rep.spectral_gap - 4.0).abs() < 1e-12);
        assert_eq!(rep.zero_eigs, 1);
        assert_eq!(rep.energy, 0.0);
    }

    #[test]
    fn double_ring_pattern_is_stable_with_short_links() {
        let g = double_ring(10).unwrap();
        let theta = double_ring_pattern(10);
        assert!(residual(&g, &theta).unwrap() < 1e-14);
        let rep = classify(&g, &theta, &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.classification, Classification::StablePattern);
        assert_eq!(rep.links.len(), 15);
        assert!(rep.links.iter().all(|l| l.class == LinkClass::Short));
    }

    #[test]
    fn double_ring_energy_closed_form() {
        for n in [10, 16, 18, 30] {
            let g = double_ring(n).unwrap();
            let e = energy(&g, &double_ring_pattern(n)).unwrap();
            let nf = n as f64;
            assert!((e - nf * (1.0 - (2.0 * TAU / nf).cos())).abs() < 1e-12);
        }
        let e16 = energy(&double_ring(16).unwrap(), &double_ring_pattern(16)).unwrap();
        assert!((e16 - 4.6863).abs() < 5e-4, "{e16}");
    }

    #[test]
    fn classify_rejects_large_residual() {
        let g = k4();
        assert!(matches!(
            classify(&g, &[0.0, 0.1, 0.2, 0.3], &ClassifyOptions::default()),
            Err(Error::ResidualTooLarge { .. })
        ));
    }

    #[test]
    fn windings() {
        let g = double_ring(10).unwrap();
        let theta = double_ring_pattern(10);
        let outer: Vec<usize> = (0..5).collect();
        assert_eq!(winding_number(&g, &theta, &outer).unwrap(), 1);
        let sync = [0.0; 10];
        assert_eq!(winding_number(&g, &sync, &outer).unwrap(), 0);
        assert_eq!(winding_number(&g, &theta, &[0, 1]), Err(Error::NotACycle));
    }

    #[test]
    fn double_ring_twists_once_per_ring() {
        let g = double_ring(20).unwrap();
        let theta = double_ring_pattern(20);
        let outer: Vec<usize> = (0..10).collect();
        let inner: Vec<usize> = (10..20).collect();
        let total = winding_number(&g, &theta, &outer).unwrap()
            + winding_number(&g, &theta, &inner).unwrap();
        assert_eq!(total, 2);
    }

    #[test]
    fn gauge_normalization() {
        assert_eq!(gauge_normalize(&[1.3; 5]).to_vec(), vec![0.0; 5]);
        let t = [0.0, 1.0, 2.0];
        assert_eq!(gauge_normalize(&t).to_vec(), t.to_vec());
        let shifted: Vec<f64> = [0.2, 4.0, 6.0].iter().map(|x| x + 0.7).collect();
        let a = gauge_normalize(&[0.2, 4.0, 6.0]);
        let b = gauge_normalize(&shifted);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(gauge_normalize(&[0.0, -1e-18]).iter().all(|&x| x < TAU));
    }

    #[test]
    fn flow_from_near_sync_converges_to_sync() {
        let g = double_ring(10).unwrap();
        let theta0: Vec<f64> = (0..10).map(|i| 1e-3 * ((i * 7 % 5) as f64 - 2.0)).collect();
        let out = flow_to_equilibrium(&g, &theta0, &FlowOptions::default()).unwrap();
        let FlowOutcome::Converged { theta, .. } = out else {
            panic!("expected convergence, got {out:?}");
        };
        let rep = classify(&g, &theta, &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.classification, Classification::Sync);
        let theta = newton_refine(&g, &theta, &NewtonOptions::default()).unwrap();
        let rep = classify(&g, &theta, &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.classification, Classification::Sync);
    }

    #[test]
    fn flow_from_fixed_point_returns_immediately() {
        let g = double_ring(10).unwrap();
        let out = flow_to_equilibrium(&g, &double_ring_pattern(10), &FlowOptions::default())
            .unwrap();
        assert!(matches!(out, FlowOutcome::Converged { steps: 0, .. }));
    }

    #[test]
    fn sync_arc_exit() {
        let g = double_ring(10).unwrap();
        let theta0: Vec<f64> = (0..10).map(|i| 0.25 * i as f64).collect();
        let opts = FlowOptions {
            sync_arc_exit: true,
            ..Default::default()
        };
        assert!(matches!(
            flow_to_equilibrium(&g, &theta0, &opts).unwrap(),
            FlowOutcome::SyncArc { .. }
        ));
        assert!(within_open_semicircle(&[0.1, 3.0, 6.2]));
        assert!(!within_open_semicircle(&[0.0, 2.1, 4.2]));
    }

    #[test]
    fn newton_restores_perturbed_pattern() {
        let g = double_ring(10).unwrap();
        let exact = double_ring_pattern(10);
        let noisy: Vec<f64> = exact
            .iter()
            .enumerate()
            .map(|(i, t)| t + 1e-4 * (((i * 37) % 11) as f64 / 11.0 - 0.5))
            .collect();
        let refined = newton_refine(&g, &noisy, &NewtonOptions::default()).unwrap();
        assert!(residual(&g, &refined).unwrap() < 1e-12);
        let a = gauge_normalize(&refined);
        let b = gauge_normalize(&exact);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!(wrap_angle(x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn newton_leaves_sync_alone() {
        let g = k4();
        let out = newton_refine(&g, &[0.0; 4], &NewtonOptions::default()).unwrap();
        assert_eq!(out.to_vec(), vec![0.0; 4]);
    }

    #[test]
    fn newton_refuses_far_start() {
        let g = k4();
        assert!(matches!(
            newton_refine(&g, &[0.0, 0.5, 1.0, 1.5], &NewtonOptions::default()),
            Err(Error::NewtonDiverged { .. })
        ));
    }
}
