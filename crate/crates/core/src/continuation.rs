//! Continuation of fixed points along a homotopy between two cubic graphs
//! on the same vertex set.
//!
//! Edges shared by both graphs keep weight 1, edges only in `A` carry
//! weight `p` and edges only in `B` carry `1 − p`, so `p = 1` is `A` and
//! `p = 0` is `B`. The sync state is a fixed point for every `p`.
//!
//! Branches are traced by pseudo-arclength continuation on the reduced
//! system (vertex 0 pinned at phase 0) with unknowns `(θ_1..θ_{n−1}, p)`.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dynamics::PhaseState;
use crate::error::{Error, Result};
use crate::graphs::{CubicGraph, Edge};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Homotopy {
    n: usize,
    shared: Vec<Edge>,
    a_only: Vec<Edge>,
    b_only: Vec<Edge>,
}

impl Homotopy {
    pub fn new(a: &CubicGraph, b: &CubicGraph) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::HomotopyMismatch(format!(
                "vertex counts differ: {} vs {}",
                a.n(),
                b.n()
            )));
        }
        let ea: BTreeSet<Edge> = a.edges().iter().copied().collect();
        let eb: BTreeSet<Edge> = b.edges().iter().copied().collect();
        Ok(Self {
            n: a.n(),
            shared: ea.intersection(&eb).copied().collect(),
            a_only: ea.difference(&eb).copied().collect(),
            b_only: eb.difference(&ea).copied().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shared(&self) -> &[Edge] {
        &self.shared
    }

    pub fn a_only(&self) -> &[Edge] {
        &self.a_only
    }

    pub fn b_only(&self) -> &[Edge] {
        &self.b_only
    }

    /// Every edge with its weight at `p`.
    pub fn weighted_edges(&self, p: f64) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.shared
            .iter()
            .map(|&(u, v)| (u, v, 1.0))
            .chain(self.a_only.iter().map(move |&(u, v)| (u, v, p)))
            .chain(self.b_only.iter().map(move |&(u, v)| (u, v, 1.0 - p)))
    }

    /// `Σ w_e (1 − cos Δ_e)`.
    pub fn energy(&self, p: f64, theta: &[f64]) -> Result<f64> {
        self.check_len(theta)?;
        Ok(self
            .weighted_edges(p)
            .map(|(u, v, w)| w * (1.0 - (theta[u] - theta[v]).cos()))
            .sum())
    }

    fn check_len(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Derivative of the weighted field with respect to `p`.
    fn field_dp(&self, theta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (edges, sign) in [(&self.a_only, 1.0), (&self.b_only, -1.0)] {
            for &(u, v) in edges.iter() {
                let s = sign * (theta[v] - theta[u]).sin();
                out[u] += s;
                out[v] -= s;
            }
        }
        out
    }

    /// Weighted Jacobian of the field; symmetric with zero row sums.
    pub fn jacobian(&self, p: f64, theta: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(theta)?;
        let mut j = DMatrix::zeros(self.n, self.n);
        for (u, v, w) in self.weighted_edges(p) {
            let c = w * (theta[v] - theta[u]).cos();
            j[(u, v)] += c;
            j[(v, u)] += c;
            j[(u, u)] -= c;
            j[(v, v)] -= c;
        }
        Ok(j)
    }
}

/// `Σ_{w ∼ v} w_e(p) sin(θ_w − θ_v)`.
pub fn homotopy_field(h: &Homotopy, p: f64, theta: &[f64]) -> Result<Vec<f64>> {
    h.check_len(theta)?;
    let mut out = vec![0.0; h.n];
    for (u, v, w) in h.weighted_edges(p) {
        let s = w * (theta[v] - theta[u]).sin();
        out[u] += s;
        out[v] -= s;
    }
    Ok(out)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest eigenvalue of the weighted Jacobian with vertex 0 removed.
/// Negative on a stable branch; it crosses zero at a fold.
pub fn reduced_min_eig(h: &Homotopy, p: f64, theta: &[f64]) -> Result<f64> {
    let j = h.jacobian(p, theta)?;
    let r = j.view((1, 1), (h.n - 1, h.n - 1)).into_owned();
    Ok(SymmetricEigen::new(r)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub p: f64,
    pub theta: PhaseState,
    pub min_eig: f64,
    pub is_fold: bool,
}

impl BranchPoint {
    pub fn is_stable(&self) -> bool {
        self.min_eig < 0.0
    }

    /// Verify a fixed point of the weighted system at `p` and wrap it.
    pub fn at(h: &Homotopy, p: f64, theta: PhaseState, tol: f64) -> Result<Self> {
        let r = norm(&homotopy_field(h, p, &theta)?);
        if !(r < tol) {
            return Err(Error::ResidualTooLarge { residual: r, tol });
        }
        let min_eig = reduced_min_eig(h, p, &theta)?;
        Ok(Self {
            p,
            theta,
            min_eig,
            is_fold: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationOptions {
    pub ds_initial: f64,
    pub ds_min: f64,
    pub ds_max: f64,
    /// Accepted points satisfy the weighted fixed-point equation to this.
    pub tol: f64,
    pub max_newton: usize,
    pub max_steps: usize,
    /// Fold bracket width in arclength.
    pub fold_tol: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            ds_initial: 0.02,
            ds_min: 1e-5,
            ds_max: 0.1,
            tol: 1e-10,
            max_newton: 12,
            max_steps: 20_000,
            fold_tol: 1e-8,
        }
    }
}

/// A traced branch. `complete` is false when the corrector gave up before
/// a fold or `p_target` was reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub points: Vec<BranchPoint>,
    pub complete: bool,
}

impl Branch {
    pub fn fold(&self) -> Option<&BranchPoint> {
        self.points.iter().find(|b| b.is_fold)
    }

    /// The point at exactly `p`, if the trace landed on it.
    pub fn at_p(&self, p: f64) -> Option<&BranchPoint> {
        self.points.iter().find(|b| b.p == p)
    }
}

/// Reduced unknowns: `(θ_1 − θ_0, …, θ_{n−1} − θ_0, p)`.
#[derive(Debug, Clone, PartialEq)]
struct Unknowns(DVector<f64>);

impl Unknowns {
    fn from_state(theta: &[f64], p: f64) -> Self {
        let n = theta.len();
        let mut x = DVector::zeros(n);
        for i in 1..n {
            x[i - 1] = theta[i] - theta[0];
        }
        x[n - 1] = p;
        Self(x)
    }

    fn p(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    fn theta(&self) -> Vec<f64> {
        let n = self.0.len();
        std::iter::once(0.0)
            .chain(self.0.iter().take(n - 1).copied())
            .collect()
    }
}

/// Reduced residual `F` (length `n − 1`) and its Jacobian `[J_r | F_p]`.
fn reduced_system(h: &Homotopy, x: &Unknowns) -> (DVector<f64>, DMatrix<f64>) {
    let n = h.n;
    let p = x.p();
    let theta = x.theta();
    let f = homotopy_field(h, p, &theta).expect("length checked");
    let j = h.jacobian(p, &theta).expect("length checked");
    let fp = h.field_dp(&theta);
    let mut jac = DMatrix::zeros(n - 1, n);
    jac.view_mut((0, 0), (n - 1, n - 1))
        .copy_from(&j.view((1, 1), (n - 1, n - 1)));
    for i in 1..n {
        jac[(i - 1, n - 1)] = fp[i];
    }
    (DVector::from_iterator(n - 1, f[1..].iter().copied()), jac)
}

/// Unit tangent of the solution curve, oriented along `prev`.
fn tangent(h: &Homotopy, x: &Unknowns, prev: &DVector<f64>) -> Option<DVector<f64>> {
    let n = h.n;
    let (_, jac) = reduced_system(h, x);
    let mut a = DMatrix::zeros(n, n);
    a.view_mut((0, 0), (n - 1, n)).copy_from(&jac);
    a.row_mut(n - 1).copy_from(&prev.transpose());
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let t = a.lu().solve(&rhs)?;
    let t = t.normalize();
    Some(if t.dot(prev) < 0.0 { -t } else { t })
}

/// Newton on `F = 0` plus one scalar constraint `c·(x − x0) = 0`.
fn correct(
    h: &Homotopy,
    guess: &Unknowns,
    c: &DVector<f64>,
    x0: &DVector<f64>,
    opts: &ContinuationOptions,
) -> Option<Unknowns> {
    let n = h.n;
    let mut x = guess.clone();
    for _ in 0..opts.max_newton {
        let (f, jac) = reduced_system(h, &x);
        let g = c.dot(&(&x.0 - x0));
        if f.norm() < opts.tol * 1e-2 && g.abs() < opts.tol {
            return Some(x);
        }
        let mut a = DMatrix::zeros(n, n);
        a.view_mut((0, 0), (n - 1, n)).copy_from(&jac);
        a.row_mut(n - 1).copy_from(&c.transpose());
        let mut rhs = DVector::zeros(n);
        rhs.rows_mut(0, n - 1).copy_from(&(-f));
        rhs[n - 1] = -g;
        let dx = a.lu().solve(&rhs)?;
        x.0 += &dx;
        if !x.0.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    let (f, _) = reduced_system(h, &x);
    (f.norm() < opts.tol).then_some(x)
}

/// Solve at fixed `p`, starting from `guess`.
fn correct_at_p(
    h: &Homotopy,
    guess: &Unknowns,
    p: f64,
    opts: &ContinuationOptions,
) -> Option<Unknowns> {
    let n = h.n;
    let mut e = DVector::zeros(n);
    e[n - 1] = 1.0;
    let mut g = guess.clone();
    g.0[n - 1] = p;
    let x0 = g.0.clone();
    correct(h, &g, &e, &x0, opts)
}

fn point(h: &Homotopy, x: &Unknowns, is_fold: bool) -> BranchPoint {
    let theta = x.theta();
    BranchPoint {
        p: x.p(),
        min_eig: reduced_min_eig(h, x.p(), &theta).expect("length checked"),
        theta: PhaseState::new(theta),
        is_fold,
    }
}

/// Trace the branch through `start` from its `p` toward `p_target`.
///
/// Stops at the first fold (which is returned flagged), on reaching
/// `p_target`, or when the step falls below `ds_min` (`complete = false`).
/// When the branch crosses `p = 0` or `p_target`, a point is solved at
/// exactly that parameter and inserted.
pub fn trace_branch(
    h: &Homotopy,
    start: &BranchPoint,
    p_target: f64,
    opts: &ContinuationOptions,
) -> Result<Branch> {
    h.check_len(&start.theta)?;
    let n = h.n;
    let dir = if p_target < start.p { -1.0 } else { 1.0 };
    let mut x = Unknowns::from_state(&start.theta, start.p);
    // Start on the curve.
    x = correct_at_p(h, &x, start.p, opts).ok_or(Error::CorrectorFailed { p: start.p })?;
    let mut seed = DVector::zeros(n);
    seed[n - 1] = dir;
    let mut t = tangent(h, &x, &seed).ok_or(Error::SingularJacobian)?;
    let mut points = vec![point(h, &x, false)];
    let mut ds = opts.ds_initial;
    let landmarks: Vec<f64> = [0.0, p_target]
        .into_iter()
        .filter(|&q| (q - start.p) * dir > 0.0)
        .collect();

    for _ in 0..opts.max_steps {
        let predicted = Unknowns(&x.0 + &t * ds);
        let Some(next) = correct(h, &predicted, &t, &predicted.0, opts) else {
            ds *= 0.5;
            if ds < opts.ds_min {
                return Ok(Branch {
                    points,
                    complete: false,
                });
            }
            continue;
        };
        let step = (&next.0 - &x.0).norm();
        if step > 2.0 * ds {
            // Jumped to another sheet.
            ds *= 0.5;
            if ds < opts.ds_min {
                return Ok(Branch {
                    points,
                    complete: false,
                });
            }
            continue;
        }
        let t_next = tangent(h, &next, &t).ok_or(Error::SingularJacobian)?;
        let prev_pt = points.last().expect("non-empty").clone();
        let next_pt = point(h, &next, false);

        // Fold: the tangent's p-component changes sign.
        if t[n - 1] * t_next[n - 1] < 0.0 {
            let fold = locate_fold(h, &x, &t, ds, opts);
            for q in &landmarks {
                if let Some(bp) = land(h, &x, fold.as_ref().map(|f| f.p), *q, prev_pt.p, opts) {
                    points.push(bp);
                }
            }
            if let Some(f) = fold {
                points.push(f);
            }
            return Ok(Branch {
                points,
                complete: true,
            });
        }

        for &q in &landmarks {
            if (prev_pt.p - q) * (next_pt.p - q) < 0.0 || next_pt.p == q {
                let guess = interpolate(&x, &next, prev_pt.p, next_pt.p, q);
                if let Some(y) = correct_at_p(h, &guess, q, opts) {
                    points.push(point(h, &y, false));
                }
            }
        }
        if (next_pt.p - p_target) * dir >= 0.0 {
            return Ok(Branch {
                points,
                complete: true,
            });
        }
        points.push(next_pt);
        x = next;
        t = t_next;
        ds = (ds * 1.3).min(opts.ds_max);
    }
    Ok(Branch {
        points,
        complete: false,
    })
}

fn interpolate(a: &Unknowns, b: &Unknowns, pa: f64, pb: f64, q: f64) -> Unknowns {
    let s = if pb == pa { 1.0 } else { (q - pa) / (pb - pa) };
    Unknowns(&a.0 * (1.0 - s) + &b.0 * s)
}

/// Landmark `q` between the last accepted point and the fold: solve at
/// fixed `q` only when it lies on the traced side of the fold.
fn land(
    h: &Homotopy,
    x: &Unknowns,
    fold_p: Option<f64>,
    q: f64,
    last_p: f64,
    opts: &ContinuationOptions,
) -> Option<BranchPoint> {
    let fp = fold_p?;
    if (last_p - q) * (fp - q) >= 0.0 {
        return None;
    }
    correct_at_p(h, x, q, opts).map(|y| point(h, &y, false))
}

/// Bisect in arclength between `x` (tangent `t`) and `x + ds·t` on the
/// sign of the tangent's p-component.
fn locate_fold(
    h: &Homotopy,
    x: &Unknowns,
    t: &DVector<f64>,
    ds: f64,
    opts: &ContinuationOptions,
) -> Option<BranchPoint> {
    let n = h.n;
    let sign0 = t[n - 1].signum();
    let (mut lo, mut hi) = (0.0, ds);
    let mut best: Option<Unknowns> = None;
    while hi - lo > opts.fold_tol {
        let mid = 0.5 * (lo + hi);
        let predicted = Unknowns(&x.0 + t * mid);
        let y = correct(h, &predicted, t, &predicted.0, opts)?;
        let ty = tangent(h, &y, t)?;
        if ty[n - 1].signum() == sign0 {
            lo = mid;
        } else {
            hi = mid;
        }
        best = Some(y);
    }
    best.map(|y| point(h, &y, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::double_ring_phases;
    use crate::dynamics::field;
    use crate::graphs::{double_ring, moebius_ladder};

    fn homotopy() -> (CubicGraph, CubicGraph, Homotopy) {
        let a = double_ring(12).unwrap();
        let b = moebius_ladder(12).unwrap();
        let h = Homotopy::new(&a, &b).unwrap();
        (a, b, h)
    }

    #[test]
    fn endpoints_match_graph_fields() {
        let (a, b, h) = homotopy();
        let theta: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin() * 2.0).collect();
        let fa = field(&a, &theta).unwrap();
        let fb = field(&b, &theta).unwrap();
        let h1 = homotopy_field(&h, 1.0, &theta).unwrap();
        let h0 = homotopy_field(&h, 0.0, &theta).unwrap();
        for i in 0..12 {
            assert!((fa[i] - h1[i]).abs() < 1e-14);
            assert!((fb[i] - h0[i]).abs() < 1e-14);
        }
        let sync = vec![0.3; 12];
        assert!(norm(&homotopy_field(&h, 0.5, &sync).unwrap()) == 0.0);
        assert!(homotopy_field(&h, 0.5, &[0.0; 3]).is_err());
    }

    #[test]
    fn edge_partition() {
        let (a, b, h) = homotopy();
        assert_eq!(h.shared().len() + h.a_only().len(), a.edges().len());
        assert_eq!(h.shared().len() + h.b_only().len(), b.edges().len());
        assert!(Homotopy::new(&a, &double_ring(10).unwrap()).is_err());
    }

    #[test]
    fn field_dp_matches_difference() {
        let (_, _, h) = homotopy();
        let theta: Vec<f64> = (0..12).map(|i| (i as f64).cos()).collect();
        let d = h.field_dp(&theta);
        let eps = 1e-6;
        let up = homotopy_field(&h, 0.4 + eps, &theta).unwrap();
        let dn = homotopy_field(&h, 0.4 - eps, &theta).unwrap();
        for i in 0..12 {
            assert!((d[i] - (up[i] - dn[i]) / (2.0 * eps)).abs() < 1e-8);
        }
    }

    #[test]
    fn trivial_homotopy_keeps_pattern() {
        let a = double_ring(12).unwrap();
        let h = Homotopy::new(&a, &a).unwrap();
        let theta = double_ring_phases(12).unwrap();
        let start = BranchPoint::at(&h, 1.0, theta.clone(), 1e-10).unwrap();
        assert!(start.is_stable());
        let br = trace_branch(&h, &start, 0.0, &ContinuationOptions::default()).unwrap();
        assert!(br.complete);
        assert!(br.fold().is_none());
        let end = br.at_p(0.0).expect("lands on p = 0");
        for (x, y) in end.theta.iter().zip(theta.iter()) {
            let d = crate::dynamics::wrap_angle((x - end.theta[0]) - (y - theta[0]));
            assert!(d.abs() < 1e-9);
        }
    }

    #[test]
    fn double_ring_to_g50() {
        let a = double_ring(12).unwrap();
        let b = crate::graphs::g50_rewired();
        let h = Homotopy::new(&a, &b).unwrap();
        let start = BranchPoint::at(&h, 1.0, double_ring_phases(12).unwrap(), 1e-10).unwrap();
        let br = trace_branch(&h, &start, -0.5, &ContinuationOptions::default()).unwrap();
        assert!(br.complete);
        let end = br.at_p(0.0).expect("reaches p = 0");
        let (ga, gb) = crate::analytic::g50_angles();
        let diffs: Vec<f64> = b
            .edges()
            .iter()
            .map(|&(u, v)| crate::dynamics::wrap_angle(end.theta[u] - end.theta[v]).abs())
            .collect();
        assert!(diffs.iter().any(|d| (d - ga).abs() < 1e-6));
        assert!(diffs.iter().any(|d| (d - gb).abs() < 1e-6));
        assert!(end.is_stable() && end.min_eig > -0.05);
        let fold = br.fold().expect("fold past p = 0");
        assert!(fold.p < 0.0 && fold.p > -0.1, "{}", fold.p);
        assert!(fold.min_eig.abs() < 1e-4, "{}", fold.min_eig);
        // The trace stops at the fold, so p decreases monotonically.
        for w in br.points.windows(2) {
            assert!(w[1].p <= w[0].p);
        }
    }

    #[test]
    fn accepted_points_are_fixed_points() {
        let (_, _, h) = homotopy();
        let theta = double_ring_phases(12).unwrap();
        let start = BranchPoint::at(&h, 1.0, theta, 1e-10).unwrap();
        let br = trace_branch(&h, &start, -0.5, &ContinuationOptions::default()).unwrap();
        for bp in &br.points {
            assert!(norm(&homotopy_field(&h, bp.p, &bp.theta).unwrap()) < 1e-10);
        }
        for w in br.points.windows(2) {
            let dmax = w[0]
                .theta
                .iter()
                .zip(w[1].theta.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(dmax <= 2.0 * ContinuationOptions::default().ds_max, "{dmax}");
        }
    }
}
