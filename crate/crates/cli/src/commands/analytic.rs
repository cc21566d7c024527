use std::f64::consts::TAU;

use cubic_kuramoto::analytic::{
    beta_star, crossed_ring_energy, double_ring_phases, e_energy, f_energy, g50_angles,
    loop_energy, twisted_phases, twisted_root, two_pattern_angles, two_pattern_equations,
    two_pattern_high_phases, two_pattern_low_phases,
};
use cubic_kuramoto::dynamics::{energy, residual, PhaseState};
use cubic_kuramoto::graphs::{
    double_ring, high_energy_e, high_energy_f, moebius_ladder, twisted_ring, two_pattern_graph,
    CubicGraph,
};
use serde::Serialize;

use crate::args::VerifyAnalyticArgs;
use crate::failure::CmdResult;
use crate::output::{print_json, write_json};

/// One closed-form quantity. `residual` is the defining equation's
/// residual for roots, or the field norm for patterns.
#[derive(Debug, Serialize)]
pub struct Entry {
    name: String,
    value: f64,
    residual: Option<f64>,
    /// Energy evaluated directly on the constructed (graph, phases) pair.
    direct_energy: Option<f64>,
}

fn value(name: impl Into<String>, value: f64, residual: Option<f64>) -> Entry {
    Entry {
        name: name.into(),
        value,
        residual,
        direct_energy: None,
    }
}

fn pattern(name: String, g: &CubicGraph, theta: &PhaseState, closed: Option<f64>) -> cubic_kuramoto::Result<Entry> {
    let e = energy(g, theta)?;
    Ok(Entry {
        name,
        value: closed.unwrap_or(e),
        residual: Some(residual(g, theta)?),
        direct_energy: Some(e),
    })
}

pub fn table() -> cubic_kuramoto::Result<Vec<Entry>> {
    let mut out = Vec::new();
    let b = beta_star();
    out.push(value("beta_star", b.value, Some(b.residual)));
    out.push(value("crossed_ring_energy", crossed_ring_energy(), None));
    for m in 5..=20 {
        let r = twisted_root(m)?;
        out.push(value(format!("twisted_root[m={m}]"), r.value, Some(r.residual)));
    }
    for m in 3..=8 {
        out.push(value(format!("loop_energy[m={m}]"), loop_energy(m)?, None));
    }
    let (a, bb) = g50_angles();
    out.push(value("g50_a", a, Some(((bb - a).sin() - 2.0 * a.sin()).abs())));
    out.push(value("g50_b", bb, Some(((bb - a).sin() - bb.sin()).abs())));

    for n in [10, 12, 14, 18, 30, 50] {
        let theta = double_ring_phases(n)?;
        let closed = n as f64 * (1.0 - (2.0 * TAU / n as f64).cos());
        out.push(pattern(format!("double_ring[n={n}]"), &double_ring(n)?, &theta, Some(closed))?);
        out.push(pattern(format!("moebius[n={n}]"), &moebius_ladder(n)?, &theta, Some(closed))?);
    }
    for m in 5..=20 {
        let g = twisted_ring(2 * m)?;
        out.push(pattern(format!("twisted[n={}]", 2 * m), &g, &twisted_phases(m)?, None)?);
    }
    for n in [20, 22, 30] {
        let (g, theta) = high_energy_e(n)?;
        out.push(pattern(format!("e_energy[n={n}]"), &g, &theta, Some(e_energy(n)?))?);
    }
    for m in 1..=3 {
        let (g, theta) = high_energy_f(m)?;
        let n = 10 * m;
        out.push(pattern(format!("f_energy[n={n}]"), &g, &theta, Some(f_energy(n)?))?);
    }

    let tp = two_pattern_angles();
    let g = two_pattern_graph();
    let low = tp.low;
    out.push(value("two_pattern_low_a", low, Some((2.0 * (2.0 * low).sin() - low.sin()).abs())));
    out.push(pattern("two_pattern_low".into(), &g, &two_pattern_low_phases(), Some(7.0))?);
    for (label, root) in std::iter::once(("stable", &tp.high)).chain(tp.others.iter().map(|r| ("unstable", r))) {
        let [r0, r1] = two_pattern_equations(root.alpha, root.beta);
        let res = Some(r0.hypot(r1));
        out.push(value(format!("two_pattern_alpha[{label}]"), root.alpha, res));
        out.push(value(format!("two_pattern_beta[{label}]"), root.beta, res));
        let theta = two_pattern_high_phases(root.alpha, root.beta);
        out.push(pattern(format!("two_pattern_high[{label}]"), &g, &theta, None)?);
    }
    Ok(out)
}

pub fn run(args: &VerifyAnalyticArgs) -> CmdResult {
    let t = table()?;
    match &args.out {
        Some(path) => write_json(path, &t),
        None => print_json(&t),
    }
}
