use std::fs;

use cubic_kuramoto::analytic::{double_ring_phases, twisted_phases};
use cubic_kuramoto::dynamics::{classify, ClassifyOptions, PhaseState};
use cubic_kuramoto::graphs::{
    double_ring, high_energy_e, high_energy_f, moebius_ladder, patternless_chain, twisted_ring,
    CubicGraph,
};
use cubic_kuramoto::Error;

use crate::args::{ConstructArgs, Family};
use crate::failure::{CmdResult, Failure};
use crate::output::write_json;

const PATTERN_RESIDUAL: f64 = 1e-12;

fn build(family: Family, n: usize) -> cubic_kuramoto::Result<(CubicGraph, Option<PhaseState>)> {
    Ok(match family {
        Family::DoubleRing => (double_ring(n)?, Some(double_ring_phases(n)?)),
        Family::Moebius => (moebius_ladder(n)?, Some(double_ring_phases(n)?)),
        Family::Twisted => (twisted_ring(n)?, Some(twisted_phases(n / 2)?)),
        Family::HighE => {
            let (g, p) = high_energy_e(n)?;
            (g, Some(p))
        }
        Family::HighF => {
            if n % 10 != 0 || n == 0 {
                return Err(Error::Domain {
                    family: "high-f",
                    n,
                    reason: "need n = 10m with m >= 1",
                });
            }
            let (g, p) = high_energy_f(n / 10)?;
            (g, Some(p))
        }
        Family::Chain => (patternless_chain(n)?, None),
    })
}

pub fn run(args: &ConstructArgs) -> CmdResult {
    let (g, phases) = build(args.family, args.n)?;
    let mut g6 = g.to_graph6();
    g6.push(b'\n');
    fs::write(&args.out, g6)?;
    let Some(path) = &args.pattern else {
        return Ok(());
    };
    let Some(theta) = phases else {
        return Err(Failure::usage(
            "this family has no closed-form pattern; omit --pattern",
        ));
    };
    let report = classify(&g, &theta, &ClassifyOptions::default())?;
    if !(report.residual < PATTERN_RESIDUAL) {
        return Err(Failure::numerical(format!(
            "closed-form pattern has residual {:e}",
            report.residual
        )));
    }
    write_json(path, &report)
}
