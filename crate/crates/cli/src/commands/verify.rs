use cubic_kuramoto::dynamics::{classify, residual, ClassifyOptions, FixedPointReport};
use serde::Serialize;
use serde_json::{json, Value};

use super::{read_graph, read_theta};
use crate::args::VerifyArgs;
use crate::failure::{CmdResult, Failure};
use crate::output::{print_json, write_json};

/// A recomputed fixed point must have a residual below this to pass.
const PASS_RESIDUAL: f64 = 1e-10;
const ENERGY_TOL: f64 = 1e-9;
const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    claimed: Value,
    recomputed: Value,
    ok: bool,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pass: bool,
    residual: f64,
    report: Option<FixedPointReport>,
    checks: Vec<Check>,
}

fn close(tol: f64) -> impl Fn(&Value, &Value) -> bool {
    move |a, b| match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        _ => false,
    }
}

fn equal(a: &Value, b: &Value) -> bool {
    a == b
}

/// Compare whichever claims the pattern file makes with the recomputation.
fn compare(claims: &Value, rep: &FixedPointReport) -> Vec<Check> {
    let field = |arr: &str, key: &str| -> Option<Value> {
        claims.get(arr).and_then(Value::as_array).map(|xs| {
            Value::Array(xs.iter().map(|x| x.get(key).cloned().unwrap_or(Value::Null)).collect())
        })
    };
    let recomputed_classes = json!(rep.links.iter().map(|l| l.class).collect::<Vec<_>>());
    let recomputed_windings = json!(rep.windings.iter().map(|w| w.w).collect::<Vec<_>>());
    let candidates: Vec<(&'static str, Option<Value>, Value, Box<dyn Fn(&Value, &Value) -> bool>)> = vec![
        ("energy", claims.get("energy").cloned(), json!(rep.energy), Box::new(close(ENERGY_TOL))),
        ("spectral_gap", claims.get("spectral_gap").cloned(), json!(rep.spectral_gap), Box::new(close(GAP_TOL))),
        ("classification", claims.get("classification").cloned(), json!(rep.classification), Box::new(equal)),
        ("zero_eigs", claims.get("zero_eigs").cloned(), json!(rep.zero_eigs), Box::new(equal)),
        ("n", claims.get("n").cloned(), json!(rep.n), Box::new(equal)),
        ("link_classes", field("links", "class"), recomputed_classes, Box::new(equal)),
        ("windings", field("windings", "w"), recomputed_windings, Box::new(equal)),
    ];
    candidates
        .into_iter()
        .filter_map(|(name, claimed, recomputed, ok)| {
            let claimed = claimed?;
            let ok = ok(&claimed, &recomputed);
            Some(Check {
                name,
                claimed,
                recomputed,
                ok,
            })
        })
        .collect()
}

pub fn verdict(args: &VerifyArgs) -> CmdResult<Verdict> {
    let g = read_graph(&args.graph)?;
    let (claims, theta) = read_theta(&args.pattern)?;
    let res = residual(&g, &theta)?;
    let opts = ClassifyOptions::default();
    if !(res < opts.residual_tol) {
        return Ok(Verdict {
            pass: false,
            residual: res,
            report: None,
            checks: vec![Check {
                name: "residual",
                claimed: claims.get("residual").cloned().unwrap_or(Value::Null),
                recomputed: json!(res),
                ok: false,
            }],
        });
    }
    let rep = classify(&g, &theta, &opts)?;
    let mut checks = compare(&claims, &rep);
    checks.insert(
        0,
        Check {
            name: "residual",
            claimed: claims.get("residual").cloned().unwrap_or(Value::Null),
            recomputed: json!(res),
            ok: res < PASS_RESIDUAL,
        },
    );
    Ok(Verdict {
        pass: checks.iter().all(|c| c.ok),
        residual: res,
        report: Some(rep),
        checks,
    })
}

pub fn run(args: &VerifyArgs) -> CmdResult {
    let v = verdict(args)?;
    match &args.out {
        Some(path) => write_json(path, &v)?,
        None => print_json(&v)?,
    }
    if v.pass {
        Ok(())
    } else {
        Err(Failure::numerical(format!(
            "verification failed (residual {:e})",
            v.residual
        )))
    }
}
