use std::fs;

use hydra_numen::dynamics::{
    correspondence_roundtrip, cycle_string, find_cycles, orbit, CorrespondenceOptions, OrbitStatus,
};
use hydra_numen::fourier::{
    charfn_estimate_grid, charfn_estimate_table, charfn_solve, prob_empirical, prob_inversion,
    selfsim_residual, total_variation, CharFnTable, Distribution,
};
use hydra_numen::mapspec::parse_map_spec;
use hydra_numen::numen::{
    convergence_report, density_criterion, find_contracting_place, xh_nat, xh_rational_exact,
    xh_trunc,
};
use hydra_numen::strings::compose_string;
use hydra_numen::{digit_expansion, DigitString, HydraMap, PAdicTrunc, Place, Rational};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::report::Report;
use crate::{CliError, Command, MapArg, Method};

fn load(map: &MapArg) -> Result<HydraMap, CliError> {
    let text = fs::read_to_string(&map.path).map_err(|e| CliError::Io {
        path: map.path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(parse_map_spec(&text)?)
}

fn strs<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn map_input(map: &MapArg) -> (&'static str, Value) {
    ("map", json!(map.path.display().to_string()))
}

pub fn dispatch(command: &Command) -> Result<Report, CliError> {
    let name = command.name().to_string();
    match command {
        Command::Analyze { map, places } => {
            let h = load(map)?;
            let c = h.classify();
            let mut rows = Vec::new();
            let reports: Vec<Value> = places
                .iter()
                .map(|&place| {
                    let r = convergence_report(&h, place);
                    rows.push(vec![
                        place.to_string(),
                        r.rho.to_string(),
                        r.max_branch_norm.to_string(),
                        r.guarantee.to_string(),
                    ]);
                    json!({
                        "place": place.to_string(),
                        "rho": r.rho.to_string(),
                        "max_branch_norm": r.max_branch_norm.to_string(),
                        "guarantee": r.guarantee.to_string(),
                        "ell_bound": r.ell_bound.map(|b| b.to_string()),
                    })
                })
                .collect();
            let branches: Vec<Value> = h
                .branches()
                .iter()
                .map(|b| json!({ "r": b.r.to_string(), "c": b.c.to_string() }))
                .collect();
            Ok(Report {
                command: name,
                inputs: inputs(&[map_input(map), ("places", json!(strs(places)))]),
                results: json!({
                    "p": h.p().to_string(),
                    "branches": branches,
                    "classification": { "integral": c.integral, "proper": c.proper, "centered": c.centered },
                    "convergence": reports,
                }),
                header: vec!["place", "rho", "max_branch_norm", "guarantee"],
                rows,
            })
        }
        Command::Orbit { map, start, bounds } => {
            let h = load(map)?;
            let r = orbit(&h, &BigInt::from(*start), bounds.max_steps, bounds.escape);
            let (status, steps) = match r.status {
                OrbitStatus::Periodic => ("periodic", None),
                OrbitStatus::Preperiodic => ("preperiodic", None),
                OrbitStatus::Escaped { steps, .. } => ("escaped", Some(steps.to_string())),
            };
            let mut rows: Vec<Vec<String>> = Vec::new();
            for (i, v) in r.tail.iter().enumerate() {
                rows.push(vec![i.to_string(), v.to_string(), "tail".into()]);
            }
            for (i, v) in r.cycle.iter().enumerate() {
                rows.push(vec![i.to_string(), v.to_string(), "cycle".into()]);
            }
            Ok(Report {
                command: name,
                inputs: inputs(&[
                    map_input(map),
                    ("start", json!(start.to_string())),
                    ("max_steps", json!(bounds.max_steps.to_string())),
                    ("escape", json!(bounds.escape.to_string())),
                ]),
                results: json!({
                    "start": r.start.to_string(),
                    "tail": strs(&r.tail),
                    "cycle": strs(&r.cycle),
                    "entry": r.entry.map(|e| e.to_string()),
                    "status": status,
                    "steps": steps,
                }),
                header: vec!["index", "value", "part"],
                rows,
            })
        }
        Command::Cycles { map, range, bounds } => {
            let h = load(map)?;
            let cycles = find_cycles(&h, range.clone(), bounds.max_steps, bounds.escape);
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for c in &cycles {
                let j = cycle_string(&h, c)?;
                let values = strs(c);
                rows.push(vec![
                    values.join(" "),
                    c.len().to_string(),
                    j.to_string(),
                ]);
                out.push(json!({ "values": values, "length": c.len().to_string(), "string": j.to_string() }));
            }
            Ok(Report {
                command: name,
                inputs: inputs(&[
                    map_input(map),
                    ("range", json!(format!("{}:{}", range.start(), range.end()))),
                    ("max_steps", json!(bounds.max_steps.to_string())),
                    ("escape", json!(bounds.escape.to_string())),
                ]),
                results: json!({ "count": cycles.len().to_string(), "cycles": out }),
                header: vec!["cycle", "length", "string"],
                rows,
            })
        }
        Command::Numen { map, at, at_rational, depth, place } => {
            let h = load(map)?;
            let mut results = Map::new();
            match (at, at_rational, depth) {
                (Some(n), None, None) => {
                    let n: BigUint = n.parse().map_err(|_| {
                        CliError::Usage(format!("--at needs a nonnegative integer without --depth, got {n}"))
                    })?;
                    results.insert("mode".into(), json!("natural"));
                    results.insert("value".into(), json!(xh_nat(&h, &n)?.to_string()));
                }
                (Some(n), None, Some(d)) => {
                    let n: BigInt = n.parse().map_err(|_| CliError::Usage(format!("bad integer {n}")))?;
                    let z = PAdicTrunc::from_integer(&n, h.p(), *d as usize)?;
                    results.insert("mode".into(), json!("truncation"));
                    results.insert("digits".into(), json!(DigitString::from(&z).to_string()));
                    results.insert("value".into(), json!(xh_trunc(&h, &z)?.to_string()));
                }
                (None, Some(q), Some(d)) => {
                    let r: Rational = q.parse()?;
                    let z = PAdicTrunc::from_rational(&r, h.p(), *d as usize)?;
                    results.insert("mode".into(), json!("truncation"));
                    results.insert("digits".into(), json!(DigitString::from(&z).to_string()));
                    results.insert("value".into(), json!(xh_trunc(&h, &z)?.to_string()));
                }
                (None, Some(q), None) => {
                    let r: Rational = q.parse()?;
                    let z = digit_expansion(&r, h.p())?;
                    let period = DigitString::new(h.p(), z.period().to_vec())?;
                    let m = compose_string(&h, &period)?.m;
                    let chosen = match place {
                        Some(p) => *p,
                        None => find_contracting_place(&m, None).ok_or(hydra_numen::Error::NoContractingPlace)?,
                    };
                    let verdict = density_criterion(&h, chosen, &z)?;
                    results.insert("mode".into(), json!("exact"));
                    results.insert("place".into(), json!(chosen.to_string()));
                    results.insert(
                        "expansion".into(),
                        json!({
                            "preperiod": DigitString::new(h.p(), z.preperiod().to_vec())?.to_string(),
                            "period": period.to_string(),
                        }),
                    );
                    results.insert(
                        "density".into(),
                        json!({ "value": verdict.value.to_string(), "converges": verdict.converges }),
                    );
                    results.insert("value".into(), json!(xh_rational_exact(&h, &z, chosen)?.to_string()));
                }
                _ => return Err(CliError::Usage("give --at or --at-rational".into())),
            }
            let rows = results
                .iter()
                .filter_map(|(k, v)| v.as_str().map(|s| vec![k.clone(), s.to_string()]))
                .collect();
            Ok(Report {
                command: name,
                inputs: inputs(&[
                    map_input(map),
                    ("at", json!(at)),
                    ("at_rational", json!(at_rational)),
                    ("depth", json!(depth.map(|d| d.to_string()))),
                    ("place", json!(place.map(|p| p.to_string()))),
                ]),
                results: Value::Object(results),
                header: vec!["quantity", "value"],
                rows,
            })
        }
        Command::Charfn { map, place, level, method, depth, grid, force, allow_large } => {
            let h = load(map)?;
            let table: CharFnTable = match (place, method) {
                (Place::Finite(q), Method::Solve) => charfn_solve(&h, *q, *level)?,
                (Place::Finite(q), Method::Estimate) => {
                    charfn_estimate_table(&h, *q, *level, *depth, *force, *allow_large)?
                }
                (Place::Archimedean, Method::Estimate) => {
                    if grid.is_empty() {
                        return Err(CliError::Usage("the archimedean place needs --grid".into()));
                    }
                    charfn_estimate_grid(&h, grid, *depth, *force, *allow_large)?
                }
                (Place::Archimedean, Method::Solve) => {
                    return Err(CliError::Usage(
                        "the archimedean characteristic function is estimate-only".into(),
                    ))
                }
            };
            let residual = selfsim_residual(&h, &table)?;
            let entries: Vec<(String, Complex64)> = if table.values.is_empty() {
                table.samples.iter().map(|(t, v)| (t.to_string(), *v)).collect()
            } else {
                table.values.iter().map(|(t, v)| (t.to_string(), *v)).collect()
            };
            let values: Vec<Value> = entries
                .iter()
                .map(|(t, v)| json!({ "t": t, "re": v.re.to_string(), "im": v.im.to_string() }))
                .collect();
            Ok(Report {
                command: name,
                inputs: inputs(&[
                    map_input(map),
                    ("place", json!(place.to_string())),
                    ("level", json!(level.to_string())),
                    ("method", json!(if *method == Method::Solve { "solve" } else { "estimate" })),
                    ("depth", json!(depth.to_string())),
                    ("grid", json!(strs(grid))),
                ]),
                results: json!({ "values": values, "residual": residual.to_string() }),
                header: vec!["t", "re", "im"],
                rows: entries.iter().map(|(t, v)| vec![t.clone(), v.re.to_string(), v.im.to_string()]).collect(),
            })
        }
        Command::Dist { map, place, exponent, compare_empirical, depth, allow_large } => {
            let h = load(map)?;
            let Place::Finite(q) = *place else {
                return Err(CliError::Usage("the distribution needs a finite place".into()));
            };
            let d = prob_inversion(&h, q, *exponent)?;
            let mut results = json!({
                "q": q.to_string(),
                "n": exponent.to_string(),
                "b": d.b.to_string(),
                "probabilities": dist_rows(&d),
                "total": d.total().to_string(),
                "max_imag": d.max_imag.to_string(),
            });
            if *compare_empirical {
                let e = prob_empirical(&h, q, *exponent, *depth, *allow_large)?;
                results["empirical"] = json!(dist_rows(&e));
                results["total_variation"] = json!(total_variation(&d, &e).to_string());
            }
            Ok(Report {
                command: name,
                inputs: inputs(&[
                    map_input(map),
                    ("place", json!(place.to_string())),
                    ("exponent", json!(exponent.to_string())),
                    ("compare_empirical", json!(compare_empirical)),
                    ("depth", json!(depth.to_string())),
                ]),
                results,
                header: vec!["w", "probability"],
                rows: d.probabilities.iter().map(|(w, p)| vec![w.to_string(), p.to_string()]).collect(),
            })
        }
        Command::Correspond { map, range, place, max_len, bounds } => {
            let h = load(map)?;
            let opts = CorrespondenceOptions {
                range: range.clone(),
                max_steps: bounds.max_steps,
                escape_bound: bounds.escape,
                max_len: *max_len,
            };
            let r = correspondence_roundtrip(&h, *place, &opts)?;
            let mut rows = Vec::new();
            let certificates: Vec<Value> = r
                .certificates
                .iter()
                .map(|c| {
                    let x = c.x_value.as_ref().map(Rational::to_string);
                    let pl = c.place.map(|p| p.to_string());
                    rows.push(vec![
                        strs(&c.cycle).join(" "),
                        c.string.to_string(),
                        c.n.to_string(),
                        c.lambda.to_string(),
                        c.z.to_string(),
                        pl.clone().unwrap_or_default(),
                        x.clone().unwrap_or_default(),
                        c.verified.to_string(),
                    ]);
                    json!({
                        "cycle": strs(&c.cycle),
                        "string": c.string.to_string(),
                        "n": c.n.to_string(),
                        "lambda": c.lambda.to_string(),
                        "z": c.z.to_string(),
                        "place": pl,
                        "x_value": x,
                        "verified": c.verified,
                        "failure": c.failure,
                    })
                })
                .collect();
            let special: Vec<Vec<String>> = r.special.iter().map(|c| strs(c)).collect();
            let integer_values: Vec<String> = r.reverse.integer_values.iter().map(BigInt::to_string).collect();
            let unmatched: Vec<String> = r.reverse.unmatched.iter().map(BigInt::to_string).collect();
            Ok(Report {
                command: name,
                inputs: inputs(&[
                    map_input(map),
                    ("range", json!(format!("{}:{}", range.start(), range.end()))),
                    ("place", json!(place.map(|p| p.to_string()))),
                    ("max_len", json!(max_len.to_string())),
                ]),
                results: json!({
                    "certificates": certificates,
                    "verified": r.certificates.iter().filter(|c| c.verified).count().to_string(),
                    "special": special,
                    "reverse_scan": {
                        "max_len": r.reverse.max_len.to_string(),
                        "strings_scanned": r.reverse.strings_scanned.to_string(),
                        "skipped": r.reverse.skipped.to_string(),
                        "integer_values": integer_values,
                        "unmatched": unmatched,
                    },
                }),
                header: vec!["cycle", "string", "n", "lambda", "z", "place", "x_value", "verified"],
                rows,
            })
        }
    }
}

fn dist_rows(d: &Distribution) -> Vec<Value> {
    d.probabilities
        .iter()
        .map(|(w, p)| json!({ "w": w.to_string(), "p": p.to_string() }))
        .collect()
}
