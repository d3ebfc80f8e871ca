use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Duration;

use emc::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{
    BoundsArgs, CompressArgs, ConstructArgs, Kind, ObjectiveArg, SolveArgs, Suite, VerifyArgs,
};

pub(crate) fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        }
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn read_family(path: Option<&Path>) -> Result<Family, CliError> {
    Ok(Family::from_json_str(&read_text(path)?)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub(crate) fn budget(seconds: Option<f64>) -> Result<Option<Duration>, CliError> {
    seconds
        .map(|s| {
            Duration::try_from_secs_f64(s).map_err(|e| CliError::Usage(format!("time budget: {e}")))
        })
        .transpose()
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{kind} needs --{flag}")))
}

pub(crate) fn construct(a: ConstructArgs) -> Result<(), CliError> {
    let family = match a.kind {
        Kind::A => construct_a(a.n, a.k, need(a.s, "s", "A")?)?,
        Kind::B => construct_b(a.n, a.k, need(a.s, "s", "B")?)?,
        Kind::Star => star(a.n, a.k, need(a.x, "x", "star")?)?,
        Kind::Kleitman => kleitman_extremal(a.n, a.k, need(a.x, "x", "kleitman")?)?,
    };
    if a.stats {
        let profile = family.degree_profile();
        eprintln!("size: {}", family.len());
        eprintln!("matching number: {}", family.matching_number());
        eprintln!(
            "degrees: min {} max {}",
            profile.min_degree, profile.max_degree
        );
    }
    println!("{}", family.to_json_string());
    Ok(())
}

pub(crate) fn compress(a: CompressArgs) -> Result<(), CliError> {
    let family = read_family(a.input.as_deref())?;
    let compressed = left_compress(&family);
    eprintln!(
        "matching number {} -> {}",
        family.matching_number(),
        compressed.matching_number()
    );
    println!("{}", compressed.to_json_string());
    Ok(())
}

#[derive(Serialize)]
struct SolveOutput {
    n: u32,
    k: u32,
    s: u32,
    objective: Objective,
    optimum: String,
    proven_optimal: bool,
    nodes_explored: u64,
    wall_time_seconds: f64,
    witnesses: Vec<FamilyJson>,
}

fn problem_from(a: &SolveArgs) -> Result<Problem, CliError> {
    let mut p = match a.objective {
        ObjectiveArg::MaxSize => Problem::max_size(a.n, a.k, a.s),
        ObjectiveArg::MinDisjointPairs => {
            let size = need(a.fixed_size, "fixed-size", "min-disjoint-pairs")?;
            let mut p = Problem::min_disjoint_pairs(a.n, a.k, size, 0);
            p.max_degree = None;
            p.s = a.s;
            p
        }
    };
    p.min_degree = a.min_degree;
    p.max_degree = a.max_degree;
    p.restrict_left_compressed = a.left_compressed;
    let load = |path: &Option<PathBuf>| path.as_deref().map(|p| read_family(Some(p))).transpose();
    p.forced = load(&a.forced)?;
    p.forbidden = load(&a.forbidden)?;
    p.node_budget = a.node_budget;
    p.time_budget = budget(a.time_budget)?;
    p.workers = a.workers.max(1);
    p.split_depth = a.split_depth;
    p.validate()?;
    Ok(p)
}

pub(crate) fn solve(a: SolveArgs) -> Result<(), CliError> {
    let p = problem_from(&a)?;
    if let Some(path) = &a.export_lp {
        std::fs::write(path, export_lp(&p)?)?;
    }
    let r = emc::solve(&p, a.enumerate_optima)?;
    let out = SolveOutput {
        n: p.n,
        k: p.k,
        s: p.s,
        objective: p.objective,
        optimum: r.optimum.to_string(),
        proven_optimal: r.proven_optimal,
        nodes_explored: r.nodes_explored,
        wall_time_seconds: r.wall_time.as_secs_f64(),
        witnesses: r.witnesses.iter().map(Family::to_json).collect(),
    };
    let text = serde_json::to_string_pretty(&out)?;
    match &a.output {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    eprintln!(
        "optimum {}{} ({} witnesses, {} nodes, {:.3}s)",
        r.optimum,
        if r.proven_optimal {
            ""
        } else {
            " (not proven)"
        },
        r.witnesses.len(),
        r.nodes_explored,
        r.wall_time.as_secs_f64()
    );
    if r.proven_optimal {
        Ok(())
    } else {
        Err(CliError::Truncated)
    }
}

struct Verdict {
    pass: bool,
    lines: Vec<String>,
    json: Value,
}

pub(crate) fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let workers = a.workers.max(1);
    let v = match a.suite {
        Suite::Kleitman { s, k } => {
            let r = kleitman_check(s, k, workers)?;
            Verdict {
                pass: r.pass,
                lines: vec![
                    format!("claim: {}", r.claim),
                    format!("optimum {} (expected {})", r.optimum, r.expected),
                    format!(
                        "{} optima, unique up to the avoided element: {}",
                        r.optima, r.unique
                    ),
                ],
                json: serde_json::to_value(&r)?,
            }
        }
        Suite::Shiftdeg { input, compress } => {
            let mut family = read_family(input.as_deref())?;
            if compress {
                family = left_compress(&family);
            }
            let ra = verify_shiftdeg_a(&family)?;
            let rb = verify_shiftdeg_b(&family)?;
            let claim = "shift degrees: for left-compressed F, (n-k)|F_n| <= k|F_not n| and |F_n|/C(n-1,k-1) <= |F_{n-1, not n}|/C(n-2,k-1)";
            Verdict {
                pass: ra.holds && rb.holds,
                lines: vec![
                    format!("claim: {claim}"),
                    format!("(a) {} <= {}: {}", ra.lhs, ra.rhs, ra.holds),
                    format!(
                        "(b) {}/{} <= {}/{}: {}",
                        rb.lhs_num, rb.lhs_den, rb.rhs_num, rb.rhs_den, rb.holds
                    ),
                ],
                json: json!({ "claim": claim, "pass": ra.holds && rb.holds, "a": ra, "b": rb }),
            }
        }
        Suite::DoubleCount { input } => {
            let family = read_family(input.as_deref())?;
            let r = verify_double_count(&family)?;
            let claim = "partition double count: over partitions of [sk] into k-sets, the blocks lying in G = complement(F) number |G| * M";
            Verdict {
                pass: r.passed(),
                lines: vec![
                    format!("claim: {claim}"),
                    format!(
                        "|G| = {}, M = {}, partitions = {}",
                        r.complement_size, r.m, r.partitions
                    ),
                    format!(
                        "incidences {} = |G| * M = {}: {}",
                        r.incidences, r.expected_incidences, r.identity_holds
                    ),
                    format!(
                        "pair incidences {} = dp(G) * M' = {} * {}: {}",
                        r.pair_incidences,
                        r.complement_disjoint_pairs,
                        r.m_prime,
                        r.pair_identity_holds
                    ),
                ],
                json: json!({ "claim": claim, "pass": r.passed(), "report": r }),
            }
        }
        Suite::DropRatio { s, k } => {
            let r = drop_ratio_check(s, k, workers)?;
            Verdict {
                pass: r.pass,
                lines: vec![
                    format!("claim: {}", r.claim),
                    format!("f({},{},{}) = {} of {}", r.n, r.k, r.s, r.optimum, r.total),
                    format!(
                        "ratio {}, gap {}",
                        render_rational(&r.ratio),
                        render_rational(&r.gap)
                    ),
                ],
                json: serde_json::to_value(&r)?,
            }
        }
        Suite::Emc { n, k, s } => {
            let r = emc_consistency(n, k, s, workers)?;
            Verdict {
                pass: r.consistent,
                lines: vec![
                    format!("claim: {}", r.claim),
                    format!("f({n},{k},{s}) = {}", r.optimum),
                    format!("|A| = {}, |B| = {}", r.size_a, r.size_b),
                ],
                json: serde_json::to_value(&r)?,
            }
        }
    };
    if a.json {
        print_json(&v.json)?;
    } else {
        for line in &v.lines {
            println!("{line}");
        }
        println!("{}", if v.pass { "PASS" } else { "FAIL" });
    }
    if v.pass {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}

fn rational_flag(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

pub(crate) fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    let delta = rational_flag("delta", &a.delta)?;
    let c = rational_flag("C", &a.c)?;
    let delta0 = rational_flag("delta0", &a.delta0)?;
    let p = ExactBounds::new(a.s, a.k, delta, c.clone(), delta0.clone())?;
    let stab = stab_upper_bound(&p)?;
    let supersat = supersat_lower_bound(&p)?;
    let eps = epsilon_formulas(a.s, c, delta0)?;
    let rows = [
        ("stab_upper_bound", stab),
        ("supersat_lower_bound", supersat),
        ("epsilon_star", eps.epsilon_star),
        ("epsilon", eps.epsilon),
    ];
    if a.json {
        let mut map = serde_json::Map::new();
        for (name, value) in &rows {
            map.insert(
                name.to_string(),
                json!({ "exact": render_rational(value), "approx": Scalar::to_f64(value) }),
            );
        }
        print_json(&Value::Object(map))?;
    } else {
        for (name, value) in &rows {
            println!(
                "{name:<22} {:<28} {:.12e}",
                render_rational(value),
                Scalar::to_f64(value)
            );
        }
    }
    Ok(())
}
