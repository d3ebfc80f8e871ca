//! `emc sweep`: solve every `(n, k, s)` of a grid file and write one CSV row
//! per instance.
//!
//! Each non-empty line of the grid holds three fields `n k s` (`#` starts a
//! comment). A field is a comma-separated list of integers and inclusive
//! ranges `a..b`; `n` may also use `sk` and `sk+d`. For example
//! `sk,sk+1 2,3 2..3` expands to eight instances.

use std::io::Write;

use emc::*;
use num_bigint::BigInt;

use crate::commands::{budget, read_text};
use crate::error::CliError;
use crate::SweepArgs;

pub const HEADER: [&str; 10] = [
    "n", "k", "s", "optimum", "|A|", "|B|", "ratio", "gap", "nodes", "time",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NSpec {
    Fixed(u32),
    Offset(u32),
}

fn parse_list(field: &str, line: usize) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("grid line {line}: cannot read {field:?}"));
    let mut out = Vec::new();
    for item in field.split(',') {
        match item.split_once("..") {
            Some((a, b)) => {
                let a: u32 = a.parse().map_err(|_| bad())?;
                let b: u32 = b.parse().map_err(|_| bad())?;
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn parse_n(field: &str, line: usize) -> Result<Vec<NSpec>, CliError> {
    let mut out = Vec::new();
    for item in field.split(',') {
        if item == "sk" {
            out.push(NSpec::Offset(0));
        } else if let Some(d) = item.strip_prefix("sk+") {
            let d = d
                .parse()
                .map_err(|_| CliError::Usage(format!("grid line {line}: cannot read {item:?}")))?;
            out.push(NSpec::Offset(d));
        } else {
            out.extend(parse_list(item, line)?.into_iter().map(NSpec::Fixed));
        }
    }
    Ok(out)
}

/// Expands a grid file into `(n, k, s)` triples, in file order with `s`
/// outermost, then `k`, then `n`.
pub fn parse_grid(text: &str) -> Result<Vec<(u32, u32, u32)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(CliError::Usage(format!(
                "grid line {}: expected `n k s`",
                i + 1
            )));
        }
        let ns = parse_n(fields[0], i + 1)?;
        let ks = parse_list(fields[1], i + 1)?;
        let ss = parse_list(fields[2], i + 1)?;
        for &s in &ss {
            for &k in &ks {
                for &n in &ns {
                    let n = match n {
                        NSpec::Fixed(n) => n,
                        NSpec::Offset(d) => s * k + d,
                    };
                    if k == 0 || s < 2 || n < s * k || n > MAX_N {
                        return Err(CliError::Usage(format!(
                            "grid line {}: need k >= 1, s >= 2 and sk <= n <= {MAX_N}, got ({n},{k},{s})",
                            i + 1
                        )));
                    }
                    out.push((n, k, s));
                }
            }
        }
    }
    Ok(out)
}

fn cell(q: &Rational) -> String {
    render_rational(q)
}

pub(crate) fn run(a: SweepArgs) -> Result<(), CliError> {
    let grid = parse_grid(&read_text(Some(&a.grid))?)?;
    let time_budget = budget(a.time_budget)?;
    let sink: Box<dyn Write> = match &a.output {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    let mut out = csv::Writer::from_writer(sink);
    out.write_record(HEADER)?;
    out.flush()?;

    let mut incomplete = 0;
    for (n, k, s) in grid {
        let b64 = |m: u32| binomial(u64::from(m), u64::from(k));
        let total = b64(n);
        let size_a = b64(s * k - 1);
        let size_b = &total - b64(n - (s - 1));
        let mut row = vec![n.to_string(), k.to_string(), s.to_string()];
        if total > BigCount::from(SOLVER_CAP) {
            incomplete += 1;
            row.extend(["capped".into(), size_a.to_string(), size_b.to_string()]);
            row.extend([String::new(), String::new(), String::new(), String::new()]);
        } else {
            let mut p = Problem::max_size(n, k, s)
                .left_compressed()
                .with_workers(a.workers);
            p.node_budget = a.node_budget;
            p.time_budget = time_budget;
            let r = solve_max_family(&p)?;
            if r.proven_optimal {
                let ratio =
                    Rational::new(BigInt::from(r.optimum.clone()), BigInt::from(total.clone()));
                let target = Rational::new(BigInt::from(s - 1), BigInt::from(s));
                let gap = &target - &ratio;
                row.extend([
                    r.optimum.to_string(),
                    size_a.to_string(),
                    size_b.to_string(),
                    cell(&ratio),
                    cell(&gap),
                ]);
            } else {
                incomplete += 1;
                row.extend([
                    "truncated".into(),
                    size_a.to_string(),
                    size_b.to_string(),
                    String::new(),
                    String::new(),
                ]);
            }
            row.push(r.nodes_explored.to_string());
            row.push(format!("{:.6}", r.wall_time.as_secs_f64()));
        }
        out.write_record(&row)?;
        out.flush()?;
    }
    if incomplete > 0 {
        eprintln!("{incomplete} instance(s) capped or truncated");
        return Err(CliError::Truncated);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expansion() {
        let g = parse_grid("# demo\nsk,sk+1 2,3 2..3\n\n").unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(&g[..4], &[(4, 2, 2), (5, 2, 2), (6, 3, 2), (7, 3, 2)]);
        assert_eq!(parse_grid("7 2 3  # trailing").unwrap(), vec![(7, 2, 3)]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("5 2 3").is_err());
        assert!(parse_grid("7 2").is_err());
        assert!(parse_grid("x 2 3").is_err());
    }
}
