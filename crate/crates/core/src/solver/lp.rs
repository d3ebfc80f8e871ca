//! LP-format export of a [`Problem`] as a 0/1 program, for cross-checking with
//! an external MILP solver. Variable `x<r>` is the k-set of colex rank `r`.

use std::fmt::Write;

use crate::combinatorics::{all_ksets, colex_rank, full_mask, KSet};
use crate::error::Result;
use crate::partitions::disjoint_tuples;

use super::problem::{Objective, Problem};

const TERMS_PER_LINE: usize = 12;

fn rank(bits: u64) -> u32 {
    colex_rank(KSet::from_bits(bits)) as u32
}

fn write_sum(out: &mut String, terms: &[String]) {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            if i % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            out.push_str(" + ");
        }
        out.push_str(t);
    }
}

fn vars(ranks: &[u32]) -> Vec<String> {
    ranks.iter().map(|r| format!("x{r}")).collect()
}

/// Renders the instance. Packing rows (`sum <= s - 1` over each s-tuple of
/// pairwise disjoint k-sets) are sorted by the colex ranks of their support.
pub fn export_lp(p: &Problem) -> Result<String> {
    p.validate()?;
    let sets = all_ksets(p.n, p.k);
    let all: Vec<u32> = (0..sets.len() as u32).collect();
    let mut out = String::new();
    let objective = match p.objective {
        Objective::MaxSize => "MAX_SIZE",
        Objective::MinDisjointPairs => "MIN_DISJOINT_PAIRS",
    };
    writeln!(
        out,
        "\\ emc model n={} k={} s={} objective={objective}",
        p.n, p.k, p.s
    )
    .unwrap();

    let mut pair_vars: Vec<(u32, u32)> = Vec::new();
    match p.objective {
        Objective::MaxSize => {
            out.push_str("Maximize\n obj: ");
            write_sum(&mut out, &vars(&all));
        }
        Objective::MinDisjointPairs => {
            for (i, &a) in sets.iter().enumerate() {
                for (j, &b) in sets.iter().enumerate().skip(i + 1) {
                    if a & b == 0 {
                        pair_vars.push((i as u32, j as u32));
                    }
                }
            }
            out.push_str("Minimize\n obj: ");
            let terms: Vec<String> = pair_vars.iter().map(|(a, b)| format!("y{a}_{b}")).collect();
            if terms.is_empty() {
                out.push_str("0 x0");
            } else {
                write_sum(&mut out, &terms);
            }
        }
    }
    out.push_str("\nSubject To\n");

    if p.objective == Objective::MaxSize {
        let mut rows: Vec<Vec<u32>> = disjoint_tuples(full_mask(p.n), p.k, p.s)
            .into_iter()
            .map(|t| {
                let mut r: Vec<u32> = t.into_iter().map(rank).collect();
                r.sort_unstable();
                r
            })
            .collect();
        rows.sort();
        for (i, row) in rows.iter().enumerate() {
            write!(out, " p{i}: ").unwrap();
            write_sum(&mut out, &vars(row));
            writeln!(out, " <= {}", p.s - 1).unwrap();
        }
    } else {
        for (a, b) in &pair_vars {
            writeln!(out, " q{a}_{b}: x{a} + x{b} - y{a}_{b} <= 1").unwrap();
        }
        if let Some(size) = p.fixed_size {
            out.push_str(" size: ");
            write_sum(&mut out, &vars(&all));
            writeln!(out, " = {size}").unwrap();
        }
    }

    for x in 1..=p.n {
        let bit = 1u64 << (x - 1);
        let through: Vec<u32> = all
            .iter()
            .copied()
            .filter(|&r| sets[r as usize] & bit != 0)
            .collect();
        if let Some(d) = p.min_degree {
            write!(out, " dmin{x}: ").unwrap();
            write_sum(&mut out, &vars(&through));
            writeln!(out, " >= {d}").unwrap();
        }
        if let Some(d) = p.max_degree {
            write!(out, " dmax{x}: ").unwrap();
            write_sum(&mut out, &vars(&through));
            writeln!(out, " <= {d}").unwrap();
        }
    }

    if p.restrict_left_compressed {
        for (r, &a) in sets.iter().enumerate() {
            let mut bits = a;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                if b >= 1 && a & (1u64 << (b - 1)) == 0 {
                    let lower = rank(a & !(1u64 << b) | (1u64 << (b - 1)));
                    writeln!(out, " c{r}_{lower}: x{r} - x{lower} <= 0").unwrap();
                }
            }
        }
    }
    for (tag, fam, value) in [("f", &p.forced, 1), ("z", &p.forbidden, 0)] {
        for s in fam.iter().flat_map(|f| f.iter()) {
            let r = colex_rank(s);
            writeln!(out, " {tag}{r}: x{r} = {value}").unwrap();
        }
    }

    out.push_str("Binary\n");
    for chunk in all.chunks(TERMS_PER_LINE) {
        writeln!(out, " {}", vars(chunk).join(" ")).unwrap();
    }
    for chunk in pair_vars.chunks(TERMS_PER_LINE) {
        let names: Vec<String> = chunk.iter().map(|(a, b)| format!("y{a}_{b}")).collect();
        writeln!(out, " {}", names.join(" ")).unwrap();
    }
    out.push_str("End\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packing_rows(text: &str) -> Vec<&str> {
        text.lines()
            .filter(|l| l.trim_start().starts_with('p'))
            .collect()
    }

    #[test]
    fn packing_rows_for_small_instances() {
        let lp = export_lp(&Problem::max_size(4, 2, 2)).unwrap();
        let rows = packing_rows(&lp);
        assert_eq!(
            rows,
            vec![
                " p0: x0 + x5 <= 1",
                " p1: x1 + x4 <= 1",
                " p2: x2 + x3 <= 1"
            ]
        );

        let lp = export_lp(&Problem::max_size(6, 2, 3)).unwrap();
        let rows = packing_rows(&lp);
        assert_eq!(rows.len(), 15);
        assert!(rows
            .iter()
            .all(|r| r.ends_with("<= 2") && r.matches(" + ").count() == 2));
        assert_eq!(rows[0], " p0: x0 + x5 + x14 <= 2");

        // s = 2: one row per disjoint pair; 35 * 4 / 2 for 3-sets of [7]
        let lp = export_lp(&Problem::max_size(7, 3, 2)).unwrap();
        assert_eq!(packing_rows(&lp).len(), 70);
    }

    #[test]
    fn export_is_deterministic_and_complete() {
        let p = Problem::max_size(6, 2, 3)
            .with_min_degree(1)
            .with_max_degree(4);
        let a = export_lp(&p).unwrap();
        assert_eq!(a, export_lp(&p).unwrap());
        assert!(
            a.starts_with("\\ emc model n=6 k=2 s=3 objective=MAX_SIZE\nMaximize\n obj: x0 + x1")
        );
        assert_eq!(a.matches(" dmin").count(), 6);
        assert_eq!(a.matches(" dmax").count(), 6);
        assert!(a.contains("Binary\n x0 x1 x2"));
        assert!(a.ends_with("End\n"));

        let lc = export_lp(&Problem::max_size(4, 2, 2).left_compressed()).unwrap();
        // {1,3} <= {1,2}; {2,3} <= {1,3}; {1,4} <= {1,3}; ...
        assert!(lc.contains(" c1_0: x1 - x0 <= 0"));
        assert!(lc.contains(" c2_1: x2 - x1 <= 0"));
    }

    #[test]
    fn min_pairs_export() {
        let p = Problem::min_disjoint_pairs(4, 2, 2, 2);
        let lp = export_lp(&p).unwrap();
        assert!(lp.contains("Minimize\n obj: y0_5 + y1_4 + y2_3"));
        assert!(lp.contains(" q0_5: x0 + x5 - y0_5 <= 1"));
        assert!(lp.contains(" size: x0 + x1 + x2 + x3 + x4 + x5 = 2"));
        assert!(lp.contains(" y0_5 y1_4 y2_3"));
    }
}
