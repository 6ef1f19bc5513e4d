//! Tables of difference sizes over families of groups.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{best_bounds, lower_bound, Effort};
use crate::certify::Target;
use crate::data;
use crate::error::{Error, Result};
use crate::group::{abelian_groups_of_order, GroupSpec};
use crate::solver::{min_difference_basis, SearchConfig, SearchStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cyclic,
    NoncyclicAbelian,
    Abelian,
    /// Abelian groups and the bundled non-abelian fixtures.
    All,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Family::Cyclic),
            "noncyclic-abelian" => Ok(Family::NoncyclicAbelian),
            "abelian" => Ok(Family::Abelian),
            "all" => Ok(Family::All),
            _ => Err(Error::Parse(format!("unknown group family '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    /// The solver refuted every smaller size.
    ProvedOptimal,
    /// Lower and upper bounds already agree.
    BoundsClosed,
    /// The budget ran out; `delta` is an upper bound only.
    UpperOnly,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::ProvedOptimal => "proved-optimal",
            RowStatus::BoundsClosed => "bounds-closed",
            RowStatus::UpperOnly => "upper-only",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub group: String,
    pub order: u64,
    pub lb: u64,
    /// Best size found; exact unless the status is `UpperOnly`.
    pub delta: u64,
    /// Proven lower bound on the difference size.
    pub lower: u64,
    pub characteristic: f64,
    pub method: String,
    pub status: RowStatus,
}

impl TableRow {
    pub fn is_exact(&self) -> bool {
        self.status != RowStatus::UpperOnly
    }
}

/// Groups of `family` with order in `[min, max]`, as `(name, group)` in
/// canonical order: by order, then by the sorted factor list, non-abelian
/// fixtures after the abelian groups of the same order.
pub fn table_groups(family: Family, min: u64, max: u64) -> Vec<(String, GroupSpec)> {
    let mut out = Vec::new();
    for n in min.max(1)..=max {
        for g in abelian_groups_of_order(n) {
            let cyclic = g.is_cyclic();
            let keep = match family {
                Family::Cyclic => cyclic,
                Family::NoncyclicAbelian => !cyclic,
                Family::Abelian | Family::All => true,
            };
            if keep {
                if cyclic {
                    out.push((format!("C{n}"), GroupSpec::cyclic(n)));
                } else {
                    out.push((g.descriptor(), g));
                }
            }
        }
        if family == Family::All {
            for (name, g) in data::nonabelian_fixtures() {
                if g.order() == n {
                    out.push((name.clone(), g.clone()));
                }
            }
        }
    }
    out
}

/// One table row: bounds first, the solver only when the bracket is open.
pub fn solve_row(name: &str, g: &GroupSpec, cfg: &SearchConfig) -> Result<TableRow> {
    let n = g.order();
    let lb = lower_bound(g);
    let bounds = best_bounds(g, Effort::WithConstructions);
    let (delta, lower, method, status) = if bounds.is_closed() {
        (bounds.upper, bounds.lower, bounds.upper_method.clone(), RowStatus::BoundsClosed)
    } else {
        let mut cfg = cfg.clone();
        cfg.initial_upper = Some(bounds.upper);
        let r = min_difference_basis(g, &Target::Full, &cfg)?;
        let status = match r.status {
            SearchStatus::ProvedOptimal => RowStatus::ProvedOptimal,
            SearchStatus::UpperOnly => RowStatus::UpperOnly,
        };
        if r.delta <= bounds.upper {
            (r.delta, r.lower.max(bounds.lower), r.certificate.method, status)
        } else {
            (bounds.upper, r.lower.max(bounds.lower), bounds.upper_method.clone(), status)
        }
    };
    Ok(TableRow {
        group: name.to_string(),
        order: n,
        lb,
        delta,
        lower,
        characteristic: delta as f64 / (n as f64).sqrt(),
        method,
        status,
    })
}

/// Rows for every group of `family` with order in `[min, max]`.
pub fn solve_table(family: Family, min: u64, max: u64, cfg: &SearchConfig) -> Result<Vec<TableRow>> {
    table_groups(family, min, max)
        .iter()
        .map(|(name, g)| solve_row(name, g, cfg))
        .collect()
}

/// `x` truncated (not rounded) to four decimals.
pub fn truncate4(x: f64) -> String {
    let t = (x * 1e4 + 1e-9).floor() / 1e4;
    format!("{t:.4}")
}

/// Table style of the literature: decimal comma, trailing zeros dropped
/// when the value is exact at four decimals, `...` otherwise.
pub fn paper_style(x: f64) -> String {
    let scaled = x * 1e4;
    let exact = (scaled - scaled.round()).abs() < 1e-6;
    let mut s = truncate4(x).replace('.', ",");
    if exact {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with(',') {
            s.pop();
        }
    } else {
        s.push_str("...");
    }
    s
}

const CSV_HEADER: &str = "group,order,lb,delta,characteristic,method,status";

/// CSV with the columns `group,order,lb,delta,characteristic,method,status`.
/// Open rows print `delta` as `lower..upper`.
pub fn to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let delta = if r.is_exact() {
            r.delta.to_string()
        } else {
            format!("{}..{}", r.lower, r.delta)
        };
        let method = if r.method.contains(',') {
            format!("\"{}\"", r.method.replace('"', "\"\""))
        } else {
            r.method.clone()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.group,
            r.order,
            r.lb,
            delta,
            truncate4(r.characteristic),
            method,
            r.status
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation() {
        assert_eq!(truncate4(1.17669), "1.1766");
        assert_eq!(truncate4(1.5), "1.5000");
        assert_eq!(truncate4(2f64.sqrt()), "1.4142");
        assert_eq!(paper_style(6.0 / 26f64.sqrt()), "1,1766...");
        assert_eq!(paper_style(1.25), "1,25");
        assert_eq!(paper_style(1.0), "1");
    }

    #[test]
    fn groups_of_small_orders() {
        let names: Vec<String> = table_groups(Family::All, 1, 8).into_iter().map(|(n, _)| n).collect();
        assert_eq!(
            names,
            ["C1", "C2", "C3", "C2^2", "C4", "C5", "C6", "D6", "C7", "C2^3", "C2xC4", "C8", "D8", "Q8"]
        );
        assert_eq!(table_groups(Family::NoncyclicAbelian, 12, 16).len(), 1 + 4);
        assert_eq!(table_groups(Family::Cyclic, 1, 25).len(), 25);
    }

    #[test]
    fn rows_and_csv() {
        let rows = solve_table(Family::Cyclic, 1, 8, &SearchConfig::default()).unwrap();
        let deltas: Vec<u64> = rows.iter().map(|r| r.delta).collect();
        assert_eq!(deltas, [1, 2, 2, 3, 3, 3, 3, 4]);
        assert!(rows.iter().all(|r| r.is_exact()));
        let csv = to_csv(&rows);
        assert!(csv.starts_with("group,order,lb,delta,characteristic,method,status\nC1,1,1,1,1.0000,"));
        assert_eq!(csv.lines().count(), 9);
    }
}
