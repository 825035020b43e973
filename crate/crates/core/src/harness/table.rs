//! The definitions × criteria verdict matrix, assembled from the findings
//! of the reproduction cases.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::classify::Definition;
use crate::harness::repro::{Criterion, Finding, ReproReport};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Pass,
    Fail,
    Open,
}

impl Cell {
    pub fn symbol(self) -> &'static str {
        match self {
            Cell::Pass => "✓",
            Cell::Fail => "✗",
            Cell::Open => "?",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cell::Pass => "pass",
            Cell::Fail => "fail",
            Cell::Open => "open",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellEntry {
    pub cell: Cell,
    /// Ids of the cases whose findings decide the cell.
    pub backing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictTable {
    cells: BTreeMap<(Definition, Criterion), CellEntry>,
}

impl VerdictTable {
    /// Builds the table. A cell fails on any violation, passes when every
    /// backing finding is consistent, and stays open otherwise.
    ///
    /// Refuses when any case failed a check, or when a cell has no backing.
    pub fn from_report(report: &ReproReport) -> Result<Self> {
        let failed: Vec<&str> = report.cases.iter().filter(|c| !c.passed()).map(|c| c.id.as_str()).collect();
        if !failed.is_empty() {
            return Err(Error::Scenario(format!("backing cases failed: {}", failed.join(", "))));
        }
        let mut findings: BTreeMap<(Definition, Criterion), Vec<(String, Finding)>> = BTreeMap::new();
        for case in &report.cases {
            for b in &case.backing {
                findings.entry((b.definition, b.criterion)).or_default().push((case.id.clone(), b.finding));
            }
        }
        let mut cells = BTreeMap::new();
        for d in Definition::ALL {
            for k in Criterion::ALL {
                let list = findings.remove(&(d, k)).unwrap_or_default();
                if list.is_empty() {
                    return Err(Error::Scenario(format!("no case backs ({d}, {})", k.as_str())));
                }
                let cell = if list.iter().any(|(_, f)| *f == Finding::Violation) {
                    Cell::Fail
                } else if list.iter().all(|(_, f)| *f == Finding::Consistent) {
                    Cell::Pass
                } else {
                    Cell::Open
                };
                let mut backing: Vec<String> = list.into_iter().map(|(id, _)| id).collect();
                backing.sort();
                backing.dedup();
                cells.insert((d, k), CellEntry { cell, backing });
            }
        }
        Ok(VerdictTable { cells })
    }

    pub fn get(&self, d: Definition, k: Criterion) -> &CellEntry {
        &self.cells[&(d, k)]
    }

    /// Symbols row by row, e.g. `"✗✗?"` for definition I.
    pub fn pattern(&self, d: Definition) -> String {
        Criterion::ALL.iter().map(|&k| self.get(d, k).cell.symbol()).collect()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| definition |");
        for k in Criterion::ALL {
            let _ = write!(out, " {} |", k.as_str());
        }
        out.push_str("\n|---|---|---|---|\n");
        for d in Definition::ALL {
            let _ = write!(out, "| {d} |");
            for k in Criterion::ALL {
                let _ = write!(out, " {} |", self.get(d, k).cell.symbol());
            }
            out.push('\n');
        }
        out.push_str("\nBacking cases:\n\n");
        for d in Definition::ALL {
            for k in Criterion::ALL {
                let e = self.get(d, k);
                let _ = writeln!(out, "- {d} / {}: {} ({})", k.as_str(), e.cell.as_str(), e.backing.join(", "));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("definition,criterion,cell,symbol,backing\n");
        for d in Definition::ALL {
            for k in Criterion::ALL {
                let e = self.get(d, k);
                let _ = writeln!(out, "{d},{},{},{},{}", k.as_str(), e.cell.as_str(), e.cell.symbol(), e.backing.join(" "));
            }
        }
        out
    }
}
