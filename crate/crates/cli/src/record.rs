use std::io;
use std::path::Path;

use nlcell::{SolveResult, SolverStats};
use nlcell::nlsat::UnknownReason;

pub const HEADER: [&str; 9] = [
    "instance",
    "variant",
    "result",
    "wall_ms",
    "scc_calls",
    "apx_cells",
    "fallbacks",
    "max_resultant_degree",
    "learned_clauses",
];

/// One row of the statistics CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub instance: String,
    pub variant: String,
    /// `sat`, `unsat`, `unknown`, `timeout` or `error`.
    pub result: String,
    pub wall_ms: u64,
    pub scc_calls: u64,
    pub apx_cells: u64,
    pub fallbacks: u64,
    pub max_resultant_degree: u32,
    pub learned_clauses: u64,
}

impl RunRecord {
    pub fn from_run(instance: &str, variant: &str, result: &SolveResult, stats: &SolverStats, wall_ms: u64) -> Self {
        let result = match result {
            SolveResult::Unknown(UnknownReason::Timeout) => "timeout",
            r => r.verdict(),
        };
        RunRecord {
            instance: instance.to_string(),
            variant: variant.to_string(),
            result: result.to_string(),
            wall_ms,
            scc_calls: stats.scc_calls,
            apx_cells: stats.apx_cells,
            fallbacks: stats.fallbacks,
            max_resultant_degree: stats.max_resultant_degree,
            learned_clauses: stats.learned_clauses,
        }
    }

    /// A row without solver counters, for timeouts and crashes.
    pub fn bare(instance: &str, variant: &str, result: &str, wall_ms: u64) -> Self {
        RunRecord {
            instance: instance.to_string(),
            variant: variant.to_string(),
            result: result.to_string(),
            wall_ms,
            scc_calls: 0,
            apx_cells: 0,
            fallbacks: 0,
            max_resultant_degree: 0,
            learned_clauses: 0,
        }
    }

    fn fields(&self) -> [String; 9] {
        [
            self.instance.clone(),
            self.variant.clone(),
            self.result.clone(),
            self.wall_ms.to_string(),
            self.scc_calls.to_string(),
            self.apx_cells.to_string(),
            self.fallbacks.to_string(),
            self.max_resultant_degree.to_string(),
            self.learned_clauses.to_string(),
        ]
    }

    fn from_fields(r: &csv::StringRecord) -> Option<Self> {
        let num = |i: usize| r.get(i)?.parse::<u64>().ok();
        Some(RunRecord {
            instance: r.get(0)?.to_string(),
            variant: r.get(1)?.to_string(),
            result: r.get(2)?.to_string(),
            wall_ms: num(3)?,
            scc_calls: num(4)?,
            apx_cells: num(5)?,
            fallbacks: num(6)?,
            max_resultant_degree: r.get(7)?.parse().ok()?,
            learned_clauses: num(8)?,
        })
    }
}

pub fn write_records(path: &Path, rows: &[RunRecord]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()
}

pub fn read_records(path: &Path) -> io::Result<Vec<RunRecord>> {
    let mut rd = csv::Reader::from_path(path)?;
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "unexpected statistics header"));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        out.push(
            RunRecord::from_fields(&rec)
                .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "malformed statistics row"))?,
        );
    }
    Ok(out)
}
