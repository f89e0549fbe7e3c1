use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use polyext::extengine::ExtResult;
use polyext::powerfunctors::{Family, FunctorSpec};
use polyext::registry::Status;

#[derive(Serialize)]
pub struct ProblemEcho {
    pub from: String,
    pub to: String,
}

#[derive(Serialize)]
pub struct GroupRecord {
    pub free_rank: usize,
    pub invariant_factors: Vec<Value>,
}

#[derive(Serialize)]
pub struct DiagnosticsRecord {
    pub generators: usize,
    pub candidate_mazes: usize,
    pub relation_rank: usize,
    pub d_rows: usize,
    pub d_cols: usize,
    /// Null unless timings were requested, so repeated runs print the same bytes.
    pub millis: Option<u128>,
}

#[derive(Serialize)]
pub struct OutputRecord {
    pub problem: ProblemEcho,
    pub group: GroupRecord,
    pub primary: Vec<String>,
    pub display: String,
    pub status: Status,
    pub diagnostics: DiagnosticsRecord,
}

impl OutputRecord {
    pub fn new(result: &ExtResult, status: Status, timings: bool) -> Self {
        let g = &result.group;
        let d = &result.diagnostics;
        // Factors beyond u64 are emitted as decimal strings.
        let factors =
            g.torsion().iter().map(|t| t.to_u64().map_or_else(|| Value::String(t.to_string()), Value::from)).collect();
        Self {
            problem: ProblemEcho { from: result.problem.source.token(), to: result.problem.target.token() },
            group: GroupRecord { free_rank: g.free_rank(), invariant_factors: factors },
            primary: g.primary_strings(),
            display: g.to_string(),
            status,
            diagnostics: DiagnosticsRecord {
                generators: d.generators,
                candidate_mazes: d.candidate_mazes,
                relation_rank: d.relation_rank,
                d_rows: d.d_rows,
                d_cols: d.d_cols,
                millis: timings.then_some(d.millis),
            },
        }
    }
}

pub enum Cell {
    Value { group: String, status: Status },
    Abort,
}

impl Cell {
    pub fn is_frontier(&self) -> bool {
        matches!(self, Cell::Value { status: Status::Frontier, .. })
    }

    fn text(&self) -> String {
        match self {
            Cell::Value { group, status: Status::Frontier } => format!("{group} *"),
            Cell::Value { group, .. } => group.clone(),
            Cell::Abort => "—(abort)".to_string(),
        }
    }
}

/// One block of the table: rows are sources of degree `m`, columns targets
/// of degree `n`, cells in row-major order. `mark` decorates frontier cells
/// after padding so escape codes do not disturb alignment.
pub fn grid(families: &[Family], m: usize, n: usize, cells: &[Cell], mark: impl Fn(&str) -> String) -> String {
    let label = |f: Family, d: usize| FunctorSpec::new(f, d).expect("positive degree").to_string();
    let corner = format!("Ext^1 (m={m}, n={n})");
    let width = |s: &str| s.chars().count();
    let mut widths = vec![width(&corner).max(families.iter().map(|&f| width(&label(f, m))).max().unwrap_or(0))];
    for (j, &g) in families.iter().enumerate() {
        let col = (0..families.len()).map(|i| width(&cells[i * families.len() + j].text()));
        widths.push(col.chain([width(&label(g, n))]).max().unwrap_or(0));
    }
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - width(s)));
    let mut out = String::new();
    let header: Vec<String> = std::iter::once(pad(&corner, widths[0]))
        .chain(families.iter().enumerate().map(|(j, &g)| pad(&label(g, n), widths[j + 1])))
        .collect();
    out.push_str(header.join("  ").trim_end());
    out.push('\n');
    for (i, &f) in families.iter().enumerate() {
        let mut line = vec![pad(&label(f, m), widths[0])];
        for j in 0..families.len() {
            let cell = &cells[i * families.len() + j];
            let padded = pad(&cell.text(), widths[j + 1]);
            line.push(if cell.is_frontier() { mark(&padded) } else { padded });
        }
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
