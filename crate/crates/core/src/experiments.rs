//! File formats and experiment drivers behind the `qdt` command line.
//!
//! | file        | header                                                              |
//! |-------------|---------------------------------------------------------------------|
//! | history     | `k,decayed,x,v`                                                     |
//! | generations | `gen,best_fitness,mean_fitness,best_tree`                           |
//! | decisions   | `k,state,action,belief,strategy_id,signed_belief,value,cumulative_value` |
//!
//! All files are UTF-8 with LF line endings. Floats in the generations and
//! decisions files carry six decimals.

use std::io::{self, Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cat_environment::{reward, step_value, CatHistory, CatState, MeasurementRecord};
use crate::decision_tree::{
    enumerate_strategies, value_operator_of, Action, EnumerationOverflow, Policy, QdtExpr,
};
use crate::genetic_program::GenerationStats;

pub const HISTORY_HEADER: [&str; 4] = ["k", "decayed", "x", "v"];
pub const GENERATIONS_HEADER: [&str; 4] = ["gen", "best_fitness", "mean_fitness", "best_tree"];
pub const DECISIONS_HEADER: [&str; 8] = [
    "k",
    "state",
    "action",
    "belief",
    "strategy_id",
    "signed_belief",
    "value",
    "cumulative_value",
];

#[derive(Debug, Error)]
pub enum HistoryCsvError {
    #[error("history row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("history header must be `k,decayed,x,v`, found `{0}`")]
    Header(String),
    #[error("history has no records")]
    Empty,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl HistoryCsvError {
    fn row(row: usize, message: impl Into<String>) -> Self {
        HistoryCsvError::Row {
            row,
            message: message.into(),
        }
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

pub fn write_history_csv<W: Write>(h: &CatHistory, w: W) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(HISTORY_HEADER).map_err(csv_io)?;
    for r in h.records() {
        let decayed = if r.state.is_alive() { "0" } else { "1" };
        out.write_record([
            r.k.to_string().as_str(),
            decayed,
            r.x.to_string().as_str(),
            r.v.to_string().as_str(),
        ])
        .map_err(csv_io)?;
    }
    out.flush()
}

/// Reads and checks a history file: `k` counts up from 1, `x` moves by one
/// in the direction `decayed` implies, and `v = |Δx|`. Rows are numbered
/// from 1 after the header.
pub fn read_history_csv<R: Read>(r: R) -> Result<CatHistory, HistoryCsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(r);
    let header = reader.headers().map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(e) => HistoryCsvError::Io(e),
        other => HistoryCsvError::Header(format!("{other:?}")),
    })?;
    if header.iter().map(str::trim).ne(HISTORY_HEADER) {
        return Err(HistoryCsvError::Header(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }

    let mut records = Vec::new();
    let mut x_prev = 0i64;
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(e) => HistoryCsvError::Io(e),
            other => HistoryCsvError::row(row_no, format!("{other:?}")),
        })?;
        if row.len() != 4 {
            return Err(HistoryCsvError::row(
                row_no,
                format!("expected 4 fields, found {}", row.len()),
            ));
        }
        let field = |j: usize| row[j].trim();
        let k: usize = field(0)
            .parse()
            .map_err(|_| HistoryCsvError::row(row_no, format!("bad k {:?}", field(0))))?;
        if k != row_no {
            return Err(HistoryCsvError::row(
                row_no,
                format!("k is {k}, expected {row_no}"),
            ));
        }
        let decayed = match field(1) {
            "0" => false,
            "1" => true,
            other => {
                return Err(HistoryCsvError::row(
                    row_no,
                    format!("decayed must be 0 or 1, found {other:?}"),
                ))
            }
        };
        let x: i64 = field(2)
            .parse()
            .map_err(|_| HistoryCsvError::row(row_no, format!("bad x {:?}", field(2))))?;
        let v: u64 = field(3)
            .parse()
            .map_err(|_| HistoryCsvError::row(row_no, format!("bad v {:?}", field(3))))?;
        let expected_x = if decayed { x_prev - 1 } else { x_prev + 1 };
        if x != expected_x {
            return Err(HistoryCsvError::row(
                row_no,
                format!("x is {x}, expected {expected_x}"),
            ));
        }
        if v != step_value(x_prev, x) {
            return Err(HistoryCsvError::row(
                row_no,
                format!("v is {v}, expected |Δx| = 1"),
            ));
        }
        records.push(MeasurementRecord {
            k,
            state: if decayed {
                CatState::Phi2Dead
            } else {
                CatState::Phi1Alive
            },
            x,
            v,
        });
        x_prev = x;
    }
    if records.is_empty() {
        return Err(HistoryCsvError::Empty);
    }
    Ok(CatHistory::from_records(records))
}

pub fn write_generations_csv<W: Write>(stats: &[GenerationStats], w: W) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(GENERATIONS_HEADER).map_err(csv_io)?;
    for s in stats {
        out.write_record([
            s.generation.to_string(),
            format!("{:.6}", s.best_fitness),
            format!("{:.6}", s.mean_fitness),
            s.best_tree_text.clone(),
        ])
        .map_err(csv_io)?;
    }
    out.flush()
}

/// One simulated decision against one record.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionRow {
    pub k: usize,
    pub state: CatState,
    pub action: Action,
    pub belief: f64,
    pub strategy_id: u64,
    pub signed_belief: f64,
    pub value: f64,
    pub cumulative_value: f64,
}

impl DecisionRow {
    pub fn success(&self) -> bool {
        self.action.believes_alive() == self.state.is_alive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunReport {
    pub n: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub total_value: f64,
}

impl std::fmt::Display for RunReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "successes = {}", self.successes)?;
        writeln!(f, "success_rate = {:.6}", self.success_rate)?;
        write!(f, "total_value = {:.6}", self.total_value)
    }
}

/// Lets the observer described by `tree` decide once per record, with all
/// draws taken from ChaCha8 seeded by `seed`.
pub fn simulate_decisions(
    tree: &QdtExpr,
    h: &CatHistory,
    seed: u64,
) -> (Vec<DecisionRow>, RunReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut policy = Policy::new(tree);
    let mut cumulative = 0.0;
    let mut successes = 0;
    let rows: Vec<DecisionRow> = h
        .records()
        .iter()
        .map(|r| {
            let d = policy.decide(&mut rng);
            let value = reward(d.action, r.state, r.v as f64);
            cumulative += value;
            let row = DecisionRow {
                k: r.k,
                state: r.state,
                action: d.action,
                belief: d.belief,
                strategy_id: d.strategy_id,
                signed_belief: d.signed_belief(),
                value,
                cumulative_value: cumulative,
            };
            successes += row.success() as usize;
            row
        })
        .collect();
    let n = rows.len();
    let report = RunReport {
        n,
        successes,
        success_rate: successes as f64 / n as f64,
        total_value: cumulative,
    };
    (rows, report)
}

pub fn write_decisions_csv<W: Write>(rows: &[DecisionRow], w: W) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(DECISIONS_HEADER).map_err(csv_io)?;
    for r in rows {
        out.write_record([
            r.k.to_string(),
            r.state.label().to_string(),
            r.action.label().to_string(),
            format!("{:.6}", r.belief),
            r.strategy_id.to_string(),
            format!("{:.6}", r.signed_belief),
            format!("{:.6}", r.value),
            format!("{:.6}", r.cumulative_value),
        ])
        .map_err(csv_io)?;
    }
    out.flush()
}

/// One line of a tree's strategy table.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyRow {
    pub id: u64,
    pub text: String,
    pub weight: f64,
    pub p1: f64,
    pub p2: f64,
}

pub fn strategy_table(tree: &QdtExpr, cap: usize) -> Result<Vec<StrategyRow>, EnumerationOverflow> {
    Ok(enumerate_strategies(tree, cap)?
        .iter()
        .map(|s| {
            let vo = value_operator_of(s);
            StrategyRow {
                id: s.id,
                text: s.expr.to_text(),
                weight: s.weight,
                p1: vo.p1,
                p2: vo.p2,
            }
        })
        .collect())
}

/// Tab-separated table with a header line.
pub fn format_strategy_table(rows: &[StrategyRow]) -> String {
    let mut out = String::from("id\tstrategy\tweight\tp1\tp2\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{:.12}\t{:.12}\t{:.12}\n",
            r.id, r.text, r.weight, r.p1, r.p2
        ));
    }
    out
}
