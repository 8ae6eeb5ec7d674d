//! Cycle-accurate reservation-table scheduler.
//!
//! Builds the stage-by-cycle occupancy matrix of a bounded pipeline with a
//! greedy policy and serves as the brute-force oracle for the closed-form
//! model: the index of the last busy column must equal the analytic cycle
//! count, and the per-column concurrency histogram feeds the generalized
//! speedup identity.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Stage-by-cycle occupancy matrix: `columns[c][s] = Some(e)` when stage
/// `s + 1` processes element `e` during cycle `c + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReservationTable {
    depth: usize,
    devices: usize,
    columns: Vec<Vec<Option<usize>>>,
}

/// Output formats for [`ReservationTable::render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(Self::Text),
            "csv" => Ok(Self::Csv),
            other => Err(format!(
                "unknown table format `{other}` (expected text or csv)"
            )),
        }
    }
}

/// Per-column concurrency histogram of a reservation table.
///
/// `fractions[i]` is the share of busy stage-slots that sit in columns with
/// exactly `i + 1` active stages; the shares sum to 1 over the whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityProfile {
    pub fractions: Vec<f64>,
    /// Busy stage-slots per concurrency level (same indexing as `fractions`).
    pub level_slots: Vec<usize>,
    /// Total busy stage-slots, `n * p` for a complete run.
    pub total_slots: usize,
}

/// Greedy cycle-by-cycle schedule of `elements` inputs through `depth`
/// stages with at most `devices` stages active per cycle.
///
/// Contention policy: deeper stages win, new admissions to stage 1 come
/// last; among elements waiting for the same stage the earliest one goes
/// first. Device counts above the depth are clamped (spare devices can
/// never be used).
pub fn build_table(depth: usize, devices: usize, elements: usize) -> Result<ReservationTable> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    if elements == 0 {
        return Err(Error::EmptyWorkload);
    }
    let devices = devices.min(depth);

    // stages completed per admitted element (1-based element ids)
    let mut progress: Vec<usize> = Vec::with_capacity(elements);
    let mut admitted = 0usize;
    let mut finished = 0usize;
    let mut columns: Vec<Vec<Option<usize>>> = Vec::new();

    while finished < elements {
        // one candidate per stage: the earliest element waiting for it
        let mut claims: Vec<(usize, usize)> = Vec::new(); // (stage, element)
        let mut stage_taken = vec![false; depth + 1];
        for element in 1..=admitted {
            let done = progress[element - 1];
            if done == depth {
                continue;
            }
            let stage = done + 1;
            if !stage_taken[stage] {
                stage_taken[stage] = true;
                claims.push((stage, element));
            }
        }
        if admitted < elements && !stage_taken[1] {
            claims.push((1, admitted + 1));
        }

        // deeper stages first, then smaller element index
        claims.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut column = vec![None; depth];
        for &(stage, element) in claims.iter().take(devices) {
            column[stage - 1] = Some(element);
            if element > admitted {
                admitted += 1;
                progress.push(1);
            } else {
                progress[element - 1] += 1;
            }
            if progress[element - 1] == depth {
                finished += 1;
            }
        }
        columns.push(column);
    }

    Ok(ReservationTable {
        depth,
        devices,
        columns,
    })
}

impl ReservationTable {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn devices(&self) -> usize {
        self.devices
    }

    /// Element processed by `stage` (1-based) at `cycle` (1-based), if any.
    pub fn cell(&self, stage: usize, cycle: usize) -> Option<usize> {
        self.columns.get(cycle - 1).and_then(|c| c[stage - 1])
    }

    pub fn columns(&self) -> &[Vec<Option<usize>>] {
        &self.columns
    }

    /// Index of the last non-empty column, i.e. the total cycle count.
    pub fn completion_cycles(&self) -> usize {
        self.columns
            .iter()
            .rposition(|c| c.iter().any(Option::is_some))
            .map_or(0, |i| i + 1)
    }

    /// Histogram of busy stage-slots by concurrency level.
    pub fn concurrency_fractions(&self) -> ActivityProfile {
        let mut level_slots = vec![0usize; self.devices];
        let mut total = 0usize;
        for column in &self.columns {
            let active = column.iter().filter(|c| c.is_some()).count();
            if active == 0 {
                continue;
            }
            if active > level_slots.len() {
                level_slots.resize(active, 0);
            }
            level_slots[active - 1] += active;
            total += active;
        }
        let fractions = level_slots
            .iter()
            .map(|&slots| slots as f64 / total as f64)
            .collect();
        ActivityProfile {
            fractions,
            level_slots,
            total_slots: total,
        }
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Text => self.render_text(),
            TableFormat::Csv => self.render_csv(),
        }
    }

    fn cell_width(&self) -> usize {
        let cycles = self.columns.len().max(1);
        let elements = self
            .columns
            .iter()
            .flatten()
            .filter_map(|c| *c)
            .max()
            .unwrap_or(1);
        digits(cycles).max(digits(elements))
    }

    fn render_text(&self) -> String {
        let width = self.cell_width();
        let label = "stage";
        let mut out = String::new();
        write!(out, "{label} |").unwrap();
        for cycle in 1..=self.columns.len() {
            write!(out, " {cycle:>width$}").unwrap();
        }
        out.push('\n');
        for stage in 1..=self.depth {
            write!(out, "{stage:>label_width$} |", label_width = label.len()).unwrap();
            for column in &self.columns {
                match column[stage - 1] {
                    Some(element) => write!(out, " {element:>width$}").unwrap(),
                    None => write!(out, " {:>width$}", "").unwrap(),
                }
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.columns.len()).map(|c| c.to_string()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for stage in 1..=self.depth {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|column| column[stage - 1].map(|e| e.to_string()).unwrap_or_default())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Parse the CSV produced by [`render`](Self::render); the device count
    /// is recovered as the maximum column occupancy. Round-trips bit-exactly
    /// with the renderer.
    pub fn parse_csv(input: &str) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedTableCsv("missing header".into()))?;
        let cycles = header.split(',').count();
        let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != cycles {
                return Err(Error::MalformedTableCsv(format!(
                    "row {} has {} cells, expected {}",
                    i + 1,
                    cells.len(),
                    cycles
                )));
            }
            let row = cells
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<usize>().map(Some).map_err(|e| {
                            Error::MalformedTableCsv(format!("bad cell `{cell}`: {e}"))
                        })
                    }
                })
                .collect::<Result<Vec<Option<usize>>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::MalformedTableCsv("no stage rows".into()));
        }
        let depth = rows.len();
        let columns: Vec<Vec<Option<usize>>> = (0..cycles)
            .map(|c| rows.iter().map(|row| row[c]).collect())
            .collect();
        let devices = columns
            .iter()
            .map(|col| col.iter().filter(|c| c.is_some()).count())
            .max()
            .unwrap_or(1)
            .max(1);
        Ok(Self {
            depth,
            devices,
            columns,
        })
    }
}

fn digits(mut value: usize) -> usize {
    let mut count = 1;
    while value >= 10 {
        value /= 10;
        count += 1;
    }
    count
}
