//! Pass Rate aggregation and the capability × system grid.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{ErrorClass, Verdict};
use crate::lang::Direction;
use crate::suite::Capability;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("no verdicts to report on")]
    Empty,
}

/// A percentage in tenths, rounded half up: `Percent(775)` is 77.5 %.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Percent(pub u32);

impl Percent {
    pub fn from_ratio(passed: usize, total: usize) -> Self {
        assert!(total > 0 && passed <= total, "ratio {passed}/{total}");
        let (p, t) = (passed as u64, total as u64);
        Percent(((2000 * p + t) / (2 * t)) as u32)
    }

    /// Arithmetic mean of already rounded percentages.
    pub fn mean(values: &[Percent]) -> Option<Percent> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as u64;
        let sum: u64 = values.iter().map(|p| u64::from(p.0)).sum();
        Some(Percent(((2 * sum + n) / (2 * n)) as u32))
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

impl Serialize for Percent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Percent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(deserializer)?;
        Ok(Percent((v * 10.0).round() as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub capability: Capability,
    pub direction: Direction,
    pub backend: String,
    pub passed: usize,
    pub total: usize,
    pub pass_rate: Percent,
    pub error_classes: BTreeMap<ErrorClass, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowAverage {
    pub direction: Direction,
    pub average: Percent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnAverage {
    pub capability: Capability,
    pub backend: String,
    pub average: Percent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub directions: Vec<Direction>,
    pub backends: Vec<String>,
    pub cells: Vec<Cell>,
    pub row_averages: Vec<RowAverage>,
    pub column_averages: Vec<ColumnAverage>,
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GridOptions {
    /// Cells and averages strictly below this percentage are shown in bold.
    pub bold_below: Option<f64>,
}

/// (passed, total) over a group of verdicts.
pub fn pass_rate(verdicts: &[Verdict]) -> Result<(usize, usize, Percent), ReportError> {
    if verdicts.is_empty() {
        return Err(ReportError::Empty);
    }
    let passed = verdicts.iter().filter(|v| v.passed).count();
    Ok((passed, verdicts.len(), Percent::from_ratio(passed, verdicts.len())))
}

fn push_unique<T: PartialEq + Clone>(list: &mut Vec<T>, item: &T) {
    if !list.contains(item) {
        list.push(item.clone());
    }
}

/// Passed, total and error-class counts for one cell.
type Tally = (usize, usize, BTreeMap<ErrorClass, usize>);

pub fn build_report(verdicts: &[Verdict]) -> Result<Report, ReportError> {
    if verdicts.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut directions = Vec::new();
    let mut backends = Vec::new();
    let mut groups: BTreeMap<(Capability, usize, usize), Tally> = BTreeMap::new();
    for v in verdicts {
        push_unique(&mut directions, &v.direction);
        push_unique(&mut backends, &v.backend);
        let d = directions.iter().position(|x| *x == v.direction).expect("pushed");
        let b = backends.iter().position(|x| *x == v.backend).expect("pushed");
        let entry = groups.entry((v.capability, d, b)).or_default();
        entry.1 += 1;
        if v.passed {
            entry.0 += 1;
        }
        if let Some(class) = v.error_class {
            *entry.2.entry(class).or_default() += 1;
        }
    }

    // rows by direction, then capability, then backend
    let mut cells = Vec::with_capacity(groups.len());
    for (d, direction) in directions.iter().enumerate() {
        for capability in Capability::ALL {
            for (b, backend) in backends.iter().enumerate() {
                if let Some((passed, total, classes)) = groups.get(&(capability, d, b)) {
                    cells.push(Cell {
                        capability,
                        direction: direction.clone(),
                        backend: backend.clone(),
                        passed: *passed,
                        total: *total,
                        pass_rate: Percent::from_ratio(*passed, *total),
                        error_classes: classes.clone(),
                    });
                }
            }
        }
    }

    let row_averages = directions
        .iter()
        .filter_map(|direction| {
            let rates: Vec<Percent> = cells.iter().filter(|c| c.direction == *direction).map(|c| c.pass_rate).collect();
            Percent::mean(&rates).map(|average| RowAverage {
                direction: direction.clone(),
                average,
            })
        })
        .collect();
    let column_averages = Capability::ALL
        .iter()
        .flat_map(|&capability| backends.iter().map(move |b| (capability, b)))
        .filter_map(|(capability, backend)| {
            let rates: Vec<Percent> = cells
                .iter()
                .filter(|c| c.capability == capability && c.backend == *backend)
                .map(|c| c.pass_rate)
                .collect();
            Percent::mean(&rates).map(|average| ColumnAverage {
                capability,
                backend: backend.clone(),
                average,
            })
        })
        .collect();

    Ok(Report {
        directions,
        backends,
        passed: cells.iter().map(|c| c.passed).sum(),
        total: cells.iter().map(|c| c.total).sum(),
        cells,
        row_averages,
        column_averages,
    })
}

fn direction_label(d: &Direction) -> String {
    let title = |s: &str| {
        let mut chars = s.chars();
        chars
            .next()
            .map(|c| c.to_uppercase().chain(chars).collect::<String>())
            .unwrap_or_default()
    };
    format!("{}→{}", title(&d.source), title(&d.target))
}

impl Report {
    pub fn cell(&self, capability: Capability, direction: &Direction, backend: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.capability == capability && c.direction == *direction && c.backend == backend)
    }

    /// Cells whose Pass Rate is strictly below `threshold` percent.
    pub fn cells_below(&self, threshold: f64) -> Vec<&Cell> {
        self.cells
            .iter()
            .filter(|c| (c.passed as f64) * 100.0 < threshold * c.total as f64)
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Plain-text grid: one column group per capability with a column per
    /// backend, one row per direction, and Avg row and column.
    pub fn render_grid(&self, options: GridOptions) -> String {
        let show = |p: Option<Percent>| -> String {
            match p {
                None => "-".to_string(),
                Some(p) if options.bold_below.is_some_and(|t| p.as_f64() < t) => format!("**{p}**"),
                Some(p) => p.to_string(),
            }
        };

        let mut header_groups = vec!["Lang".to_string()];
        let mut header_systems = vec![String::new()];
        for capability in Capability::ALL {
            for (i, backend) in self.backends.iter().enumerate() {
                header_groups.push(if i == 0 { capability.to_string() } else { String::new() });
                header_systems.push(backend.clone());
            }
        }
        header_groups.push("Avg".to_string());
        header_systems.push(String::new());

        let mut rows = vec![header_groups, header_systems];
        for direction in &self.directions {
            let mut row = vec![direction_label(direction)];
            for capability in Capability::ALL {
                for backend in &self.backends {
                    row.push(show(self.cell(capability, direction, backend).map(|c| c.pass_rate)));
                }
            }
            let avg = self.row_averages.iter().find(|r| r.direction == *direction).map(|r| r.average);
            row.push(show(avg));
            rows.push(row);
        }
        let mut avg_row = vec!["Avg".to_string()];
        for capability in Capability::ALL {
            for backend in &self.backends {
                let avg = self
                    .column_averages
                    .iter()
                    .find(|c| c.capability == capability && c.backend == *backend)
                    .map(|c| c.average);
                avg_row.push(show(avg));
            }
        }
        avg_row.push("-".to_string());
        rows.push(avg_row);

        let columns = rows[0].len();
        let widths: Vec<usize> = (0..columns)
            .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
            .collect();
        let per_group = self.backends.len();
        let mut out = String::new();
        for (r, row) in rows.iter().enumerate() {
            let mut line = String::new();
            for (i, cell) in row.iter().enumerate() {
                // a bar before each capability group and before Avg
                if i > 0 && (i - 1) % per_group == 0 {
                    line.push_str(" | ");
                } else if i > 0 {
                    line.push_str("  ");
                }
                let pad = widths[i] - cell.chars().count();
                if i == 0 {
                    line.push_str(cell);
                    line.push_str(&" ".repeat(pad));
                } else {
                    line.push_str(&" ".repeat(pad));
                    line.push_str(cell);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
            if r == 1 || r == rows.len() - 2 {
                out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 3 * columns));
                out.push('\n');
            }
        }
        out
    }
}
