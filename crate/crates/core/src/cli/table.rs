//! Sweep tables and their CSV / JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isochore::Regime;

pub const SCHEMA: &str = "bose-eos v1";

/// Fixed `{:.16e}` formatting: 17 significant digits, no locale.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Column {
    T,
    #[serde(rename = "t")]
    ReducedT,
    R,
    Mu,
    Psi2,
    Rho,
    P,
    Regime,
}

impl Column {
    pub const ALL: [Column; 8] =
        [Column::T, Column::ReducedT, Column::R, Column::Mu, Column::Psi2, Column::Rho, Column::P, Column::Regime];

    pub fn name(self) -> &'static str {
        match self {
            Column::T => "T",
            Column::ReducedT => "t",
            Column::R => "r",
            Column::Mu => "mu",
            Column::Psi2 => "psi2",
            Column::Rho => "rho",
            Column::P => "P",
            Column::Regime => "regime",
        }
    }

    /// Comma-separated names; output keeps the canonical column order.
    pub fn parse_list(spec: &str) -> Result<Vec<Column>> {
        let mut cols = Vec::new();
        for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let col = Column::ALL
                .into_iter()
                .find(|c| c.name() == name)
                .ok_or_else(|| Error::Config(format!("unknown column '{name}'")))?;
            if !cols.contains(&col) {
                cols.push(col);
            }
        }
        if cols.is_empty() {
            return Err(Error::Config("empty column selection".into()));
        }
        cols.sort();
        Ok(cols)
    }
}

/// One row of a sweep. Numeric fields are `None` for refused states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub temperature: f64,
    pub t: f64,
    pub r: Option<f64>,
    pub mu: Option<f64>,
    pub psi2: Option<f64>,
    pub rho: Option<f64>,
    #[serde(rename = "P")]
    pub pressure: Option<f64>,
    pub regime: Regime,
}

impl SweepRow {
    fn cell(&self, col: Column) -> String {
        match col {
            Column::T => fmt_num(self.temperature),
            Column::ReducedT => fmt_num(self.t),
            Column::R => fmt_opt(self.r),
            Column::Mu => fmt_opt(self.mu),
            Column::Psi2 => fmt_opt(self.psi2),
            Column::Rho => fmt_opt(self.rho),
            Column::P => fmt_opt(self.pressure),
            Column::Regime => self.regime.to_string(),
        }
    }
}

/// Ordered states along an isochore or isobar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub schema: &'static str,
    /// `"density"` or `"pressure"`.
    pub constraint: &'static str,
    pub value: f64,
    pub t_c: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self, columns: &[Column]) -> String {
        let names: Vec<_> = columns.iter().map(|c| c.name()).collect();
        let mut out = String::new();
        let _ = writeln!(out, "# {SCHEMA} columns: {}", names.join(","));
        let _ = writeln!(out, "{}", names.join(","));
        for row in &self.rows {
            let cells: Vec<_> = columns.iter().map(|&c| row.cell(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sweep table serializes");
        s.push('\n');
        s
    }
}
