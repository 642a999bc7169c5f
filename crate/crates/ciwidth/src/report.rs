//! Reference tables: sizing for a grid of designs plus simulated coverage and
//! power at both sample sizes.
//!
//! | table | family   | parameter          | widths              |
//! |-------|----------|--------------------|---------------------|
//! | 1     | Normal   | σ = 1              | 1/2^r, r = 1..depth |
//! | 2     | Poisson  | rate = 0.005·2^r   | 0.2·rate, 0.1·rate  |
//! | 3     | Binomial | p0 = 1/2^r         | 0.1, 0.05           |
//!
//! Every table crosses α ∈ {0.05, 0.1} with power ∈ {0.8, 0.9}.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use ciwidth_core::sizing::{
    n_exact_binomial, n_exact_normal, n_exact_poisson, n_expected_binomial, n_expected_normal, n_expected_poisson,
};
use ciwidth_core::{DesignSpec, Family, SearchPolicy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::{simulate, SimConfig};

const ALPHAS: [f64; 2] = [0.05, 0.1];
const POWERS: [f64; 2] = [0.8, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Normal,
    Poisson,
    Binomial,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Normal => "normal",
            FamilyKind::Poisson => "poisson",
            FamilyKind::Binomial => "binomial",
        }
    }

    fn family(self, param: f64) -> Family {
        match self {
            FamilyKind::Normal => Family::Normal { sigma: param },
            FamilyKind::Poisson => Family::Poisson { rate: param },
            FamilyKind::Binomial => Family::Binomial { p0: param },
        }
    }

    fn table(self) -> u64 {
        match self {
            FamilyKind::Normal => 1,
            FamilyKind::Poisson => 2,
            FamilyKind::Binomial => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: FamilyKind,
    /// σ, rate or p0.
    pub param: f64,
    pub width0: f64,
    pub conf_level: f64,
    pub power_target: f64,
    pub n_expected: u64,
    pub cov_expected: f64,
    pub pow_expected: f64,
    pub n_exact: u64,
    pub cov_exact: f64,
    pub pow_exact: f64,
}

pub const COLUMNS: [&str; 11] = [
    "family",
    "param",
    "width0",
    "conf_level",
    "power_target",
    "n_expected",
    "cov_expected",
    "pow_expected",
    "n_exact",
    "cov_exact",
    "pow_exact",
];

impl TableRow {
    pub fn alpha(&self) -> f64 {
        // conf_level is stored as 1 - alpha; undo without drift for the grid values
        ALPHAS.into_iter().find(|a| 1.0 - a == self.conf_level).unwrap_or(1.0 - self.conf_level)
    }

    fn cells(&self) -> [String; 11] {
        [
            self.family.name().to_string(),
            self.param.to_string(),
            self.width0.to_string(),
            prob(self.conf_level),
            prob(self.power_target),
            self.n_expected.to_string(),
            prob(self.cov_expected),
            prob(self.pow_expected),
            self.n_exact.to_string(),
            prob(self.cov_exact),
            prob(self.pow_exact),
        ]
    }
}

fn prob(p: f64) -> String {
    format!("{p:.4}")
}

/// One design of a table grid, before sizing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub family: FamilyKind,
    pub param: f64,
    pub width0: f64,
    pub alpha: f64,
    pub power: f64,
}

impl GridPoint {
    pub fn spec(&self) -> Result<DesignSpec> {
        Ok(DesignSpec::new(self.family.family(self.param), self.alpha, self.power, self.width0)?)
    }

    /// `(n_expected, n_exact)` with the default search policies.
    pub fn sizes(&self) -> Result<(u64, u64)> {
        let (a, b, d) = (self.alpha, self.power, self.width0);
        Ok(match self.family {
            FamilyKind::Normal => (n_expected_normal(self.param, d, a)?, n_exact_normal(self.param, d, a, b)?),
            FamilyKind::Poisson => {
                let rate = self.param;
                (
                    n_expected_poisson(rate, d, a, &SearchPolicy::poisson_expected(rate, d)?)?,
                    n_exact_poisson(rate, d, a, b, &SearchPolicy::poisson_exact(rate, d)?)?,
                )
            }
            FamilyKind::Binomial => {
                let p0 = self.param;
                (
                    n_expected_binomial(p0, d, a, &SearchPolicy::binomial_expected(p0, d, a)?)?,
                    n_exact_binomial(p0, d, a, b, &SearchPolicy::binomial_exact(p0)?)?,
                )
            }
        })
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if (1..=30).contains(&depth) {
        Ok(())
    } else {
        Err(Error::Config("depth must be in 1..=30".into()))
    }
}

fn cross(family: FamilyKind, param: f64, widths: &[f64], out: &mut Vec<GridPoint>) {
    for &width0 in widths {
        for alpha in ALPHAS {
            for power in POWERS {
                out.push(GridPoint { family, param, width0, alpha, power });
            }
        }
    }
}

/// Normal grid: σ = 1, widths `1/2^r`; `4·depth` points.
pub fn normal_grid(depth: u32) -> Result<Vec<GridPoint>> {
    check_depth(depth)?;
    let mut out = Vec::new();
    for r in 1..=depth {
        cross(FamilyKind::Normal, 1.0, &[1.0 / 2f64.powi(r as i32)], &mut out);
    }
    Ok(out)
}

/// Poisson grid: rate `0.005·2^r`, widths `0.2·rate` and `0.1·rate`; `8·depth` points.
pub fn poisson_grid(depth: u32) -> Result<Vec<GridPoint>> {
    check_depth(depth)?;
    let mut out = Vec::new();
    for r in 1..=depth {
        let rate = 0.005 * 2f64.powi(r as i32);
        cross(FamilyKind::Poisson, rate, &[0.2 * rate, 0.1 * rate], &mut out);
    }
    Ok(out)
}

/// Binomial grid: p0 `1/2^r`, widths 0.1 and 0.05; `8·depth` points.
pub fn binomial_grid(depth: u32) -> Result<Vec<GridPoint>> {
    check_depth(depth)?;
    let mut out = Vec::new();
    for r in 1..=depth {
        cross(FamilyKind::Binomial, 1.0 / 2f64.powi(r as i32), &[0.1, 0.05], &mut out);
    }
    Ok(out)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one simulated cell: `slot` 0 is the expected size, 1 the exact one.
pub fn cell_seed(seed: u64, table: u64, row: u64, slot: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(splitmix64(seed) ^ table) ^ row) ^ slot)
}

/// Sizes and simulates every grid point. Row order follows the grid.
pub fn build_rows(grid: &[GridPoint], nsim: u64, seed: u64) -> Result<Vec<TableRow>> {
    grid.par_iter()
        .enumerate()
        .map(|(i, g)| {
            let spec = g.spec()?;
            let (n_expected, n_exact) = g.sizes()?;
            let table = g.family.table();
            let sim = |n: u64, slot: u64| {
                simulate(&SimConfig { nsim, seed: cell_seed(seed, table, i as u64, slot), spec, n })
            };
            let expected = sim(n_expected, 0)?;
            let exact = sim(n_exact, 1)?;
            Ok(TableRow {
                family: g.family,
                param: g.param,
                width0: g.width0,
                conf_level: 1.0 - g.alpha,
                power_target: g.power,
                n_expected,
                cov_expected: expected.coverage,
                pow_expected: expected.power,
                n_exact,
                cov_exact: exact.coverage,
                pow_exact: exact.power,
            })
        })
        .collect()
}

pub fn table_normal(depth: u32, nsim: u64, seed: u64) -> Result<Vec<TableRow>> {
    build_rows(&normal_grid(depth)?, nsim, seed)
}

pub fn table_poisson(depth: u32, nsim: u64, seed: u64) -> Result<Vec<TableRow>> {
    build_rows(&poisson_grid(depth)?, nsim, seed)
}

pub fn table_binomial(depth: u32, nsim: u64, seed: u64) -> Result<Vec<TableRow>> {
    build_rows(&binomial_grid(depth)?, nsim, seed)
}

/// Table `k` (1 Normal, 2 Poisson, 3 Binomial).
pub fn table(k: u32, depth: u32, nsim: u64, seed: u64) -> Result<Vec<TableRow>> {
    match k {
        1 => table_normal(depth, nsim, seed),
        2 => table_poisson(depth, nsim, seed),
        3 => table_binomial(depth, nsim, seed),
        _ => Err(Error::Config(format!("unknown table {k}; expected 1, 2 or 3"))),
    }
}

pub fn write_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_markdown(rows: &[TableRow]) -> String {
    let cells: Vec<[String; 11]> = rows.iter().map(TableRow::cells).collect();
    let mut widths = COLUMNS.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, items: &mut dyn Iterator<Item = (usize, &str)>, numeric: bool| {
        s.push('|');
        for (i, (w, c)) in items.enumerate() {
            // family is text, everything else right-aligned
            if i == 0 || !numeric {
                let _ = write!(s, " {c:<w$} |");
            } else {
                let _ = write!(s, " {c:>w$} |");
            }
        }
        s.push('\n');
    };
    line(&mut s, &mut widths.iter().copied().zip(COLUMNS), false);
    s.push('|');
    for (i, w) in widths.iter().enumerate() {
        let dashes = "-".repeat(*w);
        if i == 0 {
            let _ = write!(s, " {dashes} |");
        } else {
            let _ = write!(s, " {}: |", &dashes[1..]);
        }
    }
    s.push('\n');
    for row in &cells {
        line(&mut s, &mut widths.iter().copied().zip(row.iter().map(String::as_str)), true);
    }
    s
}

/// Writes `table{k}.csv` and `table{k}.md` into `dir` and returns their paths.
pub fn write_table_files(k: u32, rows: &[TableRow], dir: &Path) -> Result<[PathBuf; 2]> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("table{k}.csv"));
    let md_path = dir.join(format!("table{k}.md"));
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    std::fs::write(&csv_path, buf)?;
    std::fs::write(&md_path, to_markdown(rows))?;
    Ok([csv_path, md_path])
}
