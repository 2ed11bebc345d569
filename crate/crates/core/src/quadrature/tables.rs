//! Reproduction of the published tables from embedded fixtures.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::DEFAULT_TOL_IMAG;
use super::rule::{build_rule, estimate, Integrand, QuadratureRule, WeightMethod, E_FIXTURE};
use super::weights::Normalization;
use crate::error::{Error, Result};
use crate::perturbation::Perturbation;
use crate::scalar::{format_q, parse_q, q, Q};
use crate::scheme::CoefficientScheme;

pub const FIXTURE_VERSION: u32 = 1;

/// `22/(7 pi)`: published estimates were evaluated with `pi` replaced by `22/7`.
pub fn twenty_two_sevenths_factor() -> f64 {
    22.0 / (7.0 * PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl TableId {
    pub const ALL: [TableId; 6] = [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6];

    fn fixture(self) -> &'static str {
        match self {
            TableId::T1 => include_str!("../../fixtures/t1.csv"),
            TableId::T2 => include_str!("../../fixtures/t2.csv"),
            TableId::T3 => include_str!("../../fixtures/t3.csv"),
            TableId::T4 => include_str!("../../fixtures/t4.csv"),
            TableId::T5 => include_str!("../../fixtures/t5.csv"),
            TableId::T6 => include_str!("../../fixtures/t6.csv"),
        }
    }

    /// Weights used to recompute the table.
    pub fn method(self) -> WeightMethod {
        match self {
            TableId::T1 | TableId::T2 | TableId::T4 => WeightMethod::MomentFormula,
            TableId::T3 | TableId::T5 | TableId::T6 => WeightMethod::SecondKindRatio(Normalization::Scaled(q(1, 2))),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = TableId::ALL.iter().position(|t| t == self).expect("listed") + 1;
        write!(f, "t{i}")
    }
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" | "1" => Ok(TableId::T1),
            "t2" | "2" => Ok(TableId::T2),
            "t3" | "3" => Ok(TableId::T3),
            "t4" | "4" => Ok(TableId::T4),
            "t5" | "5" => Ok(TableId::T5),
            "t6" | "6" => Ok(TableId::T6),
            _ => Err(Error::Input(format!("unknown table id {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    #[serde(rename = "I_star")]
    IStar,
    AbsErr,
    Node,
    Weight,
}

#[derive(Debug, Deserialize)]
struct Row {
    label: String,
    n: usize,
    k: Option<usize>,
    mu: Option<String>,
    kp: Option<usize>,
    nu: Option<String>,
    quantity: Quantity,
    index: Option<usize>,
    paper_value: f64,
}

/// One published number and the configuration that produces it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureCell {
    pub label: String,
    pub n: usize,
    pub perturbation: Perturbation,
    pub quantity: Quantity,
    pub index: Option<usize>,
    pub paper_value: f64,
}

fn parse_opt(s: &Option<String>) -> Result<Option<Q>> {
    s.as_deref().map(parse_q).transpose()
}

pub fn load_fixture(id: TableId) -> Result<Vec<FixtureCell>> {
    let text = id.fixture();
    let version = text
        .lines()
        .filter_map(|l| l.strip_prefix("# version:"))
        .next()
        .and_then(|v| v.trim().parse::<u32>().ok());
    if version != Some(FIXTURE_VERSION) {
        return Err(Error::Fixture(format!("{id}: unsupported fixture version {version:?}")));
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    reader
        .deserialize::<Row>()
        .map(|row| {
            let row = row.map_err(|e| Error::Fixture(format!("{id}: {e}")))?;
            let mut pert = Perturbation::none();
            if let (Some(k), Some(mu)) = (row.k, parse_opt(&row.mu)?) {
                pert.corec = Perturbation::corec(k, mu).corec;
            }
            if let (Some(kp), Some(nu)) = (row.kp, parse_opt(&row.nu)?) {
                pert.codil = Perturbation::codil(kp, nu).codil;
            }
            Ok(FixtureCell {
                label: row.label,
                n: row.n,
                perturbation: pert,
                quantity: row.quantity,
                index: row.index,
                paper_value: row.paper_value,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", content = "message", rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    ComplexZeros(String),
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellReport {
    pub cell: FixtureCell,
    pub computed: Option<f64>,
    /// `computed` with the detected systematic offset applied.
    pub adjusted: Option<f64>,
    pub raw_dev: Option<f64>,
    pub adj_dev: Option<f64>,
    pub status: CellStatus,
}

/// Constant ratio between published and recomputed estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Offset {
    pub ratio: f64,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub id: TableId,
    pub offset: Option<Offset>,
    pub cells: Vec<CellReport>,
}

impl TableReport {
    fn max_of(&self, f: impl Fn(&CellReport) -> Option<f64>) -> f64 {
        self.cells.iter().filter_map(f).fold(0.0, f64::max)
    }

    pub fn max_raw_dev(&self) -> f64 {
        self.max_of(|c| c.raw_dev)
    }

    pub fn max_adj_dev(&self) -> f64 {
        self.max_of(|c| c.adj_dev)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(|c| c.status != CellStatus::Ok)
    }

    /// Cells whose adjusted deviation exceeds `tol`, in table order.
    pub fn outliers(&self, tol: f64) -> Vec<&CellReport> {
        self.cells.iter().filter(|c| c.adj_dev.is_some_and(|d| d > tol)).collect()
    }
}

fn compute_rule(scheme: &CoefficientScheme, id: TableId, cell: &FixtureCell) -> Result<QuadratureRule> {
    build_rule(scheme, &cell.perturbation, cell.n, id.method(), &q(1, 2), DEFAULT_TOL_IMAG)
}

/// Recomputed value of a cell before any offset; `abs_err` cells return `I*`.
fn compute_cell(scheme: &CoefficientScheme, id: TableId, cell: &FixtureCell) -> Result<f64> {
    let rule = compute_rule(scheme, id, cell)?;
    let j = || {
        cell.index
            .and_then(|j| j.checked_sub(1))
            .filter(|j| *j < rule.n)
            .ok_or_else(|| Error::Fixture(format!("bad index in {}", cell.label)))
    };
    match cell.quantity {
        Quantity::IStar | Quantity::AbsErr => estimate(&rule, &Integrand::example3()),
        Quantity::Node => Ok(rule.nodes[j()?]),
        Quantity::Weight => Ok(rule.weights[j()?]),
    }
}

fn is_estimate(q: Quantity) -> bool {
    matches!(q, Quantity::IStar | Quantity::AbsErr)
}

fn finish(cell: &FixtureCell, computed: f64, ratio: f64) -> (f64, f64) {
    match cell.quantity {
        Quantity::AbsErr => ((computed - E_FIXTURE).abs(), (computed * ratio - E_FIXTURE).abs()),
        Quantity::IStar => (computed, computed * ratio),
        _ => (computed, computed),
    }
}

/// Median of `published / computed` over the estimate cells, when it differs from one.
fn detect_offset(cells: &[(FixtureCell, Result<f64>)]) -> Option<Offset> {
    let mut ratios: Vec<f64> = cells
        .iter()
        .filter(|(c, _)| c.quantity == Quantity::IStar)
        .filter_map(|(c, r)| r.as_ref().ok().map(|v| c.paper_value / v))
        .collect();
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    let median = ratios[ratios.len() / 2];
    if (median - 1.0).abs() < 1e-7 {
        return None;
    }
    let pi = twenty_two_sevenths_factor();
    Some(if (median - pi).abs() < 1e-7 {
        Offset {
            ratio: pi,
            description: "published estimates use pi = 22/7 in the integrand; ratio 22/(7 pi)".into(),
        }
    } else {
        Offset {
            ratio: median,
            description: format!("constant ratio {median:.12} between published and recomputed estimates"),
        }
    })
}

/// Recomputes every cell of a table and compares it with the published value.
pub fn reproduce_table(id: TableId) -> Result<TableReport> {
    let scheme = CoefficientScheme::example();
    let fixture = load_fixture(id)?;
    let computed: Vec<(FixtureCell, Result<f64>)> = fixture
        .into_par_iter()
        .map(|cell| {
            let v = compute_cell(&scheme, id, &cell);
            (cell, v)
        })
        .collect();
    let offset = detect_offset(&computed);
    let ratio = offset.as_ref().map_or(1.0, |o| o.ratio);
    if let Some(o) = &offset {
        log::info!("{id}: {}", o.description);
    }
    let cells = computed
        .into_iter()
        .map(|(cell, v)| match v {
            Ok(v) => {
                let (raw, adjusted) = finish(&cell, v, if is_estimate(cell.quantity) { ratio } else { 1.0 });
                CellReport {
                    computed: Some(raw),
                    adjusted: Some(adjusted),
                    raw_dev: Some((raw - cell.paper_value).abs()),
                    adj_dev: Some((adjusted - cell.paper_value).abs()),
                    status: CellStatus::Ok,
                    cell,
                }
            }
            Err(e) => CellReport {
                computed: None,
                adjusted: None,
                raw_dev: None,
                adj_dev: None,
                status: match e {
                    Error::ComplexZeros { .. } => CellStatus::ComplexZeros(e.to_string()),
                    _ => CellStatus::Failed(e.to_string()),
                },
                cell,
            },
        })
        .collect();
    Ok(TableReport { id, offset, cells })
}

/// A co-modification `(k, mu, kp, nu)` and its estimates in both level orders.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipRow {
    pub perturbation: Perturbation,
    pub i_star: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipReport {
    pub n: usize,
    pub scale: f64,
    /// Original and flipped rows, pair by pair; a pair with `k = kp` appears once.
    pub rows: Vec<FlipRow>,
    /// Mean of the rows with `k != kp`.
    pub average_off_median: f64,
    /// Estimate at the first pair with `k = kp`, when present.
    pub median_estimate: Option<f64>,
    pub average_deviation: Option<f64>,
}

impl FlipReport {
    /// `(original, flipped)` rows of each pair with distinct levels.
    pub fn pairs(&self) -> Vec<(&FlipRow, &FlipRow)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.rows.len() {
            let p = &self.rows[i].perturbation;
            let distinct = p.corec.as_ref().map(|c| c.k) != p.codil.as_ref().map(|d| d.kp);
            if distinct && i + 1 < self.rows.len() {
                out.push((&self.rows[i], &self.rows[i + 1]));
                i += 2;
            } else {
                i += 1;
            }
        }
        out
    }
}

/// Estimates `I*_n` for each pair and its flipped counterpart, scaled by `scale`
/// (1 for plain values, [`twenty_two_sevenths_factor`] to compare with published cells).
pub fn order_flip_experiment(
    scheme: &CoefficientScheme,
    pairs: &[(usize, Q, usize, Q)],
    n: usize,
    method: WeightMethod,
    scale: f64,
) -> Result<FlipReport> {
    let mut perts = Vec::new();
    for (k, mu, kp, nu) in pairs {
        let p = Perturbation::both(*k, mu.clone(), *kp, nu.clone());
        p.validate()?;
        if k != kp {
            perts.push(p.flipped()?);
            perts.insert(perts.len() - 1, p);
        } else {
            perts.push(p);
        }
    }
    let f = Integrand::example3();
    let rows = perts
        .into_par_iter()
        .map(|p| {
            let rule = build_rule(scheme, &p, n, method.clone(), &q(1, 2), DEFAULT_TOL_IMAG)?;
            let i_star = estimate(&rule, &f)? * scale;
            Ok(FlipRow {
                abs_err: (i_star - E_FIXTURE).abs(),
                i_star,
                perturbation: p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let is_median = |r: &FlipRow| r.perturbation.corec.as_ref().map(|c| c.k) == r.perturbation.codil.as_ref().map(|d| d.kp);
    let off: Vec<f64> = rows.iter().filter(|r| !is_median(r)).map(|r| r.i_star).collect();
    let average_off_median = off.iter().sum::<f64>() / off.len().max(1) as f64;
    let median_estimate = rows.iter().find(|r| is_median(r)).map(|r| r.i_star);
    Ok(FlipReport {
        n,
        scale,
        average_deviation: median_estimate.map(|m| (average_off_median - m).abs()),
        average_off_median,
        median_estimate,
        rows,
    })
}

/// The level pairs of the co-modification tables, as recurrence indices.
pub fn table_flip_pairs(mu: Q, nu: Q) -> Vec<(usize, Q, usize, Q)> {
    [(2, 6), (3, 5), (4, 4)].iter().map(|&(k, kp)| (k, mu.clone(), kp, nu.clone())).collect()
}

/// Deviation report as CSV; `abs_dev` is measured after the documented offset, `raw_dev` before it.
/// T4 lists nodes and weights instead.
pub fn report_csv(report: &TableReport, digits: usize) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let fmt = |v: Option<f64>| v.map_or_else(String::new, |x| format_sig(x, digits));
    let csv_err = |e: csv::Error| Error::Input(e.to_string());
    if report.id == TableId::T4 {
        w.write_record(["j", "node", "paper_node", "node_dev", "weight", "paper_weight", "weight_dev"]).map_err(csv_err)?;
        let nodes: Vec<_> = report.cells.iter().filter(|c| c.cell.quantity == Quantity::Node).collect();
        let weights: Vec<_> = report.cells.iter().filter(|c| c.cell.quantity == Quantity::Weight).collect();
        for (a, b) in nodes.iter().zip(&weights) {
            w.write_record([
                a.cell.index.unwrap_or(0).to_string(),
                fmt(a.computed),
                fmt(Some(a.cell.paper_value)),
                fmt(a.adj_dev),
                fmt(b.computed),
                fmt(Some(b.cell.paper_value)),
                fmt(b.adj_dev),
            ])
            .map_err(csv_err)?;
        }
    } else {
        w.write_record([
            "n", "mu", "k", "nu", "kp", "quantity", "I_star", "I_star_adjusted", "paper_value", "abs_dev", "raw_dev", "status",
        ])
        .map_err(csv_err)?;
        for c in &report.cells {
            let p = &c.cell.perturbation;
            let quantity = match c.cell.quantity {
                Quantity::AbsErr => "abs_err",
                _ => "I_star",
            };
            let status = match &c.status {
                CellStatus::Ok => "ok".to_string(),
                CellStatus::ComplexZeros(m) | CellStatus::Failed(m) => m.clone(),
            };
            w.write_record([
                c.cell.n.to_string(),
                p.corec.as_ref().map_or_else(String::new, |x| format_q(&x.mu)),
                p.corec.as_ref().map_or_else(String::new, |x| x.k.to_string()),
                p.codil.as_ref().map_or_else(String::new, |x| format_q(&x.nu)),
                p.codil.as_ref().map_or_else(String::new, |x| x.kp.to_string()),
                quantity.to_string(),
                fmt(c.computed),
                fmt(c.adjusted),
                fmt(Some(c.cell.paper_value)),
                fmt(c.adj_dev),
                fmt(c.raw_dev),
                status,
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Input(e.to_string()))
}

/// `x` with `digits` significant digits, plain decimal when reasonable.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if (-5..=15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = digits - 1)
    }
}
