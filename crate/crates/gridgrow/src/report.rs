//! Machine-readable run reports.
//!
//! Serialization is deterministic: struct fields keep their declared order
//! and every float prints with 17 significant digits, so identical runs
//! produce byte-identical output. Exact counts are decimal strings because
//! they overflow fixed-width integers.

use std::io;

use serde::Serialize;

use crate::count::WeightMatrix;
use crate::gridding::GriddedPermutation;
use crate::spectral::SpectralResult;
use crate::variational::UnitWeightMatrix;

/// JSON formatter printing floats with 17 significant digits.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{}", fmt_float(value))
    }
}

/// 17 significant digits, scientific notation; the JSON number grammar
/// accepts this form directly.
pub fn fmt_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes any report deterministically.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serde_json writes utf-8")
}

/// A matrix rendered for display: rows top-to-bottom (ℓ = u..1), entries
/// left-to-right, matching the grid-spec orientation.
pub fn matrix_rows_display(x: &UnitWeightMatrix) -> Vec<Vec<f64>> {
    (0..x.rows())
        .rev()
        .map(|l| (0..x.cols()).map(|k| x.entry(k, l)).collect())
        .collect()
}

pub fn weight_rows_display(a: &WeightMatrix) -> Vec<Vec<u64>> {
    (0..a.rows())
        .rev()
        .map(|l| (0..a.cols()).map(|k| a.entry(k, l)).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct PredictReport {
    pub gr: f64,
    pub s: f64,
    pub r: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<f64>>,
}

impl PredictReport {
    pub fn new(result: &SpectralResult, x: &UnitWeightMatrix) -> Self {
        Self {
            gr: result.gr,
            s: result.s,
            r: result.r.clone(),
            c: result.c.clone(),
            x: matrix_rows_display(x),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,value\n");
        out.push_str(&format!("gr,{}\n", fmt_float(self.gr)));
        out.push_str(&format!("s,{}\n", fmt_float(self.s)));
        for (i, v) in self.r.iter().enumerate() {
            out.push_str(&format!("r{},{}\n", i + 1, fmt_float(*v)));
        }
        for (i, v) in self.c.iter().enumerate() {
            out.push_str(&format!("c{},{}\n", i + 1, fmt_float(*v)));
        }
        for (row_idx, row) in self.x.iter().enumerate() {
            for (col_idx, v) in row.iter().enumerate() {
                out.push_str(&format!(
                    "X{}{},{}\n",
                    self.x.len() - row_idx,
                    col_idx + 1,
                    fmt_float(*v)
                ));
            }
        }
        out
    }
}

/// Exact counts at one length; `ungridded` is absent beyond the brute-force
/// cap.
#[derive(Debug, Serialize)]
pub struct CountRecord {
    pub n: u64,
    pub gridded: String,
    pub ungridded: Option<String>,
}

pub fn counts_to_csv(records: &[CountRecord]) -> String {
    let mut out = String::from("n,gridded,ungridded\n");
    for rec in records {
        out.push_str(&format!(
            "{},{},{}\n",
            rec.n,
            rec.gridded,
            rec.ungridded.as_deref().unwrap_or("")
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct VerifyRecord {
    pub n: u64,
    pub gridded: String,
    pub ungridded: Option<String>,
    /// ungridded <= gridded <= (n+1)^(t+u) * ungridded, when ungridded is
    /// available.
    pub sandwich_ok: Option<bool>,
    /// gridded(n) / gridded(n-1).
    pub ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub gr: f64,
    pub records: Vec<VerifyRecord>,
    pub sandwich_ok: bool,
    pub final_ratio: Option<f64>,
    pub band: [f64; 2],
    pub ratio_ok: bool,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gridded,ungridded,sandwich_ok,ratio\n");
        for rec in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                rec.n,
                rec.gridded,
                rec.ungridded.as_deref().unwrap_or(""),
                rec.sandwich_ok.map(|b| b.to_string()).unwrap_or_default(),
                rec.ratio.map(fmt_float).unwrap_or_default()
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub s_squared: f64,
    pub f_blueprint: f64,
    pub lagrange_residual: f64,
    pub search_best: f64,
    pub search_gap: f64,
}

impl OptimizeReport {
    pub fn to_csv(&self) -> String {
        format!(
            "s_squared,f_blueprint,lagrange_residual,search_best,search_gap\n{},{},{},{},{}\n",
            fmt_float(self.s_squared),
            fmt_float(self.f_blueprint),
            fmt_float(self.lagrange_residual),
            fmt_float(self.search_best),
            fmt_float(self.search_gap)
        )
    }
}

#[derive(Debug, Serialize)]
pub struct SampleReport {
    pub n: u64,
    pub seed: u64,
    pub weight_matrix: Vec<Vec<u64>>,
    pub perm: Vec<u32>,
    pub col_divisions: Vec<usize>,
    pub row_divisions: Vec<usize>,
}

impl SampleReport {
    pub fn new(a: &WeightMatrix, gridded: &GriddedPermutation, seed: u64) -> Self {
        Self {
            n: a.weight(),
            seed,
            weight_matrix: weight_rows_display(a),
            perm: gridded.perm().entries().to_vec(),
            col_divisions: gridded.col_divisions().to_vec(),
            row_divisions: gridded.row_divisions().to_vec(),
        }
    }

    pub fn to_csv(&self) -> String {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        format!(
            "n,seed,perm,col_divisions,row_divisions\n{},{},{},{},{}\n",
            self.n,
            self.seed,
            join(&mut self.perm.iter().map(|v| v.to_string())),
            join(&mut self.col_divisions.iter().map(|v| v.to_string())),
            join(&mut self.row_divisions.iter().map(|v| v.to_string()))
        )
    }
}
