//! Classification of the quadratic orders `ℤ[√d] → ℤ[(1 + √d)/2]`.

use rayon::prelude::*;

use crate::error::Result;
use crate::psi::{quadratic_order_psi, QuadraticInstance, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub d: i64,
    pub verdict: Status,
    /// How the verdict was reached.
    pub argument: String,
}

impl SweepRow {
    pub fn residue_mod_8(&self) -> i64 {
        self.d.rem_euclid(8)
    }

    pub fn csv(&self) -> String {
        format!("{},{},{}", self.d, self.residue_mod_8(), self.verdict)
    }
}

pub const CSV_HEADER: &str = "d,residue_mod_8,verdict";

/// One row per admissible `d` in `from..=to`, in increasing order of `d`.
pub fn sweep_quadratic(from: i64, to: i64, parallel: bool) -> Result<Vec<SweepRow>> {
    let valid: Vec<QuadraticInstance> = (from..=to).filter_map(|d| QuadraticInstance::new(d).ok()).collect();
    let row = |inst: &QuadraticInstance| -> Result<SweepRow> {
        let v = quadratic_order_psi(*inst)?;
        Ok(SweepRow { d: inst.d(), verdict: v.status, argument: v.argument })
    };
    if parallel {
        valid.par_iter().map(row).collect()
    } else {
        valid.iter().map(row).collect()
    }
}

/// The table as CSV, header included.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}
