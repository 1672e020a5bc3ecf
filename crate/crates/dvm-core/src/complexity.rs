//! Closed-form and instrumented operation counts, and the comparison table.

use num_complex::Complex;
use serde::Serialize;

use crate::apply::{direct_with, dvm_with, sdvm_with};
use crate::count::{OpCount, Tally};
use crate::plan::FactorizationPlan;
use crate::scalar::Real;
use crate::DvmError;

/// Which matrix the counts refer to: the scaled form (exponents `k·l`,
/// `k,l = 0..n-1`) or the delay form (rows `k = 1..n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Scaled,
    Dvm,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Scaled => "scaled",
            Variant::Dvm => "dvm",
        })
    }
}

/// Which code path an instrumented run exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Sdvm,
    Dvm,
    DirectScaled,
    DirectDvm,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Sdvm => "sdvm",
            Algorithm::Dvm => "dvm",
            Algorithm::DirectScaled => "direct_scaled",
            Algorithm::DirectDvm => "direct_dvm",
        })
    }
}

/// One table line comparing direct and fast counts at a size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    pub n: u64,
    pub direct_adds: u64,
    pub direct_mults: u64,
    pub fast_adds: u64,
    pub fast_mults: u64,
    pub variant: Variant,
}

/// Output encoding for emitted tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Largest size the table emitters accept.
pub const MAX_TABLE_SIZE: usize = 1 << 20;

// Count formulas hold 4^t = n^2 terms, so keep n^2 inside u64.
const MAX_FORMULA_SIZE: usize = 1 << 31;

fn log2_size(n: usize) -> Result<u64, DvmError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(DvmError::NotPowerOfTwo(n));
    }
    if n > MAX_FORMULA_SIZE {
        return Err(DvmError::InvalidSize {
            size: n,
            reason: "counts for this size overflow 64 bits",
        });
    }
    Ok(n.trailing_zeros() as u64)
}

/// Closed-form operation count of the fast scaled multiply at `n = 2^t`:
/// `(nt + n² - n)/2` additions and `(3nt + n² - 4n)/2` multiplications.
pub fn sdvm_counts_formula(n: usize) -> Result<OpCount, DvmError> {
    let t = log2_size(n)?;
    let n = n as u64;
    Ok(OpCount {
        adds: (n * t + n * n - n) / 2,
        mults: (3 * n * t + n * n - 4 * n) / 2,
    })
}

/// Closed-form operation count of the fast delay multiply at `n = 2^t`:
/// the same additions as the scaled form and `(7nt + n² - 7n)/2`
/// multiplications.
pub fn dvm_counts_formula(n: usize) -> Result<OpCount, DvmError> {
    let t = log2_size(n)?;
    let n = n as u64;
    Ok(OpCount {
        adds: (n * t + n * n - n) / 2,
        mults: (7 * n * t + n * n - 7 * n) / 2,
    })
}

/// Operation count of the direct multiply: `n(n-1)` additions either way;
/// `n(n-1)` multiplications for the scaled form (its first column is all
/// ones and is never multiplied), `n²` for the delay form.
pub fn direct_counts(n: usize, variant: Variant) -> Result<OpCount, DvmError> {
    if n == 0 {
        return Err(DvmError::InvalidSize {
            size: 0,
            reason: "direct counts need at least one row",
        });
    }
    if n > MAX_FORMULA_SIZE {
        return Err(DvmError::InvalidSize {
            size: n,
            reason: "counts for this size overflow 64 bits",
        });
    }
    let n = n as u64;
    Ok(OpCount {
        adds: n * (n - 1),
        mults: match variant {
            Variant::Scaled => n * (n - 1),
            Variant::Dvm => n * n,
        },
    })
}

/// Runs one multiply with instrumented arithmetic and returns what it spent.
///
/// Counts cover the application only; plan construction is reported
/// separately by [`FactorizationPlan::construction_counts`]. The convention
/// is the one documented on [`OpCount`]: the direct paths charge every
/// entry product as a data product, the fast paths skip constants that are
/// exactly ±1 or ±i.
pub fn measure_counts<T: Real>(
    plan: &FactorizationPlan<T>,
    z: &[Complex<T>],
    algorithm: Algorithm,
) -> Result<OpCount, DvmError> {
    if z.len() != plan.n {
        return Err(DvmError::SizeMismatch {
            expected: plan.n,
            got: z.len(),
        });
    }
    let mut tally = Tally::new();
    match algorithm {
        Algorithm::Sdvm => {
            sdvm_with(plan, 0, z, &mut tally);
        }
        Algorithm::Dvm => {
            dvm_with(plan, 0, z, &mut tally);
        }
        Algorithm::DirectScaled => {
            direct_with(plan.n, plan.node, z, true, &mut tally);
        }
        Algorithm::DirectDvm => {
            direct_with(plan.n, plan.node, z, false, &mut tally);
        }
    }
    Ok(tally.count)
}

/// Builds the comparison rows for sizes `4, 8, .., max_n`.
pub fn complexity_rows(max_n: usize, variant: Variant) -> Result<Vec<ComplexityRow>, DvmError> {
    if max_n < 4 || !max_n.is_power_of_two() || max_n > MAX_TABLE_SIZE {
        return Err(DvmError::InvalidSize {
            size: max_n,
            reason: "table sizes are powers of two between 4 and 2^20",
        });
    }
    let mut rows = Vec::new();
    let mut n = 4;
    while n <= max_n {
        let direct = direct_counts(n, variant)?;
        let fast = match variant {
            Variant::Scaled => sdvm_counts_formula(n)?,
            Variant::Dvm => dvm_counts_formula(n)?,
        };
        rows.push(ComplexityRow {
            n: n as u64,
            direct_adds: direct.adds,
            direct_mults: direct.mults,
            fast_adds: fast.adds,
            fast_mults: fast.mults,
            variant,
        });
        n *= 2;
    }
    Ok(rows)
}

#[derive(Serialize)]
struct ComplexityMeta {
    variant: Variant,
    max_n: u64,
    counting: &'static str,
}

#[derive(Serialize)]
struct ComplexityReport {
    meta: ComplexityMeta,
    rows: Vec<ComplexityRow>,
}

const COUNTING_NOTE: &str = "application counts only; plan construction is reported separately; \
     direct columns charge every entry product, fast columns skip constants that are exactly \
     plus or minus one or i";

/// Renders the comparison table for sizes `4..max_n`.
///
/// CSV uses the fixed header `N,direct_add,fast_add,direct_mult,fast_mult`,
/// decimal integers, LF line endings, and a trailing newline, with no footer,
/// so output for equal inputs is byte-identical. JSON wraps the same rows as
/// `{meta, rows}` and records the counting convention in the metadata.
pub fn emit_complexity_table(
    max_n: usize,
    variant: Variant,
    format: TableFormat,
) -> Result<String, DvmError> {
    let rows = complexity_rows(max_n, variant)?;
    match format {
        TableFormat::Csv => {
            let mut out = String::from("N,direct_add,fast_add,direct_mult,fast_mult\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.n, r.direct_adds, r.fast_adds, r.direct_mults, r.fast_mults
                ));
            }
            Ok(out)
        }
        TableFormat::Json => {
            let report = ComplexityReport {
                meta: ComplexityMeta {
                    variant,
                    max_n: max_n as u64,
                    counting: COUNTING_NOTE,
                },
                rows,
            };
            let mut s = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
            s.push('\n');
            Ok(s)
        }
    }
}
