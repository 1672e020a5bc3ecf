//! Forward-error measurement and the theoretical roundoff bounds.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::apply::{dvm_multiply, sdvm_multiply};
use crate::complexity::{TableFormat, Variant};
use crate::node::Node;
use crate::plan::{build_plan, FactorizationPlan, PlanLevel};
use crate::scalar::Real;
use crate::DvmError;

/// Largest size the error-table emitter accepts; plan construction is cubic
/// in the size, so the table is kept to sizes that build quickly.
pub const MAX_ERROR_TABLE_SIZE: usize = 1 << 10;

/// Parameters of the roundoff bounds: unit roundoff `u` of the working
/// precision, method constant `c`, their product `mu`, and `t = log2(n)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundParams {
    pub u: f64,
    pub c: f64,
    pub mu: f64,
    pub t: u32,
}

impl BoundParams {
    pub fn new(u: f64, c: f64, n: usize) -> Result<BoundParams, DvmError> {
        if !u.is_finite() || u <= 0.0 || u >= 1.0 {
            return Err(DvmError::InvalidConfig(
                "unit roundoff must lie strictly between 0 and 1".into(),
            ));
        }
        if !c.is_finite() || c < 0.0 {
            return Err(DvmError::InvalidConfig(
                "method constant must be finite and nonnegative".into(),
            ));
        }
        let t = checked_t(n)?;
        Ok(BoundParams { u, c, mu: c * u, t })
    }

    /// Parameters for a bound on the single-precision run of size `n`.
    pub fn single(c: f64, n: usize) -> Result<BoundParams, DvmError> {
        BoundParams::new(f32::unit_roundoff(), c, n)
    }

    /// Parameters for a bound on the double-precision run of size `n`.
    pub fn double(c: f64, n: usize) -> Result<BoundParams, DvmError> {
        BoundParams::new(f64::unit_roundoff(), c, n)
    }

    /// `γ_k = k·u / (1 - k·u)`, defined only while `k·u < 1`.
    pub fn gamma(&self, k: u64) -> Result<f64, DvmError> {
        let ku = k as f64 * self.u;
        if ku >= 1.0 {
            return Err(DvmError::BoundInapplicable { value: ku });
        }
        Ok(ku / (1.0 - ku))
    }

    /// The per-factor perturbation level `η = μ + γ_{2^t}(1 + μ)`.
    pub fn eta(&self) -> Result<f64, DvmError> {
        let g = self.gamma(1u64 << self.t)?;
        Ok(self.mu + g * (1.0 + self.mu))
    }
}

fn checked_t(n: usize) -> Result<u32, DvmError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(DvmError::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros())
}

/// `p/(1-p)` for `p = multiplier·η`, inapplicable once `p ≥ 1`.
fn prefactor(multiplier: f64, eta: f64) -> Result<f64, DvmError> {
    let p = multiplier * eta;
    if p.is_nan() || p >= 1.0 {
        return Err(DvmError::BoundInapplicable { value: p });
    }
    Ok(p / (1.0 - p))
}

/// Measured single-against-double forward error of one run, together with
/// the bound value it is compared to.
#[derive(Clone, Copy, Debug)]
pub struct ErrorReport {
    pub n: usize,
    pub node: Node,
    pub variant: Variant,
    /// `‖y_double − y_single‖₂ / ‖y_double‖₂`.
    pub measured_error: f64,
    /// Bound for the single-precision run at method constant 1; NaN when the
    /// bound is inapplicable.
    pub bound_value: f64,
    pub degenerate: bool,
}

fn l2_complex<T: Real>(v: &[Complex<T>]) -> f64 {
    v.iter()
        .map(|x| {
            let re = x.re.to_f64();
            let im = x.im.to_f64();
            re * re + im * im
        })
        .sum::<f64>()
        .sqrt()
}

fn l2_real(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Runs one multiply in single and in double precision on the same input
/// and reports the relative difference.
///
/// Degenerate nodes are not intercepted: the run happens either way and is
/// flagged, and a non-finite result shows up as a non-finite
/// `measured_error`.
pub fn forward_error(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    variant: Variant,
) -> Result<ErrorReport, DvmError> {
    if z.len() != n {
        return Err(DvmError::SizeMismatch {
            expected: n,
            got: z.len(),
        });
    }
    let plan64 = build_plan::<f64>(n, node)?;
    let plan32 = build_plan::<f32>(n, node)?;
    let z32: Vec<Complex<f32>> = z
        .iter()
        .map(|v| Complex::new(v.re as f32, v.im as f32))
        .collect();
    let (y64, y32) = match variant {
        Variant::Scaled => (
            sdvm_multiply(&plan64, z)?,
            sdvm_multiply(&plan32, &z32)?,
        ),
        Variant::Dvm => (dvm_multiply(&plan64, z)?, dvm_multiply(&plan32, &z32)?),
    };
    let diff: Vec<Complex<f64>> = y64
        .iter()
        .zip(&y32)
        .map(|(a, b)| a - Complex::new(b.re as f64, b.im as f64))
        .collect();
    let num = l2_complex(&diff);
    let den = l2_complex(&y64);
    let measured_error = if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    };
    let bound_value = BoundParams::single(1.0, n)
        .and_then(|params| bound_unchecked(n, node, z, params, variant))
        .unwrap_or(f64::NAN);
    Ok(ErrorReport {
        n,
        node,
        variant,
        measured_error,
        bound_value,
        degenerate: plan64.degenerate,
    })
}

fn abs_companion(level: &PlanLevel<f64>, x: &[f64]) -> Vec<f64> {
    let cp = &level.companion_power;
    let m = cp.size;
    (0..m)
        .map(|r| (0..m).map(|c| cp.entry(r, c).norm() * x[c]).sum())
        .collect()
}

fn abs_ctilde(level: &PlanLevel<f64>, z: &[f64]) -> Vec<f64> {
    let m = level.level_size / 2;
    let (top, bot) = z.split_at(m);
    let mut u = Vec::with_capacity(level.level_size);
    let mix_top = abs_companion(level, bot);
    for i in 0..m {
        u.push(top[i] + mix_top[i]);
    }
    let scaled: Vec<f64> = (0..m)
        .map(|i| level.d_tilde[i].norm() * bot[i])
        .collect();
    let mix_bot = abs_companion(level, &scaled);
    let am = level.alpha_m.norm();
    for i in 0..m {
        u.push(level.d_tilde[i].norm() * top[i] + am * mix_bot[i]);
    }
    u
}

fn interleave_abs(top: Vec<f64>, bot: Vec<f64>) -> Vec<f64> {
    let mut y = Vec::with_capacity(top.len() * 2);
    for (a, b) in top.into_iter().zip(bot) {
        y.push(a);
        y.push(b);
    }
    y
}

fn abs_sdvm(plan: &FactorizationPlan<f64>, depth: usize, z: &[f64]) -> Vec<f64> {
    if z.len() == 2 {
        let a = plan.node_at_depth(depth).norm();
        return vec![z[0] + z[1], z[0] + a * z[1]];
    }
    let level = &plan.levels[depth];
    let u = abs_ctilde(level, z);
    let m = z.len() / 2;
    let top = abs_sdvm(plan, depth + 1, &u[..m]);
    let bot = abs_sdvm(plan, depth + 1, &u[m..]);
    interleave_abs(top, bot)
}

fn abs_dvm(plan: &FactorizationPlan<f64>, depth: usize, z: &[f64]) -> Vec<f64> {
    if z.len() == 2 {
        let a = plan.node_at_depth(depth).norm();
        let a2 = plan.base_node_sq().norm();
        return vec![z[0] + a * z[1], z[0] + a2 * z[1]];
    }
    let level = &plan.levels[depth];
    let x: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(l, &v)| level.d_scale[l].norm() * v)
        .collect();
    let u = abs_ctilde(level, &x);
    let m = z.len() / 2;
    let mut top = abs_dvm(plan, depth + 1, &u[..m]);
    let mut bot = abs_dvm(plan, depth + 1, &u[m..]);
    for (k, v) in top.iter_mut().enumerate() {
        *v *= level.d_bar[k].norm();
    }
    for (k, v) in bot.iter_mut().enumerate() {
        *v *= level.d_bar[k].norm();
    }
    interleave_abs(top, bot)
}

fn bound_unchecked(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    params: BoundParams,
    variant: Variant,
) -> Result<f64, DvmError> {
    if z.len() != n {
        return Err(DvmError::SizeMismatch {
            expected: n,
            got: z.len(),
        });
    }
    if params.t != checked_t(n)? {
        return Err(DvmError::InvalidConfig(
            "bound parameters were built for a different size".into(),
        ));
    }
    let eta = params.eta()?;
    let (multiplier, chain_is_scaled) = match variant {
        Variant::Scaled => (params.t as f64, true),
        Variant::Dvm => ((3 * params.t - 2) as f64, false),
    };
    let pre = prefactor(multiplier, eta)?;
    let plan = build_plan::<f64>(n, node)?;
    let z_abs: Vec<f64> = z.iter().map(|v| v.norm()).collect();
    let chain = if chain_is_scaled {
        abs_sdvm(&plan, 0, &z_abs)
    } else {
        abs_dvm(&plan, 0, &z_abs)
    };
    let rhs = pre * l2_real(&chain);
    if rhs == 0.0 {
        return Ok(0.0);
    }
    let y = match variant {
        Variant::Scaled => sdvm_multiply(&plan, z)?,
        Variant::Dvm => dvm_multiply(&plan, z)?,
    };
    Ok(rhs / l2_complex(&y))
}

fn bound_checked(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    params: BoundParams,
    variant: Variant,
) -> Result<f64, DvmError> {
    if node.is_degenerate(n) {
        return Err(DvmError::DegenerateNode { n });
    }
    bound_unchecked(n, node, z, params, variant)
}

/// Relative bound on the scaled fast multiply: prefactor `tη/(1−tη)` times
/// the absolute factor chain applied to `|z|`, reduced to
/// `‖RHS‖₂ / ‖y‖₂`. Degenerate nodes are rejected.
pub fn bound_sdvm(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    params: BoundParams,
) -> Result<f64, DvmError> {
    bound_checked(n, node, z, params, Variant::Scaled)
}

/// [`bound_sdvm`] without the degeneracy check.
pub fn bound_sdvm_unchecked(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    params: BoundParams,
) -> Result<f64, DvmError> {
    bound_unchecked(n, node, z, params, Variant::Scaled)
}

/// Relative bound on the delay fast multiply: prefactor
/// `(3t−2)η/(1−(3t−2)η)` with the delay factor chain. Degenerate nodes are
/// rejected.
pub fn bound_dvm(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    params: BoundParams,
) -> Result<f64, DvmError> {
    bound_checked(n, node, z, params, Variant::Dvm)
}

/// [`bound_dvm`] without the degeneracy check.
pub fn bound_dvm_unchecked(
    n: usize,
    node: Node,
    z: &[Complex<f64>],
    params: BoundParams,
) -> Result<f64, DvmError> {
    bound_unchecked(n, node, z, params, Variant::Dvm)
}

#[derive(Clone, Copy, Debug, Serialize)]
struct ErrorTableRow {
    n: u64,
    err_sdvm_real: f64,
    err_dvm_real: f64,
    err_sdvm_complex: f64,
    err_dvm_complex: f64,
    degenerate: bool,
}

#[derive(Serialize)]
struct ErrorTableMeta {
    max_n: u64,
    seed: u64,
    node_re: f64,
    node_im: f64,
}

#[derive(Serialize)]
struct ErrorTableReport {
    meta: ErrorTableMeta,
    rows: Vec<ErrorTableRow>,
}

fn fmt_err(e: f64) -> String {
    if e.is_finite() {
        format!("{e:e}")
    } else {
        "NaN".to_string()
    }
}

/// Measures forward errors over seeded random inputs for sizes
/// `4, 8, .., max_n` and renders the table.
///
/// Each row draws one real input (uniform components in `(0,1)`) and one
/// complex input (both components uniform in `(0,1)`), shared between the
/// two variants. CSV columns follow the fixed header
/// `N,err_sdvm_real,err_dvm_real,err_sdvm_complex,err_dvm_complex,degenerate`
/// with non-finite errors written as `NaN`; output is byte-identical for
/// equal inputs. The JSON form is `{meta, rows}` (non-finite becomes
/// `null` there).
pub fn emit_error_table(
    max_n: usize,
    node: Node,
    seed: u64,
    format: TableFormat,
) -> Result<String, DvmError> {
    if max_n < 4 || !max_n.is_power_of_two() || max_n > MAX_ERROR_TABLE_SIZE {
        return Err(DvmError::InvalidSize {
            size: max_n,
            reason: "error tables cover powers of two between 4 and 2^10",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut n = 4;
    while n <= max_n {
        let real_z: Vec<Complex<f64>> = (0..n)
            .map(|_| Complex::new(rng.gen::<f64>(), 0.0))
            .collect();
        let complex_z: Vec<Complex<f64>> = (0..n)
            .map(|_| Complex::new(rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let sr = forward_error(n, node, &real_z, Variant::Scaled)?;
        let dr = forward_error(n, node, &real_z, Variant::Dvm)?;
        let sc = forward_error(n, node, &complex_z, Variant::Scaled)?;
        let dc = forward_error(n, node, &complex_z, Variant::Dvm)?;
        rows.push(ErrorTableRow {
            n: n as u64,
            err_sdvm_real: sr.measured_error,
            err_dvm_real: dr.measured_error,
            err_sdvm_complex: sc.measured_error,
            err_dvm_complex: dc.measured_error,
            degenerate: sr.degenerate,
        });
        n *= 2;
    }
    match format {
        TableFormat::Csv => {
            let mut out = String::from(
                "N,err_sdvm_real,err_dvm_real,err_sdvm_complex,err_dvm_complex,degenerate\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    fmt_err(r.err_sdvm_real),
                    fmt_err(r.err_dvm_real),
                    fmt_err(r.err_sdvm_complex),
                    fmt_err(r.err_dvm_complex),
                    r.degenerate
                ));
            }
            Ok(out)
        }
        TableFormat::Json => {
            let report = ErrorTableReport {
                meta: ErrorTableMeta {
                    max_n: max_n as u64,
                    seed,
                    node_re: node.value().re,
                    node_im: node.value().im,
                },
                rows,
            };
            let mut s = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
            s.push('\n');
            Ok(s)
        }
    }
}
