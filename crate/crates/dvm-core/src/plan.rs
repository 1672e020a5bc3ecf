//! Precomputed recursion-level factors for a given size and node.

use num_complex::Complex;

use crate::companion::{companion_power, CompanionPower};
use crate::count::OpCount;
use crate::node::Node;
use crate::poly::poly_coefficients_wide;
use crate::scalar::{Real, WComplex, Wide};
use crate::DvmError;

/// Factors of one recursion level of size `N_s = N / 2^s`.
#[derive(Clone, Debug)]
pub struct PlanLevel<T: Real> {
    pub level_size: usize,
    /// The node at this depth, `α^{2^s}`.
    pub level_node: Complex<T>,
    /// `C^{m}` with `m = N_s / 2`, the companion power of the level polynomial.
    pub companion_power: CompanionPower<T>,
    /// `(α_s^l)` for `l = 0..m-1`.
    pub d_tilde: Vec<Complex<T>>,
    /// `(α_s^{-2k})` for `k = 0..m-1`.
    pub d_bar: Vec<Complex<T>>,
    /// `(α_s^k)` for `k = 0..N_s-1`.
    pub d_scale: Vec<Complex<T>>,
    /// `α_s^{m}`, the scalar on the lower-right block.
    pub alpha_m: Complex<T>,
}

/// All level factors for multiplying a `(n, node)` matrix, built once and
/// shared by any number of multiplies. Immutable after construction.
#[derive(Clone, Debug)]
pub struct FactorizationPlan<T: Real> {
    pub n: usize,
    pub node: Node,
    /// One record per recursion depth `s = 0..t-2`; empty when `n = 2`.
    pub levels: Vec<PlanLevel<T>>,
    pub degenerate: bool,
    pub(crate) base_node: Complex<T>,
    pub(crate) base_node_sq: Complex<T>,
    construction_ops: OpCount,
}

impl<T: Real> FactorizationPlan<T> {
    /// The node in effect at a recursion depth (the base case sits at depth
    /// `levels.len()`).
    pub(crate) fn node_at_depth(&self, depth: usize) -> Complex<T> {
        if depth < self.levels.len() {
            self.levels[depth].level_node
        } else {
            self.base_node
        }
    }

    pub(crate) fn base_node_sq(&self) -> Complex<T> {
        self.base_node_sq
    }

    /// Complex operations spent building the plan factors (coefficient
    /// recurrences, power chains, companion squarings). Reported separately
    /// from per-multiply counts; every operation is charged, including
    /// multiplications by structural units.
    pub fn construction_counts(&self) -> OpCount {
        self.construction_ops
    }
}

/// Builds the level factors for an `n × n` multiply at `node`.
///
/// Powers of the node are formed by iterated multiplication and the
/// coefficient recurrence runs start to finish, both carried in the wide
/// type of `T` and rounded once into the stored factors. Companion powers
/// are then squared up in `T` itself.
pub fn build_plan<T: Real>(n: usize, node: Node) -> Result<FactorizationPlan<T>, DvmError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(DvmError::NotPowerOfTwo(n));
    }
    let mut ops = OpCount::ZERO;
    let mut levels = Vec::new();
    let mut a = WComplex::<T::Wide>::lift(node.value());
    let mut size = n;
    while size > 2 {
        let m = size / 2;

        // d_scale = alpha_s^k for k = 0..size-1; d_tilde is its first half.
        let mut d_scale = Vec::with_capacity(size);
        let mut v = WComplex::<T::Wide>::ONE;
        for k in 0..size {
            d_scale.push(v.round::<T>());
            if k + 1 < size {
                v = v.mul(a);
            }
        }
        ops.mults += (size - 1) as u64;
        let d_tilde = d_scale[..m].to_vec();
        let alpha_m = d_scale[m];

        let a2 = a.mul(a);
        ops.mults += 1;

        // d_bar = (alpha_s^2)^{-k}; on the unit circle the conjugate is the
        // reciprocal, general nodes fall back to a complex division.
        let unit = (node.value().norm() - 1.0).abs() < crate::node::DEGENERACY_TOL;
        let b = if unit {
            a2.conj()
        } else {
            let a2_f: Complex<f64> = Complex::new(a2.re.to_f64(), a2.im.to_f64());
            WComplex::lift(a2_f.inv())
        };
        let mut d_bar = Vec::with_capacity(m);
        let mut bv = WComplex::<T::Wide>::ONE;
        for k in 0..m {
            d_bar.push(bv.round::<T>());
            if k + 1 < m {
                bv = bv.mul(b);
            }
        }
        ops.mults += (m - 1) as u64;

        let w_wide = poly_coefficients_wide(m, a2);
        ops.adds += (m * m) as u64;
        ops.mults += (m * m) as u64;
        let coeffs: Vec<Complex<T>> = w_wide.into_iter().map(|c| c.round()).collect();
        let companion = companion_power(&coeffs)?;
        let squarings = m.trailing_zeros() as u64;
        ops.mults += squarings * (m as u64).pow(3);
        ops.adds += squarings * (m as u64).pow(2) * (m as u64 - 1);

        levels.push(PlanLevel {
            level_size: size,
            level_node: a.round(),
            companion_power: companion,
            d_tilde,
            d_bar,
            d_scale,
            alpha_m,
        });
        a = a2;
        size = m;
    }
    let base_node = a.round();
    let base_node_sq = a.mul(a).round();
    ops.mults += 1;
    Ok(FactorizationPlan {
        n,
        node,
        levels,
        degenerate: node.is_degenerate(n),
        base_node,
        base_node_sq,
        construction_ops: ops,
    })
}
