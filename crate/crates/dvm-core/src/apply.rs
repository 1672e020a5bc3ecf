//! Applying the operator to a vector: the fast recursive paths and the
//! quadratic direct reference.

use num_complex::Complex;

use crate::companion::CompanionPower;
use crate::count::{Arith, Plain};
use crate::node::Node;
use crate::plan::{FactorizationPlan, PlanLevel};
use crate::scalar::{complex_from_f64, Real};
use crate::DvmError;

/// Dense matrix-vector product with a stored companion power.
fn companion_apply<T: Real, A: Arith<T>>(
    cp: &CompanionPower<T>,
    x: &[Complex<T>],
    ar: &mut A,
) -> Vec<Complex<T>> {
    let m = cp.size;
    let mut out = Vec::with_capacity(m);
    for r in 0..m {
        let mut acc = ar.mul_const(cp.entry(r, 0), x[0]);
        for (c, &xc) in x.iter().enumerate().skip(1) {
            let term = ar.mul_const(cp.entry(r, c), xc);
            acc = ar.add(acc, term);
        }
        out.push(acc);
    }
    out
}

pub(crate) fn ctilde_with<T: Real, A: Arith<T>>(
    level: &PlanLevel<T>,
    z: &[Complex<T>],
    ar: &mut A,
) -> Vec<Complex<T>> {
    let m = level.level_size / 2;
    let (z_top, z_bot) = z.split_at(m);
    let mut u = Vec::with_capacity(level.level_size);

    let top_mix = companion_apply(&level.companion_power, z_bot, ar);
    for i in 0..m {
        u.push(ar.add(z_top[i], top_mix[i]));
    }

    let scaled_bot: Vec<Complex<T>> = (0..m)
        .map(|i| ar.mul_const(level.d_tilde[i], z_bot[i]))
        .collect();
    let bot_mix = companion_apply(&level.companion_power, &scaled_bot, ar);
    for i in 0..m {
        let left = ar.mul_const(level.d_tilde[i], z_top[i]);
        let right = ar.mul_const(level.alpha_m, bot_mix[i]);
        u.push(ar.add(left, right));
    }
    u
}

/// One butterfly stage: the block matrix pairing the two half-size problems.
///
/// The input is split in halves; the upper output half is
/// `z_top + C^m z_bot`, the lower is `D̃ z_top + α^m C^m D̃ z_bot`, where the
/// diagonals and the companion power come from the level record.
pub fn apply_ctilde<T: Real>(
    level: &PlanLevel<T>,
    z: &[Complex<T>],
) -> Result<Vec<Complex<T>>, DvmError> {
    if z.len() != level.level_size {
        return Err(DvmError::SizeMismatch {
            expected: level.level_size,
            got: z.len(),
        });
    }
    Ok(ctilde_with(level, z, &mut Plain))
}

fn interleave<T: Real>(top: Vec<Complex<T>>, bot: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let mut y = Vec::with_capacity(top.len() * 2);
    for (a, b) in top.into_iter().zip(bot) {
        y.push(a);
        y.push(b);
    }
    y
}

pub(crate) fn sdvm_with<T: Real, A: Arith<T>>(
    plan: &FactorizationPlan<T>,
    depth: usize,
    z: &[Complex<T>],
    ar: &mut A,
) -> Vec<Complex<T>> {
    if z.len() == 2 {
        debug_assert_eq!(depth, plan.levels.len());
        let a = plan.node_at_depth(depth);
        let y0 = ar.add(z[0], z[1]);
        let scaled = ar.mul_const(a, z[1]);
        let y1 = ar.add(z[0], scaled);
        return vec![y0, y1];
    }
    let level = &plan.levels[depth];
    let u = ctilde_with(level, z, ar);
    let m = z.len() / 2;
    let top = sdvm_with(plan, depth + 1, &u[..m], ar);
    let bot = sdvm_with(plan, depth + 1, &u[m..], ar);
    interleave(top, bot)
}

pub(crate) fn dvm_with<T: Real, A: Arith<T>>(
    plan: &FactorizationPlan<T>,
    depth: usize,
    z: &[Complex<T>],
    ar: &mut A,
) -> Vec<Complex<T>> {
    if z.len() == 2 {
        debug_assert_eq!(depth, plan.levels.len());
        let a = plan.node_at_depth(depth);
        let a2 = plan.base_node_sq();
        let once = ar.mul_const(a, z[1]);
        let y0 = ar.add(z[0], once);
        let twice = ar.mul_const(a2, z[1]);
        let y1 = ar.add(z[0], twice);
        return vec![y0, y1];
    }
    let level = &plan.levels[depth];
    let x: Vec<Complex<T>> = z
        .iter()
        .enumerate()
        .map(|(l, &v)| ar.mul_const(level.d_scale[l], v))
        .collect();
    let mut u = ctilde_with(level, &x, ar);
    let m = z.len() / 2;
    // The recursion passes each half to a delay child, which differs from
    // the scaled child by the column scaling diag(alpha_s^{-2k}); fold that
    // into the child's input.
    let (top_in, bot_in) = u.split_at_mut(m);
    for (k, v) in top_in.iter_mut().enumerate() {
        *v = ar.mul_const(level.d_bar[k], *v);
    }
    for (k, v) in bot_in.iter_mut().enumerate() {
        *v = ar.mul_const(level.d_bar[k], *v);
    }
    let top = dvm_with(plan, depth + 1, &u[..m], ar);
    let bot = dvm_with(plan, depth + 1, &u[m..], ar);
    interleave(top, bot)
}

/// Multiplies the size-`n` scaled matrix (exponents `k·l`, `k,l = 0..n-1`)
/// by `z` through the factored recursion.
pub fn sdvm_multiply<T: Real>(
    plan: &FactorizationPlan<T>,
    z: &[Complex<T>],
) -> Result<Vec<Complex<T>>, DvmError> {
    if z.len() != plan.n {
        return Err(DvmError::SizeMismatch {
            expected: plan.n,
            got: z.len(),
        });
    }
    Ok(sdvm_with(plan, 0, z, &mut Plain))
}

/// Multiplies the size-`n` delay matrix (exponents `k·l`, rows `k = 1..n`)
/// by `z` through the factored recursion.
pub fn dvm_multiply<T: Real>(
    plan: &FactorizationPlan<T>,
    z: &[Complex<T>],
) -> Result<Vec<Complex<T>>, DvmError> {
    if z.len() != plan.n {
        return Err(DvmError::SizeMismatch {
            expected: plan.n,
            got: z.len(),
        });
    }
    Ok(dvm_with(plan, 0, z, &mut Plain))
}

pub(crate) fn direct_with<T: Real, A: Arith<T>>(
    n: usize,
    node: Node,
    z: &[Complex<T>],
    scaled: bool,
    ar: &mut A,
) -> Vec<Complex<T>> {
    let alpha: Complex<T> = complex_from_f64(node.value());
    let one = Complex::new(T::one(), T::zero());

    // The delay variant is the scaled variant of the column-scaled input:
    // exponents (k+1)·l = k·l + l.
    let x: Vec<Complex<T>> = if scaled {
        z.to_vec()
    } else {
        let mut p = one;
        let mut x = Vec::with_capacity(n);
        for &v in z {
            x.push(ar.mul_data(p, v));
            p = p * alpha;
        }
        x
    };

    let mut y = Vec::with_capacity(n);
    let mut row_base = one;
    for _ in 0..n {
        let mut acc = x[0];
        let mut p = row_base;
        for &v in &x[1..] {
            let term = ar.mul_data(p, v);
            acc = ar.add(acc, term);
            p = p * row_base;
        }
        y.push(acc);
        row_base = row_base * alpha;
    }
    y
}

/// Multiplies by the size-`n` matrix entry by entry, with node powers formed
/// by repeated multiplication. Quadratic; any `n ≥ 1` is accepted. With
/// `scaled` the exponents are `k·l` for `k,l = 0..n-1`, otherwise the rows
/// run `k = 1..n`.
pub fn direct_multiply<T: Real>(
    n: usize,
    node: Node,
    z: &[Complex<T>],
    scaled: bool,
) -> Result<Vec<Complex<T>>, DvmError> {
    if n == 0 {
        return Err(DvmError::InvalidSize {
            size: 0,
            reason: "direct multiply needs at least one row",
        });
    }
    if z.len() != n {
        return Err(DvmError::SizeMismatch {
            expected: n,
            got: z.len(),
        });
    }
    Ok(direct_with(n, node, z, scaled, &mut Plain))
}
