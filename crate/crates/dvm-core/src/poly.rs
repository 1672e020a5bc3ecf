//! Coefficients of the monic polynomial whose roots are the even node powers.

use num_complex::Complex;

use crate::node::Node;
use crate::scalar::{Real, WComplex, Wide};
use crate::DvmError;

/// Runs the shift-and-subtract coefficient recurrence in wide arithmetic:
/// starting from `w = e_0`, each step maps `w <- shift(w) - a·w` and advances
/// the root `a` by one factor of `alpha_sq`. After `m` steps `w` holds the
/// low-order coefficients of the monic degree-`m` product.
pub(crate) fn poly_coefficients_wide<W: Wide>(m: usize, alpha_sq: WComplex<W>) -> Vec<WComplex<W>> {
    let mut w = vec![WComplex::<W>::ZERO; m];
    w[0] = WComplex::ONE;
    let mut a = WComplex::<W>::ONE;
    let mut next = vec![WComplex::<W>::ZERO; m];
    for _ in 0..m {
        next[0] = WComplex::ZERO;
        next[1..m].copy_from_slice(&w[..m - 1]);
        for i in 0..m {
            next[i] = next[i].sub(a.mul(w[i]));
        }
        std::mem::swap(&mut w, &mut next);
        a = a.mul(alpha_sq);
    }
    w
}

/// Coefficients `w_0..w_{n/2-1}` of the monic polynomial
/// `p(z) = (z - 1)(z - α²)(z - α⁴)···(z - α^{n-2})`, so that
/// `p(z) = z^{n/2} + Σ w_i z^i`.
///
/// The recurrence itself is run in the wide carrier of `T` and rounded once
/// at the end; for clustered roots the intermediate coefficient vectors are
/// much larger than the result, and carrying them at working precision would
/// lose most of the significand to cancellation.
pub fn poly_coefficients<T: Real>(n: usize, node: Node) -> Result<Vec<Complex<T>>, DvmError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(DvmError::InvalidSize {
            size: n,
            reason: "polynomial construction needs an even size of at least 2",
        });
    }
    let m = n / 2;
    let alpha = WComplex::<T::Wide>::lift(node.value());
    let w = poly_coefficients_wide(m, alpha.mul(alpha));
    Ok(w.into_iter().map(|c| c.round()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn node_i() -> Node {
        Node::from_value(Complex64::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn repeated_root_at_one() {
        // alpha = 1: p(z) = (z-1)^2 = z^2 - 2z + 1.
        let w = poly_coefficients::<f64>(4, Node::from_angle(0.0)).unwrap();
        assert_eq!(w, vec![Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0)]);
    }

    #[test]
    fn quarter_turn_gives_z_squared_minus_one() {
        // alpha = i: p(z) = (z-1)(z+1) = z^2 - 1.
        let w = poly_coefficients::<f64>(4, node_i()).unwrap();
        assert_eq!(w, vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn matches_naive_linear_factor_convolution() {
        let node = Node::from_angle(std::f64::consts::PI / 32.0);
        let w = poly_coefficients::<f64>(8, node).unwrap();
        // Oracle: expand prod (z - alpha^{2k}) by convolving linear factors,
        // with exact-phase roots.
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for k in 0..4 {
            let root = Complex64::from_polar(1.0, -std::f64::consts::PI / 32.0 * 2.0 * k as f64);
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * root;
            }
            coeffs = next;
        }
        for i in 0..4 {
            assert!(
                (w[i] - coeffs[i]).norm() < 1e-14,
                "coefficient {i}: {} vs oracle {}",
                w[i],
                coeffs[i]
            );
        }
        assert!((coeffs[4] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn residual_vanishes_at_every_root() {
        // Evaluating the monic polynomial at each root stays below the
        // magnitude-sum bound, including the near-cyclotomic size-64 case
        // where naive working-precision construction would not.
        for (n, theta) in [
            (8usize, std::f64::consts::PI / 32.0),
            (16, 0.3),
            (64, std::f64::consts::PI / 32.0),
            (64, std::f64::consts::TAU / 64.0),
        ] {
            let node = Node::from_angle(theta);
            let w = poly_coefficients::<f64>(n, node).unwrap();
            let m = n / 2;
            let coeff_sum: f64 = w.iter().map(|c| c.norm()).sum::<f64>() + 1.0;
            let allowed = coeff_sum * n as f64 * f64::EPSILON * 100.0;
            for k in 0..m {
                let root = Complex64::from_polar(1.0, -theta * 2.0 * k as f64);
                let mut val = Complex64::new(1.0, 0.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for c in &w {
                    acc += c * val;
                    val *= root;
                }
                acc += val; // monic leading term z^m
                assert!(
                    acc.norm() <= allowed,
                    "n={n} theta={theta}: residual {} at root {k} exceeds {}",
                    acc.norm(),
                    allowed
                );
            }
        }
    }

    #[test]
    fn rejects_odd_and_tiny_sizes() {
        let node = Node::from_angle(0.5);
        assert!(poly_coefficients::<f64>(3, node).is_err());
        assert!(poly_coefficients::<f64>(0, node).is_err());
        assert!(poly_coefficients::<f64>(2, node).is_ok());
    }

    #[test]
    fn single_precision_output_matches_double_rounded() {
        let node = Node::from_angle(std::f64::consts::PI / 32.0);
        let w32 = poly_coefficients::<f32>(16, node).unwrap();
        let w64 = poly_coefficients::<f64>(16, node).unwrap();
        for (a, b) in w32.iter().zip(&w64) {
            assert!((a.re as f64 - b.re).abs() <= (b.re.abs() + 1.0) * 1e-7);
            assert!((a.im as f64 - b.im).abs() <= (b.im.abs() + 1.0) * 1e-7);
        }
    }
}
