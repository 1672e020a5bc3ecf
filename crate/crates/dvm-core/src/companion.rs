//! Companion matrix of the node polynomial and its power by repeated squaring.

use num_complex::Complex;

use crate::scalar::Real;
use crate::DvmError;

/// The dense `m × m` matrix `C^m`, where `C` is the companion matrix of the
/// monic polynomial with low-order coefficients `w` (ones on the
/// subdiagonal, `-w` in the last column).
#[derive(Clone, Debug)]
pub struct CompanionPower<T: Real> {
    /// Row-major `size × size` entries.
    pub matrix: Vec<Complex<T>>,
    pub size: usize,
}

impl<T: Real> CompanionPower<T> {
    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.matrix[row * self.size + col]
    }
}

pub(crate) fn matmul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], m: usize) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == zero {
                continue;
            }
            for j in 0..m {
                out[i * m + j] = out[i * m + j] + aik * b[k * m + j];
            }
        }
    }
    out
}

/// Raises the companion matrix of `coeffs` to the power `m = coeffs.len()`
/// by repeated squaring (`m` must be a power of two, so only squarings are
/// needed: `C^{2k} = C^k · C^k`).
pub fn companion_power<T: Real>(coeffs: &[Complex<T>]) -> Result<CompanionPower<T>, DvmError> {
    let m = coeffs.len();
    if m == 0 || !m.is_power_of_two() {
        return Err(DvmError::InvalidSize {
            size: m,
            reason: "companion power needs a power-of-two coefficient count",
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut c = vec![zero; m * m];
    for i in 1..m {
        c[i * m + (i - 1)] = one;
    }
    for i in 0..m {
        c[i * m + (m - 1)] = -coeffs[i];
    }
    let mut power = c;
    for _ in 0..m.trailing_zeros() {
        power = matmul(&power, &power, m);
    }
    Ok(CompanionPower { matrix: power, size: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::node::Node;
    use crate::poly::poly_coefficients;
    use num_complex::Complex64;

    #[test]
    fn one_by_one_companion_of_z_minus_one() {
        // p(z) = z - 1 has w = (-1), so C = [1] and C^1 = [1].
        let w = poly_coefficients::<f64>(2, Node::from_angle(0.7)).unwrap();
        assert_eq!(w, vec![Complex64::new(-1.0, 0.0)]);
        let cp = companion_power(&w).unwrap();
        assert_eq!(cp.size, 1);
        assert_eq!(cp.matrix, vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn swap_matrix_squares_to_identity() {
        // alpha = i gives w = (-1, 0): C = [[0,1],[1,0]] and C^2 = I.
        let node = Node::from_value(Complex64::new(0.0, 1.0)).unwrap();
        let w = poly_coefficients::<f64>(4, node).unwrap();
        let cp = companion_power(&w).unwrap();
        let i2 = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert_eq!(cp.matrix, i2);
    }

    #[test]
    fn squaring_matches_naive_repeated_product() {
        let node = Node::from_angle(std::f64::consts::PI / 32.0);
        let w = poly_coefficients::<f64>(8, node).unwrap();
        let m = 4;
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut c = vec![zero; m * m];
        for i in 1..m {
            c[i * m + (i - 1)] = one;
        }
        for i in 0..m {
            c[i * m + (m - 1)] = -w[i];
        }
        // C^4 the slow way: three successive multiplications.
        let mut naive = c.clone();
        for _ in 0..3 {
            naive = matmul(&naive, &c, m);
        }
        let cp = companion_power(&w).unwrap();
        for (a, b) in cp.matrix.iter().zip(&naive) {
            assert!((a - b).norm() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn row_scaling_identity_on_small_sizes() {
        // Multiplying the half-size matrix by C^m scales row k by alpha^{2km}:
        // checked densely for sizes 4 and 8.
        for (n, theta) in [(4usize, 0.41), (8, std::f64::consts::TAU / 8.0)] {
            let node = Node::from_angle(theta);
            let m = n / 2;
            let w = poly_coefficients::<f64>(n, node).unwrap();
            let cp = companion_power(&w).unwrap();
            let a2 = theta * 2.0;
            let half = |k: usize, l: usize| Complex64::from_polar(1.0, -a2 * (k * l) as f64);
            for k in 0..m {
                for j in 0..m {
                    let mut lhs = Complex64::new(0.0, 0.0);
                    for l in 0..m {
                        lhs += half(k, l) * cp.entry(l, j);
                    }
                    let rhs = Complex64::from_polar(1.0, -theta * (2 * k * m) as f64) * half(k, j);
                    assert!(
                        (lhs - rhs).norm() < 1e-12,
                        "n={n} entry ({k},{j}): {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_non_power_of_two_lengths() {
        let w = vec![Complex64::new(-1.0, 0.0); 3];
        assert!(companion_power(&w).is_err());
        assert!(companion_power::<f64>(&[]).is_err());
    }
}
