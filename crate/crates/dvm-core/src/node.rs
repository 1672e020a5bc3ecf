//! The complex generator of a delay Vandermonde matrix.

use num_complex::Complex;

use crate::DvmError;

/// Threshold below which a power of the node is treated as having returned
/// to 1, making the matrix nodes repeat.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// The generator `α` of a DVM: every matrix entry is a power `α^{kl}`.
///
/// The canonical construction is [`Node::from_angle`], producing the
/// unit-modulus `α = e^{-iθ}` with `θ = ωτ`. Arbitrary nonzero generators are
/// accepted through [`Node::from_value`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    value: Complex<f64>,
    angle: Option<f64>,
}

impl Node {
    /// The unit-modulus generator `e^{-iθ}`.
    pub fn from_angle(theta: f64) -> Node {
        Node {
            value: Complex::new(theta.cos(), -theta.sin()),
            angle: Some(theta),
        }
    }

    /// A general nonzero generator.
    pub fn from_value(value: Complex<f64>) -> Result<Node, DvmError> {
        if value.re == 0.0 && value.im == 0.0 {
            return Err(DvmError::ZeroNode);
        }
        Ok(Node { value, angle: None })
    }

    pub fn value(&self) -> Complex<f64> {
        self.value
    }

    /// The construction angle, when the node was built from one.
    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    /// Whether some power `α^d` with `1 <= d <= n-1` returns to 1, so an
    /// `n`-sized matrix would contain repeated nodes.
    ///
    /// Angle-constructed nodes are tested on the angle itself: `θ·d` within
    /// `1e-12` of a whole number of turns (measured as distance to the
    /// nearest multiple of 2π). General nodes are tested as `|α^d - 1| <
    /// 1e-12` with powers formed by repeated multiplication.
    pub fn is_degenerate(&self, n: usize) -> bool {
        match self.angle {
            Some(theta) => {
                let tau = std::f64::consts::TAU;
                for d in 1..n {
                    let r = (theta * d as f64).rem_euclid(tau);
                    if r.min(tau - r) < DEGENERACY_TOL * tau {
                        return true;
                    }
                }
                false
            }
            None => {
                let mut v = Complex::new(1.0, 0.0);
                for _ in 1..n {
                    v *= self.value;
                    if (v - Complex::new(1.0, 0.0)).norm() < DEGENERACY_TOL {
                        return true;
                    }
                }
                false
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_construction_lands_on_unit_circle() {
        let node = Node::from_angle(std::f64::consts::PI / 32.0);
        assert!((node.value().norm() - 1.0).abs() < 1e-15);
        assert!(node.value().im < 0.0);
    }

    #[test]
    fn zero_value_rejected() {
        assert!(Node::from_value(Complex::new(0.0, 0.0)).is_err());
        assert!(Node::from_value(Complex::new(0.5, 0.0)).is_ok());
    }

    #[test]
    fn degeneracy_at_pi_over_32() {
        let node = Node::from_angle(std::f64::consts::PI / 32.0);
        for n in [2usize, 4, 8, 16, 32, 64] {
            assert!(!node.is_degenerate(n), "n={n} should be non-degenerate");
        }
        // alpha^64 = e^{-i 2pi} = 1, repeated nodes from size 128 up.
        assert!(node.is_degenerate(128));
    }

    #[test]
    fn zero_angle_always_degenerate() {
        let node = Node::from_angle(0.0);
        assert!(node.is_degenerate(2));
        assert!(node.is_degenerate(64));
    }

    #[test]
    fn wraparound_angles_detected() {
        // theta just under a full turn: theta*1 mod 2pi sits near 2pi, not near 0.
        let node = Node::from_angle(std::f64::consts::TAU - 1e-14);
        assert!(node.is_degenerate(2));
    }

    #[test]
    fn general_value_degeneracy_by_power_walk() {
        let i = Node::from_value(Complex::new(0.0, 1.0)).unwrap();
        assert!(!i.is_degenerate(4)); // powers i, -1, -i; none is 1
        assert!(i.is_degenerate(5)); // i^4 = 1
        let r = Node::from_value(Complex::new(0.9, 0.0)).unwrap();
        assert!(!r.is_degenerate(1024));
    }

    #[test]
    fn dft_node_is_not_degenerate_below_its_order() {
        for n in [4usize, 16, 64] {
            let node = Node::from_angle(std::f64::consts::TAU / n as f64);
            assert!(!node.is_degenerate(n));
            assert!(node.is_degenerate(n + 1));
        }
    }
}
