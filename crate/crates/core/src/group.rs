//! The quaternionic affine group `H ⋊ H*` acting on `H ≅ R⁴` by `x ↦ a x + b`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quaternion::{Quaternion, RealMatrix4, RotationDilation};

/// Group element `(b, a)` with translation `b` and invertible dilation–rotation `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineElement {
    pub b: Quaternion,
    pub a: Quaternion,
    pub decomp: RotationDilation,
}

/// Densities of the Haar measures with respect to `db da` at one element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarDensities {
    pub left: f64,
    pub right: f64,
    pub delta: f64,
}

impl AffineElement {
    pub fn new(b: Quaternion, a: Quaternion) -> Result<Self> {
        let decomp = RotationDilation::decompose(&a)?;
        Ok(Self { b, a, decomp })
    }

    pub fn from_decomposition(b: Quaternion, decomp: RotationDilation) -> Self {
        Self {
            b,
            a: decomp.to_quaternion(),
            decomp,
        }
    }

    pub fn identity() -> Self {
        Self::from_decomposition(
            Quaternion::ZERO,
            RotationDilation {
                lambda1: 1.0,
                theta1: 0.0,
                lambda2: 0.0,
                theta2: 0.0,
            },
        )
    }

    pub fn translation(b: Quaternion) -> Self {
        Self {
            b,
            ..Self::identity()
        }
    }

    /// `(b1 + a1 b2, a1 a2)`.
    pub fn compose(&self, other: &AffineElement) -> Result<AffineElement> {
        Self::new(self.b + self.a * other.b, self.a * other.a)
    }

    /// `(-a⁻¹ b, a⁻¹)`.
    pub fn inverse(&self) -> Result<AffineElement> {
        let a_inv = self.a.inverse()?;
        Self::new(-(a_inv * self.b), a_inv)
    }

    pub fn act(&self, x: &Quaternion) -> Quaternion {
        self.a * *x + self.b
    }

    /// `x ↦ a⁻¹ (x - b)` on R⁴ vectors, the argument map of the pullback.
    pub fn inverse_act_vec4(&self, x: [f64; 4]) -> Result<[f64; 4]> {
        let a_inv = self.a.inverse()?;
        let y = Quaternion::from_vec4(x) - self.b;
        Ok((a_inv * y).vec4())
    }

    /// `det A = |a|⁴` of the real 4×4 dilation matrix.
    pub fn det_a(&self) -> f64 {
        let d = self.a.det();
        d * d
    }

    pub fn haar_densities(&self) -> HaarDensities {
        let det = self.det_a();
        HaarDensities {
            left: 1.0 / (det * det),
            right: 1.0 / det,
            delta: 1.0 / det,
        }
    }

    pub fn dilation_matrix(&self) -> RealMatrix4 {
        self.a.to_real4x4()
    }

    /// The 3×3 complex matrix `[[a, b], [0ᵀ, 1]]`, where `a` is the 2×2
    /// quaternion block and `b` the column `(z1, z2)` of the translation.
    pub fn affine_matrix(&self) -> [[Complex64; 3]; 3] {
        let m = self.a.matrix();
        let zero = Complex64::new(0.0, 0.0);
        [
            [m[0][0], m[0][1], self.b.z1],
            [m[1][0], m[1][1], self.b.z2],
            [zero, zero, Complex64::new(1.0, 0.0)],
        ]
    }

    pub fn max_abs_diff(&self, other: &AffineElement) -> f64 {
        self.a
            .max_abs_diff(&other.a)
            .max(self.b.max_abs_diff(&other.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_composition() {
        let g = AffineElement::new(
            Quaternion::from_components(0.5, -1.0, 2.0, 0.1),
            Quaternion::from_components(1.2, 0.3, -0.7, 0.4),
        )
        .unwrap();
        let e = AffineElement::identity();
        assert!(e.compose(&g).unwrap().max_abs_diff(&g) < 1e-15);
        assert!(g.compose(&e).unwrap().max_abs_diff(&g) < 1e-15);
        let round = g.compose(&g.inverse().unwrap()).unwrap();
        assert!(round.max_abs_diff(&e) < 1e-12);
    }

    #[test]
    fn translation_inverse() {
        let b = Quaternion::from_components(1.0, 2.0, 3.0, 4.0);
        let inv = AffineElement::translation(b).inverse().unwrap();
        assert_eq!(inv.b, -b);
        assert_eq!(inv.a, Quaternion::ONE);
        assert_eq!(AffineElement::identity().inverse().unwrap().a, Quaternion::ONE);
    }

    #[test]
    fn haar_density_values() {
        let g = AffineElement::new(Quaternion::ZERO, Quaternion::scalar(2.0)).unwrap();
        let h = g.haar_densities();
        assert_eq!((h.left, h.right, h.delta), (1.0 / 256.0, 1.0 / 16.0, 1.0 / 16.0));
        let h = AffineElement::new(Quaternion::ZERO, Quaternion::J)
            .unwrap()
            .haar_densities();
        assert_eq!((h.left, h.right, h.delta), (1.0, 1.0, 1.0));
    }
}
