//! Quaternions in the 2×2 complex matrix representation.
//!
//! A quaternion `q = q0 + q1 i + q2 j + q3 k` is stored as the complex pair
//! `z1 = q0 + i q3`, `z2 = q2 + i q1`, which is the first column of the matrix
//!
//! ```text
//! [ z1  -conj(z2) ]
//! [ z2   conj(z1) ]
//! ```
//!
//! The matrix is never stored; [`Quaternion::matrix`] builds it on demand.
//!
//! **Vector ordering.** When a quaternion is identified with a point of R⁴
//! the components are laid out as `(x0, x3, x2, x1)`, i.e.
//! `(Re z1, Im z1, Re z2, Im z2)`. Every 4-vector in this crate (lattice axes,
//! translations, wavevectors) uses this ordering.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices `σ0 = I₂, σ1, σ2, σ3`.
pub const PAULI: [Mat2; 4] = [
    [[C1, C0], [C0, C1]],
    [[C0, C1], [C1, C0]],
    [[C0, Complex64::new(0.0, -1.0)], [CI, C0]],
    [[C1, C0], [C0, Complex64::new(-1.0, 0.0)]],
];

/// Default threshold below which a determinant is treated as zero.
///
/// Admits every nonzero finite quaternion whose squared norm does not
/// underflow.
pub const DEFAULT_SINGULAR_EPSILON: f64 = 1e-300;

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [q0, q1, q2, q3] = self.components();
        write!(f, "Quaternion({q0} + {q1}i + {q2}j + {q3}k)")
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { z1: C0, z2: C0 };
    /// The identity `σ0`.
    pub const ONE: Quaternion = Quaternion { z1: C1, z2: C0 };
    /// `i = √-1 σ1`.
    pub const I: Quaternion = Quaternion { z1: C0, z2: CI };
    /// `j = -√-1 σ2`.
    pub const J: Quaternion = Quaternion { z1: C0, z2: C1 };
    /// `k = √-1 σ3`.
    pub const K: Quaternion = Quaternion { z1: CI, z2: C0 };

    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Builds `q0 + q1 i + q2 j + q3 k`.
    pub fn from_components(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self {
            z1: Complex64::new(q0, q3),
            z2: Complex64::new(q2, q1),
        }
    }

    pub fn scalar(r: f64) -> Self {
        Self::from_components(r, 0.0, 0.0, 0.0)
    }

    /// Returns `[q0, q1, q2, q3]`.
    pub fn components(&self) -> [f64; 4] {
        [self.z1.re, self.z2.im, self.z2.re, self.z1.im]
    }

    /// Inverse of [`Quaternion::vec4`]: reads `(x0, x3, x2, x1)`.
    pub fn from_vec4(v: [f64; 4]) -> Self {
        Self {
            z1: Complex64::new(v[0], v[1]),
            z2: Complex64::new(v[2], v[3]),
        }
    }

    /// The R⁴ vector `(x0, x3, x2, x1)`.
    pub fn vec4(&self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    /// The 2×2 complex matrix `[[z1, -conj(z2)], [z2, conj(z1)]]`.
    pub fn matrix(&self) -> Mat2 {
        [[self.z1, -self.z2.conj()], [self.z2, self.z1.conj()]]
    }

    /// Reads a 2×2 matrix, returning `None` when its entries violate the
    /// quaternion structure by more than `tol` (absolute, scaled by the
    /// largest entry).
    pub fn from_matrix(m: &Mat2, tol: f64) -> Option<Self> {
        let scale = m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(1.0_f64, f64::max);
        let d1 = (m[1][1] - m[0][0].conj()).norm();
        let d2 = (m[0][1] + m[1][0].conj()).norm();
        if d1 <= tol * scale && d2 <= tol * scale {
            Some(Self::new(m[0][0], m[1][0]))
        } else {
            None
        }
    }

    /// Largest deviation of a 2×2 matrix from the `[[α, -conj(β)], [β, conj(α)]]`
    /// pattern.
    pub fn structure_defect(m: &Mat2) -> f64 {
        let d1 = (m[1][1] - m[0][0].conj()).norm();
        let d2 = (m[0][1] + m[1][0].conj()).norm();
        d1.max(d2)
    }

    /// Quaternionic conjugate, equal to the matrix adjoint.
    pub fn conj(&self) -> Self {
        Self {
            z1: self.z1.conj(),
            z2: -self.z2,
        }
    }

    /// `|z1|² + |z2|²`, the determinant of the matrix form.
    pub fn det(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.det().sqrt()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_epsilon(DEFAULT_SINGULAR_EPSILON)
    }

    pub fn inverse_with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let det = self.det();
        if !(det > epsilon) {
            return Err(Error::SingularQuaternion { det, epsilon });
        }
        Ok(self.conj().scale(1.0 / det))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            z1: self.z1 * s,
            z2: self.z2 * s,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.z1 - other.z1).norm().max((self.z2 - other.z2).norm())
    }

    pub fn is_finite(&self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }

    pub fn to_real4x4(&self) -> RealMatrix4 {
        let [a0, a1, a2, a3] = self.components();
        RealMatrix4 {
            entries: [
                [a0, -a3, -a2, -a1],
                [a3, a0, a1, -a2],
                [a2, -a1, a0, a3],
                [a1, a2, -a3, a0],
            ],
        }
    }

    pub fn rotation_dilation(&self) -> Result<RotationDilation> {
        RotationDilation::decompose(self)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    // First column of [[z1, -z̄2], [z2, z̄1]] · [[w1, -w̄2], [w2, w̄1]].
    fn mul(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            z1: self.z1 * rhs.z1 - self.z2.conj() * rhs.z2,
            z2: self.z2 * rhs.z1 + self.z1.conj() * rhs.z2,
        }
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            z1: self.z1 + rhs.z1,
            z2: self.z2 + rhs.z2,
        }
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        self.z1 += rhs.z1;
        self.z2 += rhs.z2;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            z1: self.z1 - rhs.z1,
            z2: self.z2 - rhs.z2,
        }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion {
            z1: -self.z1,
            z2: -self.z2,
        }
    }
}

/// Product of two 2×2 complex matrices.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// A real 4×4 matrix acting on vectors ordered `(x0, x3, x2, x1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealMatrix4 {
    pub entries: [[f64; 4]; 4],
}

impl RealMatrix4 {
    pub fn identity() -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { entries }
    }

    pub fn mul_vec(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.entries) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn matmul(&self, other: &RealMatrix4) -> RealMatrix4 {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.entries[i][k] * other.entries[k][j]).sum();
            }
        }
        RealMatrix4 { entries }
    }

    pub fn transpose(&self) -> RealMatrix4 {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[j][i];
            }
        }
        RealMatrix4 { entries }
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let mut m = self.entries;
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .unwrap_or(col);
            if m[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col];
            for row in col + 1..4 {
                let factor = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &RealMatrix4) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Polar form of the two rotation–dilation blocks of a quaternion's real
/// 4×4 matrix: `A1 = λ1 R(θ1)` acts on `(x0, x3)`, `A2 = λ2 R(θ2)` couples
/// `(x0, x3)` and `(x2, x1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationDilation {
    pub lambda1: f64,
    pub theta1: f64,
    pub lambda2: f64,
    pub theta2: f64,
}

fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs.
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn polar(z: Complex64) -> (f64, f64) {
    let r = z.norm();
    if r == 0.0 {
        (0.0, 0.0)
    } else {
        (r, wrap_angle(z.im.atan2(z.re)))
    }
}

impl RotationDilation {
    /// `λ1 = √(a0² + a3²)`, `θ1 = atan2(a3, a0)`, `λ2 = √(a1² + a2²)`,
    /// `θ2 = atan2(a1, a2)`. An angle is set to 0 when its radius vanishes.
    pub fn decompose(q: &Quaternion) -> Result<Self> {
        let det = q.det();
        if !(det > DEFAULT_SINGULAR_EPSILON) {
            return Err(Error::SingularQuaternion {
                det,
                epsilon: DEFAULT_SINGULAR_EPSILON,
            });
        }
        let (lambda1, theta1) = polar(q.z1);
        let (lambda2, theta2) = polar(q.z2);
        Ok(Self {
            lambda1,
            theta1,
            lambda2,
            theta2,
        })
    }

    pub fn new(lambda1: f64, theta1: f64, lambda2: f64, theta2: f64) -> Result<Self> {
        if !(lambda1 >= 0.0 && lambda2 >= 0.0) || !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "rotation-dilation parameters out of range: ({lambda1}, {theta1}, {lambda2}, {theta2})"
            )));
        }
        if lambda1 * lambda1 + lambda2 * lambda2 <= 0.0 {
            return Err(Error::SingularQuaternion {
                det: 0.0,
                epsilon: DEFAULT_SINGULAR_EPSILON,
            });
        }
        Ok(Self {
            lambda1,
            theta1: wrap_angle(theta1),
            lambda2,
            theta2: wrap_angle(theta2),
        })
    }

    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::new(
            Complex64::from_polar(self.lambda1, self.theta1),
            Complex64::from_polar(self.lambda2, self.theta2),
        )
    }

    /// `λ1² + λ2²`, equal to `|a|²`.
    pub fn det(&self) -> f64 {
        self.lambda1 * self.lambda1 + self.lambda2 * self.lambda2
    }

    /// Reassembles `[[λ1 R(θ1), -λ2 R(-θ2)], [λ2 R(θ2), λ1 R(-θ1)]]`.
    pub fn to_real4x4(&self) -> RealMatrix4 {
        let rot = |lambda: f64, theta: f64| {
            let (s, c) = theta.sin_cos();
            [[lambda * c, -lambda * s], [lambda * s, lambda * c]]
        };
        let a1 = rot(self.lambda1, self.theta1);
        let a1t = rot(self.lambda1, -self.theta1);
        let a2 = rot(self.lambda2, self.theta2);
        let a2t = rot(self.lambda2, -self.theta2);
        let mut entries = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j] = a1[i][j];
                entries[i][j + 2] = -a2t[i][j];
                entries[i + 2][j] = a2[i][j];
                entries[i + 2][j + 2] = a1t[i][j];
            }
        }
        RealMatrix4 { entries }
    }
}
