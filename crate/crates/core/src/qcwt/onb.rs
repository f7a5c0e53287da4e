use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{qinner, qscale_right, QuaternionField};
use crate::error::{Error, Result};
use crate::field::{Lattice4, SampledField};
use crate::quaternion::Quaternion;

/// Orthonormal base `Φn = (φn, -conj(φn)) / √2` of the quaternionic space,
/// lifted from a complex orthonormal family `φn`.
#[derive(Clone, Debug)]
pub struct QuaternionicOnb {
    pub base: Vec<SampledField>,
}

fn gram_deviation(fields: &[SampledField]) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for (m, a) in fields.iter().enumerate() {
        for (n, b) in fields.iter().enumerate() {
            let target = if m == n { 1.0 } else { 0.0 };
            dev = dev.max((a.inner(b)? - target).norm());
        }
    }
    Ok(dev)
}

/// Checks that `base` and its conjugate are orthonormal within `tol`.
pub fn lift_onb(base: Vec<SampledField>, tol: f64) -> Result<QuaternionicOnb> {
    if base.is_empty() {
        return Err(Error::InvalidSpec("empty base".into()));
    }
    for f in &base {
        f.ensure_position()?;
        f.lattice.ensure_matches(&base[0].lattice)?;
    }
    let conj: Vec<SampledField> = base.iter().map(SampledField::conj).collect();
    let deviation = gram_deviation(&base)?.max(gram_deviation(&conj)?);
    if deviation > tol {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(QuaternionicOnb { base })
}

impl QuaternionicOnb {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn lifted(&self, n: usize) -> QuaternionField {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QuaternionField {
            f1: self.base[n].scale(s),
            f2: self.base[n].map(|v| -v.conj() * s),
        }
    }

    /// `q_n = ⟪Φn | f⟫`.
    pub fn expand(&self, f: &QuaternionField) -> Result<Vec<Quaternion>> {
        (0..self.len()).map(|n| qinner(&self.lifted(n), f)).collect()
    }

    /// `Σ_{n < terms} Φn q_n`.
    pub fn partial_sum(&self, coefficients: &[Quaternion], terms: usize) -> Result<QuaternionField> {
        let mut acc = QuaternionField::zeros(self.base[0].lattice);
        for (n, q) in coefficients.iter().enumerate().take(terms) {
            acc = acc.add(&qscale_right(&self.lifted(n), q))?;
        }
        Ok(acc)
    }
}

/// Products of a Gaussian with low-degree Hermite polynomials along the
/// lattice axes, orthonormalized on the lattice by two Gram–Schmidt passes.
pub fn hermite_base(lattice: Lattice4, count: usize, width: f64) -> Result<Vec<SampledField>> {
    // (axis, degree); axis 4 means the plain Gaussian.
    let shapes = [(4, 0), (0, 1), (1, 1), (2, 1), (3, 1), (0, 2), (1, 2), (2, 2), (3, 2)];
    if count > shapes.len() {
        return Err(Error::InvalidSpec(format!(
            "at most {} Hermite-type functions are available",
            shapes.len()
        )));
    }
    let mut out: Vec<SampledField> = Vec::with_capacity(count);
    for &(axis, degree) in &shapes[..count] {
        let mut f = SampledField::from_fn(lattice, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (width * width);
            let u = if axis < 4 { x[axis] / width } else { 0.0 };
            let poly = match degree {
                0 => 1.0,
                1 => 2.0 * u,
                _ => 4.0 * u * u - 2.0,
            };
            Complex64::new(poly * (-r2 / 2.0).exp(), 0.0)
        });
        for _ in 0..2 {
            for prev in &out {
                let c = prev.inner(&f)?;
                f = f.zip_with(prev, |a, b| a - c * b)?;
            }
        }
        let n = f.norm();
        out.push(f.scale(Complex64::new(1.0 / n, 0.0)));
    }
    Ok(out)
}
