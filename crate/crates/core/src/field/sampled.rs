use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use super::fft::fft4_in_place;
use super::lattice::Lattice4;
use crate::error::{Error, Result};

/// Which space a field's samples live in.
///
/// A frequency-domain field remembers the origin of the position lattice it
/// came from, which fixes the phase convention of the inverse transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "lowercase")]
pub enum Domain {
    Position,
    Frequency { position_origin: [f64; 4] },
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::Position => "position",
            Domain::Frequency { .. } => "frequency",
        }
    }
}

/// A complex function sampled on a [`Lattice4`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub lattice: Lattice4,
    pub values: Vec<Complex64>,
    pub domain: Domain,
}

impl SampledField {
    pub fn new(lattice: Lattice4, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::InvalidField(format!(
                "{} values for a lattice of {} nodes",
                values.len(),
                lattice.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        Ok(Self {
            lattice,
            values,
            domain,
        })
    }

    pub fn zeros(lattice: Lattice4, domain: Domain) -> Self {
        Self {
            lattice,
            values: vec![Complex64::default(); lattice.len()],
            domain,
        }
    }

    /// Position-domain field from a function of the node coordinates.
    pub fn from_fn<F>(lattice: Lattice4, f: F) -> Self
    where
        F: Fn([f64; 4]) -> Complex64 + Sync,
    {
        let values = (0..lattice.len())
            .into_par_iter()
            .map(|i| f(lattice.point_flat(i)))
            .collect();
        Self {
            lattice,
            values,
            domain: Domain::Position,
        }
    }

    pub fn ensure_position(&self) -> Result<()> {
        match self.domain {
            Domain::Position => Ok(()),
            d => Err(Error::DomainMismatch {
                expected: "position",
                found: d.name(),
            }),
        }
    }

    fn ensure_compatible(&self, other: &SampledField) -> Result<()> {
        self.lattice.ensure_matches(&other.lattice)?;
        if self.domain.name() != other.domain.name() {
            return Err(Error::DomainMismatch {
                expected: self.domain.name(),
                found: other.domain.name(),
            });
        }
        Ok(())
    }

    /// `Σ conj(self)·other·h⁴`, conjugate-linear in `self`.
    pub fn inner(&self, other: &SampledField) -> Result<Complex64> {
        self.ensure_compatible(other)?;
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.lattice.cell_volume())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.lattice.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> SampledField {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> SampledField {
        self.map(|v| v.conj())
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> SampledField {
        SampledField {
            lattice: self.lattice,
            values: self.values.iter().map(|&v| f(v)).collect(),
            domain: self.domain,
        }
    }

    pub fn add(&self, other: &SampledField) -> Result<SampledField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledField) -> Result<SampledField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(
        &self,
        other: &SampledField,
        f: F,
    ) -> Result<SampledField> {
        self.ensure_compatible(other)?;
        Ok(SampledField {
            lattice: self.lattice,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            domain: self.domain,
        })
    }

    /// `‖self - reference‖ / ‖reference‖`.
    pub fn relative_error(&self, reference: &SampledField) -> Result<f64> {
        let diff = self.sub(reference)?;
        Ok(diff.norm() / reference.norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Unitary transform `f̂(k) = (2π)⁻² Σ f(x) e^{-ik·x} h⁴`.
    pub fn dft(&self) -> Result<SampledField> {
        self.ensure_position()?;
        let n = self.lattice.isotropic_count()?;
        let klat = self.lattice.reciprocal()?;
        let mut values = self.values.clone();
        // Shift the output index by ⌊N/2⌋ so that frequencies are centered.
        let shift = axis_phases(n, (n / 2) as f64);
        apply_separable(&mut values, n, &shift);
        fft4_in_place(&mut values, self.lattice.counts, FftDirection::Forward);
        let origin = self.lattice.origin;
        let scale = self.lattice.cell_volume() / (TAU * TAU);
        let phases: Vec<Vec<Complex64>> = (0..4)
            .map(|j| {
                klat.axis(j)
                    .iter()
                    .map(|k| Complex64::from_polar(scale.powf(0.25), -k * origin[j]))
                    .collect()
            })
            .collect();
        apply_separable_axes(&mut values, n, &phases);
        Ok(SampledField {
            lattice: klat,
            values,
            domain: Domain::Frequency {
                position_origin: origin,
            },
        })
    }

    /// Inverse of [`SampledField::dft`].
    pub fn idft(&self) -> Result<SampledField> {
        let position_origin = match self.domain {
            Domain::Frequency { position_origin } => position_origin,
            Domain::Position => {
                return Err(Error::DomainMismatch {
                    expected: "frequency",
                    found: "position",
                })
            }
        };
        let n = self.lattice.isotropic_count()?;
        let xlat = self.lattice.position_for(position_origin)?;
        let mut values = self.values.clone();
        let scale = self.lattice.cell_volume() / (TAU * TAU);
        let phases: Vec<Vec<Complex64>> = (0..4)
            .map(|j| {
                self.lattice
                    .axis(j)
                    .iter()
                    .map(|k| Complex64::from_polar(scale.powf(0.25), k * position_origin[j]))
                    .collect()
            })
            .collect();
        apply_separable_axes(&mut values, n, &phases);
        fft4_in_place(&mut values, self.lattice.counts, FftDirection::Inverse);
        let shift = axis_phases(n, -((n / 2) as f64));
        apply_separable(&mut values, n, &shift);
        Ok(SampledField {
            lattice: xlat,
            values,
            domain: Domain::Position,
        })
    }

    /// Wavevector of every frequency-domain node, or the position of every
    /// position-domain node.
    pub fn coordinates(&self, flat: usize) -> [f64; 4] {
        self.lattice.point_flat(flat)
    }
}

/// `e^{2πi·c·n/N}` for `n = 0..N`.
fn axis_phases(n: usize, c: f64) -> Vec<Complex64> {
    (0..n)
        .map(|i| Complex64::from_polar(1.0, TAU * c * i as f64 / n as f64))
        .collect()
}

fn apply_separable(values: &mut [Complex64], n: usize, phase: &[Complex64]) {
    let axes = vec![phase.to_vec(); 4];
    apply_separable_axes(values, n, &axes);
}

/// Multiplies entry `(i0, i1, i2, i3)` by `p0[i0]·p1[i1]·p2[i2]·p3[i3]`.
fn apply_separable_axes(values: &mut [Complex64], n: usize, phases: &[Vec<Complex64>]) {
    let n3 = n * n * n;
    values.par_chunks_mut(n3).enumerate().for_each(|(i0, block)| {
        let p0 = phases[0][i0];
        for (rest, v) in block.iter_mut().enumerate() {
            let (i1, i2, i3) = (rest / (n * n), (rest / n) % n, rest % n);
            *v *= p0 * phases[1][i1] * phases[2][i2] * phases[3][i3];
        }
    });
}
