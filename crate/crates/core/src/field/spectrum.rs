//! Fourier-domain functions that can be evaluated at arbitrary wavevectors.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::analytic::GaussianSum;
use super::lattice::Lattice4;
use super::pullback::interpolate;
use super::sampled::{Domain, SampledField};
use crate::error::{Error, Result};

pub trait Spectrum: Send + Sync {
    fn at(&self, k: [f64; 4]) -> Complex64;
}

pub type SharedSpectrum = Arc<dyn Spectrum>;

/// Quadrilinear interpolation of frequency-domain samples, zero outside the
/// sampled band.
pub struct LatticeSpectrum {
    field: SampledField,
}

impl LatticeSpectrum {
    pub fn new(field: SampledField) -> Result<Self> {
        match field.domain {
            Domain::Frequency { .. } => Ok(Self { field }),
            Domain::Position => Err(Error::DomainMismatch {
                expected: "frequency",
                found: "position",
            }),
        }
    }
}

impl Spectrum for LatticeSpectrum {
    fn at(&self, k: [f64; 4]) -> Complex64 {
        interpolate(&self.field.lattice, &self.field.values, k)
    }
}

/// `‖k‖^p exp(-w²‖k‖²/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialSpectrum {
    pub power: i32,
    pub width: f64,
}

impl Spectrum for RadialSpectrum {
    fn at(&self, k: [f64; 4]) -> Complex64 {
        let k2: f64 = k.iter().map(|v| v * v).sum();
        let radial = match self.power {
            0 => 1.0,
            2 => k2,
            p => k2.sqrt().powi(p),
        };
        Complex64::new(radial * (-self.width * self.width * k2 / 2.0).exp(), 0.0)
    }
}

/// Closed-form spectrum of a Gaussian sum without `‖x - c‖` prefactors.
pub struct GaussianSpectrum {
    sum: GaussianSum,
}

impl GaussianSpectrum {
    pub fn new(sum: GaussianSum) -> Result<Self> {
        if !sum.has_spectrum() {
            return Err(Error::InvalidSpec(
                "no closed-form spectrum for a linear radial prefactor".into(),
            ));
        }
        Ok(Self { sum })
    }
}

impl Spectrum for GaussianSpectrum {
    fn at(&self, k: [f64; 4]) -> Complex64 {
        self.sum.spectrum(k).unwrap_or_default()
    }
}

/// Spectrum of the complex-conjugate field: `k ↦ conj(ŝ(-k))`.
pub struct Conjugated(pub SharedSpectrum);

impl Spectrum for Conjugated {
    fn at(&self, k: [f64; 4]) -> Complex64 {
        self.0.at(k.map(|v| -v)).conj()
    }
}

/// Spectrum multiplied by a constant.
pub struct Scaled(pub SharedSpectrum, pub Complex64);

impl Spectrum for Scaled {
    fn at(&self, k: [f64; 4]) -> Complex64 {
        self.0.at(k) * self.1
    }
}

/// Samples a spectrum on the reciprocal lattice of a position lattice.
pub fn sample_spectrum(spectrum: &dyn Spectrum, position: Lattice4) -> Result<SampledField> {
    let klat = position.reciprocal()?;
    let values = (0..klat.len())
        .into_par_iter()
        .map(|i| spectrum.at(klat.point_flat(i)))
        .collect();
    SampledField::new(
        klat,
        values,
        Domain::Frequency {
            position_origin: position.origin,
        },
    )
}
