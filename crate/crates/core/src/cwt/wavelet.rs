use std::sync::Arc;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::admissibility::{admissibility_with_spectrum, AdmissibilityReport};
use crate::error::{Error, Result};
use crate::field::spectrum::{Conjugated, GaussianSpectrum, Scaled};
use crate::field::{
    sample_spectrum, GaussianSum, Lattice4, LatticeSpectrum, RadialSpectrum, SampledField,
    SharedSpectrum,
};

/// A mother wavelet: its lattice samples, a spectrum that can be evaluated
/// off the lattice, and its admissibility report.
#[derive(Clone)]
pub struct Wavelet {
    pub field: SampledField,
    spectrum: SharedSpectrum,
    /// Closed form, when the wavelet was built from Gaussians.
    pub analytic: Option<GaussianSum>,
    pub report: AdmissibilityReport,
    /// SHA-256 of the lattice and sample bytes.
    pub fingerprint: String,
}

impl std::fmt::Debug for Wavelet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Wavelet")
            .field("lattice", &self.field.lattice)
            .field("report", &self.report)
            .field("fingerprint", &self.fingerprint)
            .finish()
    }
}

fn fingerprint(field: &SampledField) -> String {
    let mut h = Sha256::new();
    let lat = &field.lattice;
    for o in lat.origin {
        h.update(o.to_le_bytes());
    }
    h.update(lat.spacing.to_le_bytes());
    for c in lat.counts {
        h.update((c as u64).to_le_bytes());
    }
    for v in &field.values {
        h.update(v.re.to_le_bytes());
        h.update(v.im.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Wavelet {
    fn assemble(
        field: SampledField,
        spectrum: SharedSpectrum,
        analytic: Option<GaussianSum>,
    ) -> Result<Self> {
        field.ensure_position()?;
        let report = admissibility_with_spectrum(&field, Some(spectrum.as_ref()))?;
        Ok(Self {
            fingerprint: fingerprint(&field),
            field,
            spectrum,
            analytic,
            report,
        })
    }

    /// From position samples alone; off-lattice spectra are interpolated.
    pub fn from_field(field: SampledField) -> Result<Self> {
        let spectrum: SharedSpectrum = Arc::new(LatticeSpectrum::new(field.dft()?)?);
        Self::assemble(field, spectrum, None)
    }

    /// Samples `spectrum` on the reciprocal lattice and transforms back.
    pub fn from_spectrum(
        lattice: Lattice4,
        spectrum: SharedSpectrum,
        analytic: Option<GaussianSum>,
    ) -> Result<Self> {
        let field = sample_spectrum(spectrum.as_ref(), lattice)?.idft()?;
        Self::assemble(field, spectrum, analytic)
    }

    /// Position samples of a Gaussian sum with its closed-form spectrum.
    pub fn from_gaussians(lattice: Lattice4, sum: GaussianSum) -> Result<Self> {
        let field = sum.sample(lattice);
        let spectrum: SharedSpectrum = if sum.has_spectrum() {
            Arc::new(GaussianSpectrum::new(sum.clone())?)
        } else {
            Arc::new(LatticeSpectrum::new(field.dft()?)?)
        };
        Self::assemble(field, spectrum, Some(sum))
    }

    /// `η̂(k) = ‖k‖^power exp(-width²‖k‖²/2)`.
    pub fn radial(lattice: Lattice4, power: i32, width: f64) -> Result<Self> {
        let analytic = if power == 2 {
            Some(GaussianSum::mexican_hat(width)?)
        } else {
            None
        };
        Self::from_spectrum(lattice, Arc::new(RadialSpectrum { power, width }), analytic)
    }

    /// The default mother wavelet, `η̂(k) = ‖k‖² exp(-‖k‖²/2)`.
    pub fn shipped(lattice: Lattice4) -> Result<Self> {
        Self::radial(lattice, 2, 1.0)
    }

    pub fn spectrum(&self) -> &SharedSpectrum {
        &self.spectrum
    }

    pub fn c_eta(&self) -> f64 {
        self.report.c_eta
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::assemble(
            self.field.scale(c),
            Arc::new(Scaled(self.spectrum.clone(), c)),
            self.analytic.as_ref().map(|s| s.scale(c)),
        )
    }

    /// The wavelet `x ↦ conj(η(x))`.
    pub fn conjugated(&self) -> Result<Self> {
        Self::assemble(
            self.field.conj(),
            Arc::new(Conjugated(self.spectrum.clone())),
            self.analytic.as_ref().map(GaussianSum::conj),
        )
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.report.degenerate {
            return Err(Error::InadmissibleWavelet("wavelet is identically zero".into()));
        }
        if !self.report.admissible {
            return Err(Error::InadmissibleWavelet(format!(
                "constant estimate does not settle: {:?} (growth ratio {})",
                self.report.estimates, self.report.growth_ratio
            )));
        }
        Ok(())
    }
}
