//! Closed-form Gaussian family, closed under the affine action.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::Lattice4;
use super::sampled::SampledField;
use crate::error::{Error, Result};
use crate::group::AffineElement;
use crate::quaternion::Quaternion;

/// Radial polynomial multiplying the Gaussian envelope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prefactor {
    One,
    Radius,
    RadiusSquared,
}

impl Prefactor {
    pub fn degree(self) -> i32 {
        match self {
            Prefactor::One => 0,
            Prefactor::Radius => 1,
            Prefactor::RadiusSquared => 2,
        }
    }
}

/// `amplitude · P(‖x - c‖) · exp(-‖x - c‖²/(2 w²)) · exp(i κ·(x - c))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticGaussian {
    pub center: [f64; 4],
    pub width: f64,
    pub polynomial_prefactor: Prefactor,
    pub phase: [f64; 4],
    pub amplitude: Complex64,
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl AnalyticGaussian {
    pub fn new(center: [f64; 4], width: f64) -> Result<Self> {
        let g = Self {
            center,
            width,
            polynomial_prefactor: Prefactor::One,
            phase: [0.0; 4],
            amplitude: Complex64::new(1.0, 0.0),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_prefactor(mut self, p: Prefactor) -> Self {
        self.polynomial_prefactor = p;
        self
    }

    pub fn with_phase(mut self, phase: [f64; 4]) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "Gaussian width {} must be positive",
                self.width
            )));
        }
        Ok(())
    }

    pub fn value(&self, x: [f64; 4]) -> Complex64 {
        let d: [f64; 4] = std::array::from_fn(|j| x[j] - self.center[j]);
        let r2 = dot(&d, &d);
        let poly = match self.polynomial_prefactor {
            Prefactor::One => 1.0,
            Prefactor::Radius => r2.sqrt(),
            Prefactor::RadiusSquared => r2,
        };
        let env = poly * (-r2 / (2.0 * self.width * self.width)).exp();
        self.amplitude * Complex64::from_polar(env, dot(&self.phase, &d))
    }

    /// `|A|² π² w^{4+2p} Γ(p+2)`.
    pub fn norm_sqr(&self) -> f64 {
        let p = self.polynomial_prefactor.degree();
        let gamma = [1.0, 2.0, 6.0][p as usize];
        self.amplitude.norm_sqr() * PI * PI * self.width.powi(4 + 2 * p) * gamma
    }

    /// Closed form of `|a|⁻² f(a⁻¹(x - b))`.
    pub fn act(&self, g: &AffineElement) -> AnalyticGaussian {
        let norm_a = g.a.norm();
        let center = g.act(&Quaternion::from_vec4(self.center)).vec4();
        let kappa = (g.a * Quaternion::from_vec4(self.phase)).vec4();
        let det = g.a.det();
        let p = self.polynomial_prefactor.degree();
        Self {
            center,
            width: self.width * norm_a,
            polynomial_prefactor: self.polynomial_prefactor,
            phase: kappa.map(|v| v / det),
            amplitude: self.amplitude / (det * norm_a.powi(p)),
        }
    }

    /// Unitary Fourier transform in closed form, available for prefactors
    /// `1` and `‖x - c‖²`.
    pub fn spectrum(&self, k: [f64; 4]) -> Option<Complex64> {
        let w2 = self.width * self.width;
        let q: [f64; 4] = std::array::from_fn(|j| k[j] - self.phase[j]);
        let q2 = dot(&q, &q);
        let env = (-w2 * q2 / 2.0).exp();
        let radial = match self.polynomial_prefactor {
            Prefactor::One => w2 * w2 * env,
            Prefactor::RadiusSquared => w2 * w2 * w2 * (4.0 - w2 * q2) * env,
            Prefactor::Radius => return None,
        };
        Some(self.amplitude * Complex64::from_polar(radial, -dot(&k, &self.center)))
    }

    pub fn sample(&self, lattice: Lattice4) -> SampledField {
        SampledField::from_fn(lattice, |x| self.value(x))
    }
}

/// Finite linear combination of analytic Gaussians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSum {
    pub terms: Vec<AnalyticGaussian>,
}

impl GaussianSum {
    pub fn new(terms: Vec<AnalyticGaussian>) -> Result<Self> {
        for t in &terms {
            t.validate()?;
        }
        Ok(Self { terms })
    }

    pub fn value(&self, x: [f64; 4]) -> Complex64 {
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    pub fn act(&self, g: &AffineElement) -> GaussianSum {
        GaussianSum {
            terms: self.terms.iter().map(|t| t.act(g)).collect(),
        }
    }

    pub fn spectrum(&self, k: [f64; 4]) -> Option<Complex64> {
        self.terms.iter().map(|t| t.spectrum(k)).sum()
    }

    pub fn has_spectrum(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.polynomial_prefactor != Prefactor::Radius)
    }

    pub fn scale(&self, c: Complex64) -> GaussianSum {
        GaussianSum {
            terms: self
                .terms
                .iter()
                .map(|t| t.with_amplitude(t.amplitude * c))
                .collect(),
        }
    }

    pub fn conj(&self) -> GaussianSum {
        GaussianSum {
            terms: self
                .terms
                .iter()
                .map(|t| AnalyticGaussian {
                    phase: t.phase.map(|v| -v),
                    amplitude: t.amplitude.conj(),
                    ..*t
                })
                .collect(),
        }
    }

    pub fn sample(&self, lattice: Lattice4) -> SampledField {
        SampledField::from_fn(lattice, |x| self.value(x))
    }

    /// The radial wavelet with spectrum `‖k‖² exp(-w²‖k‖²/2)`, which in
    /// position space is `(4/w⁶ - r²/w⁸) exp(-r²/(2w²))`.
    pub fn mexican_hat(width: f64) -> Result<Self> {
        let base = AnalyticGaussian::new([0.0; 4], width)?;
        Self::new(vec![
            base.with_amplitude(Complex64::new(4.0 / width.powi(6), 0.0)),
            base.with_prefactor(Prefactor::RadiusSquared)
                .with_amplitude(Complex64::new(-1.0 / width.powi(8), 0.0)),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_norms() {
        let g = AnalyticGaussian::new([0.0; 4], 1.0).unwrap();
        assert!((g.norm_sqr() - PI * PI).abs() < 1e-14);
        let r2 = g.with_prefactor(Prefactor::RadiusSquared);
        assert!((r2.norm_sqr() - 6.0 * PI * PI).abs() < 1e-12);
        assert!(AnalyticGaussian::new([0.0; 4], 0.0).is_err());
    }

    #[test]
    fn action_matches_pointwise_definition() {
        let f = AnalyticGaussian::new([0.2, -0.1, 0.4, 0.0], 0.8)
            .unwrap()
            .with_prefactor(Prefactor::Radius)
            .with_phase([1.0, 0.5, -0.3, 0.2]);
        let g = AffineElement::new(
            Quaternion::from_components(0.3, 0.1, -0.2, 0.5),
            Quaternion::from_components(0.9, -0.4, 0.3, 0.6),
        )
        .unwrap();
        let moved = f.act(&g);
        let det = g.a.det();
        for x in [[0.1, 0.2, 0.3, 0.4], [-1.0, 0.5, 0.0, 2.0]] {
            let y = g.inverse_act_vec4(x).unwrap();
            let want = f.value(y) / det;
            assert!((moved.value(x) - want).norm() < 1e-13);
        }
        assert!((moved.norm_sqr() - f.norm_sqr()).abs() < 1e-12 * f.norm_sqr());
    }
}
