//! The affine wavelet transform on the real line, `ψ_{b,a}(x) = |a|^{-1/2} ψ((x - b)/a)`
//! with `dμ = db da/a²` over `a ≠ 0`.
//!
//! Every stage of the 4-D pipeline has a counterpart here, where quadrature
//! is cheap enough to converge tightly.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::fft::fft1_in_place;
use crate::par::ordered_vec_sum;

fn sqrt_tau() -> f64 {
    TAU.sqrt()
}

/// Uniform samples on `origin + n·spacing`, `n = 0..len`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signal1D {
    pub origin: f64,
    pub spacing: f64,
    pub values: Vec<Complex64>,
}

/// Samples of a unitary Fourier transform on `(j - ⌊N/2⌋)·dk`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum1D {
    pub origin: f64,
    pub spacing: f64,
    pub values: Vec<Complex64>,
    pub position_origin: f64,
}

fn check_grid(spacing: f64, len: usize) -> Result<()> {
    if !(spacing > 0.0 && spacing.is_finite()) || len < 2 {
        return Err(Error::LatticeMismatch(format!(
            "1-D lattice needs a positive spacing and at least 2 nodes, got {spacing} × {len}"
        )));
    }
    Ok(())
}

impl Signal1D {
    pub fn new(origin: f64, spacing: f64, values: Vec<Complex64>) -> Result<Self> {
        check_grid(spacing, values.len())?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        Ok(Self {
            origin,
            spacing,
            values,
        })
    }

    /// `n` nodes centered on 0.
    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, spacing: f64, f: F) -> Result<Self> {
        check_grid(spacing, n)?;
        let origin = -((n - 1) as f64) * spacing / 2.0;
        Self::new(origin, spacing, (0..n).map(|i| f(origin + i as f64 * spacing)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, n: usize) -> f64 {
        self.origin + n as f64 * self.spacing
    }

    fn ensure_matches(&self, other: &Signal1D) -> Result<()> {
        let tol = 1e-9 * self.spacing;
        if self.len() != other.len()
            || (self.origin - other.origin).abs() > tol
            || (self.spacing - other.spacing).abs() > tol
        {
            return Err(Error::LatticeMismatch("1-D lattices differ".into()));
        }
        Ok(())
    }

    pub fn inner(&self, other: &Signal1D) -> Result<Complex64> {
        self.ensure_matches(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.spacing)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing
    }

    pub fn relative_error(&self, reference: &Signal1D) -> Result<f64> {
        self.ensure_matches(reference)?;
        let diff: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * self.spacing;
        Ok((diff / reference.norm_sqr()).sqrt())
    }

    /// Linear interpolation, zero outside the samples.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        interpolate_line(self.origin, self.spacing, &self.values, x)
    }

    /// `ŝ(ζ) = (2π)^{-1/2} Σ s(x) e^{-iζx} h`.
    pub fn dft(&self) -> Spectrum1D {
        let n = self.len();
        let dk = TAU / (n as f64 * self.spacing);
        let half = (n / 2) as f64;
        let origin = -half * dk;
        let mut v: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, s)| s * Complex64::from_polar(1.0, TAU * half * i as f64 / n as f64))
            .collect();
        fft1_in_place(&mut v, FftDirection::Forward);
        let scale = self.spacing / sqrt_tau();
        for (j, x) in v.iter_mut().enumerate() {
            let k = origin + j as f64 * dk;
            *x *= Complex64::from_polar(scale, -k * self.origin);
        }
        Spectrum1D {
            origin,
            spacing: dk,
            values: v,
            position_origin: self.origin,
        }
    }
}

impl Spectrum1D {
    pub fn point(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    pub fn interpolate(&self, k: f64) -> Complex64 {
        interpolate_line(self.origin, self.spacing, &self.values, k)
    }

    /// Inverse of [`Signal1D::dft`].
    pub fn idft(&self) -> Signal1D {
        let n = self.values.len();
        let h = TAU / (n as f64 * self.spacing);
        let half = (n / 2) as f64;
        let scale = self.spacing / sqrt_tau();
        let mut v: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(j, x)| x * Complex64::from_polar(scale, self.point(j) * self.position_origin))
            .collect();
        fft1_in_place(&mut v, FftDirection::Inverse);
        for (i, x) in v.iter_mut().enumerate() {
            *x *= Complex64::from_polar(1.0, -TAU * half * i as f64 / n as f64);
        }
        Signal1D {
            origin: self.position_origin,
            spacing: h,
            values: v,
        }
    }
}

fn interpolate_line(origin: f64, spacing: f64, values: &[Complex64], x: f64) -> Complex64 {
    let u = (x - origin) / spacing;
    if !(u >= 0.0) || u > (values.len() - 1) as f64 {
        return Complex64::default();
    }
    let i = (u.floor() as usize).min(values.len() - 2);
    let t = u - i as f64;
    values[i] * (1.0 - t) + values[i + 1] * t
}

/// Mother wavelet on the line.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape1D {
    /// `x e^{-x²/(2w²)}`, with spectrum `-i w³ ζ e^{-w²ζ²/2}`.
    GaussianDerivative { width: f64 },
    /// `e^{-x²/(2w²)}`, not admissible.
    Gaussian { width: f64 },
    /// Lattice samples, evaluated off the lattice by linear interpolation.
    Sampled { signal: Signal1D, spectrum: Spectrum1D },
}

impl Shape1D {
    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            Shape1D::GaussianDerivative { width } => {
                Complex64::new(x * (-x * x / (2.0 * width * width)).exp(), 0.0)
            }
            Shape1D::Gaussian { width } => Complex64::new((-x * x / (2.0 * width * width)).exp(), 0.0),
            Shape1D::Sampled { signal, .. } => signal.interpolate(x),
        }
    }

    pub fn spectrum(&self, k: f64) -> Complex64 {
        match self {
            Shape1D::GaussianDerivative { width } => {
                Complex64::new(0.0, -width.powi(3) * k * (-width * width * k * k / 2.0).exp())
            }
            Shape1D::Gaussian { width } => Complex64::new(width * (-width * width * k * k / 2.0).exp(), 0.0),
            Shape1D::Sampled { spectrum, .. } => spectrum.interpolate(k),
        }
    }
}

/// Outcome of the `c_ψ = 2π ∫ |ψ̂(ζ)|²/|ζ| dζ` estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility1D {
    pub c_psi: f64,
    pub admissible: bool,
    pub degenerate: bool,
    /// Sums over `|ζ| ≥ 4dk, 2dk, dk`.
    pub estimates: [f64; 3],
    pub growth_ratio: f64,
    pub predicted_change: f64,
}

/// Lattice estimate of `c_ψ` with the same exclusion-radius stability test
/// as the 4-D constant.
pub fn cwt1d_admissibility(psi: &Signal1D) -> Admissibility1D {
    let spec = psi.dft();
    let dk = spec.spacing;
    if spec.values.iter().all(|v| *v == Complex64::default()) {
        return Admissibility1D {
            c_psi: 0.0,
            admissible: true,
            degenerate: true,
            estimates: [0.0; 3],
            growth_ratio: 0.0,
            predicted_change: 0.0,
        };
    }
    let radii = [4.0 * dk, 2.0 * dk, dk];
    let mut estimates = [0.0; 3];
    for (j, v) in spec.values.iter().enumerate() {
        let k = spec.point(j).abs();
        if k < 0.5 * dk {
            continue;
        }
        let term = TAU * v.norm_sqr() / k * dk;
        for (e, r) in estimates.iter_mut().zip(radii) {
            if k >= r * (1.0 - 1e-9) {
                *e += term;
            }
        }
    }
    let first = estimates[1] - estimates[0];
    let second = estimates[2] - estimates[1];
    let (growth_ratio, predicted_change) = if second == 0.0 {
        (0.0, 0.0)
    } else if first == 0.0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let r = second / first;
        (r, second * r / estimates[2])
    };
    let admissible = growth_ratio < 1.0 && predicted_change < 0.05 && estimates[2] > 0.0;
    Admissibility1D {
        c_psi: if admissible { estimates[2] } else { f64::INFINITY },
        admissible,
        degenerate: false,
        estimates,
        growth_ratio,
        predicted_change,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Wavelet1D {
    pub shape: Shape1D,
    pub samples: Signal1D,
    pub report: Admissibility1D,
}

impl Wavelet1D {
    pub fn new(shape: Shape1D, n: usize, spacing: f64) -> Result<Self> {
        let samples = Signal1D::from_fn(n, spacing, |x| shape.value(x))?;
        let report = cwt1d_admissibility(&samples);
        Ok(Self {
            shape,
            samples,
            report,
        })
    }

    pub fn from_samples(samples: Signal1D) -> Self {
        let report = cwt1d_admissibility(&samples);
        let spectrum = samples.dft();
        Self {
            shape: Shape1D::Sampled {
                signal: samples.clone(),
                spectrum,
            },
            samples,
            report,
        }
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.report.degenerate || !self.report.admissible {
            return Err(Error::InadmissibleWavelet(format!(
                "c_psi estimates {:?} do not settle",
                self.report.estimates
            )));
        }
        Ok(())
    }
}

/// Translations on every `stride`-th lattice node and scales at the
/// midpoints of `[a_min, a_max]` cells of width `da`, mirrored to `a < 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature1D {
    pub stride: usize,
    pub scales: Vec<f64>,
    pub scale_step: f64,
}

impl Quadrature1D {
    pub fn new(stride: usize, a_min: f64, a_max: f64, da: f64) -> Result<Self> {
        if stride == 0 || !(a_min >= 0.0 && a_max > a_min && da > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "bad 1-D quadrature: stride {stride}, a ∈ [{a_min}, {a_max}], da {da}"
            )));
        }
        let cells = ((a_max - a_min) / da).round().max(1.0) as usize;
        let step = (a_max - a_min) / cells as f64;
        let positive = (0..cells).map(|i| a_min + (i as f64 + 0.5) * step);
        let mut scales: Vec<f64> = positive.clone().map(|a| -a).rev().collect();
        scales.extend(positive);
        Ok(Self {
            stride,
            scales,
            scale_step: step,
        })
    }

    /// `db da / a²`.
    pub fn weight(&self, spacing: f64, a: f64) -> f64 {
        self.stride as f64 * spacing * self.scale_step / (a * a)
    }
}

/// How 1-D coefficients are evaluated.
pub use crate::cwt::Engine;

#[derive(Clone, Debug, PartialEq)]
pub struct Table1D {
    pub quadrature: Quadrature1D,
    /// Translation nodes, shared by every scale.
    pub b: Vec<f64>,
    /// Row-major over `(scale, translation)`.
    pub values: Vec<Complex64>,
    pub origin: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Table1D {
    /// `Σ w |S|²`.
    pub fn energy(&self) -> f64 {
        let nb = self.b.len();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.quadrature.weight(self.spacing, self.quadrature.scales[i / nb]) * v.norm_sqr())
            .sum()
    }
}

fn dilated(psi: &Shape1D, b: f64, a: f64, x: f64) -> Complex64 {
    psi.value((x - b) / a) / a.abs().sqrt()
}

/// `S(b, a) = ⟨ψ_{b,a} | s⟩` on the quadrature.
pub fn cwt1d(psi: &Wavelet1D, s: &Signal1D, quad: &Quadrature1D, engine: Engine) -> Result<Table1D> {
    psi.require_admissible()?;
    psi.samples.ensure_matches(s)?;
    let b_idx: Vec<usize> = (0..s.len()).step_by(quad.stride).collect();
    let b: Vec<f64> = b_idx.iter().map(|&n| s.point(n)).collect();
    let rows: Vec<Vec<Complex64>> = match engine {
        Engine::Spectral => {
            let sh = s.dft();
            quad.scales
                .par_iter()
                .map(|&a| {
                    // S(x_n, a) = √(2π) idft(conj(√|a| ψ̂(aζ)) ŝ(ζ)).
                    let g: Vec<Complex64> = sh
                        .values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| (psi.shape.spectrum(a * sh.point(j)) * a.abs().sqrt()).conj() * v)
                        .collect();
                    let corr = Spectrum1D {
                        values: g,
                        ..sh.clone()
                    }
                    .idft();
                    b_idx.iter().map(|&n| corr.values[n] * sqrt_tau()).collect()
                })
                .collect()
        }
        Engine::Direct => quad
            .scales
            .par_iter()
            .map(|&a| {
                b.iter()
                    .map(|&bb| {
                        let sum: Complex64 = s
                            .values
                            .iter()
                            .enumerate()
                            .map(|(n, v)| dilated(&psi.shape, bb, a, s.point(n)).conj() * v)
                            .sum();
                        sum * s.spacing
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(Table1D {
        quadrature: quad.clone(),
        b,
        values: rows.concat(),
        origin: s.origin,
        spacing: s.spacing,
        len: s.len(),
    })
}

/// `(1/c_ψ) Σ w S(b, a) ψ_{b,a}`.
pub fn cwt1d_reconstruct(psi: &Wavelet1D, table: &Table1D, engine: Engine) -> Result<Signal1D> {
    psi.require_admissible()?;
    let c = psi.report.c_psi;
    let quad = &table.quadrature;
    let nb = table.b.len();
    if table.values.len() != nb * quad.scales.len() {
        return Err(Error::QuadratureMismatch("1-D table size does not match its quadrature".into()));
    }
    let n = table.len;
    let h = table.spacing;
    let grid = Signal1D {
        origin: table.origin,
        spacing: h,
        values: vec![Complex64::default(); n],
    };
    let chunk = quad.scales.len().div_ceil(8).max(1);
    match engine {
        Engine::Spectral => {
            let klat = grid.dft();
            let acc = ordered_vec_sum(quad.scales.len(), n, chunk, |ai, acc: &mut [Complex64]| {
                let a = quad.scales[ai];
                let mut z = grid.clone();
                for (m, v) in table.values[ai * nb..(ai + 1) * nb].iter().enumerate() {
                    z.values[m * quad.stride] = *v;
                }
                let zh = z.dft();
                // Σ_b db S(b) e^{-iζb} = √(2π) (db/h) ẑ(ζ).
                let w = quad.weight(h, a) * sqrt_tau() / h;
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot += psi.shape.spectrum(a * klat.point(j)) * a.abs().sqrt() * zh.values[j] * w;
                }
            });
            let mut out = Spectrum1D { values: acc, ..klat }.idft();
            for v in &mut out.values {
                *v /= c;
            }
            Ok(out)
        }
        Engine::Direct => {
            let acc = ordered_vec_sum(quad.scales.len(), n, chunk, |ai, acc: &mut [Complex64]| {
                let a = quad.scales[ai];
                let w = quad.weight(h, a);
                for (m, &bb) in table.b.iter().enumerate() {
                    let coef = table.values[ai * nb + m] * w;
                    for (i, slot) in acc.iter_mut().enumerate() {
                        *slot += coef * dilated(&psi.shape, bb, a, grid.point(i));
                    }
                }
            });
            Ok(Signal1D {
                values: acc.into_iter().map(|v| v / c).collect(),
                ..grid
            })
        }
    }
}

/// `Σ w |S|² / (c_ψ ‖s‖²)`.
pub fn cwt1d_energy_ratio(psi: &Wavelet1D, table: &Table1D, s: &Signal1D) -> f64 {
    table.energy() / (psi.report.c_psi * s.norm_sqr())
}
