//! Continuous wavelet transform on `L²(R⁴)` for the representation
//! `(U(b, a) f)(x) = |a|⁻² f(a⁻¹(x - b))`.
//!
//! A function on `H` is the same thing as a function on R⁴ once quaternions
//! are laid out as `(x0, x3, x2, x1)`, so this module also serves as the
//! quaternion-domain transform.

pub mod admissibility;
pub mod spectral;
pub mod table;
mod wavelet;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use admissibility::{admissibility, admissibility_with_spectrum, profile_probes, AdmissibilityReport};
pub use table::CoefficientTable;
pub use wavelet::Wavelet;

use crate::error::{Error, Result};
use crate::field::{affine_pullback, Domain, SampledField, Spectrum};
use crate::group::AffineElement;
use crate::par::{ordered_sum, ordered_vec_sum};
use crate::quadrature::{GroupQuadrature, HStarSpec};
use spectral::{conj_product, correlate, synthesize, CorrelationTerm, SynthesisTerm};

/// `|a|⁻² f(a⁻¹(x - b))` on the lattice of `f`.
pub fn apply_rep(g: &AffineElement, f: &SampledField) -> Result<SampledField> {
    let pulled = affine_pullback(g, f)?;
    Ok(pulled.scale(Complex64::new(1.0 / g.a.det(), 0.0)))
}

/// Multiplies a spectrum by `(2π/‖k‖)²`; the `k = 0` bin is set to zero.
pub fn duflo_moore(fhat: &SampledField) -> Result<SampledField> {
    if fhat.domain == Domain::Position {
        return Err(Error::DomainMismatch {
            expected: "frequency",
            found: "position",
        });
    }
    let mut out = fhat.clone();
    for (i, v) in out.values.iter_mut().enumerate() {
        let k2: f64 = fhat.coordinates(i).iter().map(|x| x * x).sum();
        *v = if k2 > 0.0 { *v * (TAU * TAU / k2) } else { Complex64::default() };
    }
    Ok(out)
}

/// How coefficients are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// One inverse FFT per dilation node; requires the translation grid to be
    /// a strided sub-grid of the field lattice.
    #[default]
    Spectral,
    /// Literal pullback and lattice inner product per node.
    Direct,
}

/// `values[i] = ⟨U(g_i) η | f⟩`.
pub fn wavelet_transform(
    wavelet: &Wavelet,
    f: &SampledField,
    quad: &GroupQuadrature,
    engine: Engine,
) -> Result<CoefficientTable> {
    wavelet.require_admissible()?;
    f.ensure_position()?;
    wavelet.field.lattice.ensure_matches(&f.lattice)?;
    let values = match engine {
        Engine::Spectral => {
            let fhat = f.dft()?;
            correlate(
                &[CorrelationTerm {
                    spectrum: wavelet.spectrum().as_ref(),
                    fhat: &fhat,
                }],
                quad,
                &f.lattice,
            )?
        }
        Engine::Direct => (0..quad.len())
            .into_par_iter()
            .map(|i| apply_rep(&quad.element(i), &wavelet.field)?.inner(f))
            .collect::<Result<_>>()?,
    };
    Ok(CoefficientTable {
        quadrature: quad.clone(),
        values,
        wavelet_fingerprint: wavelet.fingerprint.clone(),
    })
}

/// `(1/c_η) Σ_i w_i S_i U(g_i) η`.
pub fn reconstruct(wavelet: &Wavelet, table: &CoefficientTable, engine: Engine) -> Result<SampledField> {
    let c = wavelet.report.c_eta;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InadmissibleWavelet(format!(
            "reconstruction needs a finite positive constant, found {c}"
        )));
    }
    if table.wavelet_fingerprint != wavelet.fingerprint {
        return Err(Error::WaveletMismatch);
    }
    table.check_consistent()?;
    let quad = &table.quadrature;
    let lattice = wavelet.field.lattice;
    let scale = Complex64::new(1.0 / c, 0.0);
    match engine {
        Engine::Spectral => {
            let mut out = synthesize(
                &[&table.values],
                &[vec![SynthesisTerm {
                    table: 0,
                    spectrum: wavelet.spectrum().as_ref(),
                    coefficient: Complex64::new(1.0, 0.0),
                }]],
                quad,
                &lattice,
            )?;
            Ok(out.remove(0).scale(scale))
        }
        Engine::Direct => {
            let chunk = quad.len().div_ceil(8).max(1);
            let acc = ordered_vec_sum(quad.len(), lattice.len(), chunk, |i, acc| {
                let v = table.values[i];
                if v == Complex64::default() {
                    return;
                }
                let moved = apply_rep(&quad.element(i), &wavelet.field)
                    .expect("wavelet lattice is in the position domain");
                let c = v * quad.weight(i);
                for (a, m) in acc.iter_mut().zip(&moved.values) {
                    *a += c * m;
                }
            });
            Ok(SampledField::new(lattice, acc, Domain::Position)?.scale(scale))
        }
    }
}

/// Default chart for Fourier-reduced energies.
pub fn energy_hstar_default() -> HStarSpec {
    HStarSpec {
        ln_rho_min: -5.3,
        ln_rho_max: 2.7,
        rho_count: 48,
        t_count: 2,
        theta_count: 2,
    }
}

/// One term of a Fourier-reduced energy: `conj(spectrum(ā k)) · fhat(k)`.
pub struct EnergyTerm<'a> {
    pub spectrum: &'a dyn Spectrum,
    pub fhat: &'a SampledField,
}

/// `∫ |Σ_j ⟨U(b,a) η_j | f_j⟩|² dμ_ℓ(b, a)` with the translation integral done
/// by Plancherel: `(2π)⁴ Σ_k dk⁴ Σ_a w_a |Σ_j conj(η̂_j(ā k)) f̂_j(k)|²` over
/// the `H*` chart. The `|a|⁴` from the dilated spectra combines with the left
/// Haar density `|a|⁻⁸` into the invariant measure of `H*`.
pub fn fourier_energy(terms: &[EnergyTerm<'_>], hstar: &HStarSpec) -> Result<f64> {
    let nodes = hstar.nodes()?;
    let klat = terms
        .first()
        .map(|t| t.fhat.lattice)
        .ok_or_else(|| Error::InvalidSpec("no energy terms".into()))?;
    for t in terms {
        t.fhat.lattice.ensure_matches(&klat)?;
    }
    let sum = ordered_sum(klat.len(), |i| {
        if terms.iter().all(|t| t.fhat.values[i] == Complex64::default()) {
            return 0.0;
        }
        let k = klat.point_flat(i);
        nodes
            .iter()
            .map(|(a, w)| {
                let s: Complex64 = terms
                    .iter()
                    .map(|t| t.spectrum.at(conj_product(a, k)).conj() * t.fhat.values[i])
                    .sum();
                w * s.norm_sqr()
            })
            .sum::<f64>()
    });
    Ok(TAU.powi(4) * klat.cell_volume() * sum)
}

/// `∫ |S(g)|² dμ_ℓ` via the Fourier-reduced path.
pub fn wavelet_energy(wavelet: &Wavelet, f: &SampledField, hstar: &HStarSpec) -> Result<f64> {
    wavelet.require_admissible()?;
    let fhat = f.dft()?;
    fourier_energy(
        &[EnergyTerm {
            spectrum: wavelet.spectrum().as_ref(),
            fhat: &fhat,
        }],
        hstar,
    )
}

/// `energy / (c_η ‖f‖²)`, equal to 1 by the orthogonality relation.
pub fn energy_ratio(wavelet: &Wavelet, f: &SampledField, hstar: &HStarSpec) -> Result<f64> {
    Ok(wavelet_energy(wavelet, f, hstar)? / (wavelet.report.c_eta * f.norm_sqr()))
}
