use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::Result;
use crate::field::{LatticeSpectrum, SampledField, Spectrum};
use crate::quadrature::HStarSpec;

use super::spectral::conj_product;

/// Largest predicted relative change of the constant under one more halving
/// of the zero-bin exclusion radius for which it counts as converged.
pub const STABILITY_TOLERANCE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    /// `(2π)⁴ Σ |η̂(k)|²/‖k‖⁴ dk⁴` over the nonzero bins, or `+∞` when the
    /// sum does not settle as the exclusion radius shrinks.
    pub c_eta: f64,
    /// Relative standard deviation of `I(k) = ∫ |η̂(ā k)|² dμ_{H*}(a)` over
    /// the probe wavevectors.
    pub profile_rel_std: f64,
    pub admissible: bool,
    /// The wavelet is identically zero.
    pub degenerate: bool,
    /// Exclusion radii `4dk, 2dk, dk`.
    pub exclusion_radii: [f64; 3],
    /// Sums over `‖k‖ ≥ radius` for each exclusion radius.
    pub estimates: [f64; 3],
    /// Ratio of the last two increments of the estimates; below 1 when the
    /// sum converges towards the origin.
    pub growth_ratio: f64,
    /// Extrapolated relative change from one further halving.
    pub predicted_change: f64,
    pub probe_values: Vec<f64>,
}

/// Admissibility of a position-domain wavelet from its lattice spectrum.
pub fn admissibility(eta: &SampledField) -> Result<AdmissibilityReport> {
    admissibility_with_spectrum(eta, None)
}

/// As [`admissibility`], probing `I(k)` with `spectrum` instead of the
/// interpolated lattice spectrum.
pub fn admissibility_with_spectrum(
    eta: &SampledField,
    spectrum: Option<&dyn Spectrum>,
) -> Result<AdmissibilityReport> {
    let fhat = eta.dft()?;
    let dk = fhat.lattice.spacing;
    let radii = [4.0 * dk, 2.0 * dk, dk];
    if fhat.max_abs() == 0.0 {
        return Ok(AdmissibilityReport {
            c_eta: 0.0,
            profile_rel_std: 0.0,
            admissible: true,
            degenerate: true,
            exclusion_radii: radii,
            estimates: [0.0; 3],
            growth_ratio: 0.0,
            predicted_change: 0.0,
            probe_values: Vec::new(),
        });
    }
    let mut estimates = [0.0; 3];
    let cell = fhat.lattice.cell_volume() * TAU.powi(4);
    for (i, v) in fhat.values.iter().enumerate() {
        let k2: f64 = fhat.coordinates(i).iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let term = v.norm_sqr() / (k2 * k2) * cell;
        let r = k2.sqrt();
        for (e, rho) in estimates.iter_mut().zip(radii) {
            if r >= rho * (1.0 - 1e-9) {
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
    let converged = growth_ratio < 1.0 && predicted_change < STABILITY_TOLERANCE && estimates[2] > 0.0;

    let lattice_spectrum;
    let probe_spectrum: &dyn Spectrum = match spectrum {
        Some(s) => s,
        None => {
            lattice_spectrum = LatticeSpectrum::new(fhat.clone())?;
            &lattice_spectrum
        }
    };
    let band = (fhat.lattice.counts[0] / 2) as f64 * dk;
    let probe_values = profile_probes(probe_spectrum, band, &probe_hstar_default())?;
    let mean = probe_values.iter().sum::<f64>() / probe_values.len() as f64;
    let var = probe_values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / probe_values.len() as f64;
    let profile_rel_std = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };

    Ok(AdmissibilityReport {
        c_eta: if converged { estimates[2] } else { f64::INFINITY },
        profile_rel_std,
        admissible: converged,
        degenerate: false,
        exclusion_radii: radii,
        estimates,
        growth_ratio,
        predicted_change,
        probe_values,
    })
}

pub fn probe_hstar_default() -> HStarSpec {
    HStarSpec {
        ln_rho_min: -8.0,
        ln_rho_max: 4.0,
        rho_count: 96,
        t_count: 4,
        theta_count: 8,
    }
}

const PROBE_DIRECTIONS: [[f64; 4]; 6] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 1.0, 0.0, 0.0],
    [0.0, 1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0],
    [0.3, -0.5, 0.7, 0.4],
];

/// `I(k)` at three magnitudes `0.2, 0.35, 0.5` of `band` along six fixed
/// directions.
pub fn profile_probes(spectrum: &dyn Spectrum, band: f64, hstar: &HStarSpec) -> Result<Vec<f64>> {
    let nodes = hstar.nodes()?;
    let mut out = Vec::with_capacity(18);
    for frac in [0.2, 0.35, 0.5] {
        for d in PROBE_DIRECTIONS {
            let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            let k = d.map(|x| x / n * frac * band);
            let value: f64 = nodes
                .iter()
                .map(|(a, w)| w * spectrum.at(conj_product(a, k)).norm_sqr())
                .sum();
            out.push(value);
        }
    }
    Ok(out)
}
