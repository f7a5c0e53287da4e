use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::transform::{qwavelet_transform, QWavelet};
use super::{apply_qrep, qinner, QuaternionField};
use crate::cwt::Engine;
use crate::error::Result;
use crate::group::AffineElement;
use crate::quadrature::{DilationNode, GroupQuadrature};
use crate::quaternion::{Quaternion, RotationDilation};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QKernelValue {
    pub value: Quaternion,
}

/// The coherent state `U(g) η`, moved analytically when both components
/// have closed forms and by interpolation otherwise.
fn coherent_state(wavelet: &QWavelet, g: &AffineElement) -> Result<QuaternionField> {
    let lattice = wavelet.eta1.field.lattice;
    match (&wavelet.eta1.analytic, &wavelet.eta2.analytic) {
        (Some(a1), Some(a2)) => Ok(QuaternionField {
            f1: a1.act(g).sample(lattice),
            f2: a2.act(g).sample(lattice),
        }),
        _ => apply_qrep(g, &wavelet.field()),
    }
}

/// `K(g; g') = ⟪η_g | η_g'⟫`.
pub fn reproducing_kernel(
    wavelet: &QWavelet,
    g: &AffineElement,
    gp: &AffineElement,
) -> Result<QKernelValue> {
    let a = coherent_state(wavelet, g)?;
    let b = coherent_state(wavelet, gp)?;
    Ok(QKernelValue {
        value: qinner(&a, &b)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelMcReport {
    pub samples: usize,
    pub estimate: Quaternion,
    pub exact: Quaternion,
    /// `|estimate - exact| / |exact|` in the quaternion norm.
    pub relative_error: f64,
}

/// Dilations drawn uniformly in the chart `a = e^s (√(1-t) e^{iθ1}, √t e^{iθ2})`
/// with `s ∈ [ln_rho_min, ln_rho_max]`; each carries `1/samples` of the
/// chart's `H*` volume.
fn sampled_dilations(samples: usize, ln_rho: (f64, f64), seed: u64) -> Vec<DilationNode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let volume = 0.5 * (ln_rho.1 - ln_rho.0) * TAU * TAU;
    let w = volume / samples as f64;
    (0..samples)
        .map(|_| {
            let rho = rng.gen_range(ln_rho.0..ln_rho.1).exp();
            let t: f64 = rng.gen();
            let (t1, t2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let a = Quaternion::new(
                Complex64::from_polar(rho * (1.0 - t).sqrt(), t1),
                Complex64::from_polar(rho * t.sqrt(), t2),
            );
            let det = a.det();
            DilationNode {
                a,
                decomp: RotationDilation::decompose(&a).expect("nonzero radius"),
                weight: w / (det * det),
                right_weight: w,
            }
        })
        .collect()
}

/// Monte Carlo estimate of `∫ K(g; g'') K(g''; g') dμ_ℓ(g'')`: dilations are
/// sampled at random, translations cover every lattice node.
pub fn kernel_reproduction_mc(
    wavelet: &QWavelet,
    g: &AffineElement,
    gp: &AffineElement,
    samples: usize,
    ln_rho: (f64, f64),
    seed: u64,
) -> Result<KernelMcReport> {
    let lattice = wavelet.eta1.field.lattice;
    let b_axis = lattice.axis(0);
    let quad = GroupQuadrature::from_parts(
        b_axis,
        lattice.cell_volume(),
        sampled_dilations(samples, ln_rho, seed),
    )?;
    let left = qwavelet_transform(wavelet, &coherent_state(wavelet, g)?, &quad, Engine::Spectral)?;
    let right = qwavelet_transform(wavelet, &coherent_state(wavelet, gp)?, &quad, Engine::Spectral)?;
    // K(g; g_i) = K(g_i; g)† = left_i†.
    let mut estimate = Quaternion::ZERO;
    for i in 0..quad.len() {
        estimate += (left.values[i].conj() * right.values[i]).scale(quad.weight(i));
    }
    let exact = reproducing_kernel(wavelet, g, gp)?.value;
    Ok(KernelMcReport {
        samples,
        estimate,
        exact,
        relative_error: (estimate - exact).norm() / exact.norm(),
    })
}
