//! FFT evaluation of wavelet coefficients and of their synthesis.
//!
//! For a fixed dilation `a`, the coefficients over all translations are a
//! correlation, `S(b, a) = ∫ e^{ik·b} conj(|a|² η̂(āk)) f̂(k) dk`, so one
//! inverse FFT yields `S` at every lattice node. Translation grids must be a
//! strided, possibly offset, sub-grid of the field lattice.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Domain, Lattice4, SampledField, Spectrum};
use crate::par::ordered_vec_sum;
use crate::quadrature::GroupQuadrature;
use crate::quaternion::Quaternion;

/// Placement of a translation grid on a field lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BLayout {
    pub first: [usize; 4],
    pub stride: usize,
    pub offset: [f64; 4],
    pub count: usize,
}

impl BLayout {
    pub fn new(quad: &GroupQuadrature, lattice: &Lattice4) -> Result<Self> {
        let h = lattice.spacing;
        let count = quad.b_count();
        let stride = match quad.b_spacing() {
            None => {
                return Err(Error::QuadratureMismatch(
                    "translation axis is not uniform".into(),
                ))
            }
            Some(s) if s.is_infinite() => 1,
            Some(s) => {
                let ratio = s / h;
                let r = ratio.round();
                if r < 1.0 || (ratio - r).abs() > 1e-9 * ratio.max(1.0) {
                    return Err(Error::QuadratureMismatch(format!(
                        "translation step {s} is not a multiple of the lattice spacing {h}"
                    )));
                }
                r as usize
            }
        };
        let mut first = [0usize; 4];
        let mut offset = [0.0; 4];
        for j in 0..4 {
            let u = (quad.b_axis[0] - lattice.origin[j]) / h;
            let n0 = (u + 1e-9).floor();
            if n0 < 0.0 || n0 as usize + stride * (count - 1) >= lattice.counts[j] {
                return Err(Error::QuadratureMismatch(format!(
                    "translation grid leaves the lattice along axis {j}"
                )));
            }
            first[j] = n0 as usize;
            let d = quad.b_axis[0] - (lattice.origin[j] + n0 * h);
            offset[j] = if d.abs() < 1e-12 * h { 0.0 } else { d };
        }
        Ok(Self {
            first,
            stride,
            offset,
            count,
        })
    }

    fn lattice_index(&self, lattice: &Lattice4, b_index: usize) -> usize {
        let n = self.count;
        let idx = [b_index / (n * n * n), (b_index / (n * n)) % n, (b_index / n) % n, b_index % n];
        lattice.flat(std::array::from_fn(|j| self.first[j] + self.stride * idx[j]))
    }

    fn has_offset(&self) -> bool {
        self.offset.iter().any(|&d| d != 0.0)
    }
}

/// One correlation term `conj(spectrum(ā k)) · fhat(k)`.
pub struct CorrelationTerm<'a> {
    pub spectrum: &'a dyn Spectrum,
    pub fhat: &'a SampledField,
}

fn k_dot(k: [f64; 4], d: [f64; 4]) -> f64 {
    k.iter().zip(&d).map(|(a, b)| a * b).sum()
}

/// The wavevector `ā k`.
#[inline]
pub fn conj_product(a: &Quaternion, k: [f64; 4]) -> [f64; 4] {
    (a.conj() * Quaternion::from_vec4(k)).vec4()
}

/// `|a|² η̂(ā k)`, the spectrum of the dilated wavelet at zero translation.
#[inline]
pub fn dilated_spectrum(spectrum: &dyn Spectrum, a: &Quaternion, k: [f64; 4]) -> Complex64 {
    spectrum.at(conj_product(a, k)) * a.det()
}

/// Coefficients `Σ_j ⟨η_j,(b,a)|f_j⟩` at every node, ordered as the quadrature.
pub fn correlate(
    terms: &[CorrelationTerm<'_>],
    quad: &GroupQuadrature,
    lattice: &Lattice4,
) -> Result<Vec<Complex64>> {
    let layout = BLayout::new(quad, lattice)?;
    let klat = terms
        .first()
        .map(|t| t.fhat.lattice)
        .ok_or_else(|| Error::InvalidSpec("no correlation terms".into()))?;
    let per_a = quad.b_nodes_per_a();
    let phases: Option<Vec<Complex64>> = layout.has_offset().then(|| {
        (0..klat.len())
            .map(|i| Complex64::from_polar(1.0, k_dot(klat.point_flat(i), layout.offset)))
            .collect()
    });
    let rows: Vec<Vec<Complex64>> = quad
        .a_nodes
        .par_iter()
        .map(|node| -> Result<Vec<Complex64>> {
            let mut g = vec![Complex64::default(); klat.len()];
            for (i, gi) in g.iter_mut().enumerate() {
                let k = klat.point_flat(i);
                let mut acc = Complex64::default();
                for t in terms {
                    let f = t.fhat.values[i];
                    if f != Complex64::default() {
                        acc += dilated_spectrum(t.spectrum, &node.a, k).conj() * f;
                    }
                }
                *gi = acc;
            }
            if let Some(p) = &phases {
                for (gi, pi) in g.iter_mut().zip(p) {
                    *gi *= pi;
                }
            }
            let position_origin = match terms[0].fhat.domain {
                Domain::Frequency { position_origin } => position_origin,
                Domain::Position => lattice.origin,
            };
            let corr = SampledField {
                lattice: klat,
                values: g,
                domain: Domain::Frequency { position_origin },
            }
            .idft()?;
            Ok((0..per_a)
                .map(|b| corr.values[layout.lattice_index(lattice, b)] * (TAU * TAU))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.concat())
}

/// One synthesis term: `coefficient · spectrum` multiplying the transformed
/// coefficient table `table`.
pub struct SynthesisTerm<'a> {
    pub table: usize,
    pub spectrum: &'a dyn Spectrum,
    pub coefficient: Complex64,
}

/// `Σ_i w_i Σ_terms coefficient · values_table[i] · η_(b_i, a_i)` for each
/// output, evaluated in the Fourier domain.
pub fn synthesize(
    tables: &[&[Complex64]],
    outputs: &[Vec<SynthesisTerm<'_>>],
    quad: &GroupQuadrature,
    lattice: &Lattice4,
) -> Result<Vec<SampledField>> {
    let layout = BLayout::new(quad, lattice)?;
    for t in tables {
        if t.len() != quad.len() {
            return Err(Error::QuadratureMismatch(format!(
                "table has {} values for {} nodes",
                t.len(),
                quad.len()
            )));
        }
    }
    let klat = lattice.reciprocal()?;
    let n = klat.len();
    let per_a = quad.b_nodes_per_a();
    // Σ_b Δb⁴ S(b) e^{-ik·b} = e^{-ik·δ} (2π)² (Δb⁴/h⁴) dft(Z)(k) for the
    // table Z scattered onto its lattice nodes.
    let scale = TAU * TAU * quad.b_cell / lattice.cell_volume();
    let phases: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(scale, -k_dot(klat.point_flat(i), layout.offset)))
        .collect();
    let chunk = quad.a_nodes.len().div_ceil(8);
    let acc = ordered_vec_sum(quad.a_nodes.len(), n * outputs.len(), chunk, |ai, acc| {
        let node = &quad.a_nodes[ai];
        let spectra: Vec<SampledField> = tables
            .iter()
            .map(|t| {
                let mut z = SampledField::zeros(*lattice, Domain::Position);
                for b in 0..per_a {
                    z.values[layout.lattice_index(lattice, b)] = t[ai * per_a + b];
                }
                z.dft().expect("position field on an isotropic lattice")
            })
            .collect();
        for (o, terms) in outputs.iter().enumerate() {
            let out = &mut acc[o * n..(o + 1) * n];
            for (i, slot) in out.iter_mut().enumerate() {
                let k = klat.point_flat(i);
                let mut v = Complex64::default();
                for t in terms {
                    let z = spectra[t.table].values[i];
                    if z != Complex64::default() {
                        v += t.coefficient * dilated_spectrum(t.spectrum, &node.a, k) * z;
                    }
                }
                *slot += v * phases[i] * node.weight;
            }
        }
    });
    (0..outputs.len())
        .map(|o| {
            SampledField {
                lattice: klat,
                values: acc[o * n..(o + 1) * n].to_vec(),
                domain: Domain::Frequency {
                    position_origin: lattice.origin,
                },
            }
            .idft()
        })
        .collect()
}
