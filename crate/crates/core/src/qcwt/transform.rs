use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{apply_qrep, qinner, qscale_right, QuaternionField};
use crate::cwt::spectral::{correlate, synthesize, CorrelationTerm, SynthesisTerm};
use crate::cwt::table::{read_records, write_records};
use crate::cwt::{fourier_energy, Engine, EnergyTerm, Wavelet};
use crate::error::{Error, Result};
use crate::field::spectrum::{Conjugated, Scaled};
use crate::field::{Domain, SampledField, SharedSpectrum};
use crate::par::ordered_vec_sum;
use crate::quadrature::{GroupQuadrature, HStarSpec};
use crate::quaternion::Quaternion;

/// A quaternionic mother wavelet rescaled to `‖C η‖² = 1`.
#[derive(Clone, Debug)]
pub struct QWavelet {
    pub eta1: Wavelet,
    pub eta2: Wavelet,
    /// Factor applied to the input to reach unit `‖C η‖²`.
    pub normalization: f64,
    pub fingerprint: String,
}

impl QWavelet {
    /// Both components must pass the complex admissibility test; one of them
    /// may vanish.
    pub fn new(eta1: Wavelet, eta2: Wavelet) -> Result<Self> {
        eta1.field.lattice.ensure_matches(&eta2.field.lattice)?;
        for (w, name) in [(&eta1, "eta1"), (&eta2, "eta2")] {
            if !w.report.admissible {
                return Err(Error::InadmissibleWavelet(format!("component {name} is not admissible")));
            }
        }
        let c = eta1.report.c_eta + eta2.report.c_eta;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InadmissibleWavelet(format!(
                "‖Cη‖² must be finite and positive, found {c}"
            )));
        }
        let normalization = c.sqrt().recip();
        let s = Complex64::new(normalization, 0.0);
        let (eta1, eta2) = (eta1.scaled(s)?, eta2.scaled(s)?);
        let mut h = Sha256::new();
        h.update(eta1.fingerprint.as_bytes());
        h.update(eta2.fingerprint.as_bytes());
        let fingerprint = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Ok(Self {
            eta1,
            eta2,
            normalization,
            fingerprint,
        })
    }

    /// `‖C η‖²` after normalization.
    pub fn c_eta(&self) -> f64 {
        self.eta1.report.c_eta + self.eta2.report.c_eta
    }

    pub fn field(&self) -> QuaternionField {
        QuaternionField {
            f1: self.eta1.field.clone(),
            f2: self.eta2.field.clone(),
        }
    }

    fn conj_spectra(&self) -> (SharedSpectrum, SharedSpectrum) {
        (
            Arc::new(Conjugated(self.eta1.spectrum().clone())),
            Arc::new(Conjugated(self.eta2.spectrum().clone())),
        )
    }
}

/// Quaternion coefficients `⟪U(g_i) η | f⟫`, one per node.
#[derive(Clone, Debug, PartialEq)]
pub struct QCoefficientTable {
    pub quadrature: GroupQuadrature,
    pub values: Vec<Quaternion>,
    pub wavelet_fingerprint: String,
}

#[derive(Serialize, Deserialize)]
struct QValue {
    q: [f64; 4],
}

impl QCoefficientTable {
    pub fn check_consistent(&self) -> Result<()> {
        if self.values.len() != self.quadrature.len() {
            return Err(Error::QuadratureMismatch(format!(
                "{} values for {} nodes",
                self.values.len(),
                self.quadrature.len()
            )));
        }
        Ok(())
    }

    /// Records carry `q: [re a, im a, re b, im b]` for `[[a, -conj(b)], [b, conj(a)]]`.
    pub fn write_jsonl<W: Write>(&self, writer: W, config_hash: Option<&str>) -> Result<()> {
        self.check_consistent()?;
        write_records(writer, &self.quadrature, &self.wavelet_fingerprint, config_hash, |i| {
            let v = self.values[i];
            QValue {
                q: [v.z1.re, v.z1.im, v.z2.re, v.z2.im],
            }
        })
    }

    pub fn read_jsonl<R: BufRead>(reader: R, quadrature: GroupQuadrature) -> Result<Self> {
        let (header, values) = read_records::<QValue, _>(reader, &quadrature)?;
        Ok(Self {
            quadrature,
            values: values
                .into_iter()
                .map(|v| Quaternion::new(Complex64::new(v.q[0], v.q[1]), Complex64::new(v.q[2], v.q[3])))
                .collect(),
            wavelet_fingerprint: header.wavelet_fingerprint,
        })
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(Quaternion::norm).fold(0.0, f64::max)
    }
}

/// `⟪U(g) η | f⟫ = (S[η1; f1] + S[η2; f2], S[conj η1; f2] - S[conj η2; f1])`,
/// with `S[η; f]` the complex coefficient.
pub fn qwavelet_transform(
    wavelet: &QWavelet,
    f: &QuaternionField,
    quad: &GroupQuadrature,
    engine: Engine,
) -> Result<QCoefficientTable> {
    let lattice = wavelet.eta1.field.lattice;
    lattice.ensure_matches(&f.lattice())?;
    f.f1.ensure_position()?;
    f.f2.ensure_position()?;
    let values = match engine {
        Engine::Spectral => {
            let (f1, f2) = (f.f1.dft()?, f.f2.dft()?);
            let (c1, c2) = wavelet.conj_spectra();
            let minus_c2 = Scaled(c2, Complex64::new(-1.0, 0.0));
            let alpha = correlate(
                &[
                    CorrelationTerm {
                        spectrum: wavelet.eta1.spectrum().as_ref(),
                        fhat: &f1,
                    },
                    CorrelationTerm {
                        spectrum: wavelet.eta2.spectrum().as_ref(),
                        fhat: &f2,
                    },
                ],
                quad,
                &lattice,
            )?;
            let beta = correlate(
                &[
                    CorrelationTerm {
                        spectrum: c1.as_ref(),
                        fhat: &f2,
                    },
                    CorrelationTerm {
                        spectrum: &minus_c2,
                        fhat: &f1,
                    },
                ],
                quad,
                &lattice,
            )?;
            alpha.into_iter().zip(beta).map(|(a, b)| Quaternion::new(a, b)).collect()
        }
        Engine::Direct => {
            let eta = wavelet.field();
            (0..quad.len())
                .into_par_iter()
                .map(|i| qinner(&apply_qrep(&quad.element(i), &eta)?, f))
                .collect::<Result<_>>()?
        }
    };
    Ok(QCoefficientTable {
        quadrature: quad.clone(),
        values,
        wavelet_fingerprint: wavelet.fingerprint.clone(),
    })
}

/// `Σ_i w_i (U(g_i) η) q_i / ‖C η‖²`.
pub fn qreconstruct(wavelet: &QWavelet, table: &QCoefficientTable, engine: Engine) -> Result<QuaternionField> {
    if table.wavelet_fingerprint != wavelet.fingerprint {
        return Err(Error::WaveletMismatch);
    }
    table.check_consistent()?;
    let quad = &table.quadrature;
    let lattice = wavelet.eta1.field.lattice;
    let scale = Complex64::new(1.0 / wavelet.c_eta(), 0.0);
    match engine {
        Engine::Spectral => {
            let alpha: Vec<Complex64> = table.values.iter().map(|q| q.z1).collect();
            let beta: Vec<Complex64> = table.values.iter().map(|q| q.z2).collect();
            let (c1, c2) = wavelet.conj_spectra();
            let one = Complex64::new(1.0, 0.0);
            // (u1, u2)(α, β) = (u1 α - conj(u2) β, u2 α + conj(u1) β).
            let mut out = synthesize(
                &[&alpha, &beta],
                &[
                    vec![
                        SynthesisTerm {
                            table: 0,
                            spectrum: wavelet.eta1.spectrum().as_ref(),
                            coefficient: one,
                        },
                        SynthesisTerm {
                            table: 1,
                            spectrum: c2.as_ref(),
                            coefficient: -one,
                        },
                    ],
                    vec![
                        SynthesisTerm {
                            table: 0,
                            spectrum: wavelet.eta2.spectrum().as_ref(),
                            coefficient: one,
                        },
                        SynthesisTerm {
                            table: 1,
                            spectrum: c1.as_ref(),
                            coefficient: one,
                        },
                    ],
                ],
                quad,
                &lattice,
            )?;
            let f2 = out.pop().expect("two outputs").scale(scale);
            let f1 = out.pop().expect("two outputs").scale(scale);
            QuaternionField::new(f1, f2)
        }
        Engine::Direct => {
            let eta = wavelet.field();
            let n = lattice.len();
            let chunk = quad.len().div_ceil(8).max(1);
            let acc = ordered_vec_sum(quad.len(), 2 * n, chunk, |i, acc| {
                let q = table.values[i];
                if q == Quaternion::ZERO {
                    return;
                }
                let moved = apply_qrep(&quad.element(i), &eta).expect("wavelet is in the position domain");
                let term = qscale_right(&moved, &(q.scale(quad.weight(i))));
                for (a, v) in acc[..n].iter_mut().zip(&term.f1.values) {
                    *a += v;
                }
                for (a, v) in acc[n..].iter_mut().zip(&term.f2.values) {
                    *a += v;
                }
            });
            QuaternionField::new(
                SampledField::new(lattice, acc[..n].to_vec(), Domain::Position)?.scale(scale),
                SampledField::new(lattice, acc[n..].to_vec(), Domain::Position)?.scale(scale),
            )
        }
    }
}

/// `∫ |⟪U(b, a) η | f⟫|² dμ_ℓ` through the Fourier reduction, where
/// `|q|² = |α|² + |β|²`.
pub fn q_energy(wavelet: &QWavelet, f: &QuaternionField, hstar: &HStarSpec) -> Result<f64> {
    let (f1, f2) = (f.f1.dft()?, f.f2.dft()?);
    let (c1, c2) = wavelet.conj_spectra();
    let minus_c2 = Scaled(c2, Complex64::new(-1.0, 0.0));
    let alpha = fourier_energy(
        &[
            EnergyTerm {
                spectrum: wavelet.eta1.spectrum().as_ref(),
                fhat: &f1,
            },
            EnergyTerm {
                spectrum: wavelet.eta2.spectrum().as_ref(),
                fhat: &f2,
            },
        ],
        hstar,
    )?;
    let beta = fourier_energy(
        &[
            EnergyTerm {
                spectrum: c1.as_ref(),
                fhat: &f2,
            },
            EnergyTerm {
                spectrum: &minus_c2,
                fhat: &f1,
            },
        ],
        hstar,
    )?;
    Ok(alpha + beta)
}

/// `q_energy / (‖C η‖² ‖f‖²)`, equal to 1 when the overlap quaternion is
/// `‖C η‖² σ0`.
pub fn q_energy_ratio(wavelet: &QWavelet, f: &QuaternionField, hstar: &HStarSpec) -> Result<f64> {
    Ok(q_energy(wavelet, f, hstar)? / (wavelet.c_eta() * f.norm_sqr()))
}

/// Largest coefficient modulus; nonzero for every nonzero `f` when the
/// representation is irreducible.
pub fn cyclicity_witness(wavelet: &QWavelet, f: &QuaternionField, quad: &GroupQuadrature) -> Result<f64> {
    Ok(qwavelet_transform(wavelet, f, quad, Engine::Spectral)?.max_modulus())
}
