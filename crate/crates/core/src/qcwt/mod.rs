//! Wavelet transform on the right quaternionic Hilbert space `L²_H(H)`.
//!
//! A quaternion-valued function `x ↦ [[f1, -conj(f2)], [f2, conj(f1)]]` is
//! stored as the pair `(f1, f2)`; the representation acts on each component
//! as in [`crate::cwt`], and quaternion scalars multiply from the right.

mod kernel;
mod onb;
mod transform;

use num_complex::Complex64;

pub use kernel::{kernel_reproduction_mc, reproducing_kernel, KernelMcReport, QKernelValue};
pub use onb::{hermite_base, lift_onb, QuaternionicOnb};
pub use transform::{
    cyclicity_witness, q_energy, q_energy_ratio, qreconstruct, qwavelet_transform,
    QCoefficientTable, QWavelet,
};

use crate::cwt::{admissibility, apply_rep, duflo_moore};
use crate::error::{Error, Result};
use crate::field::{Domain, Lattice4, SampledField};
use crate::group::AffineElement;
use crate::quaternion::{Mat2, Quaternion};

#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionField {
    pub f1: SampledField,
    pub f2: SampledField,
}

impl QuaternionField {
    pub fn new(f1: SampledField, f2: SampledField) -> Result<Self> {
        f1.ensure_position()?;
        f2.ensure_position()?;
        f1.lattice.ensure_matches(&f2.lattice)?;
        Ok(Self { f1, f2 })
    }

    pub fn zeros(lattice: Lattice4) -> Self {
        Self {
            f1: SampledField::zeros(lattice, Domain::Position),
            f2: SampledField::zeros(lattice, Domain::Position),
        }
    }

    /// `(f, 0)`: the complex module embedded in the diagonal.
    pub fn from_complex(f: SampledField) -> Result<Self> {
        let zero = SampledField::zeros(f.lattice, Domain::Position);
        Self::new(f, zero)
    }

    pub fn lattice(&self) -> Lattice4 {
        self.f1.lattice
    }

    pub fn value(&self, flat: usize) -> Quaternion {
        Quaternion::new(self.f1.values[flat], self.f2.values[flat])
    }

    /// `‖f1‖² + ‖f2‖²`, the `σ0` coefficient of `⟪f|f⟫`.
    pub fn norm_sqr(&self) -> f64 {
        self.f1.norm_sqr() + self.f2.norm_sqr()
    }

    pub fn sub(&self, other: &QuaternionField) -> Result<QuaternionField> {
        Ok(Self {
            f1: self.f1.sub(&other.f1)?,
            f2: self.f2.sub(&other.f2)?,
        })
    }

    pub fn add(&self, other: &QuaternionField) -> Result<QuaternionField> {
        Ok(Self {
            f1: self.f1.add(&other.f1)?,
            f2: self.f2.add(&other.f2)?,
        })
    }

    /// Relative L² error of each component; `NaN` for a zero reference.
    pub fn componentwise_error(&self, reference: &QuaternionField) -> Result<[f64; 2]> {
        Ok([
            self.f1.relative_error(&reference.f1)?,
            self.f2.relative_error(&reference.f2)?,
        ])
    }
}

/// `Σ u·v·h⁴` without conjugation.
fn bilinear(u: &SampledField, v: &SampledField) -> Result<Complex64> {
    u.lattice.ensure_matches(&v.lattice)?;
    let s: Complex64 = u.values.iter().zip(&v.values).map(|(a, b)| a * b).sum();
    Ok(s * u.lattice.cell_volume())
}

/// The four entries of `∫ f(x)† f'(x) dx`, each from its own complex inner
/// product.
pub fn qinner_matrix(f: &QuaternionField, fp: &QuaternionField) -> Result<Mat2> {
    let d = f.f1.inner(&fp.f1)? + f.f2.inner(&fp.f2)?;
    let d_bar = fp.f1.inner(&f.f1)? + fp.f2.inner(&f.f2)?;
    // ⟨conj(u)|v⟩ = Σ u v.
    let lower = bilinear(&fp.f2, &f.f1)? - bilinear(&fp.f1, &f.f2)?;
    let upper = -bilinear(&fp.f2, &f.f1)?.conj() + bilinear(&fp.f1, &f.f2)?.conj();
    Ok([[d, upper], [lower, d_bar]])
}

/// `⟪f|f'⟫ = (⟨f1|f1'⟩ + ⟨f2|f2'⟩, ∫ f1 f2' - f2 f1')`.
pub fn qinner(f: &QuaternionField, fp: &QuaternionField) -> Result<Quaternion> {
    let m = qinner_matrix(f, fp)?;
    Ok(Quaternion::new(m[0][0], m[1][0]))
}

/// Pointwise `f(x) q`.
pub fn qscale_right(f: &QuaternionField, q: &Quaternion) -> QuaternionField {
    let (w1, w2) = (q.z1, q.z2);
    let f1 = f.f1.zip_with(&f.f2, |a, b| a * w1 - b.conj() * w2);
    let f2 = f.f2.zip_with(&f.f1, |b, a| b * w1 + a.conj() * w2);
    QuaternionField {
        f1: f1.expect("components share a lattice"),
        f2: f2.expect("components share a lattice"),
    }
}

/// The representation acting on each component.
pub fn apply_qrep(g: &AffineElement, f: &QuaternionField) -> Result<QuaternionField> {
    Ok(QuaternionField {
        f1: apply_rep(g, &f.f1)?,
        f2: apply_rep(g, &f.f2)?,
    })
}

fn require_component(f: &SampledField, name: &str) -> Result<()> {
    let r = admissibility(f)?;
    if r.admissible {
        Ok(())
    } else {
        Err(Error::InadmissibleWavelet(format!("component {name} is not admissible")))
    }
}

/// `(Σ conj(u)·v dk⁴)` on spectra.
fn spectral_inner(u: &SampledField, v: &SampledField) -> Complex64 {
    let s: Complex64 = u.values.iter().zip(&v.values).map(|(a, b)| a.conj() * b).sum();
    s * u.lattice.cell_volume()
}

/// The quaternion by which `∫ |U f⟫⟪U f'| dμ_ℓ` multiplies from the left,
/// built entrywise from the Duflo–Moore weighted inner products.
pub fn q_overlap_matrix(f: &QuaternionField, fp: &QuaternionField) -> Result<Mat2> {
    for (field, name) in [(&f.f1, "f1"), (&f.f2, "f2"), (&fp.f1, "f1'"), (&fp.f2, "f2'")] {
        require_component(field, name)?;
    }
    let c = |u: &SampledField| -> Result<SampledField> { duflo_moore(&u.dft()?) };
    let (c1, c2, p1, p2) = (c(&f.f1)?, c(&f.f2)?, c(&fp.f1)?, c(&fp.f2)?);
    // ⟨conj(Cu)|conj(Cv)⟩ = conj(⟨Cu|Cv⟩).
    let ip = spectral_inner;
    Ok([
        [
            ip(&p1, &c1) + ip(&p2, &c2).conj(),
            ip(&p2, &c1) - ip(&p1, &c2).conj(),
        ],
        [
            ip(&p1, &c2) - ip(&p2, &c1).conj(),
            ip(&p1, &c1).conj() + ip(&p2, &c2),
        ],
    ])
}

pub fn q_overlap(f: &QuaternionField, fp: &QuaternionField) -> Result<Quaternion> {
    let m = q_overlap_matrix(f, fp)?;
    Ok(Quaternion::new(m[0][0], m[1][0]))
}

/// The same quaternion through the transposed vectors
/// `f^T ≅ (f1, -conj(f2))` as the matrix transpose of `⟪C f'^T | C f^T⟫`.
pub fn q_overlap_transposed(f: &QuaternionField, fp: &QuaternionField) -> Result<Quaternion> {
    for (field, name) in [(&f.f1, "f1"), (&f.f2, "f2"), (&fp.f1, "f1'"), (&fp.f2, "f2'")] {
        require_component(field, name)?;
    }
    let c = |u: &SampledField| -> Result<SampledField> { duflo_moore(&u.dft()?)?.idft() };
    let transposed = |g: &QuaternionField| -> Result<QuaternionField> {
        Ok(QuaternionField {
            f1: c(&g.f1)?,
            f2: c(&g.f2)?.map(|v| -v.conj()),
        })
    };
    let m = qinner_matrix(&transposed(fp)?, &transposed(f)?)?;
    Quaternion::from_matrix(&transpose(&m), 1e-10)
        .ok_or_else(|| Error::InvalidField("transposed overlap lost the quaternion structure".into()))
}

fn transpose(m: &Mat2) -> Mat2 {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}
