use num_complex::Complex64;
use rayon::prelude::*;

use super::lattice::Lattice4;
use super::sampled::SampledField;
use crate::error::Result;
use crate::group::AffineElement;

/// Fractional indices within this distance of an integer are snapped, so
/// lattice-aligned maps incur no interpolation error.
const SNAP: f64 = 1e-9;

/// Resamples `f` at `a⁻¹(x - b)` for every lattice node `x`, by quadrilinear
/// interpolation, with zeros outside the lattice hull.
pub fn affine_pullback(g: &AffineElement, f: &SampledField) -> Result<SampledField> {
    f.ensure_position()?;
    let a_inv = g.a.inverse()?.to_real4x4();
    let b = g.b.vec4();
    let lat = f.lattice;
    let values = (0..lat.len())
        .into_par_iter()
        .map(|i| {
            let x = lat.point_flat(i);
            let d = std::array::from_fn(|j| x[j] - b[j]);
            interpolate(&lat, &f.values, a_inv.mul_vec(d))
        })
        .collect();
    SampledField::new(lat, values, f.domain)
}

/// Quadrilinear interpolation of lattice samples at a point of R⁴.
pub fn interpolate(lat: &Lattice4, values: &[Complex64], y: [f64; 4]) -> Complex64 {
    let strides = lat.strides();
    let mut origin = 0;
    // Axes with a fractional offset, as (stride, fraction).
    let mut active = [(0usize, 0.0f64); 4];
    let mut m = 0;
    for j in 0..4 {
        let mut u = (y[j] - lat.origin[j]) / lat.spacing;
        let r = u.round();
        if (u - r).abs() < SNAP {
            u = r;
        }
        let top = (lat.counts[j] - 1) as f64;
        if !(0.0..=top).contains(&u) {
            return Complex64::default();
        }
        let i = u.floor();
        origin += i as usize * strides[j];
        let frac = u - i;
        if frac != 0.0 {
            active[m] = (strides[j], frac);
            m += 1;
        }
    }
    let mut acc = Complex64::default();
    for corner in 0..1usize << m {
        let mut w = 1.0;
        let mut offset = 0;
        for (bit, &(stride, frac)) in active[..m].iter().enumerate() {
            if corner >> bit & 1 == 1 {
                w *= frac;
                offset += stride;
            } else {
                w *= 1.0 - frac;
            }
        }
        acc += values[origin + offset] * w;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;

    #[test]
    fn identity_is_exact() {
        let lat = Lattice4::centered(5, 0.7).unwrap();
        let f = SampledField::from_fn(lat, |x| Complex64::new(x[0] * x[1] - x[3], x[2]));
        let g = affine_pullback(&AffineElement::identity(), &f).unwrap();
        assert_eq!(g.values, f.values);
    }

    #[test]
    fn lattice_shift_is_exact() {
        let lat = Lattice4::centered(6, 0.5).unwrap();
        let f = SampledField::from_fn(lat, |x| Complex64::new(x.iter().sum::<f64>().sin(), x[1]));
        let g = AffineElement::translation(Quaternion::from_vec4([0.5, 0.0, 0.0, 0.0]));
        let out = affine_pullback(&g, &f).unwrap();
        for i in 0..lat.len() {
            let idx = lat.unflat(i);
            if idx[0] == 0 {
                assert_eq!(out.values[i], Complex64::default());
            } else {
                let src = lat.flat([idx[0] - 1, idx[1], idx[2], idx[3]]);
                assert_eq!(out.values[i], f.values[src]);
            }
        }
    }

    #[test]
    fn linear_functions_interpolate_exactly() {
        let lat = Lattice4::centered(4, 1.0).unwrap();
        let f = SampledField::from_fn(lat, |x| Complex64::new(1.0 + x[0] - 2.0 * x[2], x[3]));
        let v = interpolate(&lat, &f.values, [0.25, -0.3, 0.7, 0.1]);
        assert!((v - Complex64::new(1.0 + 0.25 - 1.4, 0.1)).norm() < 1e-14);
        assert_eq!(interpolate(&lat, &f.values, [5.0, 0.0, 0.0, 0.0]), Complex64::default());
    }
}
