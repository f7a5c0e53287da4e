use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use quatwave::field::spectrum::{Conjugated, Scaled};
use quatwave::field::{
    affine_pullback, sample_spectrum, AnalyticGaussian, Domain, GaussianSum, Lattice4, LatticeSpectrum, Prefactor,
    RadialSpectrum, SampledField, Spectrum,
};
use quatwave::{AffineElement, Error, Quaternion};
use std::sync::Arc;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn small() -> Lattice4 {
    Lattice4::centered(8, 0.7).unwrap()
}

fn field_from(lattice: Lattice4, seed: &[f64]) -> SampledField {
    SampledField::from_fn(lattice, |x| {
        let s = x[0] * seed[0] + x[1] * seed[1] - x[2] * seed[2] + x[3] * seed[3];
        c(s.sin() + seed[4], (s * 0.5 + x[0]).cos() * seed[5])
    })
}

fn seeds() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5..1.5f64, 6)
}

/// `(2π)⁻² ∫ exp(-|x - c|²/(2w²)) e^{-ik·x} dx`.
fn gaussian_ft(center: [f64; 4], width: f64, k: [f64; 4]) -> Complex64 {
    let k2: f64 = k.iter().map(|v| v * v).sum();
    let kc: f64 = k.iter().zip(&center).map(|(a, b)| a * b).sum();
    Complex64::from_polar(width.powi(4) * (-width * width * k2 / 2.0).exp(), -kc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inner_is_conjugate_symmetric(s in seeds(), t in seeds()) {
        let (f, g) = (field_from(small(), &s), field_from(small(), &t));
        let lhs = f.inner(&g).unwrap();
        let rhs = g.inner(&f).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        prop_assert!(f.inner(&f).unwrap().im.abs() <= 1e-12 * f.norm_sqr().max(1.0));
    }

    #[test]
    fn dft_is_linear_and_unitary(s in seeds(), t in seeds(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let (f, g) = (field_from(small(), &s), field_from(small(), &t));
        let alpha = c(re, im);
        let lhs = f.scale(alpha).add(&g).unwrap().dft().unwrap();
        let rhs = f.dft().unwrap().scale(alpha).add(&g.dft().unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-10 * (1.0 + rhs.max_abs()));
        let (fh, gh) = (f.dft().unwrap(), g.dft().unwrap());
        let ip = f.inner(&g).unwrap();
        prop_assert!((fh.inner(&gh).unwrap() - ip).norm() <= 1e-10 * (1.0 + f.norm() * g.norm()));
        prop_assert!((fh.norm_sqr() - f.norm_sqr()).abs() <= 1e-10 * f.norm_sqr().max(1.0));
    }

    #[test]
    fn dft_round_trip(s in seeds(), shift in prop::array::uniform4(-1.0..1.0f64)) {
        let base = small();
        let lat = Lattice4::new(std::array::from_fn(|j| base.origin[j] + shift[j]), base.spacing, base.counts).unwrap();
        let f = field_from(lat, &s);
        let back = f.dft().unwrap().idft().unwrap();
        prop_assert!(back.lattice.approx_eq(&f.lattice));
        prop_assert_eq!(back.domain, Domain::Position);
        prop_assert!(back.sub(&f).unwrap().max_abs() <= 1e-10 * (1.0 + f.max_abs()));
    }

    #[test]
    fn analytic_action_matches_its_definition(
        b in prop::array::uniform4(-1.0..1.0f64),
        a in prop::array::uniform4(-1.5..1.5f64),
        x in prop::array::uniform4(-2.0..2.0f64),
    ) {
        prop_assume!(a.iter().map(|v| v * v).sum::<f64>() > 0.1);
        let g = AffineElement::new(Quaternion::from_vec4(b), Quaternion::from_vec4(a)).unwrap();
        let f = AnalyticGaussian::new([0.2, -0.1, 0.3, 0.0], 0.9)
            .unwrap()
            .with_phase([0.5, 0.0, -0.4, 0.2])
            .with_amplitude(c(0.7, -0.3));
        let moved = f.act(&g);
        let y = g.inverse_act_vec4(x).unwrap();
        let expected = f.value(y) / g.a.det();
        prop_assert!((moved.value(x) - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
        prop_assert!((moved.norm_sqr() - f.norm_sqr()).abs() <= 1e-10 * f.norm_sqr());
        for p in [Prefactor::Radius, Prefactor::RadiusSquared] {
            let fp = f.with_prefactor(p);
            let mp = fp.act(&g);
            let expected = fp.value(y) / g.a.det();
            prop_assert!((mp.value(x) - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
            prop_assert!((mp.norm_sqr() - fp.norm_sqr()).abs() <= 1e-10 * fp.norm_sqr());
        }
    }
}

#[test]
fn analytic_norms_match_the_lattice() {
    let lat = Lattice4::centered(24, 0.35).unwrap();
    for p in [Prefactor::One, Prefactor::Radius, Prefactor::RadiusSquared] {
        let f = AnalyticGaussian::new([0.1, 0.0, -0.2, 0.1], 0.8)
            .unwrap()
            .with_prefactor(p)
            .with_amplitude(c(0.0, 1.3));
        let sampled = f.sample(lat).norm_sqr();
        assert!((sampled / f.norm_sqr() - 1.0).abs() < 1e-6, "{p:?}: {sampled} vs {}", f.norm_sqr());
    }
    let plain = AnalyticGaussian::new([0.0; 4], 1.1).unwrap();
    assert!((plain.norm_sqr() - PI * PI * 1.1f64.powi(4)).abs() < 1e-12);
}

#[test]
fn dft_of_a_gaussian_matches_the_continuous_transform() {
    let lat = Lattice4::centered(24, 0.45).unwrap();
    let center = [0.3, -0.2, 0.0, 0.4];
    let f = AnalyticGaussian::new(center, 1.0).unwrap();
    let spec = f.sample(lat).dft().unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..spec.lattice.len() {
        let k = spec.coordinates(i);
        worst = worst.max((spec.values[i] - gaussian_ft(center, 1.0, k)).norm());
        let closed = f.spectrum(k).unwrap();
        assert!((closed - gaussian_ft(center, 1.0, k)).norm() < 1e-12);
    }
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn mexican_hat_spectrum_is_radial() {
    let hat = GaussianSum::mexican_hat(1.2).unwrap();
    let radial = RadialSpectrum { power: 2, width: 1.2 };
    for k in [[0.0; 4], [0.3, -0.1, 0.8, 0.2], [1.5, 0.0, 0.0, -2.0]] {
        assert!((hat.spectrum(k).unwrap() - radial.at(k)).norm() < 1e-12);
    }
    let with_radius = GaussianSum::new(vec![AnalyticGaussian::new([0.0; 4], 1.0)
        .unwrap()
        .with_prefactor(Prefactor::Radius)])
    .unwrap();
    assert!(!with_radius.has_spectrum());
    assert!(with_radius.spectrum([0.0; 4]).is_none());
}

#[test]
fn spectrum_adapters() {
    let lat = Lattice4::centered(8, 0.8).unwrap();
    let f = AnalyticGaussian::new([0.5, 0.0, 0.0, -0.5], 0.9)
        .unwrap()
        .with_phase([0.3, 0.0, 0.1, 0.0])
        .with_amplitude(c(0.4, 0.9));
    let sum = GaussianSum::new(vec![f]).unwrap();
    let shared: Arc<dyn Spectrum> = Arc::new(quatwave::field::spectrum::GaussianSpectrum::new(sum.clone()).unwrap());
    let conj = Conjugated(shared.clone());
    let scaled = Scaled(shared.clone(), c(0.0, 2.0));
    for k in [[0.1, 0.2, -0.3, 0.4], [1.0, 0.0, 0.5, -0.7]] {
        assert!((conj.at(k) - sum.conj().spectrum(k).unwrap()).norm() < 1e-12);
        assert!((scaled.at(k) - shared.at(k) * c(0.0, 2.0)).norm() < 1e-12);
    }
    let sampled = sample_spectrum(shared.as_ref(), lat).unwrap();
    assert_eq!(sampled.lattice, lat.reciprocal().unwrap());
    let interp = LatticeSpectrum::new(sampled.clone()).unwrap();
    for i in [0, 17, 1000, sampled.lattice.len() - 1] {
        let k = sampled.coordinates(i);
        assert!((interp.at(k) - sampled.values[i]).norm() < 1e-12);
    }
    assert_eq!(interp.at([1e3; 4]), Complex64::default());
    assert!(matches!(
        LatticeSpectrum::new(SampledField::zeros(lat, Domain::Position)),
        Err(Error::DomainMismatch { .. })
    ));
}

#[test]
fn pullback_composes_on_lattice_aligned_maps() {
    let lat = Lattice4::centered(10, 0.7).unwrap();
    // Supported well inside the hull so that no shifted sample is lost.
    let f = field_from(lat, &[0.4, -0.2, 0.7, 0.1, 0.3, -0.5])
        .zip_with(&SampledField::from_fn(lat, |x| c(if x.iter().all(|v| v.abs() <= 1.0) { 1.0 } else { 0.0 }, 0.0)), |a, b| a * b)
        .unwrap();
    let h = lat.spacing;
    // Unit quaternions that permute the axes up to sign, and whole-cell shifts.
    let g = AffineElement::new(Quaternion::from_vec4([h, 0.0, -h, 0.0]), Quaternion::from_components(0.0, 1.0, 0.0, 0.0)).unwrap();
    let k = AffineElement::new(Quaternion::from_vec4([0.0, 2.0 * h, 0.0, h]), Quaternion::from_components(0.0, 0.0, 1.0, 0.0)).unwrap();
    let lhs = affine_pullback(&g, &affine_pullback(&k, &f).unwrap()).unwrap();
    let rhs = affine_pullback(&g.compose(&k).unwrap(), &f).unwrap();
    assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
    let id = affine_pullback(&AffineElement::identity(), &f).unwrap();
    assert_eq!(id, f);
}

#[test]
fn pullback_interpolates_linear_functions_exactly() {
    let lat = small();
    let linear = |x: [f64; 4]| c(0.3 * x[0] - 0.2 * x[1] + x[2] + 0.5, 0.1 * x[3]);
    let f = SampledField::from_fn(lat, linear);
    let g = AffineElement::new(Quaternion::from_vec4([0.13, -0.07, 0.0, 0.05]), Quaternion::from_components(1.0, 0.0, 0.0, 0.0)).unwrap();
    let moved = affine_pullback(&g, &f).unwrap();
    let hi = lat.origin[0] + (lat.counts[0] - 1) as f64 * lat.spacing;
    for i in 0..lat.len() {
        let x = lat.point_flat(i);
        let y = g.inverse_act_vec4(x).unwrap();
        if y.iter().all(|v| (lat.origin[0]..=hi).contains(v)) {
            assert!((moved.values[i] - linear(y)).norm() < 1e-12);
        }
    }
}

#[test]
fn raw_round_trip_and_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("field");
    let f = field_from(small(), &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
    f.save(&stem, Some("abc")).unwrap();
    assert_eq!(SampledField::load(&stem).unwrap(), f);
    let spec = f.dft().unwrap();
    spec.save(&stem, None).unwrap();
    let back = SampledField::load(&stem).unwrap();
    assert_eq!(back, spec);
    assert!(matches!(back.domain, Domain::Frequency { .. }));

    std::fs::write(stem.with_extension("bin"), [0u8; 15]).unwrap();
    assert!(SampledField::load(&stem).is_err());
    assert!(SampledField::load(&dir.path().join("missing")).is_err());
}

#[test]
fn mismatched_fields_are_rejected() {
    let f = SampledField::zeros(small(), Domain::Position);
    let g = SampledField::zeros(Lattice4::centered(8, 0.5).unwrap(), Domain::Position);
    assert!(matches!(f.inner(&g), Err(Error::LatticeMismatch(_))));
    assert!(SampledField::new(small(), vec![Complex64::default(); 3], Domain::Position).is_err());
    assert!(f.dft().unwrap().dft().is_err());
    assert!(f.idft().is_err());
    assert!(AnalyticGaussian::new([0.0; 4], -1.0).is_err());
    assert!(Lattice4::centered(0, 1.0).is_err());
}
