use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use quatwave::baseline::{
    cwt1d, cwt1d_admissibility, cwt1d_energy_ratio, cwt1d_reconstruct, Engine, Quadrature1D, Shape1D, Signal1D,
    Wavelet1D,
};
use quatwave::Error;

const N: usize = 1024;
const H: f64 = 0.1;

fn hat(width: f64) -> Wavelet1D {
    Wavelet1D::new(Shape1D::GaussianDerivative { width }, N, H).unwrap()
}

fn chirp() -> Signal1D {
    Signal1D::from_fn(N, H, |x| Complex64::from_polar((-(x - 0.5).powi(2) / 2.0).exp(), 3.0 * x)).unwrap()
}

fn reconstruction(stride: usize, da: f64) -> (f64, f64) {
    let psi = hat(1.0);
    let s = chirp();
    let quad = Quadrature1D::new(stride, 0.02, 20.0, da).unwrap();
    let table = cwt1d(&psi, &s, &quad, Engine::Spectral).unwrap();
    let back = cwt1d_reconstruct(&psi, &table, Engine::Spectral).unwrap();
    (cwt1d_energy_ratio(&psi, &table, &s), back.relative_error(&s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dft_is_unitary_and_invertible(re in prop::collection::vec(-1.0..1.0f64, 64), im in prop::collection::vec(-1.0..1.0f64, 64)) {
        let values: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let s = Signal1D::new(-3.1, 0.1, values).unwrap();
        let spec = s.dft();
        let spec_norm: f64 = spec.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * spec.spacing;
        prop_assert!((spec_norm - s.norm_sqr()).abs() <= 1e-10 * s.norm_sqr().max(1.0));
        let back = spec.idft();
        prop_assert!(back.relative_error(&s).unwrap() <= 1e-12);
    }
}

#[test]
fn constant_of_the_gaussian_derivative() {
    // 2π ∫ w⁶ ζ² e^{-w²ζ²} / |ζ| dζ = 2π w⁴.
    for w in [1.0, 1.5] {
        let report = hat(w).report;
        assert!(report.admissible);
        let rel = report.c_psi / (TAU * w.powi(4)) - 1.0;
        assert!(rel.abs() < 5e-3, "{w}: {rel}");
    }
}

#[test]
fn spectra_match_the_sampled_transform() {
    for shape in [Shape1D::GaussianDerivative { width: 1.2 }, Shape1D::Gaussian { width: 0.8 }] {
        let s = Signal1D::from_fn(N, H, |x| shape.value(x)).unwrap();
        let spec = s.dft();
        for j in (0..spec.values.len()).step_by(7) {
            let k = spec.point(j);
            assert!((spec.values[j] - shape.spectrum(k)).norm() < 1e-9, "{shape:?} at {k}");
        }
    }
}

#[test]
fn gaussian_and_zero_are_flagged() {
    let gauss = Wavelet1D::new(Shape1D::Gaussian { width: 1.0 }, N, H).unwrap();
    assert!(!gauss.report.admissible);
    assert!(gauss.report.c_psi.is_infinite());
    let quad = Quadrature1D::new(8, 0.5, 2.0, 0.5).unwrap();
    assert!(matches!(cwt1d(&gauss, &chirp(), &quad, Engine::Spectral), Err(Error::InadmissibleWavelet(_))));

    let zero = cwt1d_admissibility(&Signal1D::from_fn(N, H, |_| Complex64::default()).unwrap());
    assert!(zero.degenerate);
    assert_eq!(zero.c_psi, 0.0);
}

#[test]
fn coefficients_match_a_direct_sum() {
    let psi = hat(1.0);
    let s = chirp();
    let quad = Quadrature1D::new(64, 0.5, 2.5, 0.5).unwrap();
    let table = cwt1d(&psi, &s, &quad, Engine::Spectral).unwrap();
    let nb = table.b.len();
    for (ai, &a) in quad.scales.iter().enumerate() {
        for (bi, &b) in table.b.iter().enumerate() {
            let oracle: Complex64 = (0..N)
                .map(|n| {
                    let x = s.point(n);
                    let u = (x - b) / a;
                    u * (-u * u / 2.0).exp() / a.abs().sqrt() * s.values[n]
                })
                .sum::<Complex64>()
                * H;
            assert!((table.values[ai * nb + bi] - oracle).norm() < 1e-9, "a {a} b {b}");
        }
    }
}

#[test]
fn engines_agree() {
    let psi = hat(1.0);
    let s = chirp();
    let quad = Quadrature1D::new(32, 0.1, 6.0, 0.2).unwrap();
    let spectral = cwt1d(&psi, &s, &quad, Engine::Spectral).unwrap();
    let direct = cwt1d(&psi, &s, &quad, Engine::Direct).unwrap();
    let scale = spectral.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let diff = spectral.values.iter().zip(&direct.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-8 * scale, "{diff}");
    let rs = cwt1d_reconstruct(&psi, &spectral, Engine::Spectral).unwrap();
    let rd = cwt1d_reconstruct(&psi, &spectral, Engine::Direct).unwrap();
    let rel = rs.relative_error(&rd).unwrap();
    assert!(rel < 5e-3, "{rel}");
}

#[test]
fn energy_and_reconstruction_at_the_finest_level() {
    let (ratio, err) = reconstruction(1, 0.02);
    assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
    assert!(err < 0.02, "{err}");
}

#[test]
fn reconstruction_improves_under_refinement() {
    let errors: Vec<f64> = [(4, 0.08), (2, 0.04), (1, 0.02)].iter().map(|&(s, da)| reconstruction(s, da).1).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn bad_quadratures_are_rejected() {
    assert!(Quadrature1D::new(0, 0.1, 1.0, 0.1).is_err());
    assert!(Quadrature1D::new(1, 1.0, 0.5, 0.1).is_err());
    assert!(Quadrature1D::new(1, 0.1, 1.0, 0.0).is_err());
    let q = Quadrature1D::new(2, 0.0, 1.0, 0.25).unwrap();
    assert_eq!(q.scales, vec![-0.875, -0.625, -0.375, -0.125, 0.125, 0.375, 0.625, 0.875]);
    assert!((q.weight(0.1, 0.5) - 2.0 * 0.1 * 0.25 / 0.25).abs() < 1e-15);
}
