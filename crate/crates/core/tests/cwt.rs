use std::f64::consts::{PI, TAU};
use std::io::BufReader;
use std::sync::Arc;

use num_complex::Complex64;
use quatwave::cwt::{
    admissibility, apply_rep, duflo_moore, energy_hstar_default, reconstruct, wavelet_energy, wavelet_transform,
    CoefficientTable, Engine, Wavelet,
};
use quatwave::field::spectrum::GaussianSpectrum;
use quatwave::field::{AnalyticGaussian, Domain, GaussianSum, Lattice4, SampledField};
use quatwave::quadrature::{DilationNode, GroupQuadrature, TruncationSpec};
use quatwave::{AffineElement, Error, Quaternion, RotationDilation};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Odd count so that the origin is a lattice node.
fn lattice() -> Lattice4 {
    Lattice4::centered(25, 0.72).unwrap()
}

fn gaussian(center: [f64; 4], width: f64) -> SampledField {
    AnalyticGaussian::new(center, width).unwrap().sample(lattice())
}

fn small_quadrature() -> GroupQuadrature {
    GroupQuadrature::build(&TruncationSpec {
        b_halfwidth: 1.44,
        b_count: 2,
        lambda_min: 0.5,
        lambda_max: 1.7,
        lambda_count: 2,
        theta_count: 2,
        epsilon0: None,
    })
    .unwrap()
}

fn single_node(b: f64, a: Quaternion) -> GroupQuadrature {
    let node = DilationNode { a, decomp: RotationDilation::decompose(&a).unwrap(), weight: 1.0, right_weight: 1.0 };
    GroupQuadrature::from_parts(vec![b], 1.0, vec![node]).unwrap()
}

/// A mexican hat centred away from the origin, so that rotations and
/// dilations move it to distinguishable places.
fn off_centre_wavelet() -> Wavelet {
    let shift = AffineElement::new(Quaternion::from_vec4([0.7, 0.0, -0.3, 0.0]), Quaternion::ONE).unwrap();
    let sum = GaussianSum::mexican_hat(1.0).unwrap().act(&shift);
    Wavelet::from_spectrum(lattice(), Arc::new(GaussianSpectrum::new(sum.clone()).unwrap()), Some(sum)).unwrap()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[test]
fn duflo_moore_multiplier() {
    // dk = 2π/(N h) = π, so index offset 2 along one axis sits on the 2π shell.
    let lat = Lattice4::centered(8, 0.25).unwrap();
    let ones = SampledField::from_fn(lat, |_| c(1.0, 0.0)).dft().unwrap().map(|_| c(1.0, 0.0));
    let out = duflo_moore(&ones).unwrap();
    for i in 0..out.lattice.len() {
        let k = out.coordinates(i);
        let r2: f64 = k.iter().map(|v| v * v).sum();
        let expected = if r2 == 0.0 { 0.0 } else { TAU * TAU / r2 };
        assert!((out.values[i].re - expected).abs() < 1e-12 * expected.max(1.0));
        if (r2.sqrt() - TAU).abs() < 1e-9 {
            assert!((out.values[i].re - 1.0).abs() < 1e-12);
        }
    }
    let f = gaussian([0.3, 0.0, -0.6, 0.0], 1.5).dft().unwrap();
    let g = gaussian([0.0, 1.2, 0.0, 0.0], 1.0).dft().unwrap();
    let alpha = c(0.3, -1.1);
    let lhs = duflo_moore(&f.scale(alpha).add(&g).unwrap()).unwrap();
    let rhs = duflo_moore(&f).unwrap().scale(alpha).add(&duflo_moore(&g).unwrap()).unwrap();
    assert!(max_diff(&lhs.values, &rhs.values) < 1e-12);
    assert!(matches!(duflo_moore(&gaussian([0.0; 4], 1.0)), Err(Error::DomainMismatch { .. })));
}

#[test]
fn duflo_moore_commutes_with_conjugation() {
    // The spectrum of conj(f) is k ↦ conj(f̂(-k)); the multiplier is even in k.
    let f = AnalyticGaussian::new([0.6, -0.3, 0.0, 1.2], 1.3)
        .unwrap()
        .with_phase([0.4, 0.0, 0.0, -0.2])
        .with_amplitude(c(0.5, 0.8))
        .sample(lattice());
    let lhs = duflo_moore(&f.conj().dft().unwrap()).unwrap();
    let cf = duflo_moore(&f.dft().unwrap()).unwrap();
    let n = lattice().counts[0];
    let mut worst: f64 = 0.0;
    for i in 0..lhs.lattice.len() {
        let idx = lhs.lattice.unflat(i);
        let mirrored = lhs.lattice.flat(idx.map(|j| n - 1 - j));
        worst = worst.max((lhs.values[i] - cf.values[mirrored].conj()).norm());
    }
    assert!(worst < 1e-10 * cf.max_abs(), "{worst}");
}

#[test]
fn admissibility_classification() {
    let zero = admissibility(&SampledField::zeros(lattice(), Domain::Position)).unwrap();
    assert!(zero.degenerate && zero.admissible);
    assert_eq!(zero.c_eta, 0.0);

    let gauss = admissibility(&gaussian([0.0; 4], 1.0)).unwrap();
    assert!(!gauss.admissible);
    assert!(gauss.c_eta.is_infinite());
    assert!(gauss.growth_ratio >= 1.0);

    // ∫ ‖k‖⁴ e^{-‖k‖²} / ‖k‖⁴ d⁴k = π².
    let lat = Lattice4::centered(20, 0.8).unwrap();
    let shipped = Wavelet::shipped(lat).unwrap();
    assert!(shipped.report.admissible);
    let exact = TAU.powi(4) * PI * PI;
    let rel = shipped.c_eta() / exact - 1.0;
    assert!(rel.abs() < 0.01, "{rel}");
    assert!(shipped.report.profile_rel_std < 1e-3);

    let gaussian_wavelet = Wavelet::from_field(gaussian([0.0; 4], 1.0)).unwrap();
    let q = small_quadrature();
    assert!(matches!(
        wavelet_transform(&gaussian_wavelet, &gaussian([0.0; 4], 1.0), &q, Engine::Spectral),
        Err(Error::InadmissibleWavelet(_))
    ));
}

#[test]
fn representation_drifts_from_unitarity_at_second_order() {
    let f = AnalyticGaussian::new([0.2, 0.0, -0.1, 0.3], 0.9).unwrap();
    let g = AffineElement::new(
        Quaternion::from_vec4([0.35, -0.2, 0.1, 0.0]),
        Quaternion::from_vec4([0.9, 0.3, -0.2, 0.25]),
    )
    .unwrap();
    let drift = |n: usize, h: f64| {
        let lat = Lattice4::centered(n, h).unwrap();
        let moved = apply_rep(&g, &f.sample(lat)).unwrap();
        (moved.norm_sqr() / f.norm_sqr() - 1.0).abs()
    };
    let coarse = drift(19, 0.45);
    let fine = drift(29, 0.3);
    // Quadrilinear interpolation: (0.45 / 0.3)² = 2.25.
    assert!(coarse / fine > 1.8, "{coarse} {fine}");
    assert!(fine < 5e-2, "{fine}");
}

#[test]
fn representation_property_on_aligned_maps() {
    let lat = lattice();
    let f = gaussian([0.0, 0.6, 0.0, -0.6], 1.0);
    let h = lat.spacing;
    let g = AffineElement::new(Quaternion::from_vec4([h, 0.0, 0.0, -h]), Quaternion::from_components(0.0, 0.0, 0.0, 1.0)).unwrap();
    let k = AffineElement::new(Quaternion::from_vec4([0.0, h, h, 0.0]), Quaternion::from_components(0.0, 1.0, 0.0, 0.0)).unwrap();
    let lhs = apply_rep(&g, &apply_rep(&k, &f).unwrap()).unwrap();
    let rhs = apply_rep(&g.compose(&k).unwrap(), &f).unwrap();
    assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-6 * f.max_abs());
}

#[test]
fn identity_node_recovers_the_plain_inner_product() {
    let eta = Wavelet::shipped(lattice()).unwrap();
    let f = AnalyticGaussian::new([0.6, 0.0, -1.2, 0.0], 1.1)
        .unwrap()
        .with_phase([0.3, 0.0, 0.0, 0.5])
        .sample(lattice());
    let q = single_node(0.0, Quaternion::ONE);
    let expected = eta.field.inner(&f).unwrap();
    for engine in [Engine::Spectral, Engine::Direct] {
        let t = wavelet_transform(&eta, &f, &q, engine).unwrap();
        assert_eq!(t.values.len(), 1);
        assert!((t.values[0] - expected).norm() < 1e-10 * expected.norm().max(1e-3), "{engine:?}");
    }
}

#[test]
fn transform_is_linear_in_the_signal_and_antilinear_in_the_wavelet() {
    let eta = Wavelet::shipped(lattice()).unwrap();
    let q = small_quadrature();
    let f = gaussian([0.5, 0.0, 0.0, 0.0], 1.2);
    let g = gaussian([0.0, -1.0, 0.4, 0.0], 0.9);
    let alpha = c(-0.4, 1.3);
    let tf = wavelet_transform(&eta, &f, &q, Engine::Spectral).unwrap();
    let tg = wavelet_transform(&eta, &g, &q, Engine::Spectral).unwrap();
    let combo = wavelet_transform(&eta, &f.scale(alpha).add(&g).unwrap(), &q, Engine::Spectral).unwrap();
    let expected: Vec<_> = tf.values.iter().zip(&tg.values).map(|(a, b)| alpha * a + b).collect();
    assert!(max_diff(&combo.values, &expected) < 1e-10 * max_abs(&expected));

    let scaled = eta.scaled(alpha).unwrap();
    let ts = wavelet_transform(&scaled, &f, &q, Engine::Spectral).unwrap();
    let expected: Vec<_> = tf.values.iter().map(|v| alpha.conj() * v).collect();
    assert!(max_diff(&ts.values, &expected) < 1e-10 * max_abs(&expected));
    assert!((scaled.c_eta() / (eta.c_eta() * alpha.norm_sqr()) - 1.0).abs() < 1e-10);
}

#[test]
fn transform_is_covariant_under_lattice_translations() {
    let lat = lattice();
    let eta = Wavelet::shipped(lat).unwrap();
    let q = small_quadrature();
    let f = gaussian([0.0, 0.3, -0.3, 0.0], 1.0);
    // Shifting the signal by one b-step moves coefficients by one b index.
    let step = q.b_spacing().unwrap();
    let shift = AffineElement::new(Quaternion::from_vec4([step, 0.0, 0.0, 0.0]), Quaternion::ONE).unwrap();
    let moved = apply_rep(&shift, &f).unwrap();
    let t = wavelet_transform(&eta, &f, &q, Engine::Spectral).unwrap();
    let tm = wavelet_transform(&eta, &moved, &q, Engine::Spectral).unwrap();
    let n = q.b_count();
    let mut worst: f64 = 0.0;
    for i in 0..q.len() {
        let b = q.element(i).b.vec4();
        let lhs = tm.values[i];
        // b_vec ordering puts vec4 component 0 in the slowest b digit.
        let digit0 = (i % q.b_nodes_per_a()) / (n * n * n);
        if digit0 == 0 {
            continue;
        }
        let rhs = t.values[i - n * n * n];
        assert!((q.element(i - n * n * n).b.vec4()[0] - (b[0] - step)).abs() < 1e-12);
        worst = worst.max((lhs - rhs).norm());
    }
    assert!(worst < 1e-6 * max_abs(&t.values), "{worst}");
}

#[test]
fn coefficients_peak_where_the_signal_is_a_moved_wavelet() {
    let eta = off_centre_wavelet();
    let q = small_quadrature();
    let target = 3 * q.b_nodes_per_a() + 5;
    let f = eta.analytic.as_ref().unwrap().act(&q.element(target)).sample(lattice());
    let t = wavelet_transform(&eta, &f, &q, Engine::Spectral).unwrap();
    let argmax = (0..t.values.len()).max_by(|&i, &j| t.values[i].norm().total_cmp(&t.values[j].norm())).unwrap();
    assert_eq!(argmax, target);
    let rel = t.values[target].re / f.norm_sqr() - 1.0;
    assert!(rel.abs() < 0.05, "{rel}");
}

#[test]
fn energy_of_trivial_signals() {
    let eta = Wavelet::shipped(lattice()).unwrap();
    let hstar = energy_hstar_default();
    let zero = SampledField::zeros(lattice(), Domain::Position);
    assert_eq!(wavelet_energy(&eta, &zero, &hstar).unwrap(), 0.0);
    let f = gaussian([0.0, 0.0, 0.6, 0.0], 1.3);
    let alpha = c(1.5, -0.5);
    let e1 = wavelet_energy(&eta, &f, &hstar).unwrap();
    let e2 = wavelet_energy(&eta, &f.scale(alpha), &hstar).unwrap();
    assert!(e1 > 0.0);
    assert!((e2 / (alpha.norm_sqr() * e1) - 1.0).abs() < 1e-12);
}

#[test]
fn reconstruction_edge_cases() {
    let eta = Wavelet::shipped(lattice()).unwrap();
    let q = small_quadrature();
    let zero_table = CoefficientTable {
        quadrature: q.clone(),
        values: vec![Complex64::default(); q.len()],
        wavelet_fingerprint: eta.fingerprint.clone(),
    };
    for engine in [Engine::Spectral, Engine::Direct] {
        let out = reconstruct(&eta, &zero_table, engine).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }
    let other = Wavelet::radial(lattice(), 2, 1.3).unwrap();
    assert!(matches!(reconstruct(&other, &zero_table, Engine::Spectral), Err(Error::WaveletMismatch)));
    let short = CoefficientTable { values: vec![Complex64::default(); 3], ..zero_table };
    assert!(matches!(reconstruct(&eta, &short, Engine::Spectral), Err(Error::QuadratureMismatch(_))));
}

#[test]
fn engines_agree_on_lattice_aligned_nodes() {
    // Unit dilations that permute the axes up to sign, translations on lattice
    // nodes: the direct pullback needs no interpolation.
    let units = [
        Quaternion::ONE,
        Quaternion::from_components(0.0, 1.0, 0.0, 0.0),
        Quaternion::from_components(0.0, 0.0, 1.0, 0.0),
        Quaternion::from_components(0.0, 0.0, 0.0, -1.0),
        Quaternion::from_components(-1.0, 0.0, 0.0, 0.0),
    ];
    let nodes = units
        .iter()
        .map(|&a| DilationNode { a, decomp: RotationDilation::decompose(&a).unwrap(), weight: 0.3, right_weight: 0.3 })
        .collect();
    let h = lattice().spacing;
    let q = GroupQuadrature::from_parts(vec![0.0, 2.0 * h], 0.7, nodes).unwrap();
    let eta = off_centre_wavelet();
    let f = AnalyticGaussian::new([0.6, -0.6, 0.0, 0.3], 1.0)
        .unwrap()
        .with_phase([0.0, 0.5, 0.0, 0.0])
        .sample(lattice());
    let spectral = wavelet_transform(&eta, &f, &q, Engine::Spectral).unwrap();
    let direct = wavelet_transform(&eta, &f, &q, Engine::Direct).unwrap();
    let rel = max_diff(&spectral.values, &direct.values) / max_abs(&spectral.values);
    assert!(rel < 1e-4, "{rel}");
    let rs = reconstruct(&eta, &spectral, Engine::Spectral).unwrap();
    let rd = reconstruct(&eta, &spectral, Engine::Direct).unwrap();
    let rel = rs.relative_error(&rd).unwrap();
    assert!(rel < 1e-4, "{rel}");
}

#[test]
fn analytic_wavelets_keep_their_closed_form() {
    let eta = Wavelet::from_gaussians(lattice(), GaussianSum::mexican_hat(1.0).unwrap()).unwrap();
    let shipped = Wavelet::shipped(lattice()).unwrap();
    assert!(eta.analytic.is_some());
    let rel = eta.c_eta() / shipped.c_eta() - 1.0;
    assert!(rel.abs() < 1e-2, "{rel}");
    assert_ne!(eta.fingerprint, Wavelet::radial(lattice(), 2, 1.1).unwrap().fingerprint);
    let conj = eta.conjugated().unwrap();
    assert!((conj.c_eta() / eta.c_eta() - 1.0).abs() < 1e-10);
}

#[test]
fn jsonl_round_trip_and_mismatches() {
    let eta = Wavelet::shipped(lattice()).unwrap();
    let q = small_quadrature();
    let t = wavelet_transform(&eta, &gaussian([0.0; 4], 1.0), &q, Engine::Spectral).unwrap();
    let mut buf = Vec::new();
    t.write_jsonl(&mut buf, Some("feedface")).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), q.len() + 1);
    assert!(text.lines().next().unwrap().contains("feedface"));
    let back = CoefficientTable::read_jsonl(BufReader::new(&buf[..]), q.clone()).unwrap();
    assert_eq!(back, t);

    let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
    assert!(matches!(
        CoefficientTable::read_jsonl(BufReader::new(truncated.as_bytes()), q.clone()),
        Err(Error::QuadratureMismatch(_))
    ));
    let other = GroupQuadrature::build(&TruncationSpec { lambda_max: 1.9, ..q.region.clone().unwrap() }).unwrap();
    assert!(CoefficientTable::read_jsonl(BufReader::new(&buf[..]), other).is_err());
    assert!(CoefficientTable::read_jsonl(BufReader::new(&b"not json\n"[..]), q).is_err());
}
