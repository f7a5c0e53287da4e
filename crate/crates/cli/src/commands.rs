use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use quatwave::baseline::{cwt1d, cwt1d_energy_ratio, cwt1d_reconstruct, Shape1D, Wavelet1D};
use quatwave::cwt::{admissibility, energy_ratio, reconstruct, wavelet_transform};
use quatwave::field::AnalyticGaussian;
use quatwave::measure::{invariance_report, random_elements, BumpFunction};
use quatwave::qcwt::{q_energy_ratio, qreconstruct, qwavelet_transform, reproducing_kernel};
use quatwave::quaternion::{mat2_mul, PAULI};
use quatwave::{AffineElement, GroupQuadrature, Quaternion, RealMatrix4, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const ENERGY_BAND: (f64, f64) = (0.95, 1.05);

/// Output directory plus the provenance stamped into every artifact.
pub struct Run<'a> {
    pub config: &'a RunConfig,
    pub hash: String,
    pub out: &'a Path,
}

impl Run<'_> {
    fn write_json(&self, name: &str, body: Value) -> Result<()> {
        let mut doc = json!({ "config_hash": self.hash, "config": self.config });
        if let (Value::Object(doc), Value::Object(body)) = (&mut doc, body) {
            doc.extend(body);
        }
        let mut w = BufWriter::new(File::create(self.out.join(name))?);
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }
}

/// Whether the command's own checks passed; compute errors surface as `Err`.
pub type Verdict = bool;

pub fn admissibility_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.wavelet.build(lattice)?;
    let report = admissibility(&eta.field)?;
    println!("c_eta {:e}, admissible {}", report.c_eta, report.admissible);
    run.write_json("admissibility.json", json!({ "report": report, "wavelet_fingerprint": eta.fingerprint }))?;
    Ok(true)
}

pub fn transform_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.wavelet.build(lattice)?;
    let f = run.config.signal.build(lattice)?;
    let quad = GroupQuadrature::build(&run.config.truncation)?;
    let table = wavelet_transform(&eta, &f, &quad, run.config.engine)?;
    table.write_jsonl(run.create("coefficients.jsonl")?, Some(&run.hash))?;
    let max_modulus = table.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    println!("{} coefficients, max modulus {max_modulus:e}", table.values.len());
    run.write_json(
        "transform.json",
        json!({ "nodes": table.values.len(), "energy": table.energy(), "max_modulus": max_modulus }),
    )?;
    Ok(true)
}

pub fn qtransform_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.qwavelet.build(lattice)?;
    let f = run.config.qsignal.build(lattice)?;
    let quad = GroupQuadrature::build(&run.config.truncation)?;
    let table = qwavelet_transform(&eta, &f, &quad, run.config.engine)?;
    table.write_jsonl(run.create("qcoefficients.jsonl")?, Some(&run.hash))?;
    println!("{} coefficients, max modulus {:e}", table.values.len(), table.max_modulus());
    run.write_json(
        "qtransform.json",
        json!({ "nodes": table.values.len(), "max_modulus": table.max_modulus() }),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct LevelReport<E> {
    level: usize,
    nodes: usize,
    relative_error: E,
}

fn strictly_decreasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] < w[0])
}

pub fn reconstruct_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.wavelet.build(lattice)?;
    let f = run.config.signal.build(lattice)?;
    let mut levels = Vec::new();
    let mut last = None;
    for (i, spec) in run.config.levels.iter().enumerate() {
        let quad = GroupQuadrature::build(spec)?;
        let table = wavelet_transform(&eta, &f, &quad, run.config.engine)?;
        let back = reconstruct(&eta, &table, run.config.engine)?;
        let err = back.relative_error(&f)?;
        println!("level {i}: {} nodes, relative error {err:.6}", quad.len());
        levels.push(LevelReport { level: i, nodes: quad.len(), relative_error: err });
        last = Some(back);
    }
    last.expect("levels validated non-empty").save(&run.out.join("reconstruction"), Some(&run.hash))?;
    let errors: Vec<f64> = levels.iter().map(|l| l.relative_error).collect();
    let monotone = strictly_decreasing(&errors);
    run.write_json("reconstruct.json", json!({ "levels": levels, "monotone": monotone }))?;
    Ok(true)
}

pub fn qreconstruct_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.qwavelet.build(lattice)?;
    let f = run.config.qsignal.build(lattice)?;
    let mut levels = Vec::new();
    let mut last = None;
    for (i, spec) in run.config.levels.iter().enumerate() {
        let quad = GroupQuadrature::build(spec)?;
        let table = qwavelet_transform(&eta, &f, &quad, run.config.engine)?;
        let back = qreconstruct(&eta, &table, run.config.engine)?;
        let err = back.componentwise_error(&f)?;
        println!("level {i}: {} nodes, relative error f1 {:.6}, f2 {:.6}", quad.len(), err[0], err[1]);
        levels.push(LevelReport { level: i, nodes: quad.len(), relative_error: err });
        last = Some(back);
    }
    let back = last.expect("levels validated non-empty");
    back.f1.save(&run.out.join("reconstruction_f1"), Some(&run.hash))?;
    back.f2.save(&run.out.join("reconstruction_f2"), Some(&run.hash))?;
    let monotone = (0..2).all(|c| {
        let errors: Vec<f64> = levels.iter().map(|l| l.relative_error[c]).collect();
        strictly_decreasing(&errors)
    });
    run.write_json("qreconstruct.json", json!({ "levels": levels, "monotone": monotone }))?;
    Ok(true)
}

pub fn energy_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.wavelet.build(lattice)?;
    let f = run.config.signal.build(lattice)?;
    let ratio = energy_ratio(&eta, &f, &run.config.hstar)?;
    let qeta = run.config.qwavelet.build(lattice)?;
    let qf = run.config.qsignal.build(lattice)?;
    let qratio = q_energy_ratio(&qeta, &qf, &run.config.hstar)?;
    let within = |r: f64| (ENERGY_BAND.0..=ENERGY_BAND.1).contains(&r);
    println!("energy ratio {ratio:.6}, quaternionic {qratio:.6}");
    run.write_json(
        "energy.json",
        json!({
            "ratio": ratio,
            "within_band": within(ratio),
            "quaternionic_ratio": qratio,
            "quaternionic_within_band": within(qratio),
            "band": [ENERGY_BAND.0, ENERGY_BAND.1],
        }),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self { name, value, tolerance, pass: value <= tolerance }
    }
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::from_vec4(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)))
}

fn random_element(rng: &mut ChaCha8Rng) -> Result<AffineElement> {
    AffineElement::new(random_quaternion(rng), random_quaternion(rng))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn selftest_cmd(run: &Run) -> Result<Verdict> {
    const TIGHT: f64 = 1e-12;
    let cfg = &run.config.selftest;
    let mut rng = ChaCha8Rng::seed_from_u64(run.config.seed);
    let mut checks = Vec::new();

    let (one, i, j, k) = (Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K);
    let minus = |q: Quaternion| q.scale(-1.0);
    let table = [
        (i * i, minus(one)),
        (j * j, minus(one)),
        (k * k, minus(one)),
        (i * j, k),
        (j * k, i),
        (k * i, j),
        (i * j * k, minus(one)),
    ];
    let times_i = |m: [[num_complex::Complex64; 2]; 2], s: f64| m.map(|r| r.map(|v| v * num_complex::Complex64::new(0.0, s)));
    let exact = table.iter().all(|(a, b)| a == b)
        && one.matrix() == PAULI[0]
        && i.matrix() == times_i(PAULI[1], 1.0)
        && j.matrix() == times_i(PAULI[2], -1.0)
        && k.matrix() == times_i(PAULI[3], 1.0);
    checks.push(Check::at_most("multiplication_table", if exact { 0.0 } else { 1.0 }, 0.0));

    let (mut assoc, mut hom, mut det, mut real, mut group, mut delta): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..cfg.random_checks {
        let (p, q, r) = (random_quaternion(&mut rng), random_quaternion(&mut rng), random_quaternion(&mut rng));
        let scale = p.norm() * q.norm() * r.norm();
        assoc = assoc.max(((p * q) * r).max_abs_diff(&(p * (q * r))) / scale.max(1.0));
        let m = mat2_mul(&p.matrix(), &q.matrix());
        hom = hom.max(Quaternion::new(m[0][0], m[1][0]).max_abs_diff(&(p * q)) / (p.norm() * q.norm()).max(1.0));
        det = det.max(relative((p * q).det(), p.det() * q.det()));

        let a = p.to_real4x4();
        let root = a.determinant().sqrt();
        let ata = a.transpose().matmul(&a);
        let target = RealMatrix4 { entries: RealMatrix4::identity().entries.map(|row| row.map(|v| v * root)) };
        real = real.max(ata.max_abs_diff(&target) / root.max(1.0));

        let (g, h, l) = (random_element(&mut rng)?, random_element(&mut rng)?, random_element(&mut rng)?);
        let lhs = g.compose(&h)?.compose(&l)?;
        let rhs = g.compose(&h.compose(&l)?)?;
        group = group.max(lhs.max_abs_diff(&rhs) / (1.0 + lhs.b.norm() + lhs.a.norm()));
        let id = g.compose(&g.inverse()?)?;
        group = group.max(id.max_abs_diff(&AffineElement::identity()));
        delta = delta.max(relative(
            g.compose(&h)?.haar_densities().delta,
            g.haar_densities().delta * h.haar_densities().delta,
        ));
    }
    checks.push(Check::at_most("quaternion_associativity", assoc, TIGHT));
    checks.push(Check::at_most("matrix_homomorphism", hom, TIGHT));
    checks.push(Check::at_most("determinant_multiplicative", det, TIGHT));
    checks.push(Check::at_most("real_form_conformal", real, TIGHT));
    checks.push(Check::at_most("group_law", group, TIGHT));
    checks.push(Check::at_most("modular_function_homomorphism", delta, TIGHT));

    let elements = random_elements(cfg.elements, run.config.seed);
    let bump = BumpFunction::default();
    let coarse = invariance_report(&cfg.truncation, &elements, &bump)?;
    let fine = invariance_report(&cfg.truncation.refined_by(1.5), &elements, &bump)?;
    checks.push(Check::at_most("haar_invariance", coarse.max_group_error(), 0.02));
    checks.push(Check {
        name: "haar_invariance_refines",
        value: fine.max_group_error(),
        tolerance: coarse.max_group_error(),
        pass: fine.max_group_error() < coarse.max_group_error(),
    });

    let f = AnalyticGaussian::new([0.2, -0.1, 0.3, 0.0], 0.9)?.with_phase([0.5, 0.0, -0.4, 0.2]);
    let mut unitarity: f64 = 0.0;
    for _ in 0..cfg.random_checks.min(1000) {
        let g = random_element(&mut rng)?;
        unitarity = unitarity.max(relative(f.act(&g).norm_sqr(), f.norm_sqr()));
    }
    checks.push(Check::at_most("representation_unitary", unitarity, TIGHT));

    let all_pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        println!("{} {} {:.3e} (tolerance {:.1e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
    }
    run.write_json("selftest.json", json!({ "checks": checks, "all_pass": all_pass }))?;
    Ok(all_pass)
}

pub fn baseline_cmd(run: &Run) -> Result<Verdict> {
    let cfg = &run.config.baseline;
    let psi = Wavelet1D::new(Shape1D::GaussianDerivative { width: cfg.wavelet_width }, cfg.n, cfg.spacing)?;
    let gaussian = Wavelet1D::new(Shape1D::Gaussian { width: cfg.wavelet_width }, cfg.n, cfg.spacing)?;
    let s = cfg.signal()?;
    let mut levels = Vec::new();
    for (i, quad) in cfg.quadratures()?.iter().enumerate() {
        let table = cwt1d(&psi, &s, quad, run.config.engine)?;
        let ratio = cwt1d_energy_ratio(&psi, &table, &s);
        let err = cwt1d_reconstruct(&psi, &table, run.config.engine)?.relative_error(&s)?;
        println!("level {i}: energy ratio {ratio:.6}, relative error {err:.6}");
        levels.push(json!({ "level": i, "nodes": table.values.len(), "energy_ratio": ratio, "relative_error": err }));
    }
    let exact = std::f64::consts::TAU * cfg.wavelet_width.powi(4);
    run.write_json(
        "baseline1d.json",
        json!({
            "admissibility": psi.report,
            "c_psi_closed_form": exact,
            "c_psi_relative_error": psi.report.c_psi / exact - 1.0,
            "gaussian_admissible": gaussian.report.admissible,
            "levels": levels,
        }),
    )?;
    Ok(true)
}

pub fn kernel_cmd(run: &Run) -> Result<Verdict> {
    let lattice = run.config.lattice().map_err(quatwave::Error::InvalidSpec)?;
    let eta = run.config.qwavelet.build(lattice)?;
    let k = &run.config.kernel;
    let reference = k.reference.element()?;
    let dilation = Quaternion::from_vec4(k.dilation);
    let mut w = run.create("kernel.csv")?;
    writeln!(w, "# config_hash={}", run.hash)?;
    writeln!(w, "t,k0,k1,k2,k3,modulus")?;
    for t in k.offsets() {
        let g = AffineElement::new(Quaternion::from_vec4(k.direction.map(|d| d * t)), dilation)?;
        let v = reproducing_kernel(&eta, &reference, &g)?.value;
        let [k0, k1, k2, k3] = v.components();
        writeln!(w, "{t:e},{k0:e},{k1:e},{k2:e},{k3:e},{:e}", v.norm())?;
    }
    w.flush()?;
    println!("{} kernel samples", k.count);
    Ok(true)
}
