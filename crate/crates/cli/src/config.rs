use std::path::{Path, PathBuf};

use num_complex::Complex64;
use quatwave::baseline::{Quadrature1D, Signal1D};
use quatwave::cwt::{energy_hstar_default, Engine, Wavelet};
use quatwave::field::{AnalyticGaussian, GaussianSum};
use quatwave::qcwt::{QWavelet, QuaternionField};
use quatwave::{AffineElement, Lattice4, Quaternion, SampledField, TruncationSpec, HStarSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything a run depends on. Missing fields take their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeConfig,
    pub engine: Engine,
    pub wavelet: WaveletConfig,
    pub signal: SignalConfig,
    pub qwavelet: QWaveletConfig,
    pub qsignal: QSignalConfig,
    /// Group region sampled by `transform` and `qtransform`.
    pub truncation: TruncationSpec,
    /// Refinement levels for `reconstruct` and `qreconstruct`, coarse first.
    pub levels: Vec<TruncationSpec>,
    /// Dilation chart used by `energy-check`.
    pub hstar: HStarSpec,
    pub selftest: SelftestConfig,
    pub kernel: KernelConfig,
    pub baseline: BaselineConfig,
    pub seed: u64,
    /// Worker threads; 0 lets the thread pool decide.
    pub workers: usize,
}

fn level(b_count: usize, lambda_count: usize) -> TruncationSpec {
    TruncationSpec {
        b_halfwidth: 9.6,
        b_count,
        lambda_min: 0.1,
        lambda_max: 6.0,
        lambda_count,
        theta_count: 1,
        epsilon0: None,
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lattice: LatticeConfig::default(),
            engine: Engine::Spectral,
            wavelet: WaveletConfig::Shipped,
            signal: SignalConfig::default(),
            qwavelet: QWaveletConfig::default(),
            qsignal: QSignalConfig::default(),
            truncation: level(8, 8),
            levels: vec![level(4, 4), level(8, 8), level(16, 16)],
            hstar: energy_hstar_default(),
            selftest: SelftestConfig::default(),
            kernel: KernelConfig::default(),
            baseline: BaselineConfig::default(),
            seed: 0,
            workers: 0,
        }
    }
}

/// Centred cubic lattice with `n` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub n: usize,
    pub spacing: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { n: 16, spacing: 1.2 }
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WaveletConfig {
    /// `η̂(k) = ‖k‖² exp(-‖k‖²/2)`.
    Shipped,
    /// `η̂(k) = ‖k‖^power exp(-width²‖k‖²/2)`.
    Radial { power: i32, width: f64 },
    /// Closed-form radial wavelet with spectrum `‖k‖² exp(-w²‖k‖²/2)`.
    MexicanHat {
        width: f64,
        #[serde(default = "one")]
        amplitude: Complex64,
    },
    /// Samples from a QWT-RAW file stem.
    Raw { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    Gaussians { terms: Vec<AnalyticGaussian> },
    Raw { path: PathBuf },
}

fn gaussian(center: [f64; 4], width: f64, amplitude: Complex64) -> AnalyticGaussian {
    AnalyticGaussian::new(center, width)
        .expect("positive width")
        .with_amplitude(amplitude)
}

impl Default for SignalConfig {
    fn default() -> Self {
        SignalConfig::Gaussians {
            terms: vec![gaussian([0.0; 4], 1.0, one())],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QWaveletConfig {
    pub eta1: WaveletConfig,
    pub eta2: WaveletConfig,
}

impl Default for QWaveletConfig {
    fn default() -> Self {
        Self {
            eta1: WaveletConfig::MexicanHat { width: 1.0, amplitude: one() },
            eta2: WaveletConfig::MexicanHat {
                width: 1.2,
                amplitude: Complex64::new(0.0, 0.5),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QSignalConfig {
    pub f1: SignalConfig,
    pub f2: SignalConfig,
}

impl Default for QSignalConfig {
    fn default() -> Self {
        Self {
            f1: SignalConfig::Gaussians {
                terms: vec![gaussian([0.5, 0.0, -0.3, 0.0], 1.0, one())],
            },
            f2: SignalConfig::Gaussians {
                terms: vec![gaussian([-0.4, 0.2, 0.0, 0.3], 1.1, Complex64::new(0.3, 0.6))],
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelftestConfig {
    /// Random samples per algebraic check.
    pub random_checks: usize,
    /// Group elements probed by the invariance suite.
    pub elements: usize,
    pub truncation: TruncationSpec,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            random_checks: 10_000,
            elements: 20,
            truncation: TruncationSpec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementConfig {
    pub b: [f64; 4],
    pub a: [f64; 4],
}

impl ElementConfig {
    pub fn element(&self) -> quatwave::Result<AffineElement> {
        AffineElement::new(Quaternion::from_vec4(self.b), Quaternion::from_vec4(self.a))
    }
}

/// `K(reference; (t · direction, dilation))` for `count` values of `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub reference: ElementConfig,
    pub direction: [f64; 4],
    pub dilation: [f64; 4],
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            reference: ElementConfig {
                b: [0.0; 4],
                a: [1.0, 0.0, 0.0, 0.0],
            },
            direction: [1.0, 0.0, 0.0, 0.0],
            dilation: [1.0, 0.0, 0.0, 0.0],
            t_min: -4.0,
            t_max: 4.0,
            count: 33,
        }
    }
}

impl KernelConfig {
    pub fn offsets(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.t_min];
        }
        let step = (self.t_max - self.t_min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.t_min + i as f64 * step).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level1D {
    pub stride: usize,
    pub da: f64,
}

/// `x e^{-x²/(2w²)}` analysing `e^{-(x-c)²/(2σ²)} e^{iωx}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    pub n: usize,
    pub spacing: f64,
    pub wavelet_width: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub levels: Vec<Level1D>,
    pub signal_center: f64,
    pub signal_width: f64,
    pub signal_frequency: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            n: 1024,
            spacing: 0.1,
            wavelet_width: 1.0,
            a_min: 0.02,
            a_max: 20.0,
            levels: vec![
                Level1D { stride: 4, da: 0.08 },
                Level1D { stride: 2, da: 0.04 },
                Level1D { stride: 1, da: 0.02 },
            ],
            signal_center: 0.5,
            signal_width: 1.0,
            signal_frequency: 3.0,
        }
    }
}

impl BaselineConfig {
    pub fn signal(&self) -> quatwave::Result<Signal1D> {
        let (c, w, k) = (self.signal_center, self.signal_width, self.signal_frequency);
        Signal1D::from_fn(self.n, self.spacing, |x| {
            Complex64::from_polar((-(x - c).powi(2) / (2.0 * w * w)).exp(), k * x)
        })
    }

    pub fn quadratures(&self) -> quatwave::Result<Vec<Quadrature1D>> {
        self.levels
            .iter()
            .map(|l| Quadrature1D::new(l.stride, self.a_min, self.a_max, l.da))
            .collect()
    }
}

/// Resolves a relative input path against the config file's directory.
fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut config: RunConfig =
            serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.rebase_paths(base);
        Ok(config)
    }

    fn rebase_paths(&mut self, base: &Path) {
        for w in [&mut self.wavelet, &mut self.qwavelet.eta1, &mut self.qwavelet.eta2] {
            if let WaveletConfig::Raw { path } = w {
                *path = resolve(base, path);
            }
        }
        for s in [&mut self.signal, &mut self.qsignal.f1, &mut self.qsignal.f2] {
            if let SignalConfig::Raw { path } = s {
                *path = resolve(base, path);
            }
        }
    }

    /// Cheap checks that need no transform work.
    pub fn validate(&self) -> Result<(), String> {
        let err = |e: quatwave::Error| e.to_string();
        self.lattice()?;
        self.truncation.validate().map_err(err)?;
        if self.levels.is_empty() {
            return Err("at least one refinement level is required".into());
        }
        for l in &self.levels {
            l.validate().map_err(err)?;
        }
        self.hstar.nodes().map_err(err)?;
        self.selftest.truncation.validate().map_err(err)?;
        if self.selftest.random_checks == 0 || self.selftest.elements == 0 {
            return Err("selftest sample counts must be positive".into());
        }
        let k = &self.kernel;
        k.reference.element().map_err(err)?;
        if Quaternion::from_vec4(k.dilation).det() == 0.0 {
            return Err("kernel dilation must be nonzero".into());
        }
        if k.count == 0 || !(k.t_max >= k.t_min) || k.direction.iter().chain(&k.dilation).any(|v| !v.is_finite()) {
            return Err("kernel sweep needs count ≥ 1, t_max ≥ t_min and finite vectors".into());
        }
        let b = &self.baseline;
        if b.n < 2 || !(b.spacing > 0.0) || !(b.wavelet_width > 0.0) || !(b.signal_width > 0.0) {
            return Err("baseline lattice and widths must be positive".into());
        }
        if b.levels.is_empty() {
            return Err("baseline needs at least one level".into());
        }
        b.quadratures().map_err(err)?;
        for w in [&self.wavelet, &self.qwavelet.eta1, &self.qwavelet.eta2] {
            match w {
                WaveletConfig::Radial { width, .. } | WaveletConfig::MexicanHat { width, .. } if !(*width > 0.0) => {
                    return Err(format!("wavelet width {width} must be positive"));
                }
                WaveletConfig::Raw { path } => check_raw(path)?,
                _ => {}
            }
        }
        for s in [&self.signal, &self.qsignal.f1, &self.qsignal.f2] {
            match s {
                SignalConfig::Gaussians { terms } => {
                    for t in terms {
                        t.validate().map_err(err)?;
                    }
                }
                SignalConfig::Raw { path } => check_raw(path)?,
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice4, String> {
        Lattice4::centered(self.lattice.n, self.lattice.spacing).map_err(|e| e.to_string())
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn check_raw(stem: &Path) -> Result<(), String> {
    SampledField::load(stem)
        .map(|_| ())
        .map_err(|e| format!("cannot load field {}: {e}", stem.display()))
}

impl WaveletConfig {
    pub fn build(&self, lattice: Lattice4) -> quatwave::Result<Wavelet> {
        match self {
            WaveletConfig::Shipped => Wavelet::shipped(lattice),
            WaveletConfig::Radial { power, width } => Wavelet::radial(lattice, *power, *width),
            WaveletConfig::MexicanHat { width, amplitude } => {
                Wavelet::from_gaussians(lattice, GaussianSum::mexican_hat(*width)?.scale(*amplitude))
            }
            WaveletConfig::Raw { path } => {
                let field = SampledField::load(path)?;
                field.lattice.ensure_matches(&lattice)?;
                Wavelet::from_field(field)
            }
        }
    }
}

impl SignalConfig {
    pub fn build(&self, lattice: Lattice4) -> quatwave::Result<SampledField> {
        match self {
            SignalConfig::Gaussians { terms } => Ok(GaussianSum::new(terms.clone())?.sample(lattice)),
            SignalConfig::Raw { path } => {
                let field = SampledField::load(path)?;
                field.lattice.ensure_matches(&lattice)?;
                field.ensure_position()?;
                Ok(field)
            }
        }
    }
}

impl QWaveletConfig {
    pub fn build(&self, lattice: Lattice4) -> quatwave::Result<QWavelet> {
        QWavelet::new(self.eta1.build(lattice)?, self.eta2.build(lattice)?)
    }
}

impl QSignalConfig {
    pub fn build(&self, lattice: Lattice4) -> quatwave::Result<QuaternionField> {
        QuaternionField::new(self.f1.build(lattice)?, self.f2.build(lattice)?)
    }
}
