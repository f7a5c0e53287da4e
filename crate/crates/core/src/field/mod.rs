//! Complex functions sampled on uniform 4-D lattices.

pub mod analytic;
pub mod fft;
pub mod lattice;
pub mod pullback;
pub mod raw;
pub mod sampled;
pub mod spectrum;

pub use analytic::{AnalyticGaussian, GaussianSum, Prefactor};
pub use lattice::Lattice4;
pub use pullback::affine_pullback;
pub use sampled::{Domain, SampledField};
pub use spectrum::{sample_spectrum, LatticeSpectrum, RadialSpectrum, SharedSpectrum, Spectrum};
