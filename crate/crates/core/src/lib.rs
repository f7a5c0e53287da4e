//! Quaternionic affine group, its unitary representations on complex and
//! quaternionic Hilbert spaces, and the associated continuous wavelet
//! transforms, with a one-dimensional real-line transform as a reference.

pub mod baseline;
pub mod cwt;
pub mod error;
pub mod field;
pub mod group;
pub mod measure;
mod par;
pub mod qcwt;
pub mod quadrature;
pub mod quaternion;

pub use error::{Error, Result};
pub use field::{Domain, Lattice4, SampledField};
pub use group::{AffineElement, HaarDensities};
pub use quadrature::{GroupQuadrature, HStarSpec, TruncationSpec};
pub use quaternion::{Quaternion, RealMatrix4, RotationDilation};
