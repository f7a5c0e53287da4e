use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform isotropic lattice on R⁴ with axes ordered `(x0, x3, x2, x1)`.
///
/// Values are stored row-major with `x0` slowest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice4 {
    pub origin: [f64; 4],
    pub spacing: f64,
    pub counts: [usize; 4],
}

impl Lattice4 {
    pub fn new(origin: [f64; 4], spacing: f64, counts: [usize; 4]) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidSpec(format!("lattice spacing {spacing} must be positive")));
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::InvalidSpec(format!("lattice counts {counts:?} must be at least 2")));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidSpec("lattice origin must be finite".into()));
        }
        Ok(Self {
            origin,
            spacing,
            counts,
        })
    }

    /// `n` points per axis with spacing `h`, symmetric about the origin.
    pub fn centered(n: usize, spacing: f64) -> Result<Self> {
        let o = -(n as f64 - 1.0) * spacing / 2.0;
        Self::new([o; 4], spacing, [n; 4])
    }

    /// Frequency lattice of the unitary DFT of a position lattice: spacing
    /// `2π/(N h)`, index `j` at wavenumber `(j - ⌊N/2⌋)·dk`.
    pub fn reciprocal(&self) -> Result<Self> {
        let n = self.isotropic_count()?;
        let dk = TAU / (n as f64 * self.spacing);
        let o = -((n / 2) as f64) * dk;
        Self::new([o; 4], dk, self.counts)
    }

    /// Position lattice whose reciprocal is `self`, given its origin.
    pub fn position_for(&self, position_origin: [f64; 4]) -> Result<Self> {
        let n = self.isotropic_count()?;
        let h = TAU / (n as f64 * self.spacing);
        Self::new(position_origin, h, self.counts)
    }

    pub fn isotropic_count(&self) -> Result<usize> {
        let n = self.counts[0];
        if self.counts.iter().any(|&c| c != n) {
            return Err(Error::LatticeMismatch(format!(
                "Fourier transforms need equal counts per axis, found {:?}",
                self.counts
            )));
        }
        Ok(n)
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(4)
    }

    pub fn strides(&self) -> [usize; 4] {
        let c = self.counts;
        [c[1] * c[2] * c[3], c[2] * c[3], c[3], 1]
    }

    pub fn flat(&self, idx: [usize; 4]) -> usize {
        let s = self.strides();
        idx[0] * s[0] + idx[1] * s[1] + idx[2] * s[2] + idx[3]
    }

    pub fn unflat(&self, flat: usize) -> [usize; 4] {
        let s = self.strides();
        [
            flat / s[0],
            (flat / s[1]) % self.counts[1],
            (flat / s[2]) % self.counts[2],
            flat % self.counts[3],
        ]
    }

    pub fn point(&self, idx: [usize; 4]) -> [f64; 4] {
        std::array::from_fn(|j| self.origin[j] + idx[j] as f64 * self.spacing)
    }

    pub fn point_flat(&self, flat: usize) -> [f64; 4] {
        self.point(self.unflat(flat))
    }

    /// Coordinates along one axis.
    pub fn axis(&self, j: usize) -> Vec<f64> {
        (0..self.counts[j])
            .map(|i| self.origin[j] + i as f64 * self.spacing)
            .collect()
    }

    pub fn approx_eq(&self, other: &Lattice4) -> bool {
        let tol = 1e-12 * self.spacing.max(1.0);
        self.counts == other.counts
            && (self.spacing - other.spacing).abs() <= tol
            && self
                .origin
                .iter()
                .zip(&other.origin)
                .all(|(a, b)| (a - b).abs() <= tol.max(1e-12 * a.abs()))
    }

    pub fn ensure_matches(&self, other: &Lattice4) -> Result<()> {
        if self.approx_eq(other) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let lat = Lattice4::new([0.0; 4], 0.5, [2, 3, 4, 5]).unwrap();
        for flat in 0..lat.len() {
            assert_eq!(lat.flat(lat.unflat(flat)), flat);
        }
        assert_eq!(lat.point([1, 2, 3, 4]), [0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn centered_is_symmetric() {
        let lat = Lattice4::centered(8, 1.0).unwrap();
        let ax = lat.axis(0);
        assert_eq!(ax[0], -3.5);
        assert_eq!(ax[7], 3.5);
    }

    #[test]
    fn reciprocal_spacing() {
        let lat = Lattice4::centered(16, 0.5).unwrap();
        let k = lat.reciprocal().unwrap();
        assert!((k.spacing - TAU / 8.0).abs() < 1e-15);
        assert_eq!(k.origin[0], -8.0 * k.spacing);
        let back = k.position_for(lat.origin).unwrap();
        assert!(back.approx_eq(&lat));
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Lattice4::new([0.0; 4], 0.0, [4; 4]).is_err());
        assert!(Lattice4::new([0.0; 4], 1.0, [1, 4, 4, 4]).is_err());
        let uneven = Lattice4::new([0.0; 4], 1.0, [4, 4, 4, 6]).unwrap();
        assert!(matches!(uneven.reciprocal(), Err(Error::LatticeMismatch(_))));
    }
}
