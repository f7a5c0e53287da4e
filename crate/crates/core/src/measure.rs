//! Numerical invariance checks for the Haar measures.
//!
//! A smooth compactly supported test function `F(b, a) = φ(b) ψ(a)` is
//! integrated against the quadrature before and after translating its
//! argument by a fixed group element. Exact invariance makes the two sums
//! equal; the relative gap measures the quadrature error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::group::AffineElement;
use crate::par::{ordered_sum, ordered_vec_sum};
use crate::quadrature::{DilationChart, TruncationSpec};
use crate::quaternion::Quaternion;

/// Smooth bump supported on `|t| < 1`, equal to 1 at 0.
pub fn bump(t: f64) -> f64 {
    let s = 1.0 - t * t;
    if s <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / s).exp()
    }
}

/// Test function on the group, a product of per-axis bumps in `b` and a
/// radial bump in `a` around a fixed dilation.
#[derive(Clone, Copy, Debug)]
pub struct BumpFunction {
    pub b_radius: f64,
    pub a_center: Quaternion,
    pub a_radius: f64,
}

impl Default for BumpFunction {
    fn default() -> Self {
        Self {
            b_radius: 2.0,
            a_center: Quaternion::from_components(1.2, 0.5, -0.6, 0.9),
            a_radius: 1.0,
        }
    }
}

impl BumpFunction {
    fn b_factor(&self, b: [f64; 4]) -> f64 {
        if b.iter().any(|v| v.abs() >= self.b_radius) {
            return 0.0;
        }
        b.iter().map(|v| bump(v / self.b_radius)).product()
    }

    fn a_factor(&self, a: &Quaternion) -> f64 {
        let d = (*a - self.a_center).det();
        if d >= self.a_radius * self.a_radius {
            0.0
        } else {
            bump(d.sqrt() / self.a_radius)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    /// `|Σ w F(g0 g) / Σ w F(g) - 1|` per element, left Haar weights.
    pub left: Vec<f64>,
    /// `|Σ w F(g g0) / Σ w F(g) - 1|` per element, right Haar weights.
    pub right: Vec<f64>,
    /// Same protocol for `da/|a|⁴` on `H*` under `a ↦ a0 a`.
    pub hstar_left: Vec<f64>,
    /// Same protocol for `da/|a|⁴` on `H*` under `a ↦ a a0`.
    pub hstar_right: Vec<f64>,
}

impl InvarianceReport {
    pub fn max_group_error(&self) -> f64 {
        self.left.iter().chain(&self.right).fold(0.0, |m, v| m.max(*v))
    }

    pub fn max_hstar_error(&self) -> f64 {
        self.hstar_left
            .iter()
            .chain(&self.hstar_right)
            .fold(0.0, |m, v| m.max(*v))
    }
}

/// Random group elements with `|b_j| ≤ 1/4` and `|a| ∈ [0.8, 1.25]`, uniform
/// in direction.
pub fn random_elements(count: usize, seed: u64) -> Vec<AffineElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let b = Quaternion::from_vec4(std::array::from_fn(|_| rng.gen_range(-0.25..0.25)));
            let a = loop {
                let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let q = Quaternion::from_vec4(v);
                let n = q.norm();
                if n > 0.1 && n <= 1.0 {
                    break q.scale(rng.gen_range(0.8..1.25) / n);
                }
            };
            AffineElement::new(b, a).expect("nonzero dilation")
        })
        .collect()
}

pub fn invariance_report(
    spec: &TruncationSpec,
    elements: &[AffineElement],
    test_fn: &BumpFunction,
) -> Result<InvarianceReport> {
    let chart = DilationChart::new(spec)?;
    let b_axis = spec.b_axis();
    let db = spec.b_step();
    let nb = b_axis.len();
    let nb4 = nb.pow(4);
    let b_at = |i: usize| -> [f64; 4] {
        [
            b_axis[i / (nb * nb * nb)],
            b_axis[(i / (nb * nb)) % nb],
            b_axis[(i / nb) % nb],
            b_axis[i % nb],
        ]
    };
    let line_sum = |shift: f64| -> f64 {
        b_axis
            .iter()
            .map(|b| bump((b + shift) / test_fn.b_radius))
            .sum::<f64>()
            * db
    };
    let b_base = line_sum(0.0).powi(4);
    let m = elements.len();
    // Slots per element: left a-sum, right sum, H* left, H* right; then the
    // two unshifted baselines.
    let sums = ordered_vec_sum(chart.len(), 4 * m + 2, 4096, |i, acc: &mut [f64]| {
        let Some(node) = chart.node(i) else { return };
        let a = node.a;
        let psi = test_fn.a_factor(&a);
        acc[4 * m] += node.weight * psi;
        acc[4 * m + 1] += node.right_weight * psi;
        for (e, g0) in elements.iter().enumerate() {
            let left = test_fn.a_factor(&(g0.a * a));
            let right = test_fn.a_factor(&(a * g0.a));
            acc[4 * e] += node.weight * left;
            acc[4 * e + 2] += node.right_weight * left;
            acc[4 * e + 3] += node.right_weight * right;
            if right != 0.0 {
                let shift = (a * g0.b).vec4();
                acc[4 * e + 1] +=
                    node.right_weight * right * shift.iter().map(|&c| line_sum(c)).product::<f64>();
            }
        }
    });
    let (left_base, right_base) = (sums[4 * m], sums[4 * m + 1]);

    let mut report = InvarianceReport {
        left: Vec::new(),
        right: Vec::new(),
        hstar_left: Vec::new(),
        hstar_right: Vec::new(),
    };
    for (e, g0) in elements.iter().enumerate() {
        let b_left = ordered_sum(nb4, |i| {
            let moved = (g0.b + g0.a * Quaternion::from_vec4(b_at(i))).vec4();
            test_fn.b_factor(moved)
        }) * db.powi(4);
        let rel = |v: f64, base: f64| (v / base - 1.0).abs();
        report.left.push(rel(b_left * sums[4 * e], b_base * left_base));
        report.right.push(rel(sums[4 * e + 1], b_base * right_base));
        report.hstar_left.push(rel(sums[4 * e + 2], right_base));
        report.hstar_right.push(rel(sums[4 * e + 3], right_base));
    }
    Ok(report)
}
