//! Quadrature rules for the left Haar measure on truncated group regions and
//! for the invariant measure `da/|a|⁴` on `H*`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::AffineElement;
use crate::quaternion::{Quaternion, RotationDilation};

/// Bounds and per-axis counts of a truncated group region.
///
/// Translations cover `[-b_halfwidth, b_halfwidth]⁴` with `b_count` cells per
/// axis; `λ1, λ2` each cover `[lambda_min, lambda_max]` with `lambda_count`
/// cells and `θ1, θ2` the full circle with `theta_count` cells. Nodes sit at
/// cell midpoints. Dilations with `λ1² + λ2² < epsilon0²` are dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub b_halfwidth: f64,
    pub b_count: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_count: usize,
    pub theta_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon0: Option<f64>,
}

impl Default for TruncationSpec {
    /// The measure-suite resolution.
    fn default() -> Self {
        Self {
            b_halfwidth: 6.0,
            b_count: 32,
            lambda_min: 0.0,
            lambda_max: 3.5,
            lambda_count: 32,
            theta_count: 32,
            epsilon0: None,
        }
    }
}

impl TruncationSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.b_halfwidth, self.lambda_min, self.lambda_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidSpec("truncation bounds must be finite".into()));
        }
        if self.b_count == 0 || self.lambda_count == 0 || self.theta_count == 0 {
            return Err(Error::EmptyRegion("a per-axis count is zero".into()));
        }
        if self.b_halfwidth <= 0.0 {
            return Err(Error::EmptyRegion(format!(
                "translation half-width {} is not positive",
                self.b_halfwidth
            )));
        }
        if self.lambda_min < 0.0 || self.lambda_max <= self.lambda_min {
            return Err(Error::EmptyRegion(format!(
                "lambda bounds [{}, {}] are inverted or negative",
                self.lambda_min, self.lambda_max
            )));
        }
        if let Some(eps) = self.epsilon0 {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidSpec(format!("epsilon0 = {eps} must be positive")));
            }
        }
        Ok(())
    }

    pub fn lambda_step(&self) -> f64 {
        (self.lambda_max - self.lambda_min) / self.lambda_count as f64
    }

    /// Radius of the excluded ball around `λ1 = λ2 = 0`: the configured value,
    /// else `lambda_min / 8`, else a eighth of the λ cell when `lambda_min` is 0.
    pub fn epsilon0_value(&self) -> f64 {
        self.epsilon0.unwrap_or(if self.lambda_min > 0.0 {
            self.lambda_min / 8.0
        } else {
            self.lambda_step() / 8.0
        })
    }

    pub fn b_step(&self) -> f64 {
        2.0 * self.b_halfwidth / self.b_count as f64
    }

    /// Cell midpoints along one translation axis.
    pub fn b_axis(&self) -> Vec<f64> {
        let h = self.b_step();
        (0..self.b_count)
            .map(|i| -self.b_halfwidth + (i as f64 + 0.5) * h)
            .collect()
    }

    /// Doubles every per-axis count, halving all cell sizes.
    pub fn refined(&self) -> Self {
        self.refined_by(2.0)
    }

    /// Multiplies every per-axis count by `factor`, rounding up.
    pub fn refined_by(&self, factor: f64) -> Self {
        let scale = |n: usize| (n as f64 * factor).ceil() as usize;
        Self {
            b_count: scale(self.b_count),
            lambda_count: scale(self.lambda_count),
            theta_count: scale(self.theta_count),
            ..self.clone()
        }
    }

    pub fn node_count_upper_bound(&self) -> usize {
        self.b_count.pow(4) * self.lambda_count.pow(2) * self.theta_count.pow(2)
    }
}

/// A dilation node with its left-Haar and invariant `H*` masses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationNode {
    pub a: Quaternion,
    pub decomp: RotationDilation,
    /// Chart cell volume × `λ1λ2` × `|a|⁻⁸`: the dilation part of `dμ_ℓ`.
    pub weight: f64,
    /// Chart cell volume × `λ1λ2` × `|a|⁻⁴`: the dilation part of `dμ_r`,
    /// which is also the invariant measure of `H*`.
    pub right_weight: f64,
}

/// The midpoint grid over `(λ1, θ1, λ2, θ2)`, evaluated lazily by index.
#[derive(Clone, Debug)]
pub struct DilationChart {
    lambdas: Vec<f64>,
    cos_sin: Vec<(f64, f64)>,
    thetas: Vec<f64>,
    cell: f64,
    epsilon0: f64,
}

impl DilationChart {
    pub fn new(spec: &TruncationSpec) -> Result<Self> {
        spec.validate()?;
        let dl = spec.lambda_step();
        let dt = TAU / spec.theta_count as f64;
        let lambdas: Vec<f64> = (0..spec.lambda_count)
            .map(|i| spec.lambda_min + (i as f64 + 0.5) * dl)
            .collect();
        let thetas: Vec<f64> = (0..spec.theta_count)
            .map(|i| (i as f64 + 0.5) * dt)
            .collect();
        let cos_sin = thetas.iter().map(|t| (t.cos(), t.sin())).collect();
        Ok(Self {
            lambdas,
            cos_sin,
            thetas,
            cell: dl * dl * dt * dt,
            epsilon0: spec.epsilon0_value(),
        })
    }

    /// Number of grid cells, including excluded ones.
    pub fn len(&self) -> usize {
        let (nl, nt) = (self.lambdas.len(), self.thetas.len());
        nl * nl * nt * nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node at a flat `(λ1, θ1, λ2, θ2)` row-major index, `None` when the
    /// cell lies inside the excluded ball.
    pub fn node(&self, idx: usize) -> Option<DilationNode> {
        let (nl, nt) = (self.lambdas.len(), self.thetas.len());
        let t2 = idx % nt;
        let l2 = (idx / nt) % nl;
        let t1 = (idx / (nt * nl)) % nt;
        let l1 = idx / (nt * nl * nt);
        let (lambda1, lambda2) = (self.lambdas[l1], self.lambdas[l2]);
        let det = lambda1 * lambda1 + lambda2 * lambda2;
        if det < self.epsilon0 * self.epsilon0 {
            return None;
        }
        let (c1, s1) = self.cos_sin[t1];
        let (c2, s2) = self.cos_sin[t2];
        let a = Quaternion::new(
            num_complex::Complex64::new(lambda1 * c1, lambda1 * s1),
            num_complex::Complex64::new(lambda2 * c2, lambda2 * s2),
        );
        let jac = self.cell * lambda1 * lambda2;
        let det2 = det * det;
        Some(DilationNode {
            a,
            decomp: RotationDilation {
                lambda1,
                theta1: self.thetas[t1],
                lambda2,
                theta2: self.thetas[t2],
            },
            weight: jac / (det2 * det2),
            right_weight: jac / det2,
        })
    }

    pub fn nodes(&self) -> Vec<DilationNode> {
        (0..self.len()).filter_map(|i| self.node(i)).collect()
    }
}

/// Finite weighted node set approximating `∫ dμ_ℓ` over a truncated region.
///
/// Nodes form the product of a uniform translation grid (the same axis in all
/// four coordinates) with a list of dilation nodes. The flat node index is
/// `a_index * b_count⁴ + b_index`, with `b_index` row-major over
/// `(x0, x3, x2, x1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupQuadrature {
    pub region: Option<TruncationSpec>,
    pub b_axis: Vec<f64>,
    /// Translation cell volume.
    pub b_cell: f64,
    pub a_nodes: Vec<DilationNode>,
}

impl GroupQuadrature {
    pub fn build(spec: &TruncationSpec) -> Result<Self> {
        let chart = DilationChart::new(spec)?;
        let a_nodes = chart.nodes();
        if a_nodes.is_empty() {
            return Err(Error::EmptyRegion(
                "every dilation cell lies inside the excluded ball".into(),
            ));
        }
        Ok(Self {
            region: Some(spec.clone()),
            b_axis: spec.b_axis(),
            b_cell: spec.b_step().powi(4),
            a_nodes,
        })
    }

    /// Custom node set, e.g. one containing the identity element.
    pub fn from_parts(b_axis: Vec<f64>, b_cell: f64, a_nodes: Vec<DilationNode>) -> Result<Self> {
        if b_axis.is_empty() || a_nodes.is_empty() {
            return Err(Error::EmptyRegion("no translation or dilation nodes".into()));
        }
        if !(b_cell > 0.0) || a_nodes.iter().any(|n| !(n.weight > 0.0)) {
            return Err(Error::InvalidSpec("quadrature weights must be positive".into()));
        }
        Ok(Self {
            region: None,
            b_axis,
            b_cell,
            a_nodes,
        })
    }

    pub fn b_count(&self) -> usize {
        self.b_axis.len()
    }

    pub fn b_nodes_per_a(&self) -> usize {
        self.b_axis.len().pow(4)
    }

    pub fn len(&self) -> usize {
        self.a_nodes.len() * self.b_nodes_per_a()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn b_vec(&self, b_index: usize) -> [f64; 4] {
        let n = self.b_axis.len();
        [
            self.b_axis[b_index / (n * n * n)],
            self.b_axis[(b_index / (n * n)) % n],
            self.b_axis[(b_index / n) % n],
            self.b_axis[b_index % n],
        ]
    }

    pub fn element(&self, index: usize) -> AffineElement {
        let per_a = self.b_nodes_per_a();
        let node = &self.a_nodes[index / per_a];
        AffineElement {
            b: Quaternion::from_vec4(self.b_vec(index % per_a)),
            a: node.a,
            decomp: node.decomp,
        }
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.b_cell * self.a_nodes[index / self.b_nodes_per_a()].weight
    }

    pub fn iter(&self) -> impl Iterator<Item = (AffineElement, f64)> + '_ {
        (0..self.len()).map(|i| (self.element(i), self.weight(i)))
    }

    /// Spacing of the translation axis when it is uniform.
    pub fn b_spacing(&self) -> Option<f64> {
        match self.b_axis.len() {
            0 => None,
            1 => Some(f64::INFINITY),
            n => {
                let h = (self.b_axis[n - 1] - self.b_axis[0]) / (n - 1) as f64;
                let uniform = self
                    .b_axis
                    .windows(2)
                    .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0));
                uniform.then_some(h)
            }
        }
    }
}

/// Chart for the invariant measure `da/|a|⁴` on `H*`:
/// `a = ρ(√(1-t) e^{iθ1}, √t e^{iθ2})` with `ρ = e^s`, on which the measure is
/// `½ ds dt dθ1 dθ2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HStarSpec {
    pub ln_rho_min: f64,
    pub ln_rho_max: f64,
    pub rho_count: usize,
    pub t_count: usize,
    pub theta_count: usize,
}

impl HStarSpec {
    pub fn nodes(&self) -> Result<Vec<(Quaternion, f64)>> {
        if self.rho_count == 0 || self.t_count == 0 || self.theta_count == 0 {
            return Err(Error::EmptyRegion("an H* chart count is zero".into()));
        }
        if !(self.ln_rho_max > self.ln_rho_min) || !self.ln_rho_min.is_finite() {
            return Err(Error::EmptyRegion(format!(
                "log-radius bounds [{}, {}] are inverted",
                self.ln_rho_min, self.ln_rho_max
            )));
        }
        let ds = (self.ln_rho_max - self.ln_rho_min) / self.rho_count as f64;
        let dt = 1.0 / self.t_count as f64;
        let dth = TAU / self.theta_count as f64;
        let w = 0.5 * ds * dt * dth * dth;
        let mut out = Vec::with_capacity(self.rho_count * self.t_count * self.theta_count.pow(2));
        for i in 0..self.rho_count {
            let rho = (self.ln_rho_min + (i as f64 + 0.5) * ds).exp();
            for j in 0..self.t_count {
                let t = (j as f64 + 0.5) * dt;
                let (l1, l2) = (rho * (1.0 - t).sqrt(), rho * t.sqrt());
                for k1 in 0..self.theta_count {
                    let th1 = (k1 as f64 + 0.5) * dth;
                    for k2 in 0..self.theta_count {
                        let th2 = (k2 as f64 + 0.5) * dth;
                        let a = Quaternion::new(
                            num_complex::Complex64::from_polar(l1, th1),
                            num_complex::Complex64::from_polar(l2, th2),
                        );
                        out.push((a, w));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Total mass per unit log-radius of the full chart, `2π²`.
    pub fn mass_per_log_radius() -> f64 {
        2.0 * PI * PI
    }
}
