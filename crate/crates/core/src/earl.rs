//! Earl's interpolation bound and Beurling-type dual systems `f_j(lambda_k) = delta_jk`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::disk::{blaschke_factor, delta_within, log_pseudo_distance_sq, one_minus_conj_product, pseudo_distance_sq, GapPoint};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{grid_sup, local_patch, GridSpec, SupResult};

/// `(2 - d^2 + 2 sqrt(1 - d^2)) / d^2`, i.e. `((1 + sqrt(1 - d^2)) / d)^2`.
pub fn earl_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param("delta", format!("must lie in (0, 1], got {delta}")));
    }
    let d2 = delta * delta;
    Ok((2.0 - d2 + 2.0 * (1.0 - d2).sqrt()) / d2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    /// `f_j = (B_j / B_j(lambda_j)) ((1 - |lambda_j|^2) / (1 - conj(lambda_j) z))^2`
    KernelSquared,
    /// `f_j = (B_j / B_j(lambda_j)) exp(-(phi_j - phi_j(lambda_j)))`, where `phi_j` is `l` times the
    /// Herglotz integral of the boundary set outside the arc of half-width `r gap_j` and inside
    /// the arc of half-width `gap_j / r`, both centred at `arg lambda_j`.
    Damped { l: f64, r: f64 },
}

impl Construction {
    /// Damping scaled to the window: `r = sqrt(min gap ratio) / 3`, `l = 1.5 ln r`.
    pub fn damped_for(zeros: &[GapPoint]) -> Result<Self> {
        let mut gaps: Vec<f64> = zeros.iter().map(GapPoint::gap).collect();
        gaps.sort_by(|a, b| b.total_cmp(a));
        let ratio = gaps.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
        let r = if ratio.is_finite() { (ratio.sqrt() / 3.0).max(2.0) } else { 1e6 };
        Ok(Construction::Damped { l: 1.5 * r.ln(), r })
    }
}

/// `H(z) = (1/2pi) int_arc (e^{it} + z)/(e^{it} - z) dt` for the arc `[centre - half, centre + half]`.
fn herglotz_arc(z: &GapPoint, centre: f64, half: f64) -> Complex64 {
    let half = half.min(PI);
    let log_one_minus = |b: f64| {
        let psi = z.arg() - b;
        let s = (psi * 0.5).sin();
        let r = z.modulus();
        Complex64::new(z.gap() + 2.0 * r * s * s, -r * psi.sin()).ln()
    };
    let diff = log_one_minus(centre + half) - log_one_minus(centre - half);
    Complex64::new(half / PI, 0.0) - Complex64::new(0.0, 1.0 / PI) * diff
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeurlingSystem {
    zeros: Vec<GapPoint>,
    gamma: f64,
    construction: Construction,
    /// `phi_j(lambda_j)` for the damped construction.
    anchors: Vec<Complex64>,
}

impl BeurlingSystem {
    /// `gamma = min_j prod_{k != j} rho(lambda_j, lambda_k)` over the window.
    pub fn new(zeros: Vec<GapPoint>, construction: Construction) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::param("zeros", "must not be empty"));
        }
        let mut gamma: f64 = 1.0;
        for j in 0..zeros.len() {
            gamma = gamma.min(delta_within(&zeros, j)?);
        }
        if let Construction::Damped { l, r } = construction {
            if !(l > 0.0 && r > 1.0) {
                return Err(Error::param("damping", format!("needs l > 0 and r > 1, got l = {l}, r = {r}")));
            }
        }
        let mut system = BeurlingSystem { zeros, gamma, construction, anchors: Vec::new() };
        system.anchors = (0..system.zeros.len()).map(|j| system.phi(j, &system.zeros[j])).collect();
        Ok(system)
    }

    pub fn zeros(&self) -> &[GapPoint] {
        &self.zeros
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// `((1 + sqrt(1 - gamma^2)) / gamma)^2`
    pub fn bound(&self) -> f64 {
        earl_bound(self.gamma).expect("gamma lies in (0, 1]")
    }

    fn phi(&self, j: usize, z: &GapPoint) -> Complex64 {
        match self.construction {
            Construction::KernelSquared => Complex64::new(0.0, 0.0),
            Construction::Damped { l, r } => {
                let c = self.zeros[j];
                let outer = herglotz_arc(z, c.arg(), r * c.gap());
                let inner = herglotz_arc(z, c.arg(), c.gap() / r);
                (Complex64::new(1.0, 0.0) - outer + inner) * l
            }
        }
    }

    /// `f_j(z)` for 0-based `j`.
    pub fn eval(&self, j: usize, z: &GapPoint) -> Complex64 {
        let lj = &self.zeros[j];
        let mut log_mod_sq = 0.0;
        let mut phase = Complex64::new(1.0, 0.0);
        for (k, a) in self.zeros.iter().enumerate() {
            if k == j {
                continue;
            }
            if pseudo_distance_sq(a, z).0 == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            log_mod_sq += log_pseudo_distance_sq(a, z) - log_pseudo_distance_sq(a, lj);
            let (bz, bl) = (blaschke_factor(a, z), blaschke_factor(a, lj));
            phase *= (bz / bz.norm()) / (bl / bl.norm());
        }
        let mut value = phase * (0.5 * log_mod_sq).exp();
        match self.construction {
            Construction::KernelSquared => {
                let k = Complex64::new(lj.weight(), 0.0) / one_minus_conj_product(lj, z);
                value *= k * k;
            }
            Construction::Damped { .. } => {
                value *= (-(self.phi(j, z) - self.anchors[j])).exp();
            }
        }
        value
    }

    pub fn sum_abs(&self, z: &GapPoint) -> f64 {
        (0..self.zeros.len()).map(|j| self.eval(j, z).norm()).sum()
    }

    /// Polar grid, local patches around every zero, and boundary rings beneath them.
    pub fn search_points(&self, grid: &GridSpec) -> Vec<GapPoint> {
        let mut pts = grid.points();
        pts.extend(self.zeros.iter().copied());
        for z in &self.zeros {
            pts.extend(local_patch(z, 6, 8));
            for t in 0..=40 {
                let gap = z.gap() * 0.5f64.powi(t);
                if gap < 1e-300 {
                    break;
                }
                for u in -6..=16 {
                    for sign in [-1.0, 1.0] {
                        if let Ok(p) = GapPoint::new(z.arg() + sign * z.gap() * 2f64.powi(u), gap) {
                            pts.push(p);
                        }
                    }
                }
            }
        }
        pts
    }

    /// Grid estimate of `sup_z sum_j |f_j(z)|`.
    pub fn grid_sup(&self, grid: &GridSpec, exec: Exec) -> SupResult {
        let pts = self.search_points(grid);
        grid_sup(&pts, |z| Some(self.sum_abs(z)), grid.refine_steps, exec).expect("search set is nonempty")
    }
}

/// `f = sum_j w_j f_j`, so `f(lambda_j) = w_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedInterpolant {
    pub system: BeurlingSystem,
    pub weights: Vec<Complex64>,
}

impl BoundedInterpolant {
    /// `bound(gamma) * ||w||_inf`
    pub fn certified_bound(&self) -> f64 {
        self.system.bound() * self.weights.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: &GapPoint) -> Complex64 {
        self.weights.iter().enumerate().filter(|(_, w)| w.norm() > 0.0).map(|(j, w)| w * self.system.eval(j, z)).sum()
    }

    pub fn grid_sup(&self, grid: &GridSpec, exec: Exec) -> SupResult {
        let pts = self.system.search_points(grid);
        grid_sup(&pts, |z| Some(self.eval(z).norm()), grid.refine_steps, exec).expect("search set is nonempty")
    }
}

pub fn interpolate_bounded(system: &BeurlingSystem, weights: Vec<Complex64>) -> Result<BoundedInterpolant> {
    if weights.len() != system.zeros.len() {
        return Err(Error::Dimension { expected: system.zeros.len(), got: weights.len() });
    }
    Ok(BoundedInterpolant { system: system.clone(), weights })
}
