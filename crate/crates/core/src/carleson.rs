//! Carleson embedding constants and reproducing-kernel testing constants of the tail
//! measures `mu_N`, `nu_N` and `sigma_N`.
//!
//! Both constants are reported squared: `C = sup ||f||^2_{L^2(m)} / ||f||^2` and
//! `R^2 = sup_z ||k_z||^2_{L^2(m)}`.

use serde::{Deserialize, Serialize};

use crate::disk::{pseudo_distance_sq, BlaschkeSequence, DeltaEntry, GapPoint, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{grid_sup, GridSpec, SupResult};
use crate::inner::InnerFunction;
use crate::kernels::{build_gram, normalized_overlap, KernelFamily};
use crate::spectral::{extremal_eigs, EigenOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// weights `1 - |lambda_k|^2`
    Mu,
    /// weights `(1 - |lambda_k|^2) / delta_k`
    Nu,
    /// weights `||K^Theta_{lambda_k}||^-2`
    Sigma,
}

impl MeasureKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Mu => "mu_N",
            MeasureKind::Nu => "nu_N",
            MeasureKind::Sigma => "sigma_N",
        }
    }
}

/// Discrete measure on the window points `lambda_N..=lambda_M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub kind: MeasureKind,
    pub window: Window,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn mu(seq: &BlaschkeSequence, window: Window) -> Result<Self> {
        let window = seq.window(window.start, window.end)?;
        let weights = seq.points()[window.range()].iter().map(GapPoint::weight).collect();
        Ok(DiscreteMeasure { kind: MeasureKind::Mu, window, weights })
    }

    /// `deltas` must hold the profile entries for every index in the window.
    pub fn nu(seq: &BlaschkeSequence, window: Window, deltas: &[DeltaEntry]) -> Result<Self> {
        let window = seq.window(window.start, window.end)?;
        let mut weights = Vec::with_capacity(window.len());
        for k in window.indices() {
            let entry =
                deltas.iter().find(|e| e.index == k).ok_or_else(|| Error::param("deltas", format!("missing delta_{k}")))?;
            weights.push(seq.point(k).weight() / entry.value);
        }
        Ok(DiscreteMeasure { kind: MeasureKind::Nu, window, weights })
    }

    pub fn sigma(seq: &BlaschkeSequence, theta: &InnerFunction, window: Window) -> Result<Self> {
        let window = seq.window(window.start, window.end)?;
        let mut weights = Vec::with_capacity(window.len());
        for k in window.indices() {
            let p = seq.point(k);
            let one_minus = theta.eval(p).one_minus_mod_sq();
            if !(one_minus > 0.0) {
                return Err(Error::KernelDegenerate { index: k, one_minus_mod_sq: one_minus });
            }
            weights.push(p.weight() / one_minus);
        }
        Ok(DiscreteMeasure { kind: MeasureKind::Sigma, window, weights })
    }

    /// `s_k = weight_k ||K_{lambda_k}||^2` for the family, after checking the pairing.
    fn kernel_scales(&self, family: &KernelFamily, seq: &BlaschkeSequence) -> Result<Vec<f64>> {
        let ok = matches!(
            (self.kind, family),
            (MeasureKind::Mu | MeasureKind::Nu, KernelFamily::Hardy) | (MeasureKind::Sigma, KernelFamily::Model(_))
        );
        if !ok {
            return Err(Error::IncompatibleMeasure { measure: self.kind.name(), family: family.name() });
        }
        Ok(self
            .window
            .indices()
            .zip(&self.weights)
            .map(|(k, w)| {
                let p = seq.point(k);
                let ratio = w / p.weight();
                match family.theta() {
                    None => ratio,
                    Some(theta) => ratio * theta.eval(p).one_minus_mod_sq(),
                }
            })
            .collect())
    }
}

/// A value with a one-sided truncation error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bar: f64,
}

impl Estimate {
    pub fn upper(&self) -> f64 {
        self.value + self.error_bar
    }
}

/// `C(measure) = lambda_max(S^{1/2} G S^{1/2})` over the measure's window.
pub fn carleson_constant(
    measure: &DiscreteMeasure,
    family: &KernelFamily,
    seq: &BlaschkeSequence,
    opts: &EigenOptions,
    exec: Exec,
) -> Result<Estimate> {
    let scales = measure.kernel_scales(family, seq)?;
    let gram = build_gram(family, seq, measure.window, exec)?;
    let roots: Vec<f64> = scales.iter().map(|s| s.sqrt()).collect();
    let eig = extremal_eigs(&gram.matrix().scaled(&roots), opts, exec)?;
    let smax = scales.iter().cloned().fold(0.0, f64::max);
    Ok(Estimate { value: eig.lambda_max, error_bar: gram.truncation_certificate * smax })
}

/// `R^2 = sup_z sum_k s_k |<k_z, k_{lambda_k}>|^2` over the grid and the window points.
pub fn reproducing_constant(
    measure: &DiscreteMeasure,
    family: &KernelFamily,
    seq: &BlaschkeSequence,
    grid: &GridSpec,
    exec: Exec,
) -> Result<SupResult> {
    let scales = measure.kernel_scales(family, seq)?;
    let points = &seq.points()[measure.window.range()];
    let theta = family.theta();
    let values: Vec<_> = points.iter().map(|p| theta.map(|t| t.eval(p))).collect();
    let mut candidates = points.to_vec();
    candidates.extend(grid.points());
    let f = |z: &GapPoint| -> Option<f64> {
        let tz = theta.map(|t| t.eval(z));
        let mut total = 0.0;
        for ((p, tp), s) in points.iter().zip(&values).zip(&scales) {
            total += s * normalized_overlap(theta, p, tp.as_ref(), z, tz.as_ref()).ok()?.norm_sqr();
        }
        Some(total)
    };
    grid_sup(&candidates, f, grid.refine_steps, exec)
        .ok_or_else(|| Error::param("grid", "no grid point admits a normalized kernel"))
}

/// Both sides of `prod (1 - x_k) >= 1 - sum x_k` with `x_k = 1 - rho(lambda_k, lambda_probe)^2`
/// over the window without the probe.
pub fn weierstrass_gap(seq: &BlaschkeSequence, window: Window, probe: usize) -> Result<(f64, f64)> {
    let window = seq.window(window.start, window.end)?;
    if !window.indices().contains(&probe) {
        return Err(Error::param("probe", format!("index {probe} is outside [{}, {}]", window.start, window.end)));
    }
    let mut product = 1.0;
    let mut sum = 0.0;
    for k in window.indices().filter(|&k| k != probe) {
        let (rho_sq, x) = pseudo_distance_sq(seq.point(k), seq.point(probe));
        product *= rho_sq;
        sum += x;
    }
    Ok((product, 1.0 - sum))
}

/// `(2 - prod rho^2) / (1 + kappa)^2`, a lower bound for `R^2_Theta(sigma_N)`.
pub fn lower_chain(kappa: f64, product: f64) -> f64 {
    (2.0 - product) / (1.0 + kappa).powi(2)
}

/// `[1/(1+eps), 1+eps]` with `eps = max(C(mu_N) - 1, kappa^2/(1 - kappa^2))`.
pub fn ratio_bracket(c_mu: f64, kappa: f64) -> (f64, f64) {
    let eps = (c_mu - 1.0).max(kappa * kappa / (1.0 - kappa * kappa));
    (1.0 / (1.0 + eps), 1.0 + eps)
}
