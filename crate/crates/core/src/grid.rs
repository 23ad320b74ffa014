//! Polar search grids over the disk and a pattern-search refinement of grid maxima.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::disk::GapPoint;
use crate::exec::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Radii `1 - 2^-i` for `i = 0..=levels`.
    pub levels: u32,
    pub angles: usize,
    /// Pattern-search iterations around the incumbent; 0 disables refinement.
    pub refine_steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { levels: 40, angles: 256, refine_steps: 80 }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<GapPoint> {
        let mut out = vec![GapPoint::origin()];
        for i in 1..=self.levels {
            let gap = 0.5f64.powi(i as i32);
            for a in 0..self.angles {
                let arg = -PI + 2.0 * PI * a as f64 / self.angles as f64;
                out.push(GapPoint::new(arg, gap).expect("gap in (0, 1)"));
            }
        }
        out
    }
}

/// Points at gaps `gap * 2^t` and angle offsets `gap * s` around `center`.
pub fn local_patch(center: &GapPoint, scales: i32, offsets: i32) -> Vec<GapPoint> {
    let mut out = Vec::new();
    for t in -scales..=scales {
        let gap = (center.gap() * 2f64.powi(t)).min(1.0);
        for s in -offsets..=offsets {
            let arg = center.arg() + center.gap() * s as f64;
            if let Ok(p) = GapPoint::new(arg, gap) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    pub value: f64,
    pub argmax: GapPoint,
    /// Best value before refinement.
    pub grid_value: f64,
    pub evaluations: usize,
}

/// Maximum of `f` over `candidates`, then refined by a compass search in `(arg, ln gap)`.
/// Points where `f` returns `None` are skipped.
pub fn grid_sup<F>(candidates: &[GapPoint], f: F, refine_steps: usize, exec: Exec) -> Option<SupResult>
where
    F: Fn(&GapPoint) -> Option<f64> + Sync + Send,
{
    let score = |p: &GapPoint| f(p).filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY);
    let (i, value) = exec.argmax(candidates, score)?;
    if value == f64::NEG_INFINITY {
        return None;
    }
    let mut best = SupResult { value, argmax: candidates[i], grid_value: value, evaluations: candidates.len() };
    let mut step_log = 0.5;
    let mut step_arg = 0.5;
    for _ in 0..refine_steps {
        let p = best.argmax;
        let trial: Vec<GapPoint> =
            [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)]
                .iter()
                .filter_map(|&(dl, da)| {
                    let gap = (p.gap().ln() + dl * step_log).exp().min(1.0);
                    GapPoint::new(p.arg() + da * step_arg * p.gap(), gap).ok()
                })
                .collect();
        best.evaluations += trial.len();
        match exec.argmax(&trial, score) {
            Some((j, v)) if v > best.value => {
                best.value = v;
                best.argmax = trial[j];
            }
            _ => {
                step_log *= 0.5;
                step_arg *= 0.5;
            }
        }
    }
    Some(best)
}
