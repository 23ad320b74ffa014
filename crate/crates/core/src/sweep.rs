//! Per-N sweeps of every window constant, one row per tail start `N`.

use serde::{Deserialize, Serialize};

use crate::carleson::{carleson_constant, reproducing_constant, DiscreteMeasure, Estimate};
use crate::disk::{delta_profile, BlaschkeSequence, DeltaEntry, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{GridSpec, SupResult};
use crate::inner::InnerFunction;
use crate::kernels::KernelFamily;
use crate::spectral::{riesz_bounds, EigenOptions, RieszBounds};

/// How the window end `M` follows from `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Cutoff {
    /// `M` = last stored point.
    Last,
    Fixed {
        m: usize,
    },
    /// `M = N + width - 1`, clipped to the stored points.
    Width {
        width: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub n_min: usize,
    pub n_max: usize,
    pub cutoff: Cutoff,
}

impl WindowPolicy {
    pub fn window(&self, n: usize, len: usize) -> Result<Window> {
        let m = match self.cutoff {
            Cutoff::Last => len,
            Cutoff::Fixed { m } => m,
            Cutoff::Width { width } => (n + width.max(1) - 1).min(len),
        };
        Window::new(n, m, len)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::param("window", format!("need 1 <= n_min <= n_max, got {}..{}", self.n_min, self.n_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub window: WindowPolicy,
    pub theta: Option<InnerFunction>,
    pub eigen: EigenOptions,
    pub grid: GridSpec,
    pub tail_tol: f64,
}

/// A value and its error bar. For grid suprema the bar is the gain of the refinement
/// over the raw grid, a resolution indicator rather than a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: f64,
    pub error: f64,
}

impl From<Estimate> for Measured {
    fn from(e: Estimate) -> Self {
        Measured { value: e.value, error: e.error_bar }
    }
}

impl From<SupResult> for Measured {
    fn from(s: SupResult) -> Self {
        Measured { value: s.value, error: s.value - s.grid_value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub delta_min: Option<Measured>,
    pub riesz_lower: Option<Measured>,
    pub riesz_upper: Option<Measured>,
    pub carleson_mu: Option<Measured>,
    pub reproducing_nu: Option<Measured>,
    pub kappa: Option<Measured>,
    pub carleson_sigma: Option<Measured>,
    pub reproducing_sigma: Option<Measured>,
    pub eis_hardy: Option<Measured>,
    pub eis_model: Option<Measured>,
    /// Numerical failures of this row, `; `-separated.
    pub row_error: Option<String>,
}

pub const CSV_HEADER: [&str; 22] = [
    "N",
    "delta_min",
    "delta_min_err",
    "c_N",
    "c_N_err",
    "C_N",
    "C_N_err",
    "C_mu_N",
    "C_mu_N_err",
    "R2_nu_N",
    "R2_nu_N_err",
    "kappa_N",
    "kappa_N_err",
    "C_Theta_sigma_N",
    "C_Theta_sigma_N_err",
    "R2_Theta_sigma_N",
    "R2_Theta_sigma_N_err",
    "eis_H2",
    "eis_H2_err",
    "eis_K_Theta",
    "eis_K_Theta_err",
    "row_error",
];

impl SweepRow {
    fn columns(&self) -> [Option<Measured>; 10] {
        [
            self.delta_min,
            self.riesz_lower,
            self.riesz_upper,
            self.carleson_mu,
            self.reproducing_nu,
            self.kappa,
            self.carleson_sigma,
            self.reproducing_sigma,
            self.eis_hardy,
            self.eis_model,
        ]
    }

    /// Fields in `CSV_HEADER` order; absent values are empty.
    pub fn csv_record(&self) -> Vec<String> {
        let mut out = vec![self.n.to_string()];
        for c in self.columns() {
            match c {
                Some(m) => {
                    out.push(m.value.to_string());
                    out.push(m.error.to_string());
                }
                None => out.extend([String::new(), String::new()]),
            }
        }
        out.push(self.row_error.clone().unwrap_or_default());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub sequence: BlaschkeSequence,
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

fn eis_from(r: &RieszBounds, tol: f64) -> Result<Measured> {
    if !(r.lower > tol) {
        return Err(Error::NearSingular { lambda_min: r.lower });
    }
    let err = r.certificate + r.eigen.residual_min;
    Ok(Measured { value: 1.0 / r.lower.sqrt(), error: 0.5 * err * r.lower.powf(-1.5) })
}

fn row(seq: &BlaschkeSequence, cfg: &SweepConfig, deltas: &[DeltaEntry], n: usize, exec: Exec) -> SweepRow {
    let mut errors: Vec<String> = Vec::new();
    let mut keep = |what: &str, r: Result<Measured>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(format!("{what}: {e}"));
            None
        }
    };
    let window = match cfg.window.window(n, seq.len()) {
        Ok(w) => w,
        Err(e) => {
            return SweepRow {
                n,
                m: 0,
                delta_min: None,
                riesz_lower: None,
                riesz_upper: None,
                carleson_mu: None,
                reproducing_nu: None,
                kappa: None,
                carleson_sigma: None,
                reproducing_sigma: None,
                eis_hardy: None,
                eis_model: None,
                row_error: Some(format!("window: {e}")),
            }
        }
    };
    let in_window: Vec<&DeltaEntry> = deltas.iter().filter(|e| window.indices().contains(&e.index)).collect();
    let delta_min = keep(
        "delta_min",
        Ok(Measured {
            value: in_window.iter().map(|e| e.value).fold(f64::INFINITY, f64::min),
            error: in_window.iter().map(|e| e.certified_error()).fold(0.0, f64::max),
        }),
    );
    let hardy = KernelFamily::Hardy;
    let riesz = riesz_bounds(&hardy, seq, window, &cfg.eigen, exec);
    let (riesz_lower, riesz_upper, eis_hardy) = match riesz {
        Ok(r) => (
            Some(Measured { value: r.lower, error: r.certificate + r.eigen.residual_min }),
            Some(Measured { value: r.upper, error: r.certificate + r.eigen.residual_max }),
            keep("eis_H2", eis_from(&r, cfg.eigen.tol)),
        ),
        Err(e) => (keep("riesz", Err(e)), None, None),
    };
    let carleson_mu = keep(
        "C_mu_N",
        DiscreteMeasure::mu(seq, window).and_then(|m| carleson_constant(&m, &hardy, seq, &cfg.eigen, exec)).map(Into::into),
    );
    let reproducing_nu = keep(
        "R2_nu_N",
        DiscreteMeasure::nu(seq, window, deltas)
            .and_then(|m| reproducing_constant(&m, &hardy, seq, &cfg.grid, exec))
            .map(Into::into),
    );
    let (mut kappa, mut carleson_sigma, mut reproducing_sigma, mut eis_model) = (None, None, None, None);
    if let Some(theta) = &cfg.theta {
        let values: Vec<_> = seq.points()[n - 1..].iter().map(|p| theta.eval(p)).collect();
        let upper = values.iter().map(|v| v.upper).fold(0.0, f64::max);
        let modulus = values.iter().map(|v| v.modulus()).fold(0.0, f64::max);
        kappa = keep("kappa_N", Ok(Measured { value: modulus, error: upper - modulus }));
        let model = KernelFamily::Model(theta.clone());
        let sigma = DiscreteMeasure::sigma(seq, theta, window);
        carleson_sigma = keep(
            "C_Theta_sigma_N",
            sigma.clone().and_then(|m| carleson_constant(&m, &model, seq, &cfg.eigen, exec)).map(Into::into),
        );
        reproducing_sigma =
            keep("R2_Theta_sigma_N", sigma.and_then(|m| reproducing_constant(&m, &model, seq, &cfg.grid, exec)).map(Into::into));
        eis_model =
            keep("eis_K_Theta", riesz_bounds(&model, seq, window, &cfg.eigen, exec).and_then(|r| eis_from(&r, cfg.eigen.tol)));
    }
    SweepRow {
        n,
        m: window.end,
        delta_min,
        riesz_lower,
        riesz_upper,
        carleson_mu,
        reproducing_nu,
        kappa,
        carleson_sigma,
        reproducing_sigma,
        eis_hardy,
        eis_model,
        row_error: if errors.is_empty() { None } else { Some(errors.join("; ")) },
    }
}

/// One row per `N` in the policy range. Rows run concurrently under `Exec::Parallel`
/// and come back in `N` order.
pub fn sweep(seq: &BlaschkeSequence, cfg: &SweepConfig, exec: Exec) -> Result<SweepReport> {
    cfg.window.validate()?;
    if !(cfg.tail_tol > 0.0) {
        return Err(Error::param("tail_tol", "must be positive"));
    }
    if cfg.window.n_max > seq.len() {
        return Err(Error::Window { start: cfg.window.n_max, end: seq.len(), len: seq.len() });
    }
    let deltas = delta_profile(seq, seq.len(), cfg.tail_tol, exec)?;
    let ns: Vec<usize> = (cfg.window.n_min..=cfg.window.n_max).collect();
    let rows = exec.map_slice(&ns, |&n| row(seq, cfg, &deltas, n, Exec::Sequential));
    Ok(SweepReport { sequence: seq.clone(), config: cfg.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::Generator;
    use crate::interpolation::eis_constant;

    fn config(theta: Option<InnerFunction>) -> SweepConfig {
        SweepConfig {
            window: WindowPolicy { n_min: 1, n_max: 10, cutoff: Cutoff::Last },
            theta,
            eigen: EigenOptions::default(),
            grid: GridSpec { levels: 30, angles: 64, refine_steps: 20 },
            tail_tol: 1e-6,
        }
    }

    #[test]
    fn hardy_only_shape() {
        let seq = BlaschkeSequence::generate(Generator::RadialFactorial, 15).unwrap();
        let r = sweep(&seq, &config(None), Exec::Parallel).unwrap();
        assert_eq!(r.rows.len(), 10);
        for (i, row) in r.rows.iter().enumerate() {
            assert_eq!(row.n, i + 1);
            assert_eq!(row.csv_record().len(), CSV_HEADER.len());
            assert!(row.riesz_upper.is_some() && row.carleson_mu.is_some());
            assert!(row.kappa.is_none() && row.eis_model.is_none());
        }
    }

    #[test]
    fn theta_columns_and_eis_agreement() {
        let seq = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, 14).unwrap();
        let theta = InnerFunction::atomic(1.0, 0.0).unwrap();
        let r = sweep(&seq, &config(Some(theta)), Exec::Parallel).unwrap();
        for row in &r.rows {
            assert!(row.row_error.is_none(), "{:?}", row.row_error);
            assert!(row.kappa.is_some() && row.carleson_sigma.is_some() && row.eis_model.is_some());
            let w = seq.window(row.n, row.m).unwrap();
            let e = eis_constant(&KernelFamily::Hardy, &seq, w, &EigenOptions::default(), Exec::Sequential).unwrap();
            assert!((row.eis_hardy.unwrap().value - e).abs() < 1e-12);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.5 }, 12).unwrap();
        let cfg = config(Some(InnerFunction::atomic(0.5, 0.0).unwrap()));
        assert_eq!(sweep(&seq, &cfg, Exec::Parallel).unwrap(), sweep(&seq, &cfg, Exec::Sequential).unwrap());
    }

    #[test]
    fn row_errors_do_not_stop_the_sweep() {
        let seq = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, 12).unwrap();
        let mut cfg = config(None);
        cfg.window.cutoff = Cutoff::Fixed { m: 5 };
        let r = sweep(&seq, &cfg, Exec::Sequential).unwrap();
        assert_eq!(r.rows.len(), 10);
        assert!(r.rows[4].row_error.is_none());
        assert!(r.rows[5].row_error.as_deref().unwrap().starts_with("window"));
        assert_eq!(r.rows[5].csv_record().len(), CSV_HEADER.len());
    }

    #[test]
    fn bad_policy() {
        let seq = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, 5).unwrap();
        let mut cfg = config(None);
        assert!(sweep(&seq, &cfg, Exec::Sequential).is_err());
        cfg.window.n_max = 3;
        cfg.window.n_min = 0;
        assert!(sweep(&seq, &cfg, Exec::Sequential).is_err());
    }
}
