//! Minimal-norm interpolation on Gram windows, eventual interpolation constants, the
//! iterative correction scheme driven by an approximate solver, and the transfer of
//! Hardy-space solutions into the model space.
//!
//! Targets are always normalized values `f(lambda_n) / ||K_{lambda_n}||`. A function
//! `f = sum c_j k_j` over normalized kernels has normalized values `G c` and norm
//! `sqrt(c^H G c)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{BlaschkeSequence, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::inner::InnerFunction;
use crate::kernels::{build_gram, GramWindow, KernelFamily};
use crate::spectral::{extremal_eigs, solve, EigenOptions};

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationProblem {
    pub family: KernelFamily,
    pub window: Window,
    pub targets: Vec<Complex64>,
}

impl InterpolationProblem {
    pub fn new(family: KernelFamily, seq: &BlaschkeSequence, window: Window, targets: Vec<Complex64>) -> Result<Self> {
        let window = seq.window(window.start, window.end)?;
        if targets.len() != window.len() {
            return Err(Error::Dimension { expected: window.len(), got: targets.len() });
        }
        if targets.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::param("targets", "must be finite"));
        }
        Ok(InterpolationProblem { family, window, targets })
    }

    /// Builds normalized targets from raw values `f(lambda_n)` by dividing by `||K_{lambda_n}||`.
    pub fn from_raw_values(family: KernelFamily, seq: &BlaschkeSequence, window: Window, values: &[Complex64]) -> Result<Self> {
        let window = seq.window(window.start, window.end)?;
        if values.len() != window.len() {
            return Err(Error::Dimension { expected: window.len(), got: values.len() });
        }
        let targets = window
            .indices()
            .zip(values)
            .map(|(k, v)| {
                let p = seq.point(k);
                let norm_sq_times_w = family.theta().map_or(1.0, |t| t.eval(p).one_minus_mod_sq());
                v * p.weight().sqrt() / norm_sq_times_w.sqrt()
            })
            .collect();
        Self::new(family, seq, window, targets)
    }

    pub fn target_norm(&self) -> f64 {
        norm(&self.targets)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinNormSolution {
    pub coefficients: Vec<Complex64>,
    pub norm: f64,
    /// `||G c - a||`
    pub residual: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

fn min_norm_on(gram: &GramWindow, targets: &[Complex64], opts: &EigenOptions, exec: Exec) -> Result<MinNormSolution> {
    let eig = extremal_eigs(gram.matrix(), opts, exec)?;
    if !(eig.lambda_min > opts.tol) {
        return Err(Error::NearSingular { lambda_min: eig.lambda_min });
    }
    let c = solve(gram.matrix(), targets, exec)?;
    let gc = gram.matvec(&c, exec);
    let residual = norm(&gc.iter().zip(targets).map(|(x, a)| x - a).collect::<Vec<_>>());
    let norm_sq: f64 = targets.iter().zip(&c).map(|(a, x)| (a.conj() * x).re).sum();
    Ok(MinNormSolution {
        coefficients: c,
        norm: norm_sq.max(0.0).sqrt(),
        residual,
        lambda_min: eig.lambda_min,
        lambda_max: eig.lambda_max,
    })
}

/// The interpolant of least norm: `G c = a`, `||f||^2 = a^H c`.
pub fn min_norm_interpolant(
    p: &InterpolationProblem,
    seq: &BlaschkeSequence,
    opts: &EigenOptions,
    exec: Exec,
) -> Result<MinNormSolution> {
    let gram = build_gram(&p.family, seq, p.window, exec)?;
    min_norm_on(&gram, &p.targets, opts, exec)
}

/// Best constant over unit targets, `lambda_min(G)^{-1/2}`.
pub fn eis_constant(
    family: &KernelFamily,
    seq: &BlaschkeSequence,
    window: Window,
    opts: &EigenOptions,
    exec: Exec,
) -> Result<f64> {
    let gram = build_gram(family, seq, window, exec)?;
    let eig = extremal_eigs(gram.matrix(), opts, exec)?;
    if !(eig.lambda_min > opts.tol) {
        return Err(Error::NearSingular { lambda_min: eig.lambda_min });
    }
    Ok(1.0 / eig.lambda_min.sqrt())
}

/// An approximate interpolation scheme: given normalized targets, returns coefficients
/// over the normalized kernels of the same window.
pub trait ApproxSolver {
    fn approximate(&self, targets: &[Complex64]) -> Result<Vec<Complex64>>;
}

impl<F> ApproxSolver for F
where
    F: Fn(&[Complex64]) -> Result<Vec<Complex64>>,
{
    fn approximate(&self, targets: &[Complex64]) -> Result<Vec<Complex64>> {
        self(targets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationStep {
    pub k: usize,
    /// `||a^(k)||` before the step.
    pub target_norm: f64,
    /// `||f_k||`
    pub piece_norm: f64,
    /// `||a^(k+1)||`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub steps: Vec<IterationStep>,
    pub final_norm: f64,
    pub final_residual: f64,
}

/// Relative residual at which the iteration stops.
pub const ITERATION_TARGET: f64 = 1e-10;

/// Accumulates `F = sum f_k` with `f_k = approx(a^(k))` and `a^(k+1) = a^(k) - values(f_k)`.
///
/// Every step must satisfy `||f_k|| <= ||a^(k)||` and
/// `||a^(k+1)|| <= eps/(1+eps) ||a^(k)||`; a violation aborts with the step index.
pub fn iterative_solve<S: ApproxSolver + ?Sized>(
    p: &InterpolationProblem,
    seq: &BlaschkeSequence,
    approx: &S,
    eps: f64,
    max_iter: usize,
    exec: Exec,
) -> Result<(Vec<Complex64>, IterationTrace)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let gram = build_gram(&p.family, seq, p.window, exec)?;
    let n = gram.dim();
    let a_norm = p.target_norm();
    let contraction = eps / (1.0 + eps);
    let mut total = vec![Complex64::new(0.0, 0.0); n];
    let mut a = p.targets.clone();
    let mut steps = Vec::new();
    let mut current = a_norm;
    while current > ITERATION_TARGET * a_norm {
        if steps.len() == max_iter {
            return Err(Error::IterationLimit { iterations: max_iter, residual: current / a_norm });
        }
        let k = steps.len();
        let g = approx.approximate(&a)?;
        if g.len() != n {
            return Err(Error::Dimension { expected: n, got: g.len() });
        }
        let piece_norm = gram.quad_form(&g, exec).max(0.0).sqrt();
        if piece_norm > current * (1.0 + 1e-12) {
            return Err(Error::ContractViolation { step: k, what: "norm", value: piece_norm, bound: current });
        }
        let values = gram.matvec(&g, exec);
        for (x, v) in a.iter_mut().zip(&values) {
            *x -= v;
        }
        let residual = norm(&a);
        let bound = contraction * current;
        if residual > bound * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::ContractViolation { step: k, what: "residual", value: residual, bound });
        }
        for (t, x) in total.iter_mut().zip(&g) {
            *t += x;
        }
        steps.push(IterationStep { k, target_norm: current, piece_norm, residual });
        current = residual;
    }
    let values = gram.matvec(&total, exec);
    let final_residual = norm(&values.iter().zip(&p.targets).map(|(x, a)| x - a).collect::<Vec<_>>());
    let final_norm = gram.quad_form(&total, exec).max(0.0).sqrt();
    Ok((total, IterationTrace { steps, final_norm, final_residual }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    /// Hardy solution over normalized Szegő kernels.
    pub hardy_coefficients: Vec<Complex64>,
    pub hardy_norm: f64,
    /// Its projection over normalized model kernels.
    pub model_coefficients: Vec<Complex64>,
    pub model_norm: f64,
    /// `||G^Theta c' - a||`
    pub residual: f64,
    /// `kappa (1 - kappa^2)^{-1/2} sqrt(C(mu)) ||f||`
    pub residual_bound: f64,
    pub kappa: f64,
}

/// Solves the Hardy problem with targets `a_n (1 - |Theta(lambda_n)|^2)^{1/2}` and projects
/// the solution onto `K_Theta`. The projection interpolates `a` up to the reported residual.
pub fn h2_to_model_transfer(
    theta: &InnerFunction,
    seq: &BlaschkeSequence,
    window: Window,
    targets: &[Complex64],
    opts: &EigenOptions,
    exec: Exec,
) -> Result<TransferResult> {
    let window = seq.window(window.start, window.end)?;
    if targets.len() != window.len() {
        return Err(Error::Dimension { expected: window.len(), got: targets.len() });
    }
    let values = theta.eval_many(&seq.points()[window.range()], exec);
    let kappa = values.iter().map(|v| v.upper).fold(0.0, f64::max);
    if !(kappa < 1.0) {
        return Err(Error::KappaTooLarge { kappa });
    }
    let scale: Vec<f64> = values.iter().map(|v| v.one_minus_mod_sq().sqrt()).collect();
    let hardy_targets: Vec<Complex64> = targets.iter().zip(&scale).map(|(a, s)| a * s).collect();
    let hardy_gram = build_gram(&KernelFamily::Hardy, seq, window, exec)?;
    let hardy = min_norm_on(&hardy_gram, &hardy_targets, opts, exec)?;
    let model_coefficients: Vec<Complex64> = hardy.coefficients.iter().zip(&scale).map(|(c, s)| c * s).collect();
    let model_gram = build_gram(&KernelFamily::Model(theta.clone()), seq, window, exec)?;
    let model_values = model_gram.matvec(&model_coefficients, exec);
    let residual = norm(&model_values.iter().zip(targets).map(|(x, a)| x - a).collect::<Vec<_>>());
    let model_norm = model_gram.quad_form(&model_coefficients, exec).max(0.0).sqrt();
    let residual_bound = kappa / (1.0 - kappa * kappa).sqrt() * hardy.lambda_max.sqrt() * hardy.norm;
    Ok(TransferResult {
        hardy_coefficients: hardy.coefficients,
        hardy_norm: hardy.norm,
        model_coefficients,
        model_norm,
        residual,
        residual_bound,
        kappa,
    })
}
