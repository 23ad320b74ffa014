//! Extremal eigenvalues of Hermitian PSD matrices and Riesz bounds of Gram windows.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disk::{BlaschkeSequence, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kernels::{build_gram, KernelFamily};

/// Dense Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: entries.len() });
        }
        Ok(HermitianMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        HermitianMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.n + n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, m: usize) -> &[Complex64] {
        &self.entries[m * self.n..(m + 1) * self.n]
    }

    pub fn matvec(&self, x: &[Complex64], exec: Exec) -> Vec<Complex64> {
        exec.map_range(self.n, |m| self.row(m).iter().zip(x).map(|(g, v)| g * v).sum())
    }

    /// `D M D` for a real diagonal `D`.
    pub fn scaled(&self, d: &[f64]) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[k] * d[k / n] * d[k % n]).collect();
        HermitianMatrix { n, entries }
    }

    /// Largest absolute row sum, an upper bound for every eigenvalue modulus.
    pub fn gershgorin(&self) -> f64 {
        (0..self.n).map(|m| self.row(m).iter().map(|g| g.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `[[Re, -Im], [Im, Re]]`, symmetric of size `2n`.
    fn real_embedding(&self) -> Vec<f64> {
        let (n, m) = (self.n, 2 * self.n);
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let g = self.get(i, j);
                a[i * m + j] = g.re;
                a[(i + n) * m + j + n] = g.re;
                a[i * m + j + n] = -g.im;
                a[(i + n) * m + j] = g.im;
            }
        }
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-10, max_iter: 100_000, restarts: 3, seed: 0x7416 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalEigen {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub residual_min: f64,
    pub residual_max: f64,
    pub iterations: usize,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let s = norm(v);
    for x in v.iter_mut() {
        *x /= s;
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

struct PowerRun {
    value: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    normalize(&mut v);
    v
}

/// Iterations between convergence-rate checkpoints.
const CHECKPOINT: usize = 1000;

/// Power iteration on `sign * (H - shift I)`; Rayleigh quotient and residual are taken on `H`.
/// Gives up early once the observed residual decay cannot reach `tol` within `max_iter`.
fn power(h: &HermitianMatrix, mut v: Vec<Complex64>, shift: f64, sign: f64, tol: f64, max_iter: usize, exec: Exec) -> PowerRun {
    let mut best = PowerRun { value: f64::NAN, residual: f64::INFINITY, iterations: 0, converged: false };
    let mut checkpoint = f64::INFINITY;
    for it in 1..=max_iter {
        let hv = h.matvec(&v, exec);
        let mu = dot(&v, &hv).re;
        let residual = norm(&hv.iter().zip(&v).map(|(a, b)| a - b * mu).collect::<Vec<_>>());
        if residual < best.residual {
            best = PowerRun { value: mu, residual, iterations: it, converged: false };
        }
        if residual <= tol {
            return PowerRun { value: mu, residual, iterations: it, converged: true };
        }
        if it % CHECKPOINT == 0 {
            let rate = (residual / checkpoint).powf(1.0 / CHECKPOINT as f64);
            let needed = if rate < 1.0 { (tol / residual).ln() / rate.ln() } else { f64::INFINITY };
            if needed > (max_iter - it) as f64 {
                best.iterations = it;
                return best;
            }
            checkpoint = residual;
        }
        v = hv.iter().zip(&v).map(|(a, b)| (a - b * shift) * sign).collect();
        if norm(&v) == 0.0 {
            return PowerRun { value: mu, residual, iterations: it, converged: residual <= tol };
        }
        normalize(&mut v);
    }
    best.iterations = max_iter;
    best
}

/// Largest dimension for which a stalled power iteration is restarted from Jacobi eigenvectors.
pub const JACOBI_FALLBACK_MAX: usize = 400;

/// Extremal eigenvalues by shifted power iteration with residual certificates.
///
/// A short unshifted run estimates the top of the spectrum; `lambda_min` then comes from
/// `hi I - H` and `lambda_max` from `H - lambda_min I`. When the spectrum is too clustered
/// for plain iteration, the iteration is restarted from Jacobi eigenvectors and certified by
/// the same residual test. Matrices of dimension at most 8 are always cross-checked against
/// the Jacobi eigenvalues.
pub fn extremal_eigs(h: &HermitianMatrix, opts: &EigenOptions, exec: Exec) -> Result<ExtremalEigen> {
    if !(opts.tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let n = h.dim();
    if n == 0 {
        return Err(Error::param("matrix", "must not be empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(PowerRun, PowerRun)> = None;
    let mut iterations = 0;
    for _ in 0..opts.restarts.max(1) {
        let rough = power(h, random_unit(n, &mut rng), 0.0, 1.0, 1e-3, 500.min(opts.max_iter), exec);
        let hi = (rough.value + rough.residual).min(h.gershgorin()).max(rough.value);
        let low = power(h, random_unit(n, &mut rng), hi, -1.0, opts.tol, opts.max_iter, exec);
        let high = power(h, random_unit(n, &mut rng), low.value, 1.0, opts.tol, opts.max_iter, exec);
        iterations += rough.iterations + low.iterations + high.iterations;
        let done = low.converged && high.converged;
        let stalled = low.iterations < opts.max_iter && !low.converged || high.iterations < opts.max_iter && !high.converged;
        let better = match &best {
            None => true,
            Some((l, u)) => low.residual.max(high.residual) < l.residual.max(u.residual),
        };
        if better {
            best = Some((low, high));
        }
        if done || stalled {
            break;
        }
    }
    let (mut low, mut high) = best.expect("at least one attempt");
    if !(low.converged && high.converged) && n <= JACOBI_FALLBACK_MAX {
        let (vals, vecs) = jacobi_eigenpairs(h);
        let budget = opts.max_iter.min(CHECKPOINT);
        let hi = vals[n - 1];
        if !low.converged {
            low = power(h, vecs[0].clone(), hi, -1.0, opts.tol, budget, exec);
            iterations += low.iterations;
        }
        if !high.converged {
            high = power(h, vecs[n - 1].clone(), low.value, 1.0, opts.tol, budget, exec);
            iterations += high.iterations;
        }
    }
    if !(low.converged && high.converged) {
        let (best, residual) = if low.converged { (high.value, high.residual) } else { (low.value, low.residual) };
        return Err(Error::NotConverged { iterations, best, residual });
    }
    let out = ExtremalEigen {
        lambda_min: low.value.min(high.value),
        lambda_max: high.value.max(low.value),
        residual_min: low.residual,
        residual_max: high.residual,
        iterations,
    };
    if n <= 8 {
        let exact = jacobi_eigenvalues(h);
        let tol = 1e-8f64.max(10.0 * opts.tol);
        for (power, jacobi) in [(out.lambda_min, exact[0]), (out.lambda_max, exact[n - 1])] {
            if (power - jacobi).abs() > tol {
                return Err(Error::CrossCheck { power, jacobi });
            }
        }
    }
    Ok(out)
}

/// Cyclic Jacobi on a real symmetric matrix; returns eigenvalues and column eigenvectors.
fn jacobi_symmetric(mut a: Vec<f64>, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 =
            (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * m + j].powi(2)).sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k * m + p], a[k * m + q]);
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p * m + k], a[q * m + k]);
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let (vkp, vkq) = (v[k * m + p], v[k * m + q]);
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i * m + i]).collect(), v)
}

/// All eigenvalues, ascending, by Jacobi on the real embedding.
pub fn jacobi_eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    jacobi_eigenpairs(h).0
}

/// Ascending eigenvalues with unit eigenvectors of `H`.
pub fn jacobi_eigenpairs(h: &HermitianMatrix) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = h.dim();
    let m = 2 * n;
    let (vals, v) = jacobi_symmetric(h.real_embedding(), m);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    // Eigenvalues of the embedding come in equal pairs; keep one of each.
    let picked: Vec<usize> = order.into_iter().step_by(2).collect();
    let values = picked.iter().map(|&k| vals[k]).collect();
    let vectors = picked
        .iter()
        .map(|&k| {
            let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(v[i * m + k], v[(i + n) * m + k])).collect();
            normalize(&mut x);
            x
        })
        .collect();
    (values, vectors)
}

/// Direct solve of `H x = b` through the Jacobi eigendecomposition of the real embedding.
pub fn jacobi_solve(h: &HermitianMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = h.dim();
    if b.len() != n {
        return Err(Error::Dimension { expected: n, got: b.len() });
    }
    let m = 2 * n;
    let (vals, v) = jacobi_symmetric(h.real_embedding(), m);
    let lambda_min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = vals.iter().cloned().fold(0.0, f64::max);
    if !(lambda_min > 1e-14 * scale) {
        return Err(Error::NearSingular { lambda_min });
    }
    let rhs: Vec<f64> = b.iter().map(|z| z.re).chain(b.iter().map(|z| z.im)).collect();
    let mut x = vec![0.0; m];
    for k in 0..m {
        let proj: f64 = (0..m).map(|i| v[i * m + k] * rhs[i]).sum::<f64>() / vals[k];
        for i in 0..m {
            x[i] += proj * v[i * m + k];
        }
    }
    Ok((0..n).map(|i| Complex64::new(x[i], x[i + n])).collect())
}

/// Conjugate gradients for Hermitian positive definite `H`.
pub fn cg_solve(h: &HermitianMatrix, b: &[Complex64], rel_tol: f64, exec: Exec) -> Result<Vec<Complex64>> {
    let n = h.dim();
    if b.len() != n {
        return Err(Error::Dimension { expected: n, got: b.len() });
    }
    let bnorm = norm(b);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = bnorm * bnorm;
    let max_iter = 20 * n + 100;
    for _ in 0..max_iter {
        let ap = h.matvec(&p, exec);
        let pap = dot(&p, &ap).re;
        if !(pap > 0.0) {
            return Err(Error::NearSingular { lambda_min: pap / dot(&p, &p).re });
        }
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        let rs_new = dot(&r, &r).re;
        if rs_new.sqrt() <= rel_tol * bnorm {
            // Confirm against the true residual.
            let hx = h.matvec(&x, exec);
            let true_res = norm(&hx.iter().zip(b).map(|(a, c)| c - a).collect::<Vec<_>>());
            if true_res <= 10.0 * rel_tol * bnorm {
                return Ok(x);
            }
            r = hx.iter().zip(b).map(|(a, c)| c - a).collect();
            p = r.clone();
            rs = dot(&r, &r).re;
            continue;
        }
        let beta = rs_new / rs;
        for i in 0..n {
            p[i] = r[i] + p[i] * beta;
        }
        rs = rs_new;
    }
    let hx = h.matvec(&x, exec);
    let residual = norm(&hx.iter().zip(b).map(|(a, c)| c - a).collect::<Vec<_>>()) / bnorm;
    Err(Error::SolveStalled { iterations: max_iter, residual })
}

/// Solves `H x = b`: Jacobi for small systems, conjugate gradients otherwise.
pub fn solve(h: &HermitianMatrix, b: &[Complex64], exec: Exec) -> Result<Vec<Complex64>> {
    if h.dim() <= 8 {
        jacobi_solve(h, b)
    } else {
        cg_solve(h, b, 1e-13, exec)
    }
}

/// Window Riesz constants: `c_N = lambda_min`, `C_N = lambda_max` of the Gram window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    pub window: Window,
    pub lower: f64,
    pub upper: f64,
    pub certificate: f64,
    /// `||G - I||` for the window.
    pub tail_norm: f64,
    pub eigen: ExtremalEigen,
}

pub fn riesz_bounds(
    family: &KernelFamily,
    seq: &BlaschkeSequence,
    window: Window,
    opts: &EigenOptions,
    exec: Exec,
) -> Result<RieszBounds> {
    let g = build_gram(family, seq, window, exec)?;
    let eigen = extremal_eigs(g.matrix(), opts, exec)?;
    Ok(RieszBounds {
        window: g.window,
        lower: eigen.lambda_min,
        upper: eigen.lambda_max,
        certificate: g.truncation_certificate,
        tail_norm: (eigen.lambda_max - 1.0).max(1.0 - eigen.lambda_min),
        eigen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::Generator;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_psd(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Complex64> = (0..n * n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let mut e = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                e[i * n + j] = (0..n).map(|k| a[k * n + i].conj() * a[k * n + j]).sum();
            }
        }
        HermitianMatrix::new(n, e).unwrap()
    }

    #[test]
    fn identity_eigenvalues() {
        let e = extremal_eigs(&HermitianMatrix::identity(3), &EigenOptions::default(), Exec::Sequential).unwrap();
        assert_abs_diff_eq!(e.lambda_min, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.lambda_max, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_by_two_closed_form() {
        for g in [0.0, 0.3, -0.8, 0.999] {
            let h = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(g, 0.0), c(g, 0.0), c(1.0, 0.0)]).unwrap();
            let e = extremal_eigs(&h, &EigenOptions::default(), Exec::Sequential).unwrap();
            assert_abs_diff_eq!(e.lambda_min, 1.0 - g.abs(), epsilon = 1e-10);
            assert_abs_diff_eq!(e.lambda_max, 1.0 + g.abs(), epsilon = 1e-10);
            assert!(e.residual_min <= 1e-10 && e.residual_max <= 1e-10);
        }
    }

    #[test]
    fn complex_two_by_two() {
        let g = c(0.3, -0.4);
        let h = HermitianMatrix::new(2, vec![c(1.0, 0.0), g, g.conj(), c(1.0, 0.0)]).unwrap();
        let vals = jacobi_eigenvalues(&h);
        assert_abs_diff_eq!(vals[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 1.5, epsilon = 1e-14);
    }

    #[test]
    fn random_psd_matches_jacobi() {
        for seed in 0..5 {
            let h = random_psd(6, seed);
            let e = extremal_eigs(&h, &EigenOptions::default(), Exec::Sequential).unwrap();
            let vals = jacobi_eigenvalues(&h);
            assert_abs_diff_eq!(e.lambda_min, vals[0], epsilon = 1e-8);
            assert_abs_diff_eq!(e.lambda_max, vals[5], epsilon = 1e-8);
        }
    }

    #[test]
    fn larger_matrices_certify_by_residual() {
        let h = random_psd(30, 11);
        let e = extremal_eigs(&h, &EigenOptions::default(), Exec::Parallel).unwrap();
        let vals = jacobi_eigenvalues(&h);
        assert_abs_diff_eq!(e.lambda_max, vals[29], epsilon = 1e-8);
        assert_abs_diff_eq!(e.lambda_min, vals[0], epsilon = 1e-8);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = EigenOptions { max_iter: 3, restarts: 1, ..EigenOptions::default() };
        let h = HermitianMatrix::new(JACOBI_FALLBACK_MAX + 1, random_psd(JACOBI_FALLBACK_MAX + 1, 3).entries().to_vec()).unwrap();
        assert!(matches!(extremal_eigs(&h, &opts, Exec::Sequential), Err(Error::NotConverged { .. })));
    }

    #[test]
    fn clustered_spectrum_falls_back_to_jacobi_start() {
        let seq = BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.5 }, 40).unwrap();
        let g = build_gram(&KernelFamily::Hardy, &seq, seq.window(1, 26).unwrap(), Exec::Sequential).unwrap();
        let e = extremal_eigs(g.matrix(), &EigenOptions::default(), Exec::Sequential).unwrap();
        let vals = jacobi_eigenvalues(g.matrix());
        assert!(e.residual_min <= 1e-10 && e.residual_max <= 1e-10);
        assert!((e.lambda_min - vals[0]).abs() <= 1e-10);
        assert!((e.lambda_max - vals[25]).abs() <= 1e-10);
    }

    #[test]
    fn eigenpairs_have_small_residuals() {
        let h = random_psd(7, 5);
        let (vals, vecs) = jacobi_eigenpairs(&h);
        for (l, v) in vals.iter().zip(&vecs) {
            let hv = h.matvec(v, Exec::Sequential);
            let r: f64 = hv.iter().zip(v).map(|(a, b)| (a - b * l).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn solvers_agree() {
        let h = random_psd(6, 21);
        let b = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.5), c(0.2, 0.2), c(0.0, 0.0), c(3.0, -1.0)];
        let x1 = jacobi_solve(&h, &b).unwrap();
        let x2 = cg_solve(&h, &b, 1e-13, Exec::Sequential).unwrap();
        let hx = h.matvec(&x1, Exec::Sequential);
        for i in 0..6 {
            assert!((hx[i] - b[i]).norm() < 1e-9);
            assert!((x1[i] - x2[i]).norm() < 1e-8 * norm(&x1));
        }
        let singular = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(jacobi_solve(&singular, &[c(1.0, 0.0), c(0.0, 0.0)]), Err(Error::NearSingular { .. })));
    }

    #[test]
    fn riesz_single_point() {
        let seq = BlaschkeSequence::generate(Generator::RadialFactorial, 5).unwrap();
        let r = riesz_bounds(&KernelFamily::Hardy, &seq, seq.window(3, 3).unwrap(), &EigenOptions::default(), Exec::Sequential)
            .unwrap();
        assert_abs_diff_eq!(r.lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.upper, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn riesz_sweeps() {
        let opts = EigenOptions::default();
        let fact = BlaschkeSequence::generate(Generator::RadialFactorial, 60).unwrap();
        let mut prev: Option<RieszBounds> = None;
        for n in [2, 5, 10, 20, 40] {
            let r = riesz_bounds(&KernelFamily::Hardy, &fact, fact.window(n, n + 20).unwrap(), &opts, Exec::Parallel).unwrap();
            if let Some(p) = prev {
                assert!(r.lower >= p.lower && r.upper <= p.upper);
            }
            prev = Some(r);
        }
        let geo = BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.5 }, 80).unwrap();
        for n in [1, 10, 30, 50] {
            let r = riesz_bounds(&KernelFamily::Hardy, &geo, geo.window(n, n + 25).unwrap(), &opts, Exec::Parallel).unwrap();
            assert!(r.upper > 2.0, "C_N = {} at N = {n}", r.upper);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn window_monotonicity(start in 1usize..8, len in 1usize..10) {
            let seq = BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.6 }, 30).unwrap();
            let opts = EigenOptions::default();
            let a = riesz_bounds(&KernelFamily::Hardy, &seq, seq.window(start, start + len).unwrap(), &opts, Exec::Sequential).unwrap();
            let b = riesz_bounds(&KernelFamily::Hardy, &seq, seq.window(start, start + len + 1).unwrap(), &opts, Exec::Sequential).unwrap();
            prop_assert!(b.lower <= a.lower + 1e-9);
            prop_assert!(b.upper >= a.upper - 1e-9);
            prop_assert!(a.lower <= 1.0 + 1e-9 && a.upper >= 1.0 - 1e-9);
            prop_assert!(a.lower >= -1e-10);
        }
    }
}
