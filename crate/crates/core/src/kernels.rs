//! Szegő and model-space kernels, Gram windows and the projection onto `K_Theta`.

use num_complex::Complex64;

use crate::disk::{cdiv, one_minus_conj_product, BlaschkeSequence, GapPoint, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::inner::{InnerFunction, InnerValue};
use crate::spectral::HermitianMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    Hardy,
    Model(InnerFunction),
}

impl KernelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Hardy => "hardy",
            KernelFamily::Model(_) => "model",
        }
    }

    pub fn theta(&self) -> Option<&InnerFunction> {
        match self {
            KernelFamily::Hardy => None,
            KernelFamily::Model(theta) => Some(theta),
        }
    }
}

/// `K_lambda(z) = 1/(1 - conj(lambda) z)`.
pub fn szego_kernel(lambda: &GapPoint, z: &GapPoint) -> Complex64 {
    cdiv(Complex64::new(1.0, 0.0), one_minus_conj_product(lambda, z))
}

/// `<k_mu, k_lambda> = sqrt((1-|lambda|^2)(1-|mu|^2)) / (1 - conj(mu) lambda)`.
pub fn szego_inner(lambda: &GapPoint, mu: &GapPoint) -> Complex64 {
    let scale = lambda.weight().sqrt() * mu.weight().sqrt();
    cdiv(Complex64::new(scale, 0.0), one_minus_conj_product(mu, lambda))
}

/// `K^Theta_lambda(z) = (1 - conj(Theta(lambda)) Theta(z)) / (1 - conj(lambda) z)`.
pub fn model_kernel(theta: &InnerFunction, lambda: &GapPoint, z: &GapPoint) -> Complex64 {
    if lambda == z {
        return Complex64::new(theta.eval(lambda).one_minus_mod_sq() / lambda.weight(), 0.0);
    }
    cdiv(theta.one_minus_conj_product(z, lambda), one_minus_conj_product(lambda, z))
}

/// `(1 - conj(Theta(mu)) Theta(lambda)) / sqrt((1 - |Theta(lambda)|^2)(1 - |Theta(mu)|^2))`.
fn model_factor(
    index: usize,
    theta: &InnerFunction,
    (lambda, tl): (&GapPoint, &InnerValue),
    (mu, tm): (&GapPoint, &InnerValue),
    same: bool,
) -> Result<Complex64> {
    let (wl, wm) = (tl.one_minus_mod_sq(), tm.one_minus_mod_sq());
    for w in [wl, wm] {
        if !(w > 0.0) {
            return Err(Error::KernelDegenerate { index, one_minus_mod_sq: w });
        }
    }
    if same {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(theta.one_minus_conj_product(lambda, mu) / (wl.sqrt() * wm.sqrt()))
}

/// `<k^Theta_mu, k^Theta_lambda>`, the normalized model kernels' inner product.
pub fn model_inner(theta: &InnerFunction, lambda: &GapPoint, mu: &GapPoint) -> Result<Complex64> {
    let (tl, tm) = (theta.eval(lambda), theta.eval(mu));
    normalized_overlap(Some(theta), lambda, Some(&tl), mu, Some(&tm))
}

/// `<k_mu, k_lambda>` from precomputed `Theta` values; `theta = None` selects the Hardy kernels.
pub fn normalized_overlap(
    theta: Option<&InnerFunction>,
    lambda: &GapPoint,
    theta_lambda: Option<&InnerValue>,
    mu: &GapPoint,
    theta_mu: Option<&InnerValue>,
) -> Result<Complex64> {
    let same = lambda == mu;
    match (theta, theta_lambda, theta_mu) {
        (Some(t), Some(tl), Some(tm)) => {
            let factor = model_factor(0, t, (lambda, tl), (mu, tm), same)?;
            Ok(if same { factor } else { szego_inner(lambda, mu) * factor })
        }
        _ if same => Ok(Complex64::new(1.0, 0.0)),
        _ => Ok(szego_inner(lambda, mu)),
    }
}

/// Hermitian Gram matrix of normalized kernels over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct GramWindow {
    pub family: KernelFamily,
    pub window: Window,
    matrix: HermitianMatrix,
    /// Largest row sum of discarded overlaps beyond the window end.
    pub truncation_certificate: f64,
    /// `true` when the unstored part of the certificate rests on an estimate of `|Theta|` beyond the stored points.
    pub certificate_estimated: bool,
}

impl GramWindow {
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.matrix.get(m, n)
    }

    pub fn matvec(&self, x: &[Complex64], exec: Exec) -> Vec<Complex64> {
        self.matrix.matvec(x, exec)
    }

    /// `c^H G c`.
    pub fn quad_form(&self, c: &[Complex64], exec: Exec) -> f64 {
        let gc = self.matvec(c, exec);
        c.iter().zip(&gc).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut best = 0.0f64;
        for m in 0..n {
            for k in 0..n {
                if m != k {
                    best = best.max(self.get(m, k).norm());
                }
            }
        }
        best
    }
}

struct Node {
    point: GapPoint,
    theta: Option<InnerValue>,
}

fn nodes(family: &KernelFamily, points: &[GapPoint], exec: Exec) -> Vec<Node> {
    exec.map_slice(points, |p| Node { point: *p, theta: family.theta().map(|t| t.eval(p)) })
}

/// `<k_b, k_a>` for the family, with `a` reported as `index` on degeneracy.
fn node_inner(theta: Option<&InnerFunction>, index: usize, a: &Node, b: &Node, same: bool) -> Result<Complex64> {
    match (theta, &a.theta, &b.theta) {
        (Some(t), Some(ta), Some(tb)) => {
            let factor = model_factor(index, t, (&a.point, ta), (&b.point, tb), same)?;
            Ok(if same { factor } else { szego_inner(&a.point, &b.point) * factor })
        }
        _ if same => Ok(Complex64::new(1.0, 0.0)),
        _ => Ok(szego_inner(&a.point, &b.point)),
    }
}

/// Gram window `G_{mn} = <k_{lambda_n}, k_{lambda_m}>` with its truncation certificate.
pub fn build_gram(family: &KernelFamily, seq: &BlaschkeSequence, window: Window, exec: Exec) -> Result<GramWindow> {
    let window = seq.window(window.start, window.end)?;
    let inside = nodes(family, &seq.points()[window.range()], exec);
    let beyond = nodes(family, &seq.points()[window.end..], exec);
    let n = inside.len();

    let rows: Vec<Result<Vec<Complex64>>> = exec
        .map_range(n, |m| (m..n).map(|k| node_inner(family.theta(), window.start + m, &inside[m], &inside[k], m == k)).collect());
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for (m, row) in rows.into_iter().enumerate() {
        for (off, v) in row?.into_iter().enumerate() {
            let k = m + off;
            entries[m * n + k] = v;
            entries[k * n + m] = v.conj();
        }
    }

    let unstored = seq.unstored_tail(0.5);
    // |<k_k, k_j>| <= 2 sqrt(gap_k / gap_j) for any k, so unstored points add at most 2 S_{1/2} / sqrt(gap_j).
    let kappa_last = beyond.last().or(inside.last()).and_then(|node| node.theta.map(|t| t.upper));
    let row_sums: Vec<Result<f64>> = exec.map_range(n, |m| {
        let mut sum = 0.0;
        for b in &beyond {
            sum += node_inner(family.theta(), window.start + m, &inside[m], b, false)?.norm();
        }
        let mut analytic = 2.0 * unstored / inside[m].point.gap().sqrt();
        if let (Some(tj), Some(kl)) = (inside[m].theta, kappa_last) {
            analytic *= 2.0 / (tj.one_minus_mod_sq().sqrt() * (1.0 - kl * kl).sqrt());
        }
        Ok(sum + analytic)
    });
    let mut certificate = 0.0f64;
    for s in row_sums {
        certificate = certificate.max(s?);
    }

    Ok(GramWindow {
        family: family.clone(),
        window,
        matrix: HermitianMatrix::new(n, entries)?,
        truncation_certificate: certificate,
        certificate_estimated: family.theta().is_some() && unstored > 0.0,
    })
}

/// `f = sum c_j K_{lambda_j} + Theta * sum d_j K_{lambda_j}` over fixed points.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCombination {
    pub points: Vec<GapPoint>,
    pub szego: Vec<Complex64>,
    pub theta: Vec<Complex64>,
}

impl KernelCombination {
    pub fn szego_only(points: Vec<GapPoint>, c: Vec<Complex64>) -> Result<Self> {
        if points.len() != c.len() {
            return Err(Error::Dimension { expected: points.len(), got: c.len() });
        }
        let zeros = vec![Complex64::new(0.0, 0.0); c.len()];
        Ok(KernelCombination { points, szego: c, theta: zeros })
    }

    pub fn eval(&self, theta: &InnerFunction, z: &GapPoint) -> Complex64 {
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        for ((p, c), d) in self.points.iter().zip(&self.szego).zip(&self.theta) {
            let k = szego_kernel(p, z);
            a += c * k;
            b += d * k;
        }
        if b == Complex64::new(0.0, 0.0) {
            return a;
        }
        a + theta.eval(z).value * b
    }

    /// `||f||^2` from the reproducing property; exact for any `Theta`.
    pub fn norm_sq(&self, theta: &InnerFunction) -> f64 {
        let tv: Vec<Complex64> = self.points.iter().map(|p| theta.eval(p).value).collect();
        let mut total = 0.0;
        for (i, pi) in self.points.iter().enumerate() {
            for (j, pj) in self.points.iter().enumerate() {
                // <K_j, K_i> = K_j(lambda_i), <Theta K_j, K_i> = Theta(lambda_i) K_j(lambda_i).
                let a = szego_kernel(pj, pi);
                let (ci, cj, di, dj) = (self.szego[i], self.szego[j], self.theta[i], self.theta[j]);
                total += (ci.conj() * cj * a).re + (di.conj() * dj * a).re;
                total += 2.0 * (ci.conj() * dj * tv[i] * a).re;
            }
        }
        total
    }
}

/// `T_{conj Theta}(sum c_j K_j) = sum c_j conj(Theta(lambda_j)) K_j`, as coefficients.
pub fn toeplitz_apply(theta: &InnerFunction, points: &[GapPoint], c: &[Complex64]) -> Vec<Complex64> {
    points.iter().zip(c).map(|(p, c)| c * theta.eval(p).value.conj()).collect()
}

/// `P_Theta(sum c_j K_j) = sum c_j K^Theta_j = f - Theta T_{conj Theta} f`.
pub fn project_model(theta: &InnerFunction, points: &[GapPoint], c: &[Complex64]) -> Result<KernelCombination> {
    let mut f = KernelCombination::szego_only(points.to_vec(), c.to_vec())?;
    f.theta = toeplitz_apply(theta, points, c).into_iter().map(|v| -v).collect();
    Ok(f)
}

/// `P_Theta` on a general combination; the `Theta H^2` part is annihilated.
pub fn project_combination(theta: &InnerFunction, f: &KernelCombination) -> KernelCombination {
    project_model(theta, &f.points, &f.szego).expect("lengths already match")
}
