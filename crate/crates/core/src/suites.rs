//! Verification suites T1..T9: each computes its quantities on a corpus and compares
//! them with fixed thresholds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::carleson::{carleson_constant, reproducing_constant, weierstrass_gap, DiscreteMeasure};
use crate::disk::{delta_profile, BlaschkeSequence, GapPoint, Generator, Window};
use crate::earl::{earl_bound, BeurlingSystem, Construction};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::GridSpec;
use crate::inner::InnerFunction;
use crate::interpolation::{eis_constant, iterative_solve, min_norm_interpolant, InterpolationProblem};
use crate::kernels::{build_gram, model_kernel, project_model, KernelCombination, KernelFamily};
use crate::spectral::{extremal_eigs, jacobi_eigenvalues, EigenOptions, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SuiteId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
}

impl SuiteId {
    pub const ALL: [SuiteId; 9] =
        [SuiteId::T1, SuiteId::T2, SuiteId::T3, SuiteId::T4, SuiteId::T5, SuiteId::T6, SuiteId::T7, SuiteId::T8, SuiteId::T9];

    pub fn title(&self) -> &'static str {
        match self {
            SuiteId::T1 => "thinness profile",
            SuiteId::T2 => "Carleson constant of mu_N tends to 1",
            SuiteId::T3 => "EIS constants",
            SuiteId::T4 => "model-space Carleson constants and ratio",
            SuiteId::T5 => "iterative interpolation with an approximate solver",
            SuiteId::T6 => "model projection identity",
            SuiteId::T7 => "Earl bound and Beurling functions",
            SuiteId::T8 => "extremal eigenvalues against Jacobi",
            SuiteId::T9 => "Weierstrass inequality",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::param("suite", format!("unknown suite {s:?}, expected T1..T9")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::Below => value < threshold,
            Relation::AtMost => value <= threshold,
            Relation::Above => value > threshold,
            Relation::AtLeast => value >= threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::AtMost => "<=",
            Relation::Above => ">",
            Relation::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        Check { label: label.into(), value, relation, threshold, pass: relation.holds(value, threshold) }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:.6e} {} {:e}", self.label, self.value, self.relation.symbol(), self.threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub id: SuiteId,
    pub title: String,
    pub checks: Vec<Check>,
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

/// Inputs shared by the suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    /// Sequence expected to be thin (T1..T4, T9).
    pub thin: BlaschkeSequence,
    /// Non-thin control (T1, T2, T9).
    pub control: BlaschkeSequence,
    pub theta: InnerFunction,
    /// Sequence and window for T5.
    pub iteration: (BlaschkeSequence, Window),
    /// Zeros of the Beurling system in T7.
    pub beurling: Vec<GapPoint>,
    pub eigen: EigenOptions,
    pub grid: GridSpec,
    pub seed: u64,
}

impl Corpus {
    /// Thin sequence `thin`, control radial-geometric(0.5), `Theta` = unit atom at 1.
    pub fn with_thin(thin: Generator, seed: u64) -> Result<Self> {
        let superexp = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, 19)?;
        let iteration_seq = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, 10)?;
        let window = iteration_seq.window(3, 10)?;
        Ok(Corpus {
            thin: BlaschkeSequence::generate(thin, 15)?,
            control: BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.5 }, 30)?,
            theta: InnerFunction::atomic(1.0, 0.0)?,
            iteration: (iteration_seq, window),
            beurling: superexp.points()[11..19].to_vec(),
            eigen: EigenOptions { seed, ..EigenOptions::default() },
            grid: GridSpec::default(),
            seed,
        })
    }

    /// The reference corpus with radial-factorial as the thin sequence.
    pub fn reference(seed: u64) -> Result<Self> {
        Self::with_thin(Generator::RadialFactorial, seed)
    }
}

type Checks = Result<Vec<Check>>;

/// `max_j (x_j - x_{j+1})`, positive iff the sequence decreases somewhere.
fn max_drop(xs: &[f64]) -> f64 {
    xs.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max)
}

fn t1(c: &Corpus, exec: Exec) -> Checks {
    let thin = delta_profile(&c.thin, c.thin.len(), 1e-12, exec)?;
    let values: Vec<f64> = thin.iter().map(|e| e.value).collect();
    let control = delta_profile(&c.control, c.control.len(), 1e-12, exec)?;
    let mut out = vec![Check::new("thin: max_j (delta_j - delta_{j+1})", max_drop(&values), Relation::AtMost, 0.0)];
    if let Some(e) = thin.get(11) {
        out.push(Check::new("thin: delta_12 (certified lower end)", e.lower, Relation::Above, 0.999));
    } else {
        return Err(Error::param("thin", "needs at least 12 points"));
    }
    let max_control = control.iter().map(|e| e.value).fold(0.0, f64::max);
    out.push(Check::new("control: max_j delta_j", max_control, Relation::Below, 0.9));
    Ok(out)
}

fn carleson_mu(seq: &BlaschkeSequence, n: usize, c: &Corpus, exec: Exec) -> Result<crate::carleson::Estimate> {
    let w = seq.window(n, seq.len())?;
    carleson_constant(&DiscreteMeasure::mu(seq, w)?, &KernelFamily::Hardy, seq, &c.eigen, exec)
}

fn t2(c: &Corpus, exec: Exec) -> Checks {
    let thin: Vec<_> = (1..=10).map(|n| carleson_mu(&c.thin, n, c, exec)).collect::<Result<_>>()?;
    let values: Vec<f64> = thin.iter().map(|e| e.value).collect();
    let increase = max_drop(&values.iter().map(|v| -v).collect::<Vec<_>>());
    let control = (1..=20).map(|n| carleson_mu(&c.control, n, c, exec).map(|e| e.value - 1.0)).collect::<Result<Vec<_>>>()?;
    Ok(vec![
        // Nested windows give exactly monotone constants; the slack is the eigen tolerance.
        Check::new("thin: max_N (C(mu_{N+1}) - C(mu_N))", increase, Relation::AtMost, 10.0 * c.eigen.tol),
        Check::new("thin: C(mu_10) - 1 + error bar", thin[9].upper() - 1.0, Relation::Below, 0.05),
        Check::new(
            "control: min_{N<=20} C(mu_N) - 1",
            control.iter().cloned().fold(f64::INFINITY, f64::min),
            Relation::Above,
            0.1,
        ),
    ])
}

fn t3(c: &Corpus, exec: Exec) -> Checks {
    let mut max_diff = 0.0f64;
    let mut eis10 = f64::NAN;
    for n in 1..=10 {
        let w = c.thin.window(n, c.thin.len())?;
        let eis = eis_constant(&KernelFamily::Hardy, &c.thin, w, &c.eigen, exec)?;
        let g = build_gram(&KernelFamily::Hardy, &c.thin, w, exec)?;
        let oracle = 1.0 / jacobi_eigenvalues(g.matrix())[0].sqrt();
        max_diff = max_diff.max((eis - oracle).abs());
        if n == 10 {
            eis10 = eis;
        }
    }
    Ok(vec![
        Check::new("max_N |eis(N) - 1/sqrt(lambda_min(G_N))|", max_diff, Relation::AtMost, 1e-10),
        Check::new("eis(10)", eis10, Relation::Below, 1.05),
    ])
}

fn t4(c: &Corpus, exec: Exec) -> Checks {
    let seq = &c.thin;
    let theta = &c.theta;
    let model = KernelFamily::Model(theta.clone());
    let kappa10 = theta.tail_kappa(seq, 10)?;
    let mut ratio_dev = 0.0f64;
    let mut chain_low = f64::INFINITY;
    let mut chain_gap = f64::NEG_INFINITY;
    for n in 1..seq.len() {
        let w = seq.window(n, seq.len())?;
        let sigma = DiscreteMeasure::sigma(seq, theta, w)?;
        let c_sigma = carleson_constant(&sigma, &model, seq, &c.eigen, exec)?;
        let r2 = reproducing_constant(&sigma, &model, seq, &c.grid, exec)?;
        chain_low = chain_low.min(r2.value);
        chain_gap = chain_gap.max(r2.value - c_sigma.value);
        if n >= 10 {
            let c_mu = carleson_mu(seq, n, c, exec)?;
            let ratio = c_sigma.value / c_mu.value;
            ratio_dev = ratio_dev.max((ratio - 1.0).abs());
        }
    }
    Ok(vec![
        Check::new("kappa_10", kappa10, Relation::Below, 1e-3),
        Check::new("max_{N>=10} |C_Theta(sigma_N)/C(mu_N) - 1|", ratio_dev, Relation::AtMost, 0.05),
        Check::new("min_N R^2_Theta(sigma_N)", chain_low, Relation::AtLeast, 1.0 - 1e-12),
        Check::new("max_N R^2_Theta(sigma_N) - C_Theta(sigma_N)", chain_gap, Relation::AtMost, 10.0 * c.eigen.tol),
    ])
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn t5(c: &Corpus, exec: Exec) -> Checks {
    const RHO: f64 = 0.25;
    let eps = RHO / (1.0 - RHO);
    let (seq, window) = &c.iteration;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x75);
    let mut step_ratio = 0.0f64;
    let mut final_residual = 0.0f64;
    let mut final_excess = f64::NEG_INFINITY;
    for _ in 0..100 {
        let targets: Vec<Complex64> = (0..window.len()).map(|_| random_complex(&mut rng)).collect();
        let p = InterpolationProblem::new(KernelFamily::Hardy, seq, *window, targets)?;
        let a_norm = p.target_norm();
        // Exact minimal-norm interpolation of (1 - rho) a leaves relative residual rho.
        let approx = |a: &[Complex64]| -> Result<Vec<Complex64>> {
            let scaled = a.iter().map(|x| x * (1.0 - RHO)).collect();
            let q = InterpolationProblem::new(KernelFamily::Hardy, seq, *window, scaled)?;
            Ok(min_norm_interpolant(&q, seq, &c.eigen, Exec::Sequential)?.coefficients)
        };
        let (_, trace) = iterative_solve(&p, seq, &approx, eps, 200, exec)?;
        for s in trace.steps.iter().take(10) {
            step_ratio = step_ratio.max(s.residual / (RHO.powi(s.k as i32 + 1) * a_norm));
        }
        final_residual = final_residual.max(trace.final_residual / a_norm);
        final_excess = final_excess.max(trace.final_norm - ((1.0 + eps) * a_norm + 1e-8));
    }
    Ok(vec![
        Check::new("max_{k<=10} ||a^(k)|| / (0.25^k ||a||)", step_ratio, Relation::AtMost, 1.0 + 1e-9),
        Check::new("max final residual / ||a||", final_residual, Relation::AtMost, 1e-10),
        Check::new("max ||F|| - ((1+eps)||a|| + 1e-8)", final_excess, Relation::AtMost, 0.0),
    ])
}

fn random_point(rng: &mut ChaCha8Rng, max_mod: f64) -> GapPoint {
    let r = max_mod * rng.gen::<f64>().sqrt();
    GapPoint::from_complex(Complex64::from_polar(r, rng.gen_range(-PI..PI))).expect("inside the disk")
}

fn t6(c: &Corpus, _exec: Exec) -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x76);
    let mut max_err = 0.0f64;
    let mut norm_excess = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let mut theta = InnerFunction::atomic(rng.gen_range(0.05..3.0), rng.gen_range(-3.1..3.1))?;
        let zeros = rng.gen_range(0..3);
        if zeros > 0 {
            theta = theta.times(InnerFunction::blaschke((0..zeros).map(|_| random_point(&mut rng, 0.9)).collect())?);
        }
        let n = rng.gen_range(1..6);
        let points: Vec<GapPoint> = (0..n).map(|_| random_point(&mut rng, 0.9)).collect();
        let coeffs: Vec<Complex64> = (0..n).map(|_| random_complex(&mut rng)).collect();
        let z = random_point(&mut rng, 0.95);
        let f = KernelCombination::szego_only(points.clone(), coeffs.clone())?;
        let projected = project_model(&theta, &points, &coeffs)?;
        // Independent side: sum c_j K^Theta_{lambda_j}(z).
        let direct: Complex64 = points.iter().zip(&coeffs).map(|(p, a)| a * model_kernel(&theta, p, &z)).sum();
        max_err = max_err.max((projected.eval(&theta, &z) - direct).norm());
        norm_excess = norm_excess.max(projected.norm_sq(&theta).sqrt() - f.norm_sq(&theta).sqrt());
    }
    Ok(vec![
        Check::new("max |P_Theta f(z) - (f - Theta T f)(z)|", max_err, Relation::AtMost, 1e-12),
        Check::new("max ||P_Theta f|| - ||f||", norm_excess, Relation::AtMost, 1e-12),
    ])
}

fn t7(c: &Corpus, exec: Exec) -> Checks {
    let earl = (earl_bound(0.5f64.sqrt())? - (3.0 + 2.0 * 2f64.sqrt())).abs();
    let system = BeurlingSystem::new(c.beurling.clone(), Construction::damped_for(&c.beurling)?)?;
    let n = c.beurling.len();
    let mut kron = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let want = if j == k { 1.0 } else { 0.0 };
            kron = kron.max((system.eval(j, &c.beurling[k]) - Complex64::new(want, 0.0)).norm());
        }
    }
    let sup = system.grid_sup(&c.grid, exec);
    Ok(vec![
        Check::new("|earl_bound(1/sqrt 2) - (3 + 2 sqrt 2)|", earl, Relation::AtMost, 1e-12),
        Check::new(format!("{n}-point window: max |f_j(lambda_k) - delta_jk|"), kron, Relation::AtMost, 1e-12),
        Check::new(
            format!("grid sup sum |f_j| - bound(gamma = {:.10})", system.gamma()),
            sup.value - system.bound(),
            Relation::AtMost,
            0.01,
        ),
    ])
}

fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let a: Vec<Complex64> = (0..n * n).map(|_| random_complex(rng)).collect();
    let mut e = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            e[i * n + j] = (0..n).map(|k| a[k * n + i].conj() * a[k * n + j]).sum();
        }
    }
    HermitianMatrix::new(n, e).expect("square")
}

fn t8(c: &Corpus, exec: Exec) -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x78);
    let mut max_diff = 0.0f64;
    for i in 0..100 {
        let h = random_psd(&mut rng, 1 + i % 6);
        let e = extremal_eigs(&h, &c.eigen, exec)?;
        let ev = jacobi_eigenvalues(&h);
        max_diff = max_diff.max((e.lambda_min - ev[0]).abs()).max((e.lambda_max - ev[ev.len() - 1]).abs());
    }
    Ok(vec![Check::new("max |lambda_ext - jacobi|", max_diff, Relation::AtMost, 1e-8)])
}

fn t9(c: &Corpus, _exec: Exec) -> Checks {
    let mut out = Vec::new();
    for (name, seq) in [("thin", &c.thin), ("control", &c.control)] {
        let mut slack = f64::INFINITY;
        for n in 1..seq.len() {
            let w = seq.window(n, seq.len())?;
            for probe in w.indices() {
                let (product, sum_side) = weierstrass_gap(seq, w, probe)?;
                slack = slack.min(product - sum_side);
            }
        }
        out.push(Check::new(format!("{name}: min prod - (1 - sum)"), slack, Relation::AtLeast, -1e-14));
    }
    Ok(out)
}

pub fn run_suite(id: SuiteId, corpus: &Corpus, exec: Exec) -> SuiteReport {
    let result = match id {
        SuiteId::T1 => t1(corpus, exec),
        SuiteId::T2 => t2(corpus, exec),
        SuiteId::T3 => t3(corpus, exec),
        SuiteId::T4 => t4(corpus, exec),
        SuiteId::T5 => t5(corpus, exec),
        SuiteId::T6 => t6(corpus, exec),
        SuiteId::T7 => t7(corpus, exec),
        SuiteId::T8 => t8(corpus, exec),
        SuiteId::T9 => t9(corpus, exec),
    };
    let (checks, error) = match result {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    SuiteReport { id, title: id.title().to_string(), checks, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("t4".parse::<SuiteId>().unwrap(), SuiteId::T4);
        assert!("T10".parse::<SuiteId>().is_err());
        assert_eq!(SuiteId::ALL.len(), 9);
    }

    #[test]
    fn check_relations() {
        assert!(Check::new("x", 1.0, Relation::AtMost, 1.0).pass);
        assert!(!Check::new("x", 1.0, Relation::Below, 1.0).pass);
        assert!(!Check::new("x", f64::NAN, Relation::AtLeast, 0.0).pass);
        let r = SuiteReport { id: SuiteId::T1, title: String::new(), checks: Vec::new(), error: None };
        assert!(!r.passed());
    }

    #[test]
    fn cheap_suites_pass_on_the_thin_corpus() {
        let c = Corpus::with_thin(Generator::RadialSuperexp { q: 0.5 }, 0).unwrap();
        for id in [SuiteId::T2, SuiteId::T3, SuiteId::T8, SuiteId::T9] {
            let r = run_suite(id, &c, Exec::Parallel);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn radial_profiles_dip_after_the_first_point() {
        // rho(lambda_1, lambda_k) > rho(lambda_2, lambda_k) for radial points, so delta_1 > delta_2.
        let c = Corpus::with_thin(Generator::RadialSuperexp { q: 0.5 }, 0).unwrap();
        let r = run_suite(SuiteId::T1, &c, Exec::Sequential);
        assert!(!r.checks[0].pass && r.checks[0].value > 0.04);
        assert!(r.checks[1].pass && r.checks[2].pass);
    }

    #[test]
    fn geometric_marked_thin_fails_t2() {
        let c = Corpus::with_thin(Generator::RadialGeometric { q: 0.5 }, 0).unwrap();
        let r = run_suite(SuiteId::T2, &c, Exec::Parallel);
        assert!(r.error.is_none());
        assert!(!r.passed());
    }
}
