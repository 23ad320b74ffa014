//! Inner functions built from finite Blaschke products, atomic singular factors and
//! truncated Blaschke products over a stored sequence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{
    blaschke_factor, cdiv, log_pseudo_distance_sq, one_minus_conj_product, pseudo_distance_sq, BlaschkeSequence, GapPoint,
};
use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Factor {
    /// Zeros may repeat.
    FiniteBlaschke { zeros: Vec<GapPoint> },
    /// `exp(-mass (zeta + z)/(zeta - z))` with `zeta = exp(i angle)`.
    AtomicSingular { mass: f64, angle: f64 },
    /// Blaschke product over `seq[1..=cutoff]`; `tail_sum` bounds the omitted `sum gap_k`.
    TruncatedBlaschke { seq: BlaschkeSequence, cutoff: usize, tail_sum: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerFunction {
    factors: Vec<Factor>,
}

/// `Theta(z)` together with a certified interval for `|Theta(z)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerValue {
    pub value: Complex64,
    /// `ln |value|^2`; `-inf` at a zero.
    pub log_mod_sq: f64,
    pub lower: f64,
    pub upper: f64,
}

impl InnerValue {
    fn zero() -> Self {
        InnerValue { value: Complex64::new(0.0, 0.0), log_mod_sq: f64::NEG_INFINITY, lower: 0.0, upper: 0.0 }
    }

    pub fn modulus(&self) -> f64 {
        self.upper
    }

    /// `1 - |value|^2` without cancellation.
    pub fn one_minus_mod_sq(&self) -> f64 {
        -self.log_mod_sq.exp_m1()
    }
}

struct Partial {
    log_mod_sq: f64,
    phase: Complex64,
    lower_factor: f64,
}

impl Partial {
    fn push(&mut self, value: Complex64, log_mod_sq: f64) {
        self.log_mod_sq += log_mod_sq;
        let m = value.norm();
        if m > 0.0 {
            self.phase *= value / m;
        }
    }

    fn push_blaschke(&mut self, a: &GapPoint, z: &GapPoint) -> bool {
        if pseudo_distance_sq(a, z).0 == 0.0 {
            return false;
        }
        self.push(blaschke_factor(a, z), log_pseudo_distance_sq(a, z));
        true
    }
}

/// `(P, Q)` with `(zeta + z)/(zeta - z) = P + iQ`, scaled so tiny gaps do not underflow.
fn herglotz_point(angle: f64, z: &GapPoint) -> (f64, f64) {
    let psi = z.arg() - angle;
    let g = z.gap();
    let r = z.modulus();
    let chord = 2.0 * r.sqrt() * (psi * 0.5).sin().abs();
    let m = g.max(chord);
    let den = m * ((g / m).powi(2) + (chord / m).powi(2));
    (z.weight() / m / den, 2.0 * r * psi.sin() / m / den)
}

/// `expm1` for complex arguments without cancellation near 0.
fn complex_expm1(w: Complex64) -> Complex64 {
    let s = (0.5 * w.im).sin();
    Complex64::new(w.re.exp_m1() * w.im.cos() - 2.0 * s * s, w.re.exp() * w.im.sin())
}

/// `1 - z e^{-i angle}` from the gap and the half-angle sine.
fn one_minus_rotated(angle: f64, z: &GapPoint) -> Complex64 {
    let psi = z.arg() - angle;
    let h = (psi * 0.5).sin();
    let r = z.modulus();
    Complex64::new(z.gap() + 2.0 * r * h * h, -r * psi.sin())
}

impl InnerFunction {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::param("factors", "an inner function needs at least one factor"));
        }
        for f in &factors {
            match f {
                Factor::FiniteBlaschke { zeros } if zeros.is_empty() => {
                    return Err(Error::param("zeros", "a Blaschke factor needs at least one zero"));
                }
                Factor::AtomicSingular { mass, angle } => {
                    if !(*mass > 0.0 && mass.is_finite()) {
                        return Err(Error::param("mass", format!("must be positive, got {mass}")));
                    }
                    if !angle.is_finite() {
                        return Err(Error::param("angle", "must be finite"));
                    }
                }
                Factor::TruncatedBlaschke { seq, cutoff, tail_sum } => {
                    if *cutoff == 0 || *cutoff > seq.len() {
                        return Err(Error::Window { start: 1, end: *cutoff, len: seq.len() });
                    }
                    if !(*tail_sum >= 0.0) {
                        return Err(Error::param("tail_sum", "must be nonnegative"));
                    }
                }
                _ => {}
            }
        }
        Ok(InnerFunction { factors })
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Result<Self> {
        Self::blaschke(vec![GapPoint::origin(); k])
    }

    pub fn blaschke(zeros: Vec<GapPoint>) -> Result<Self> {
        Self::new(vec![Factor::FiniteBlaschke { zeros }])
    }

    pub fn atomic(mass: f64, angle: f64) -> Result<Self> {
        Self::new(vec![Factor::AtomicSingular { mass, angle }])
    }

    /// Blaschke product over the first `cutoff` points, with the tail bounded from `seq`.
    pub fn truncated(seq: BlaschkeSequence, cutoff: usize) -> Result<Self> {
        let tail_sum = if cutoff <= seq.len() { seq.tail_beyond(cutoff, 1.0) } else { 0.0 };
        Self::new(vec![Factor::TruncatedBlaschke { seq, cutoff, tail_sum }])
    }

    pub fn times(mut self, other: InnerFunction) -> Self {
        self.factors.extend(other.factors);
        self
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn eval(&self, z: &GapPoint) -> InnerValue {
        let mut acc = Partial { log_mod_sq: 0.0, phase: Complex64::new(1.0, 0.0), lower_factor: 1.0 };
        for f in &self.factors {
            match f {
                Factor::FiniteBlaschke { zeros } => {
                    for a in zeros {
                        if !acc.push_blaschke(a, z) {
                            return InnerValue::zero();
                        }
                    }
                }
                Factor::AtomicSingular { mass, angle } => {
                    let (p, q) = herglotz_point(*angle, z);
                    let log_mod_sq = -2.0 * mass * p;
                    acc.push(Complex64::from_polar(1.0, -mass * q), 0.0);
                    acc.log_mod_sq += log_mod_sq;
                }
                Factor::TruncatedBlaschke { seq, cutoff, tail_sum } => {
                    for a in &seq.points()[..*cutoff] {
                        if !acc.push_blaschke(a, z) {
                            return InnerValue::zero();
                        }
                    }
                    acc.lower_factor *= (1.0 - 2.0 * tail_sum / z.gap()).max(0.0);
                }
            }
        }
        let upper = (0.5 * acc.log_mod_sq).exp();
        InnerValue { value: acc.phase * upper, log_mod_sq: acc.log_mod_sq, lower: upper * acc.lower_factor, upper }
    }

    /// `1 - conj(Theta(mu)) Theta(lambda)`, accumulated factor by factor so that it keeps
    /// relative accuracy when `|Theta|` is close to 1 at both points.
    pub fn one_minus_conj_product(&self, lambda: &GapPoint, mu: &GapPoint) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let base = one_minus_conj_product(mu, lambda);
        let mut total = Complex64::new(0.0, 0.0);
        let mut prefix = one;
        let blaschke = |a: &GapPoint, total: &mut Complex64, prefix: &mut Complex64| {
            // 1 - conj(b(mu)) b(lambda) = (1 - |a|^2)(1 - conj(mu) lambda) / ((1 - conj(a) lambda) conj(1 - conj(a) mu))
            let d = if a.is_origin() {
                base
            } else {
                let t = cdiv(Complex64::new(a.weight(), 0.0), one_minus_conj_product(a, lambda));
                t * cdiv(base, one_minus_conj_product(a, mu).conj())
            };
            *total += *prefix * d;
            *prefix *= blaschke_factor(a, mu).conj() * blaschke_factor(a, lambda);
        };
        for f in &self.factors {
            match f {
                Factor::FiniteBlaschke { zeros } => {
                    for a in zeros {
                        blaschke(a, &mut total, &mut prefix);
                    }
                }
                Factor::TruncatedBlaschke { seq, cutoff, .. } => {
                    for a in &seq.points()[..*cutoff] {
                        blaschke(a, &mut total, &mut prefix);
                    }
                }
                Factor::AtomicSingular { mass, angle } => {
                    // conj(H(mu)) + H(lambda) = 2 (1 - conj(mu) lambda) / ((zeta - lambda) conj(zeta - mu))
                    let x =
                        cdiv(cdiv(base, one_minus_rotated(*angle, lambda)), one_minus_rotated(*angle, mu).conj()) * (2.0 * mass);
                    let (d, v) = if x.re.is_finite() && x.im.is_finite() {
                        (-complex_expm1(-x), (-x).exp())
                    } else {
                        (one, Complex64::new(0.0, 0.0))
                    };
                    total += prefix * d;
                    prefix *= v;
                }
            }
        }
        total
    }

    pub fn eval_many(&self, points: &[GapPoint], exec: Exec) -> Vec<InnerValue> {
        exec.map_slice(points, |z| self.eval(z))
    }

    /// `kappa_m` for every `m = 1..=len`: suffix maxima of the certified upper moduli.
    pub fn kappa_profile(&self, seq: &BlaschkeSequence, exec: Exec) -> Vec<f64> {
        let mut kappa: Vec<f64> = self.eval_many(seq.points(), exec).iter().map(|v| v.upper).collect();
        for i in (0..kappa.len().saturating_sub(1)).rev() {
            kappa[i] = kappa[i].max(kappa[i + 1]);
        }
        kappa
    }

    /// `kappa_m = max_{n >= m} |Theta(lambda_n)|` over the stored points.
    pub fn tail_kappa(&self, seq: &BlaschkeSequence, m: usize) -> Result<f64> {
        if m == 0 || m > seq.len() {
            return Err(Error::Window { start: m, end: seq.len(), len: seq.len() });
        }
        Ok(seq.points()[m - 1..].iter().map(|p| self.eval(p).upper).fold(0.0, f64::max))
    }
}
