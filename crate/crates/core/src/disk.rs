//! Pseudohyperbolic geometry of the unit disk, Blaschke factors and the thinness profile.
//!
//! Points are stored as `(arg, gap)` with `gap = 1 - |z|`. Every quantity involving
//! `1 - |z|^2`, `1 - |z||w|` or `|1 - conj(w) z|` is assembled from gaps and half-angle
//! sines, so nothing cancels when points sit exponentially close to the circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Gaps below this are not generated; the generator stops and flags truncation.
pub const UNDERFLOW_GAP: f64 = 1e-300;

/// A point of the open unit disk, `(1 - gap) * exp(i arg)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    arg: f64,
    gap: f64,
}

/// Alias used where an operation is about a generic point of the disk.
pub type DiskPoint = GapPoint;

impl GapPoint {
    pub fn new(arg: f64, gap: f64) -> Result<Self> {
        if !arg.is_finite() {
            return Err(Error::param("arg", format!("must be finite, got {arg}")));
        }
        if !(gap > 0.0 && gap <= 1.0) {
            return Err(Error::Domain { modulus: 1.0 - gap });
        }
        Ok(GapPoint { arg, gap })
    }

    /// Point on the positive real axis at distance `gap` from 1.
    pub fn radial(gap: f64) -> Result<Self> {
        Self::new(0.0, gap)
    }

    pub fn origin() -> Self {
        GapPoint { arg: 0.0, gap: 1.0 }
    }

    /// Converts a complex number; the gap is `1 - |z|` and so carries the cancellation
    /// of that subtraction. Prefer [`GapPoint::new`] near the boundary.
    pub fn from_complex(z: Complex64) -> Result<Self> {
        let modulus = z.norm();
        if !(modulus < 1.0) {
            return Err(Error::Domain { modulus });
        }
        if modulus == 0.0 {
            return Ok(Self::origin());
        }
        Ok(GapPoint { arg: z.arg(), gap: 1.0 - modulus })
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn modulus(&self) -> f64 {
        1.0 - self.gap
    }

    pub fn is_origin(&self) -> bool {
        self.gap == 1.0
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus(), self.arg)
    }

    /// `1 - |z|^2`, computed as `gap (2 - gap)`.
    pub fn weight(&self) -> f64 {
        self.gap * (2.0 - self.gap)
    }
}

/// Returns `(rho^2, 1 - rho^2)`, each computed without cancellation.
///
/// Both `|z - w|^2` and `|1 - conj(w) z|^2` are divided by a common scale before
/// squaring, so gaps down to the underflow guard never square to zero.
pub fn pseudo_distance_sq(z: &GapPoint, w: &GapPoint) -> (f64, f64) {
    let (gz, gw) = (z.gap, w.gap);
    let s = ((z.arg - w.arg) * 0.5).sin().abs();
    let chord = 2.0 * (z.modulus() * w.modulus()).sqrt() * s;
    let d = gz + gw - gz * gw;
    let m = d.max(chord);
    let (a, u, dg) = (d / m, chord / m, (gz - gw) / m);
    let den = a * a + u * u;
    ((dg * dg + u * u) / den, (z.weight() / m) * (w.weight() / m) / den)
}

/// Complex quotient without forming `|b|^2` (Smith's scaling).
pub(crate) fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let den = b.re + b.im * r;
        Complex64::new((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    } else {
        let r = b.re / b.im;
        let den = b.re * r + b.im;
        Complex64::new((a.re * r + a.im) / den, (a.im * r - a.re) / den)
    }
}

/// `rho(z, w) = |z - w| / |1 - conj(w) z|`.
pub fn pseudo_distance(z: &GapPoint, w: &GapPoint) -> f64 {
    pseudo_distance_sq(z, w).0.sqrt()
}

/// `ln rho(z, w)^2`, accurate both for rho near 0 and rho near 1.
pub fn log_pseudo_distance_sq(z: &GapPoint, w: &GapPoint) -> f64 {
    let (rho_sq, one_minus) = pseudo_distance_sq(z, w);
    if one_minus < 0.5 {
        (-one_minus).ln_1p()
    } else {
        rho_sq.ln()
    }
}

/// Pseudohyperbolic distance between raw complex numbers.
pub fn pseudo_distance_complex(z: Complex64, w: Complex64) -> Result<f64> {
    Ok(pseudo_distance(&GapPoint::from_complex(z)?, &GapPoint::from_complex(w)?))
}

/// `1 - conj(a) z`, built from gaps and the half-angle sine.
pub fn one_minus_conj_product(a: &GapPoint, z: &GapPoint) -> Complex64 {
    let phi = z.arg - a.arg;
    let rr = a.modulus() * z.modulus();
    let h = (phi * 0.5).sin();
    let d = a.gap + z.gap - a.gap * z.gap;
    Complex64::new(d + 2.0 * rr * h * h, -rr * phi.sin())
}

/// `(-conj(a)/|a|) (z - a) / (1 - conj(a) z)`, and `z` itself when `a = 0`.
pub fn blaschke_factor(a: &GapPoint, z: &GapPoint) -> Complex64 {
    if a.is_origin() {
        return z.value();
    }
    // Rotated form: (r_a - r_z e^{i phi}) / (1 - r_a r_z e^{i phi}), phi = arg z - arg a.
    let phi = z.arg - a.arg;
    let h = (phi * 0.5).sin();
    let rz = z.modulus();
    let num = Complex64::new((z.gap - a.gap) + 2.0 * rz * h * h, -rz * phi.sin());
    cdiv(num, one_minus_conj_product(a, z))
}

/// How a [`BlaschkeSequence`] was produced. Radial generators place every point on
/// the positive real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// `gap_n = q^n`
    RadialGeometric { q: f64 },
    /// `gap_n = 1/n!`
    RadialFactorial,
    /// `gap_n = q^(n^2)`
    RadialSuperexp { q: f64 },
    /// Finite list supplied by the caller; no tail.
    Explicit,
}

impl Generator {
    fn validate(&self) -> Result<()> {
        match *self {
            Generator::RadialGeometric { q } | Generator::RadialSuperexp { q } => {
                if q > 0.0 && q < 1.0 {
                    Ok(())
                } else {
                    Err(Error::param("q", format!("must lie in (0, 1), got {q}")))
                }
            }
            _ => Ok(()),
        }
    }

    /// `gap_n` for 1-based `n`.
    fn gap(&self, n: usize, prev: f64) -> f64 {
        match *self {
            Generator::RadialGeometric { q } => q.powf(n as f64),
            Generator::RadialFactorial => prev / n as f64,
            Generator::RadialSuperexp { q } => ((n * n) as f64 * q.ln()).exp(),
            Generator::Explicit => unreachable!("explicit sequences are not generated"),
        }
    }

    /// Upper bound for `sum_{k > n} gap_k^power`.
    pub fn tail_bound(&self, n: usize, power: f64) -> f64 {
        let m = (n + 1) as f64;
        match *self {
            Generator::RadialGeometric { q } => {
                let qp = q.powf(power);
                qp.powf(m) / (1.0 - qp)
            }
            Generator::RadialFactorial => {
                let ln_fact: f64 = (2..=n + 1).map(|k| (k as f64).ln()).sum();
                let first = (-power * ln_fact).exp();
                first / (1.0 - (m + 1.0).powf(-power))
            }
            Generator::RadialSuperexp { q } => {
                let lq = power * q.ln();
                (m * m * lq).exp() / (1.0 - ((2.0 * m + 1.0) * lq).exp())
            }
            Generator::Explicit => 0.0,
        }
    }
}

/// Ordered points `lambda_1, lambda_2, ...` (1-based) with their Blaschke sum and
/// a certified bound on whatever tail the generator did not store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSequence {
    points: Vec<GapPoint>,
    blaschke_sum: f64,
    generator: Generator,
    truncated: bool,
}

impl BlaschkeSequence {
    /// Emits the first `n` points of a radial generator. Generation stops early, with
    /// [`BlaschkeSequence::truncated`] set, once the next gap would drop below
    /// [`UNDERFLOW_GAP`].
    pub fn generate(generator: Generator, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("count", "must be at least 1"));
        }
        if generator == Generator::Explicit {
            return Err(Error::param("kind", "explicit sequences are built with from_points"));
        }
        generator.validate()?;
        let mut points = Vec::with_capacity(n);
        let mut prev = 1.0;
        let mut truncated = false;
        for k in 1..=n {
            let gap = generator.gap(k, prev);
            if !(gap >= UNDERFLOW_GAP) {
                truncated = true;
                break;
            }
            points.push(GapPoint::radial(gap)?);
            prev = gap;
        }
        let blaschke_sum = points.iter().map(GapPoint::gap).sum();
        Ok(BlaschkeSequence { points, blaschke_sum, generator, truncated })
    }

    /// Finite sequence from explicit points, which must be pairwise distinct.
    pub fn from_points(points: Vec<GapPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("points", "must not be empty"));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if pseudo_distance_sq(&points[i], &points[j]).0 == 0.0 {
                    return Err(Error::DuplicatePoint { first: i + 1, second: j + 1 });
                }
            }
        }
        let blaschke_sum = points.iter().map(GapPoint::gap).sum();
        Ok(BlaschkeSequence { points, blaschke_sum, generator: Generator::Explicit, truncated: false })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GapPoint] {
        &self.points
    }

    /// 1-based access, matching `lambda_k`.
    pub fn point(&self, k: usize) -> &GapPoint {
        &self.points[k - 1]
    }

    pub fn blaschke_sum(&self) -> f64 {
        self.blaschke_sum
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Bound on `sum gap_k^power` over the points the generator did not store.
    pub fn unstored_tail(&self, power: f64) -> f64 {
        self.generator.tail_bound(self.len(), power)
    }

    /// Bound on `sum_{k > m} gap_k^power`, stored points included.
    pub fn tail_beyond(&self, m: usize, power: f64) -> f64 {
        let stored: f64 = self.points[m.min(self.len())..].iter().map(|p| p.gap.powf(power)).sum();
        stored + self.unstored_tail(power)
    }

    pub fn window(&self, start: usize, end: usize) -> Result<Window> {
        Window::new(start, end, self.len())
    }
}

/// Inclusive 1-based index range `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn new(start: usize, end: usize, len: usize) -> Result<Self> {
        if start == 0 || start > end || end > len {
            return Err(Error::Window { start, end, len });
        }
        Ok(Window { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    /// Zero-based slice range into the stored points.
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start - 1..self.end
    }
}

/// One entry of the thinness profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub index: usize,
    /// Product over every stored `k != j`.
    pub value: f64,
    /// Certified lower bound for the infinite product.
    pub lower: f64,
    /// `value - lower <= tail_tol`.
    pub tail_resolved: bool,
}

impl DeltaEntry {
    pub fn certified_error(&self) -> f64 {
        self.value - self.lower
    }
}

/// `prod_{k != j} rho(points[j], points[k])` over a slice (0-based `j`), accumulated
/// in log space.
pub fn delta_within(points: &[GapPoint], j: usize) -> Result<f64> {
    let mut log_sq = 0.0;
    for (k, p) in points.iter().enumerate() {
        if k == j {
            continue;
        }
        let (rho_sq, _) = pseudo_distance_sq(&points[j], p);
        if rho_sq == 0.0 {
            let (first, second) = if j < k { (j + 1, k + 1) } else { (k + 1, j + 1) };
            return Err(Error::DuplicatePoint { first, second });
        }
        log_sq += log_pseudo_distance_sq(&points[j], p);
    }
    let delta = (0.5 * log_sq).exp();
    if delta == 0.0 {
        return Err(Error::NonInterpolating { index: j + 1 });
    }
    Ok(delta)
}

/// `delta_j` for `j = 1..=j_max` with a certified interval for the unstored tail.
///
/// Each tail point obeys `1 - rho(lambda_j, lambda_k) <= 2 gap_k / gap_j`, so the tail
/// factor lies in `[max(0, 1 - 2 S / gap_j), 1]` with `S` the unstored Blaschke tail.
pub fn delta_profile(seq: &BlaschkeSequence, j_max: usize, tail_tol: f64, exec: Exec) -> Result<Vec<DeltaEntry>> {
    if seq.len() < 2 {
        return Err(Error::param("sequence", "needs at least two points"));
    }
    if !(tail_tol > 0.0) {
        return Err(Error::param("tail_tol", "must be positive"));
    }
    let j_max = j_max.min(seq.len());
    let tail = seq.unstored_tail(1.0);
    let entries = exec.map_range(j_max, |j| {
        let value = delta_within(seq.points(), j)?;
        let factor = (1.0 - 2.0 * tail / seq.points[j].gap).max(0.0);
        let lower = value * factor;
        Ok(DeltaEntry { index: j + 1, value, lower, tail_resolved: value - lower <= tail_tol })
    });
    entries.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pseudo_distance_examples() {
        let o = GapPoint::origin();
        let half = GapPoint::radial(0.5).unwrap();
        assert_abs_diff_eq!(pseudo_distance(&o, &half), 0.5, epsilon = 1e-15);
        assert_eq!(pseudo_distance(&half, &half), 0.0);
        // |0.5 - (-0.5)| / |1 + 0.25| = 0.8
        let d = pseudo_distance_complex(c(0.5, 0.0), c(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(d, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn pseudo_distance_rejects_boundary() {
        assert!(matches!(pseudo_distance_complex(c(1.0, 0.0), c(0.0, 0.0)), Err(Error::Domain { .. })));
        assert!(GapPoint::new(0.0, 0.0).is_err());
        assert!(GapPoint::new(0.0, 1.5).is_err());
    }

    #[test]
    fn blaschke_factor_examples() {
        let z = GapPoint::from_complex(c(0.3, -0.2)).unwrap();
        let b = blaschke_factor(&GapPoint::origin(), &z);
        assert_abs_diff_eq!((b - z.value()).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(blaschke_factor(&z, &z), Complex64::new(0.0, 0.0));
        let half = GapPoint::radial(0.5).unwrap();
        let b = blaschke_factor(&half, &GapPoint::origin());
        assert_abs_diff_eq!((b - c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn blaschke_factor_matches_naive_formula() {
        let a = GapPoint::from_complex(c(-0.4, 0.5)).unwrap();
        let z = GapPoint::from_complex(c(0.2, 0.7)).unwrap();
        let (av, zv) = (a.value(), z.value());
        let naive = (-av.conj() / av.norm()) * (zv - av) / (1.0 - av.conj() * zv);
        assert_abs_diff_eq!((blaschke_factor(&a, &z) - naive).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(blaschke_factor(&a, &z).norm(), pseudo_distance(&a, &z), epsilon = 1e-14);
    }

    #[test]
    fn near_boundary_radial_distance_is_exact() {
        // rho = (g1 - g2) / (g1 + g2 - g1 g2) for radial points.
        let (g1, g2) = (1e-200, 1e-230);
        let p = GapPoint::radial(g1).unwrap();
        let q = GapPoint::radial(g2).unwrap();
        let (_, one_minus) = pseudo_distance_sq(&p, &q);
        let d = g1 + g2 - g1 * g2;
        let rho = (g1 - g2) / d;
        // 1 - rho = g2 (2 - g1) / d, then 1 - rho^2 = (1 - rho)(1 + rho).
        let expected = g2 * (2.0 - g1) / d * (1.0 + rho);
        assert!(((one_minus - expected) / expected).abs() < 1e-14);
        assert!(one_minus > 0.0 && one_minus < 1e-29);
    }

    #[test]
    fn tiny_gaps_do_not_underflow() {
        let p = GapPoint::new(0.0, 1e-290).unwrap();
        let q = GapPoint::new(1e-295, 3e-291).unwrap();
        let (rho_sq, one_minus) = pseudo_distance_sq(&p, &q);
        assert!(rho_sq.is_finite() && one_minus.is_finite());
        assert!((rho_sq + one_minus - 1.0).abs() < 1e-12);
        let b = blaschke_factor(&p, &q);
        assert!((b.norm() - rho_sq.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn smith_division_matches_naive() {
        let a = c(0.3, -1.7);
        for b in [c(2.0, 0.5), c(-0.1, 4.0), c(1e-200, -3e-201)] {
            let q = cdiv(a, b);
            assert!(((q * b) - a).norm() < 1e-14);
        }
    }

    #[test]
    fn generator_examples() {
        let s = BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.5 }, 3).unwrap();
        let gaps: Vec<f64> = s.points().iter().map(|p| p.gap()).collect();
        assert_eq!(gaps, vec![0.5, 0.25, 0.125]);
        let s = BlaschkeSequence::generate(Generator::RadialFactorial, 4).unwrap();
        let gaps: Vec<f64> = s.points().iter().map(|p| p.gap()).collect();
        for (g, want) in gaps.iter().zip([1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]) {
            assert_abs_diff_eq!(*g, want, epsilon = 1e-16);
        }
        assert!(!s.truncated());
        assert_abs_diff_eq!(s.blaschke_sum(), 1.0 + 0.5 + 1.0 / 6.0 + 1.0 / 24.0, epsilon = 1e-15);
    }

    #[test]
    fn factorial_generation_truncates_before_underflow() {
        // Oracle: smallest n with log10(n!) > 300.
        let mut log10_fact = 0.0;
        let mut first_below = 0;
        for n in 1.. {
            log10_fact += (n as f64).log10();
            if log10_fact > 300.0 {
                first_below = n;
                break;
            }
        }
        let s = BlaschkeSequence::generate(Generator::RadialFactorial, 200).unwrap();
        assert!(s.truncated());
        assert_eq!(s.len(), first_below - 1);
        assert!(s.points().iter().all(|p| p.gap() >= UNDERFLOW_GAP));
    }

    #[test]
    fn generator_rejects_bad_parameters() {
        assert!(BlaschkeSequence::generate(Generator::RadialGeometric { q: 1.5 }, 3).is_err());
        assert!(BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.0 }, 3).is_err());
        assert!(BlaschkeSequence::generate(Generator::RadialFactorial, 0).is_err());
    }

    #[test]
    fn tail_bounds_dominate_partial_sums() {
        for gen in [Generator::RadialGeometric { q: 0.5 }, Generator::RadialFactorial, Generator::RadialSuperexp { q: 0.7 }] {
            let long = BlaschkeSequence::generate(gen, 40).unwrap();
            for n in [1, 3, 7, 12] {
                for power in [1.0, 0.5] {
                    let direct: f64 = long.points()[n..].iter().map(|p| p.gap().powf(power)).sum();
                    let bound = gen.tail_bound(n, power);
                    assert!(bound >= direct * (1.0 - 1e-12), "{gen:?} n={n} p={power}: {bound} < {direct}");
                }
            }
        }
    }

    #[test]
    fn two_point_delta() {
        let s = BlaschkeSequence::from_points(vec![GapPoint::origin(), GapPoint::radial(0.5).unwrap()]).unwrap();
        let d = delta_profile(&s, 2, 1e-12, Exec::Sequential).unwrap();
        assert_abs_diff_eq!(d[0].value, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[1].value, 0.5, epsilon = 1e-15);
        assert_eq!(d[0].certified_error(), 0.0);
    }

    #[test]
    fn factorial_delta_one_matches_direct_product() {
        let s = BlaschkeSequence::generate(Generator::RadialFactorial, 12).unwrap();
        let d = delta_profile(&s, 1, 1e-6, Exec::Sequential).unwrap();
        // lambda_1 = 0, so every factor is |lambda_k| = 1 - 1/k!.
        let mut direct = 1.0;
        let mut fact = 1.0;
        for k in 2..=12 {
            fact *= k as f64;
            let lk = Complex64::new(1.0 - 1.0 / fact, 0.0);
            direct *= ((Complex64::new(0.0, 0.0) - lk) / (Complex64::new(1.0, 0.0))).norm();
        }
        assert_abs_diff_eq!(d[0].value, direct, epsilon = 1e-14);
        assert!(d[0].lower <= d[0].value && d[0].lower > 0.0);
    }

    #[test]
    fn repeated_point_is_an_error() {
        let p = GapPoint::radial(0.25).unwrap();
        assert!(matches!(
            BlaschkeSequence::from_points(vec![GapPoint::origin(), p, p]),
            Err(Error::DuplicatePoint { first: 2, second: 3 })
        ));
        assert!(matches!(delta_within(&[p, GapPoint::origin(), p], 0), Err(Error::DuplicatePoint { .. })));
    }

    #[test]
    fn thinness_signatures() {
        // Factorial: nondecreasing from j = 2 on (delta_1 > delta_2, see ledger), geometric flat below 1.
        let f = BlaschkeSequence::generate(Generator::RadialFactorial, 15).unwrap();
        let d = delta_profile(&f, 15, 1e-6, Exec::Sequential).unwrap();
        for w in d[1..].windows(2) {
            assert!(w[1].value >= w[0].value, "{:?}", w);
        }
        let g = BlaschkeSequence::generate(Generator::RadialGeometric { q: 0.5 }, 30).unwrap();
        let d = delta_profile(&g, 30, 1e-6, Exec::Sequential).unwrap();
        assert!(d.iter().all(|e| e.value < 0.2));
        let mid: Vec<f64> = d[8..22].iter().map(|e| e.value).collect();
        let spread = mid.iter().cloned().fold(f64::MIN, f64::max) - mid.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-3);
    }

    #[test]
    fn parallel_profile_matches_sequential() {
        let s = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, 20).unwrap();
        assert_eq!(delta_profile(&s, 20, 1e-9, Exec::Sequential).unwrap(), delta_profile(&s, 20, 1e-9, Exec::Parallel).unwrap());
    }

    fn disk_point(max_modulus: f64) -> impl Strategy<Value = Complex64> {
        (0.0..max_modulus, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn mobius_invariance(a in disk_point(0.9), z in disk_point(0.9), w in disk_point(0.9)) {
            let phi = |x: Complex64| (a - x) / (1.0 - a.conj() * x);
            let before = pseudo_distance_complex(z, w).unwrap();
            let after = pseudo_distance_complex(phi(z), phi(w)).unwrap();
            prop_assert!((before - after).abs() < 1e-12);
        }

        #[test]
        fn symmetric_and_separating(z in disk_point(0.999), w in disk_point(0.999)) {
            let (pz, pw) = (GapPoint::from_complex(z).unwrap(), GapPoint::from_complex(w).unwrap());
            prop_assert_eq!(pseudo_distance(&pz, &pw), pseudo_distance(&pw, &pz));
            prop_assert_eq!(pseudo_distance(&pz, &pz), 0.0);
            if z != w {
                prop_assert!(pseudo_distance(&pz, &pw) > 0.0);
            }
            let (rho_sq, one_minus) = pseudo_distance_sq(&pz, &pw);
            prop_assert!((rho_sq + one_minus - 1.0).abs() < 1e-12);
        }

        #[test]
        fn removing_a_point_never_decreases_delta(
            pts in proptest::collection::vec(disk_point(0.95), 3..9),
            drop in 0usize..8,
        ) {
            let points: Vec<GapPoint> = pts.iter().map(|&z| GapPoint::from_complex(z).unwrap()).collect();
            let drop = 1 + drop % (points.len() - 1);
            let full = delta_within(&points, 0);
            let mut fewer = points.clone();
            fewer.remove(drop);
            let reduced = delta_within(&fewer, 0);
            if let (Ok(full), Ok(reduced)) = (full, reduced) {
                prop_assert!(reduced >= full * (1.0 - 1e-14));
            }
        }
    }
}
