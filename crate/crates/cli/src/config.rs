//! TOML run configuration.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use thinseq_core::sweep::{Cutoff, SweepConfig, WindowPolicy};
use thinseq_core::{BlaschkeSequence, EigenOptions, Factor, GapPoint, Generator, GridSpec, InnerFunction};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    RadialGeometric,
    RadialFactorial,
    RadialSuperexp,
    Explicit,
}

/// `generator` plus `q` for the parametric families, `count` for generated lengths and
/// `points = [[arg, gap], ...]` for explicit sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub generator: GeneratorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
}

impl SequenceSpec {
    pub fn generated(generator: GeneratorKind, q: Option<f64>, count: usize) -> Self {
        SequenceSpec { generator, q, count: Some(count), points: None }
    }

    fn generator(&self, field: &str) -> Result<Generator, CliError> {
        let q = || -> Result<f64, CliError> {
            let q = self.q.ok_or_else(|| CliError::field(format!("{field}.q"), "required for this generator"))?;
            if !(q > 0.0 && q < 1.0) {
                return Err(CliError::field(format!("{field}.q"), format!("must lie in (0, 1), got {q}")));
            }
            Ok(q)
        };
        Ok(match self.generator {
            GeneratorKind::RadialGeometric => Generator::RadialGeometric { q: q()? },
            GeneratorKind::RadialFactorial => Generator::RadialFactorial,
            GeneratorKind::RadialSuperexp => Generator::RadialSuperexp { q: q()? },
            GeneratorKind::Explicit => Generator::Explicit,
        })
    }

    pub fn build(&self, field: &str) -> Result<BlaschkeSequence, CliError> {
        let generator = self.generator(field)?;
        if generator == Generator::Explicit {
            let pts = self
                .points
                .as_ref()
                .ok_or_else(|| CliError::field(format!("{field}.points"), "required for explicit sequences"))?;
            let points = pts
                .iter()
                .enumerate()
                .map(|(i, [arg, gap])| {
                    GapPoint::new(*arg, *gap).map_err(|e| CliError::field(format!("{field}.points[{i}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return BlaschkeSequence::from_points(points).map_err(|e| CliError::field(format!("{field}.points"), e.to_string()));
        }
        let count = self.count.ok_or_else(|| CliError::field(format!("{field}.count"), "required for generated sequences"))?;
        if count == 0 {
            return Err(CliError::field(format!("{field}.count"), "must be positive"));
        }
        BlaschkeSequence::generate(generator, count).map_err(|e| CliError::field(field, e.to_string()))
    }
}

/// One factor of `Theta`. `truncated-blaschke` takes the configured sequence up to `cutoff`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FactorSpec {
    AtomicSingular { mass: f64, angle: f64 },
    FiniteBlaschke { zeros: Vec<[f64; 2]> },
    TruncatedBlaschke { cutoff: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub n_min: usize,
    pub n_max: usize,
    /// `M`; omitted means the last stored point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// `M = N + width - 1`; exclusive with `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub eigen: f64,
    pub max_iter: usize,
    pub tail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eigen: 1e-10, max_iter: 100_000, tail: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub suites: Vec<String>,
    /// Sequence the suites treat as thin.
    pub thin: SequenceSpec,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            suites: ["T1", "T2", "T3", "T4", "T5", "T6", "T7"].map(String::from).to_vec(),
            thin: SequenceSpec::generated(GeneratorKind::RadialSuperexp, Some(0.5), 15),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    MinNorm,
    Iterative,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    /// Values of `f` against normalized kernels, `<f, k_lambda>`.
    #[default]
    Normalized,
    /// Raw values `f(lambda)`.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolateSpec {
    pub start: usize,
    pub end: usize,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub targets: TargetKind,
    /// Use the model kernels of `theta` instead of Szegő kernels.
    #[serde(default)]
    pub model: bool,
    /// Relative residual of the injected approximate solver in `iterative` mode.
    pub injected_residual: f64,
    /// Points `[arg, gap]` at which the interpolant is evaluated.
    #[serde(default)]
    pub samples: Vec<[f64; 2]>,
}

impl Default for InterpolateSpec {
    fn default() -> Self {
        InterpolateSpec {
            start: 1,
            end: 2,
            method: Method::MinNorm,
            targets: TargetKind::Normalized,
            model: false,
            injected_residual: 0.25,
            samples: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub sequence: SequenceSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<FactorSpec>,
    pub window: WindowSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub verify: VerifySpec,
    #[serde(default)]
    pub interpolate: InterpolateSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            sequence: SequenceSpec::generated(GeneratorKind::RadialFactorial, None, 15),
            theta: Vec::new(),
            window: WindowSpec { n_min: 1, n_max: 10, m: None, width: None },
            tolerances: Tolerances::default(),
            grid: GridSpec::default(),
            output: OutputSpec::default(),
            verify: VerifySpec::default(),
            interpolate: InterpolateSpec::default(),
        }
    }
}

impl RunConfig {
    /// Parses and validates; errors carry the TOML position or the offending field.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let seq = self.build_sequence()?;
        self.theta()?;
        let t = &self.tolerances;
        for (name, v) in [
            ("tolerances.eigen", t.eigen),
            ("tolerances.tail", t.tail),
            ("interpolate.injected_residual", self.interpolate.injected_residual),
        ] {
            if v.is_nan() || v <= 0.0 {
                return Err(CliError::field(name, format!("must be positive, got {v}")));
            }
        }
        if self.interpolate.injected_residual >= 1.0 {
            return Err(CliError::field("interpolate.injected_residual", "must be below 1"));
        }
        if t.max_iter == 0 {
            return Err(CliError::field("tolerances.max_iter", "must be positive"));
        }
        if self.grid.angles == 0 {
            return Err(CliError::field("grid.angles", "must be positive"));
        }
        let w = &self.window;
        if w.n_min == 0 || w.n_min > w.n_max {
            return Err(CliError::field("window", format!("need 1 <= n_min <= n_max, got {}..{}", w.n_min, w.n_max)));
        }
        if w.n_max > seq.len() {
            return Err(CliError::field("window.n_max", format!("{} exceeds the {} stored points", w.n_max, seq.len())));
        }
        if w.m.is_some() && w.width.is_some() {
            return Err(CliError::field("window", "set at most one of m and width"));
        }
        if let Some(m) = w.m {
            if m > seq.len() || m < w.n_min {
                return Err(CliError::field("window.m", format!("must lie in [{}, {}], got {m}", w.n_min, seq.len())));
            }
        }
        if w.width == Some(0) {
            return Err(CliError::field("window.width", "must be positive"));
        }
        let ip = &self.interpolate;
        if ip.start == 0 || ip.start > ip.end || ip.end > seq.len() {
            return Err(CliError::field(
                "interpolate",
                format!("need 1 <= start <= end <= {}, got {}..{}", seq.len(), ip.start, ip.end),
            ));
        }
        if ip.model && self.theta.is_empty() {
            return Err(CliError::field("interpolate.model", "needs a theta"));
        }
        for (i, [arg, gap]) in ip.samples.iter().enumerate() {
            GapPoint::new(*arg, *gap).map_err(|e| CliError::field(format!("interpolate.samples[{i}]"), e.to_string()))?;
        }
        self.verify.thin.build("verify.thin")?;
        Ok(())
    }

    pub fn build_sequence(&self) -> Result<BlaschkeSequence, CliError> {
        self.sequence.build("sequence")
    }

    pub fn theta(&self) -> Result<Option<InnerFunction>, CliError> {
        if self.theta.is_empty() {
            return Ok(None);
        }
        let mut factors = Vec::new();
        for (i, f) in self.theta.iter().enumerate() {
            let field = format!("theta[{i}]");
            factors.push(match f {
                FactorSpec::AtomicSingular { mass, angle } => Factor::AtomicSingular { mass: *mass, angle: *angle },
                FactorSpec::FiniteBlaschke { zeros } => Factor::FiniteBlaschke {
                    zeros: zeros
                        .iter()
                        .map(|[a, g]| GapPoint::new(*a, *g))
                        .collect::<Result<_, _>>()
                        .map_err(|e| CliError::field(format!("{field}.zeros"), e.to_string()))?,
                },
                FactorSpec::TruncatedBlaschke { cutoff } => {
                    let seq = self.build_sequence()?;
                    let tail_sum = if *cutoff <= seq.len() { seq.tail_beyond(*cutoff, 1.0) } else { 0.0 };
                    Factor::TruncatedBlaschke { seq, cutoff: *cutoff, tail_sum }
                }
            });
            // Validate factor by factor so the error names the right entry.
            InnerFunction::new(vec![factors[i].clone()]).map_err(|e| CliError::field(field, e.to_string()))?;
        }
        Ok(Some(InnerFunction::new(factors).map_err(|e| CliError::field("theta", e.to_string()))?))
    }

    pub fn eigen(&self) -> EigenOptions {
        EigenOptions {
            tol: self.tolerances.eigen,
            max_iter: self.tolerances.max_iter,
            seed: self.seed,
            ..EigenOptions::default()
        }
    }

    pub fn sweep_config(&self) -> Result<SweepConfig, CliError> {
        let cutoff = match (self.window.m, self.window.width) {
            (Some(m), _) => Cutoff::Fixed { m },
            (_, Some(width)) => Cutoff::Width { width },
            _ => Cutoff::Last,
        };
        Ok(SweepConfig {
            window: WindowPolicy { n_min: self.window.n_min, n_max: self.window.n_max, cutoff },
            theta: self.theta()?,
            eigen: self.eigen(),
            grid: self.grid,
            tail_tol: self.tolerances.tail,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
seed = 7

[sequence]
generator = "radial-superexp"
q = 0.5
count = 14

[[theta]]
kind = "atomic-singular"
mass = 1.0
angle = 0.0

[[theta]]
kind = "finite-blaschke"
zeros = [[0.5, 0.3]]

[window]
n_min = 2
n_max = 6
width = 5

[tolerances]
eigen = 1e-11
max_iter = 5000
tail = 1e-9

[output]
format = "json"

[interpolate]
start = 3
end = 8
method = "both"
injected_residual = 0.2
samples = [[0.0, 0.5]]
"#;

    #[test]
    fn round_trip() {
        let cfg = RunConfig::parse(FULL).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.theta.len(), 2);
        assert_eq!(RunConfig::parse(&cfg.to_toml()).unwrap(), cfg);
        let d = RunConfig::default();
        assert_eq!(RunConfig::parse(&d.to_toml()).unwrap(), d);
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::parse("[sequence]\ngenerator = \"radial-factorial\"\ncount = 15\n[window]\nn_min = 1\nn_max = 10\n")
            .unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.output.format, Format::Csv);
        assert!(cfg.theta().unwrap().is_none());
        assert_eq!(cfg.sweep_config().unwrap().window.cutoff, Cutoff::Last);
    }

    #[test]
    fn field_errors() {
        let bad_q = FULL.replace("q = 0.5", "q = 1.5");
        let e = RunConfig::parse(&bad_q).unwrap_err().to_string();
        assert!(e.contains("sequence.q") && e.contains("1.5"), "{e}");
        let e = RunConfig::parse(&FULL.replace("eigen = 1e-11", "eigen = -1.0")).unwrap_err().to_string();
        assert!(e.contains("tolerances.eigen"), "{e}");
        let e = RunConfig::parse(&FULL.replace("mass = 1.0", "mass = 0.0")).unwrap_err().to_string();
        assert!(e.contains("theta[0]"), "{e}");
        let e = RunConfig::parse(&FULL.replace("n_max = 6", "n_max = 60")).unwrap_err().to_string();
        assert!(e.contains("window.n_max"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let e = RunConfig::parse("seed = 0\n[sequence\ngenerator = 1\n").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = RunConfig::parse(&FULL.replace("count = 14", "count = 14\ncolour = 1")).unwrap_err().to_string();
        assert!(e.contains("colour"), "{e}");
    }
}
