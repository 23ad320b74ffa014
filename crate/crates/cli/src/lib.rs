//! Command implementations behind the `thinseq` binary.

pub mod config;
pub mod error;

use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

use thinseq_core::disk::delta_profile;
use thinseq_core::interpolation::{iterative_solve, min_norm_interpolant, InterpolationProblem, IterationTrace, MinNormSolution};
use thinseq_core::kernels::{project_model, KernelCombination};
use thinseq_core::sweep::{sweep, SweepReport, CSV_HEADER};
use thinseq_core::{BlaschkeSequence, Complex64, Corpus, Exec, GapPoint, KernelFamily, SuiteId, SuiteReport};

pub use config::{Format, RunConfig};
pub use error::CliError;

pub type CliResult<T> = Result<T, CliError>;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    SuiteFailure,
    /// Output was written but some rows carry numerical errors.
    RowErrors,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::SuiteFailure => 1,
            Status::RowErrors => 3,
        }
    }
}

pub fn load_config(path: Option<&Path>) -> CliResult<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            RunConfig::parse(&text)
        }
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn analyze(cfg: &RunConfig, format: Format, exec: Exec) -> CliResult<(Vec<u8>, Status)> {
    let seq = cfg.build_sequence()?;
    let report = sweep(&seq, &cfg.sweep_config()?, exec)?;
    let status = if report.rows.iter().any(|r| r.row_error.is_some()) { Status::RowErrors } else { Status::Ok };
    Ok((render_sweep(&report, format), status))
}

pub fn render_sweep(report: &SweepReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => csv_bytes(&CSV_HEADER, report.rows.iter().map(|r| r.csv_record())),
    }
}

#[derive(Debug, Serialize)]
struct Generated<'a> {
    sequence: &'a BlaschkeSequence,
    delta: Vec<thinseq_core::disk::DeltaEntry>,
}

pub fn generate(cfg: &RunConfig, format: Format, exec: Exec) -> CliResult<Vec<u8>> {
    let seq = cfg.build_sequence()?;
    let delta = delta_profile(&seq, seq.len(), cfg.tolerances.tail, exec)?;
    Ok(match format {
        Format::Json => to_json(&Generated { sequence: &seq, delta }),
        Format::Csv => csv_bytes(
            &["index", "arg", "gap", "modulus", "delta", "delta_lower"],
            seq.points().iter().zip(&delta).map(|(p, d)| {
                vec![d.index.to_string(), num(p.arg()), num(p.gap()), num(p.modulus()), num(d.value), num(d.lower)]
            }),
        ),
    })
}

/// Selected suites; the configured list unless `only` overrides it.
pub fn suite_list(cfg: &RunConfig, only: Option<&[String]>) -> CliResult<Vec<SuiteId>> {
    let names = only.unwrap_or(&cfg.verify.suites);
    let mut ids = Vec::new();
    for (i, name) in names.iter().enumerate().filter(|(_, n)| !n.trim().is_empty()) {
        let id = name.trim().parse::<SuiteId>().map_err(|e| CliError::field(format!("verify.suites[{i}]"), e.to_string()))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    if ids.is_empty() {
        return Err(CliError::NoSuites);
    }
    Ok(ids)
}

pub fn verify(cfg: &RunConfig, ids: &[SuiteId], exec: Exec) -> CliResult<Vec<SuiteReport>> {
    let mut corpus = Corpus::reference(cfg.seed)?;
    corpus.thin = cfg.verify.thin.build("verify.thin")?;
    corpus.eigen = cfg.eigen();
    corpus.grid = cfg.grid;
    Ok(ids.iter().map(|id| thinseq_core::suites::run_suite(*id, &corpus, exec)).collect())
}

pub fn render_suites(reports: &[SuiteReport], format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!("{} {} {}\n", r.id, if r.passed() { "PASS" } else { "FAIL" }, r.title));
                for c in &r.checks {
                    out.push_str(&format!("  [{}] {c}\n", if c.pass { "ok" } else { "x" }));
                }
                if let Some(e) = &r.error {
                    out.push_str(&format!("  error: {e}\n"));
                }
            }
            out.into_bytes()
        }
    }
}

/// Reads `index,re,im` rows; unlisted indices of the window are zero.
pub fn read_targets(path: &Path, start: usize, end: usize) -> CliResult<Vec<Complex64>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).flexible(true).from_reader(file);
    let mut out = vec![Complex64::new(0.0, 0.0); end + 1 - start];
    let mut seen = vec![false; out.len()];
    for (i, rec) in reader.records().enumerate() {
        let row = i as u64 + 1;
        let rec = rec.map_err(|e| CliError::Targets { row, reason: e.to_string() })?;
        let row = rec.position().map_or(row, |p| p.line());
        if i == 0 && rec.get(0) == Some("index") {
            continue;
        }
        if rec.len() != 3 {
            return Err(CliError::Targets { row, reason: format!("expected 3 fields `index,re,im`, got {}", rec.len()) });
        }
        let index: usize = rec[0].parse().map_err(|_| CliError::Targets { row, reason: format!("bad index `{}`", &rec[0]) })?;
        let part = |s: &str, name: &str| -> CliResult<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Targets { row, reason: format!("bad {name} part `{s}`") })
        };
        let value = Complex64::new(part(&rec[1], "real")?, part(&rec[2], "imaginary")?);
        if index < start || index > end {
            return Err(CliError::Targets { row, reason: format!("index {index} outside the window {start}..{end}") });
        }
        let k = index - start;
        if seen[k] {
            return Err(CliError::Targets { row, reason: format!("index {index} listed twice") });
        }
        seen[k] = true;
        out[k] = value;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub point: GapPoint,
    pub value: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IterativeResult {
    pub coefficients: Vec<Complex64>,
    pub trace: IterationTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct InterpolateReport {
    pub family: &'static str,
    pub start: usize,
    pub end: usize,
    /// Targets against normalized kernels.
    pub targets: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_norm: Option<MinNormSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterative: Option<IterativeResult>,
    /// The interpolant (min-norm if computed) at the configured sample points.
    pub samples: Vec<Sample>,
}

pub fn interpolate(cfg: &RunConfig, targets: &[Complex64], exec: Exec) -> CliResult<InterpolateReport> {
    use config::{Method, TargetKind};
    let ip = &cfg.interpolate;
    let seq = cfg.build_sequence()?;
    let window = seq.window(ip.start, ip.end)?;
    let theta = cfg.theta()?;
    let family = match (&theta, ip.model) {
        (Some(t), true) => KernelFamily::Model(t.clone()),
        _ => KernelFamily::Hardy,
    };
    let problem = match ip.targets {
        TargetKind::Normalized => InterpolationProblem::new(family.clone(), &seq, window, targets.to_vec())?,
        TargetKind::Raw => InterpolationProblem::from_raw_values(family.clone(), &seq, window, targets)?,
    };
    let opts = cfg.eigen();
    let min_norm = match ip.method {
        Method::MinNorm | Method::Both => Some(min_norm_interpolant(&problem, &seq, &opts, exec)?),
        Method::Iterative => None,
    };
    let iterative = match ip.method {
        Method::Iterative | Method::Both => {
            let rho = ip.injected_residual;
            // Exact minimal-norm interpolation of (1 - rho) a leaves relative residual rho.
            let approx = |a: &[Complex64]| -> thinseq_core::Result<Vec<Complex64>> {
                let scaled = a.iter().map(|x| x * (1.0 - rho)).collect();
                let q = InterpolationProblem::new(family.clone(), &seq, window, scaled)?;
                Ok(min_norm_interpolant(&q, &seq, &opts, Exec::Sequential)?.coefficients)
            };
            let (coefficients, trace) =
                iterative_solve(&problem, &seq, &approx, rho / (1.0 - rho), cfg.tolerances.max_iter, exec)?;
            Some(IterativeResult { coefficients, trace })
        }
        Method::MinNorm => None,
    };
    let coefficients =
        min_norm.as_ref().map(|m| &m.coefficients).or(iterative.as_ref().map(|i| &i.coefficients)).expect("a method ran");
    let points = &seq.points()[window.range()];
    let f = combination(&family, points, coefficients)?;
    // Szegő-only combinations never read the inner function.
    let placeholder = thinseq_core::InnerFunction::monomial(1)?;
    let theta_for_eval = family.theta().unwrap_or(&placeholder);
    let samples = ip
        .samples
        .iter()
        .map(|[a, g]| {
            let point = GapPoint::new(*a, *g)?;
            Ok(Sample { point, value: f.eval(theta_for_eval, &point) })
        })
        .collect::<thinseq_core::Result<Vec<_>>>()?;
    Ok(InterpolateReport {
        family: family.name(),
        start: ip.start,
        end: ip.end,
        targets: problem.targets,
        min_norm,
        iterative,
        samples,
    })
}

/// `sum c_n k_n` with `k_n` the normalized kernel at `points[n]`.
fn combination(family: &KernelFamily, points: &[GapPoint], c: &[Complex64]) -> thinseq_core::Result<KernelCombination> {
    let scaled: Vec<Complex64> = points
        .iter()
        .zip(c)
        .map(|(p, c)| {
            let norm_sq_times_w = family.theta().map_or(1.0, |t| t.eval(p).one_minus_mod_sq());
            c * (p.weight() / norm_sq_times_w).sqrt()
        })
        .collect();
    match family.theta() {
        None => KernelCombination::szego_only(points.to_vec(), scaled),
        Some(theta) => project_model(theta, points, &scaled),
    }
}

pub fn render_interpolation(r: &InterpolateReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut rows = Vec::new();
            let mut push = |q: &str, i: String, z: Complex64| rows.push(vec![q.to_string(), i, num(z.re), num(z.im)]);
            let real = |x: f64| Complex64::new(x, 0.0);
            if let Some(m) = &r.min_norm {
                for (k, c) in m.coefficients.iter().enumerate() {
                    push("coefficient", (r.start + k).to_string(), *c);
                }
                push("norm", String::new(), real(m.norm));
                push("residual", String::new(), real(m.residual));
                push("lambda_min", String::new(), real(m.lambda_min));
                push("lambda_max", String::new(), real(m.lambda_max));
            }
            if let Some(it) = &r.iterative {
                for (k, c) in it.coefficients.iter().enumerate() {
                    push("iterative_coefficient", (r.start + k).to_string(), *c);
                }
                push("iterative_norm", String::new(), real(it.trace.final_norm));
                push("iterative_residual", String::new(), real(it.trace.final_residual));
                push("iterative_steps", String::new(), real(it.trace.steps.len() as f64));
            }
            for (i, s) in r.samples.iter().enumerate() {
                push("sample", i.to_string(), s.value);
            }
            csv_bytes(&["quantity", "index", "re", "im"], rows)
        }
    }
}

/// Chooses the execution policy; `jobs > 1` sizes the global thread pool.
pub fn exec_for(jobs: Option<usize>) -> CliResult<Exec> {
    match jobs {
        None => Ok(Exec::Parallel),
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            // A second initialisation in the same process keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(Exec::Parallel)
        }
    }
}

pub fn output_path(flag: Option<PathBuf>, cfg: &RunConfig) -> Option<PathBuf> {
    flag.or_else(|| cfg.output.path.clone())
}
