//! Command implementations behind the `bvp` binary.
//!
//! Each command writes data to `out`, diagnostics to `err`, and returns the
//! process exit code, so the binary is a thin argument parser on top.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{ProblemError, SolveError};
use crate::problem_file::parse_problem;
use crate::reduction::{reduce_order, Problem};
use crate::solver::{solve_system, DerivScaling, SpectralSolution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CORPUS_FAIL: i32 = 4;

pub const DEFAULT_DEGREE: usize = 16;
pub const DEFAULT_SAMPLES: usize = 201;

/// Errors at or below this level count as the round-off plateau.
pub const PLATEAU: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub max_error: f64,
    pub residual_inf: f64,
    pub condition_estimate: f64,
}

/// `samples` uniformly spaced points on `[a, b]`, endpoints included.
pub fn uniform_grid(a: f64, b: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..samples)
            .map(|i| {
                if i + 1 == samples {
                    b
                } else {
                    a + (b - a) * i as f64 / (samples - 1) as f64
                }
            })
            .collect(),
    }
}

/// Max-norm of `y - exact` over the uniform grid; `None` without `exact`.
pub fn max_error(problem: &Problem, sol: &SpectralSolution, samples: usize) -> Option<f64> {
    let exact = problem.exact()?;
    let (a, b) = problem.interval();
    let mut worst = 0.0f64;
    for t in uniform_grid(a, b, samples) {
        let y = sol.evaluate(t, 0).ok()?;
        let e = exact.eval(t).ok()?;
        worst = worst.max((y - e).abs());
    }
    Some(worst)
}

/// Locale-independent, 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug)]
enum CmdError {
    Io(PathBuf, std::io::Error),
    Problem(ProblemError),
    Solve(SolveError),
    Invalid(String),
}

impl CmdError {
    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Io(..) => EXIT_IO,
            CmdError::Solve(SolveError::Singular { .. }) => EXIT_SINGULAR,
            _ => EXIT_INVALID,
        }
    }

    fn report(&self, err: &mut dyn Write) {
        let line = match self {
            CmdError::Io(p, e) => format!("error[io]: {}: {e}", p.display()),
            CmdError::Problem(e) => format!("error[parse]: {e}"),
            CmdError::Solve(e @ SolveError::Singular { .. }) => format!("error[singular]: {e}"),
            CmdError::Solve(e) => format!("error[invalid]: {e}"),
            CmdError::Invalid(msg) => format!("error[invalid]: {msg}"),
        };
        let _ = writeln!(err, "{line}");
    }
}

fn load(path: &Path) -> Result<Problem, CmdError> {
    let src = std::fs::read_to_string(path).map_err(|e| CmdError::Io(path.to_path_buf(), e))?;
    parse_problem(&src).map_err(CmdError::Problem)
}

fn solve_at(problem: &Problem, n: usize, scaling: DerivScaling) -> Result<SpectralSolution, CmdError> {
    solve_system(&reduce_order(problem), n, scaling).map_err(CmdError::Solve)
}

fn write_diagnostics(err: &mut dyn Write, sol: &SpectralSolution) {
    let d = sol.diagnostics();
    let _ = writeln!(
        err,
        "n={} residual_inf={:e} bc_residual_inf={:e} cond_estimate={:e}",
        d.n, d.residual_inf, d.bc_residual_inf, d.condition_estimate
    );
    if d.ill_conditioned {
        let _ = writeln!(err, "warning: collocation matrix is ill-conditioned");
    }
}

pub fn cmd_solve(
    path: &Path,
    n_override: Option<usize>,
    samples: usize,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match run_solve(path, n_override, samples, format, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            e.report(err);
            e.exit_code()
        }
    }
}

fn run_solve(
    path: &Path,
    n_override: Option<usize>,
    samples: usize,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CmdError> {
    let problem = load(path)?;
    let n = n_override
        .or(problem.default_degree())
        .unwrap_or(DEFAULT_DEGREE);
    let started = Instant::now();
    let sol = solve_at(&problem, n, DerivScaling::ChainRule)?;
    let m = problem.order();
    let (a, b) = problem.interval();

    let mut header: Vec<String> = vec!["t".into(), "y".into()];
    header.extend((1..m).map(|k| format!("d{k}y")));
    let exact = problem.exact();
    if exact.is_some() {
        header.push("exact".into());
        header.push("error".into());
    }

    let mut rows = Vec::with_capacity(samples);
    let mut worst = 0.0f64;
    for t in uniform_grid(a, b, samples) {
        let mut row = vec![t];
        for k in 0..m {
            row.push(sol.evaluate(t, k).expect("grid lies in the interval"));
        }
        if let Some(e) = exact {
            let v = e
                .eval(t)
                .map_err(|e| CmdError::Invalid(format!("exact solution: {e}")))?;
            row.push(v);
            row.push((row[1] - v).abs());
            worst = worst.max((row[1] - v).abs());
        }
        rows.push(row);
    }

    let io = |e| CmdError::Io(PathBuf::from("<stdout>"), e);
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", header.join(",")).map_err(io)?;
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
                writeln!(out, "{}", cells.join(",")).map_err(io)?;
            }
        }
        OutputFormat::Table => {
            let cells: Vec<String> = header.iter().map(|h| format!("{h:>24}")).collect();
            writeln!(out, "{}", cells.join(" ")).map_err(io)?;
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{:>24}", fmt_f64(*v))).collect();
                writeln!(out, "{}", cells.join(" ")).map_err(io)?;
            }
        }
    }
    write_diagnostics(err, &sol);
    if exact.is_some() {
        let _ = writeln!(err, "max_error={worst:e}");
    }
    let _ = writeln!(err, "elapsed_ms={:.3}", started.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

/// Solve once per degree in `n_min..=n_max` (stride `step`) and record the
/// error against the problem's exact solution.
pub fn convergence_study(
    problem: &Problem,
    n_min: usize,
    n_max: usize,
    step: usize,
    scaling: DerivScaling,
) -> Result<Vec<ConvergenceRecord>, SolveError> {
    let sys = reduce_order(problem);
    let mut records = Vec::new();
    for n in (n_min..=n_max).step_by(step.max(1)) {
        let sol = solve_system(&sys, n, scaling)?;
        let d = sol.diagnostics();
        records.push(ConvergenceRecord {
            n,
            max_error: max_error(problem, &sol, DEFAULT_SAMPLES).unwrap_or(f64::NAN),
            residual_inf: d.residual_inf,
            condition_estimate: d.condition_estimate,
        });
    }
    Ok(records)
}

/// Degrees at which the error grew more than tenfold while still above the
/// round-off plateau.
pub fn decay_violations(records: &[ConvergenceRecord]) -> Vec<usize> {
    records
        .windows(2)
        .filter(|w| w[0].max_error > PLATEAU && w[1].max_error > 10.0 * w[0].max_error)
        .map(|w| w[1].n)
        .collect()
}

pub fn cmd_converge(
    path: &Path,
    n_min: usize,
    n_max: usize,
    step: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut run = || -> Result<(), CmdError> {
        let problem = load(path)?;
        if problem.exact().is_none() {
            return Err(CmdError::Invalid(
                "converge needs an `exact` directive in the problem file".into(),
            ));
        }
        if n_min > n_max {
            return Err(CmdError::Invalid(format!("empty range {n_min}..={n_max}")));
        }
        if step == 0 {
            return Err(CmdError::Invalid("step must be positive".into()));
        }
        let records = convergence_study(&problem, n_min, n_max, step, DerivScaling::ChainRule)
            .map_err(CmdError::Solve)?;
        let io = |e| CmdError::Io(PathBuf::from("<stdout>"), e);
        writeln!(out, "n,max_error,residual_inf,cond_estimate").map_err(io)?;
        for r in &records {
            writeln!(
                out,
                "{},{},{},{}",
                r.n,
                fmt_f64(r.max_error),
                fmt_f64(r.residual_inf),
                fmt_f64(r.condition_estimate)
            )
            .map_err(io)?;
        }
        for n in decay_violations(&records) {
            let _ = writeln!(err, "warning: max_error grew more than 10x at n={n}");
        }
        Ok(())
    };
    match run() {
        Ok(()) => EXIT_OK,
        Err(e) => {
            e.report(err);
            e.exit_code()
        }
    }
}

/// One bundled example with the degree and error bound it must meet.
#[derive(Debug, Clone, Copy)]
pub struct CorpusCase {
    pub file: &'static str,
    pub n: usize,
    pub tolerance: f64,
}

pub const CORPUS: [CorpusCase; 5] = [
    CorpusCase { file: "ex1.bvp", n: 8, tolerance: 1e-9 },
    CorpusCase { file: "ex2.bvp", n: 9, tolerance: 1e-9 },
    CorpusCase { file: "ex3.bvp", n: 11, tolerance: 1e-9 },
    CorpusCase { file: "ex4.bvp", n: 11, tolerance: 1e-9 },
    CorpusCase { file: "ex5.bvp", n: 13, tolerance: 1e-7 },
];

/// The corpus shipped with this crate.
pub fn bundled_corpus_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

#[derive(Debug, Clone)]
pub struct CorpusOutcome {
    pub case: CorpusCase,
    pub result: Result<f64, String>,
}

impl CorpusOutcome {
    pub fn passed(&self) -> bool {
        matches!(self.result, Ok(e) if e <= self.case.tolerance)
    }
}

fn run_case(dir: &Path, case: CorpusCase, scaling: DerivScaling) -> CorpusOutcome {
    let result = (|| {
        let problem = load(&dir.join(case.file)).map_err(|e| format!("{e:?}"))?;
        let sol = solve_at(&problem, case.n, scaling).map_err(|e| format!("{e:?}"))?;
        max_error(&problem, &sol, DEFAULT_SAMPLES).ok_or_else(|| "no exact solution".to_string())
    })();
    CorpusOutcome { case, result }
}

/// Solve every corpus case, in parallel.
pub fn run_corpus(dir: &Path, scaling: DerivScaling) -> Vec<CorpusOutcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CORPUS
            .iter()
            .map(|&case| s.spawn(move || run_case(dir, case, scaling)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    })
}

pub fn cmd_corpus(dir: &Path, scaling: DerivScaling, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if !dir.is_dir() {
        let _ = writeln!(err, "error[io]: corpus directory {} not found", dir.display());
        return EXIT_CORPUS_FAIL;
    }
    let outcomes = run_corpus(dir, scaling);
    for o in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        let detail = match &o.result {
            Ok(e) => format!("max_error={e:e}"),
            Err(msg) => format!("error={msg}"),
        };
        let _ = writeln!(
            out,
            "{status} {} n={} tol={:e} {detail}",
            o.case.file, o.case.n, o.case.tolerance
        );
    }
    if outcomes.iter().all(CorpusOutcome::passed) {
        EXIT_OK
    } else {
        EXIT_CORPUS_FAIL
    }
}
