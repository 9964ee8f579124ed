use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use proxavg::feasibility::{build_system, feasibility_report, FeasibilityReport};
use proxavg::quadrature::gauss_legendre;
use proxavg::solvers::{homotopy_solve, solve, SolveResult, StageOutcome, StageResult};
use proxavg::sweep::{linspace, map};
use proxavg::{Family, Generator, MomentProblem};

use crate::error::CliError;
use crate::output::{json, num, Csv};
use crate::settings::{Format, RunConfig};

/// What a command produced. Output is written before `deferred` is raised,
/// so a non-converged run under `--strict` still leaves its results behind.
pub struct Report {
    pub text: String,
    pub files: Vec<(PathBuf, String)>,
    pub deferred: Option<CliError>,
}

impl Report {
    fn text(text: String) -> Self {
        Report {
            text,
            files: Vec::new(),
            deferred: None,
        }
    }
}

fn problem(cfg: &RunConfig, shift: f64, parameter: f64) -> Result<MomentProblem, CliError> {
    Ok(MomentProblem::new(
        Generator::sine(shift),
        cfg.moments,
        gauss_legendre(cfg.quad)?,
        cfg.spec(parameter),
    )?)
}

#[derive(Serialize)]
struct EvalRow {
    x: f64,
    /// A number, or the string `"inf"`.
    value: serde_json::Value,
    parameter: f64,
    family: Family,
}

pub fn eval(cfg: &RunConfig) -> Result<Report, CliError> {
    let xs = linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.count);
    let pairs: Vec<(f64, f64)> = cfg
        .params
        .iter()
        .flat_map(|&p| xs.iter().map(move |&x| (p, x)))
        .collect();
    let values = map(&pairs, |&(p, x)| cfg.which.eval(&cfg.spec(p), x));

    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["x", "value", "parameter", "family"]);
            for (&(p, x), v) in pairs.iter().zip(&values) {
                csv.row(&[num(x), num(*v), num(p), cfg.family.to_string()]);
            }
            csv.finish()
        }
        Format::Json => {
            let rows: Vec<EvalRow> = pairs
                .iter()
                .zip(&values)
                .map(|(&(parameter, x), &v)| EvalRow {
                    x,
                    value: serde_json::Number::from_f64(v)
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|| serde_json::Value::String(num(v))),
                    parameter,
                    family: cfg.family,
                })
                .collect();
            json(&rows)
        }
    };
    Ok(Report::text(text))
}

#[derive(Serialize)]
struct SolveEntry<'a> {
    family: Family,
    parameter: f64,
    shift: f64,
    #[serde(flatten)]
    result: &'a SolveResult,
}

#[derive(Deserialize)]
struct WarmEntry {
    parameter: Option<f64>,
    mu: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WarmFile {
    Many(Vec<WarmEntry>),
    One(WarmEntry),
}

/// Multipliers from an earlier solve: the entry with the same parameter if
/// there is one, otherwise the first.
fn warm_start(path: &std::path::Path, parameter: f64) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let entries = match serde_json::from_str::<WarmFile>(&text)
        .map_err(|e| CliError::usage(format!("warm start {}: {e}", path.display())))?
    {
        WarmFile::Many(v) => v,
        WarmFile::One(e) => vec![e],
    };
    let chosen = entries
        .iter()
        .find(|e| e.parameter == Some(parameter))
        .or(entries.first())
        .ok_or_else(|| CliError::usage(format!("warm start {} has no entries", path.display())))?;
    Ok(chosen.mu.clone())
}

pub fn solve_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut configs = Vec::with_capacity(cfg.params.len());
    for &p in &cfg.params {
        let mut solver = cfg.solver.clone();
        if let Some(path) = &cfg.warm_start {
            solver.start = Some(warm_start(path, p)?);
        }
        configs.push((p, problem(cfg, cfg.shift, p)?, solver));
    }
    let results = map(&configs, |(_, prob, solver)| solve(prob, solver));
    let mut solved = Vec::with_capacity(results.len());
    for r in results {
        solved.push(r?);
    }

    let entries: Vec<SolveEntry> = configs
        .iter()
        .zip(&solved)
        .map(|((p, _, _), result)| SolveEntry {
            family: cfg.family,
            parameter: *p,
            shift: cfg.shift,
            result,
        })
        .collect();
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&entries),
        Format::Csv => {
            let mut csv = Csv::new(&[
                "parameter",
                "family",
                "residual_norm",
                "iterations",
                "converged",
            ]);
            for e in &entries {
                csv.row(&[
                    num(e.parameter),
                    cfg.family.to_string(),
                    num(e.result.residual_norm),
                    e.result.iterations.to_string(),
                    e.result.converged.to_string(),
                ]);
            }
            csv.finish()
        }
    };

    let mut report = Report::text(text);
    if let Some(path) = &cfg.curve {
        let multi = cfg.params.len() > 1;
        let header: &[&str] = if multi {
            &["s", "x_of_s", "parameter"]
        } else {
            &["s", "x_of_s"]
        };
        let mut csv = Csv::new(header);
        for ((p, prob, _), result) in configs.iter().zip(&solved) {
            for (s, x) in prob.primal_curve(&result.mu, cfg.samples) {
                let mut row = vec![num(s), num(x)];
                if multi {
                    row.push(num(*p));
                }
                csv.row(&row);
            }
        }
        report.files.push((path.clone(), csv.finish()));
    }

    let failing: Vec<String> = entries
        .iter()
        .filter(|e| !e.result.converged)
        .map(|e| format!("parameter {} ({:?})", e.parameter, e.result.stop))
        .collect();
    if cfg.strict && !failing.is_empty() {
        report.deferred = Some(CliError::NotConverged(failing.join(", ")));
    }
    Ok(report)
}

#[derive(Serialize)]
struct HomotopyEntry {
    family: Family,
    parameter: f64,
    base_shift: f64,
    delta: f64,
    two_stage: bool,
    stages: Vec<StageResult>,
}

fn run_homotopy(cfg: &RunConfig) -> Result<Vec<HomotopyEntry>, CliError> {
    let mut templates = Vec::with_capacity(cfg.params.len());
    for &p in &cfg.params {
        templates.push((p, problem(cfg, cfg.shift, p)?));
    }
    let base = Generator::sine(cfg.shift);
    let runs = map(&templates, |(_, t)| homotopy_solve(&base, &cfg.homotopy, t));
    let mut entries = Vec::with_capacity(runs.len());
    for ((p, _), stages) in templates.iter().zip(runs) {
        entries.push(HomotopyEntry {
            family: cfg.family,
            parameter: *p,
            base_shift: cfg.shift,
            delta: cfg.homotopy.delta,
            two_stage: cfg.homotopy.two_stage,
            stages: stages?,
        });
    }
    Ok(entries)
}

/// Exit status implied by the final stage of each run.
fn homotopy_status(cfg: &RunConfig, entries: &[HomotopyEntry]) -> Option<CliError> {
    let mut failures = Vec::new();
    let mut unconverged = Vec::new();
    for e in entries {
        for stage in &e.stages {
            match &stage.outcome {
                StageOutcome::Unsolved { reason } => {
                    failures.push(format!("parameter {}: {reason}", e.parameter));
                    break;
                }
                StageOutcome::Solved(r) if r.stop.is_failure() => {
                    failures.push(format!(
                        "parameter {} stage {}: {:?}",
                        e.parameter, stage.index, r.stop
                    ));
                    break;
                }
                StageOutcome::Solved(_) => {}
            }
        }
        if let Some(r) = e.stages.last().and_then(StageResult::result) {
            if !r.converged {
                unconverged.push(format!("parameter {}", e.parameter));
            }
        }
    }
    if !failures.is_empty() {
        Some(CliError::Numerical(failures.join("; ")))
    } else if cfg.strict && !unconverged.is_empty() {
        Some(CliError::NotConverged(unconverged.join(", ")))
    } else {
        None
    }
}

#[derive(Serialize)]
struct TableCell {
    iterations: usize,
    residual_norm: Option<f64>,
}

#[derive(Serialize)]
struct TableRow {
    parameter: f64,
    cells: Vec<TableCell>,
}

fn table_text(cfg: &RunConfig, entries: &[HomotopyEntry]) -> String {
    let rows: Vec<TableRow> = entries
        .iter()
        .map(|e| TableRow {
            parameter: e.parameter,
            cells: cfg
                .budgets
                .iter()
                .map(|&b| TableCell {
                    iterations: b,
                    residual_norm: e
                        .stages
                        .last()
                        .and_then(StageResult::result)
                        .map(|r| r.residual_at(b)),
                })
                .collect(),
        })
        .collect();
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows),
        Format::Csv => {
            let names: Vec<String> = cfg.budgets.iter().map(|b| format!("iters_{b}")).collect();
            let mut header = vec!["parameter"];
            header.extend(names.iter().map(String::as_str));
            let mut csv = Csv::new(&header);
            for row in &rows {
                let mut cells = vec![num(row.parameter)];
                cells.extend(
                    row.cells
                        .iter()
                        .map(|c| num(c.residual_norm.unwrap_or(f64::NAN))),
                );
                csv.row(&cells);
            }
            csv.finish()
        }
    }
}

pub fn homotopy(cfg: &RunConfig, force_table: bool) -> Result<Report, CliError> {
    let entries = run_homotopy(cfg)?;
    let text = if cfg.table || force_table {
        if cfg.budgets.is_empty() {
            return Err(CliError::usage(
                "--budgets needs at least one value for a table",
            ));
        }
        table_text(cfg, &entries)
    } else {
        json(&entries)
    };
    let mut report = Report::text(text);
    report.deferred = homotopy_status(cfg, &entries);
    Ok(report)
}

#[derive(Serialize)]
struct FeasibilityEntry {
    shift: f64,
    offset: f64,
    moments: usize,
    #[serde(flatten)]
    report: FeasibilityReport,
}

pub fn feasibility(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut entries = Vec::with_capacity(cfg.offsets.len());
    for &offset in &cfg.offsets {
        let shift = cfg.shift - offset;
        let system = build_system(cfg.moments, &Generator::sine(shift))?;
        entries.push(FeasibilityEntry {
            shift,
            offset,
            moments: cfg.moments,
            report: feasibility_report(&system)?,
        });
    }
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&entries),
        Format::Csv => {
            let mut csv = Csv::new(&[
                "shift",
                "offset",
                "min_component",
                "distance",
                "classification",
                "condition",
            ]);
            for e in &entries {
                let class = serde_json::to_value(e.report.classification)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default();
                csv.row(&[
                    num(e.shift),
                    num(e.offset),
                    num(e.report.min_component),
                    num(e.report.distance),
                    class,
                    num(e.report.condition),
                ]);
            }
            csv.finish()
        }
    };
    Ok(Report::text(text))
}
