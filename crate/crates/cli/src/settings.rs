use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use proxavg::quadrature::MAX_ORDER;
use proxavg::solvers::{HomotopyConfig, Method, SolverConfig};
use proxavg::sweep::Which;
use proxavg::{AverageSpec, EndpointMode, Family};

use crate::error::CliError;

/// Keys accepted in a config file; the long flag names without dashes.
pub const KEYS: &[&str] = &[
    "preset",
    "family",
    "param",
    "limiting",
    "shift",
    "moments",
    "quad",
    "method",
    "step",
    "iters",
    "tol",
    "pure-newton",
    "strict",
    "warm-start",
    "samples",
    "curve",
    "which",
    "grid",
    "delta",
    "stages",
    "two-stage",
    "stage-iters",
    "stage0-iters",
    "table",
    "budgets",
    "offsets",
    "out",
    "format",
];

const DEFAULTS: &[(&str, &str)] = &[
    ("family", "proximal"),
    ("param", "0.5"),
    ("shift", "0.6"),
    ("moments", "8"),
    ("quad", "20"),
    ("method", "newton"),
    ("step", "1"),
    ("iters", "50"),
    ("tol", "1e-10"),
    ("samples", "201"),
    ("which", "f"),
    ("grid", "-5,5,101"),
    ("delta", "0.1"),
    ("stages", "3"),
    ("stage0-iters", "50"),
    ("budgets", "100,1100,2100"),
    ("offsets", "0"),
];

pub const PRESETS: &[&str] = &[
    "example1",
    "example2",
    "example3",
    "example5",
    "example5-sos",
    "example5-dual",
];

fn preset(name: &str) -> Option<&'static [(&'static str, &'static str)]> {
    const TABLE_LAMBDAS: &str = "0,0.25,0.5,0.75,1";
    Some(match name {
        "example1" => &[
            ("shift", "0.6"),
            ("family", "weighted"),
            ("param", "0,0.25,0.5,0.75"),
        ],
        "example2" => &[
            ("shift", "0.35"),
            ("family", "weighted"),
            ("param", "0,0.25,0.5,0.75"),
        ],
        "example3" => &[
            ("shift", "0.2"),
            ("family", "proximal"),
            ("param", "0.25,0.5"),
            ("pure-newton", "true"),
            ("iters", "400"),
            ("tol", "1e-8"),
        ],
        "example5" => &[
            ("shift", "0.05"),
            ("family", "proximal"),
            ("param", TABLE_LAMBDAS),
        ],
        "example5-sos" => &[
            ("shift", "0.35"),
            ("family", "proximal"),
            ("param", TABLE_LAMBDAS),
            ("method", "grad-sos"),
            ("step", "0.1"),
            ("tol", "1e-14"),
            ("delta", "0.1"),
            ("stages", "3"),
            ("stage-iters", "5,5,2100"),
            ("budgets", "100,1100,2100"),
        ],
        "example5-dual" => &[
            ("shift", "0.35"),
            ("family", "proximal"),
            ("param", TABLE_LAMBDAS),
            ("method", "grad-dual"),
            ("step", "1"),
            ("tol", "1e-14"),
            ("delta", "0.1"),
            ("stages", "3"),
            ("two-stage", "true"),
            ("stage-iters", "2100"),
            ("budgets", "100,1100,2100"),
        ],
        _ => return None,
    })
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "config line {}: unknown key {key:?}",
                lineno + 1
            )));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// The merged key/value view: defaults, then preset, then config file, then
/// flags.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn merge(
        flag_preset: Option<&str>,
        file: &[(String, String)],
        flags: &[(&str, String)],
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> = DEFAULTS
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let file_preset = file
            .iter()
            .rev()
            .find(|(k, _)| k == "preset")
            .map(|(_, v)| v.as_str());
        if let Some(name) = flag_preset.or(file_preset) {
            let pairs = preset(name).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown preset {name:?}; known: {}",
                    PRESETS.join(", ")
                ))
            })?;
            for (k, v) in pairs {
                values.insert(k.to_string(), v.to_string());
            }
        }
        for (k, v) in file {
            if k != "preset" {
                values.insert(k.clone(), v.clone());
            }
        }
        for (k, v) in flags {
            values.insert(k.to_string(), v.clone());
        }
        Ok(Settings { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|e| CliError::usage(format!("--{key} {v:?}: {e}")))
            })
            .transpose()
    }

    fn required<T>(&self, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.parse(key)?
            .ok_or_else(|| CliError::usage(format!("--{key} is required")))
    }

    fn flag(&self, key: &str) -> Result<bool, CliError> {
        Ok(self.parse::<bool>(key)?.unwrap_or(false))
    }

    fn list<T>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim()
                            .parse()
                            .map_err(|e| CliError::usage(format!("--{key} item {item:?}: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err("expected lo,hi,count".into());
        };
        let grid = Grid {
            lo: lo.parse().map_err(|e| format!("lo: {e}"))?,
            hi: hi.parse().map_err(|e| format!("hi: {e}"))?,
            count: count.parse().map_err(|e| format!("count: {e}"))?,
        };
        if !(grid.lo.is_finite() && grid.hi.is_finite()) || grid.lo > grid.hi || grid.count == 0 {
            return Err("need finite lo <= hi and count >= 1".into());
        }
        Ok(grid)
    }
}

/// A fully typed run, reproducible from the settings it was built from.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub family: Family,
    pub params: Vec<f64>,
    pub endpoint: EndpointMode,
    pub shift: f64,
    pub moments: usize,
    pub quad: usize,
    pub solver: SolverConfig,
    pub strict: bool,
    pub warm_start: Option<PathBuf>,
    pub samples: usize,
    pub curve: Option<PathBuf>,
    pub which: Which,
    pub grid: Grid,
    pub homotopy: HomotopyConfig,
    pub table: bool,
    pub budgets: Vec<usize>,
    pub offsets: Vec<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    s.parse()
        .map_err(|e: String| CliError::usage(format!("--family: {e}")))
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let family = parse_family(s.raw("family").unwrap_or("proximal"))?;
        let mut params: Vec<f64> = s.list("param")?.unwrap_or_default();
        if params.is_empty() {
            return Err(CliError::usage("--param needs at least one value"));
        }
        for &p in &params {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::usage(format!("--param {p} is outside [0, 1]")));
            }
        }
        params.sort_by(f64::total_cmp);
        params.dedup();

        let endpoint = if s.flag("limiting")? {
            EndpointMode::Limiting
        } else {
            EndpointMode::Exact
        };
        let method: Method = s
            .required::<String>("method")?
            .parse()
            .map_err(|e: String| CliError::usage(format!("--method: {e}")))?;
        let iters: usize = s.required("iters")?;
        let tol: f64 = s.required("tol")?;
        let step: f64 = s.required("step")?;
        let solver = SolverConfig {
            method,
            max_iter: iters,
            tol,
            step,
            start: None,
            pure_newton: s.flag("pure-newton")?,
        };
        solver
            .validate()
            .map_err(|e| CliError::usage(e.to_string()))?;

        let stages: usize = s.required("stages")?;
        let two_stage = s.flag("two-stage")?;
        let inner_iters = match s.list::<usize>("stage-iters")? {
            Some(list) => list,
            None => {
                let later = if two_stage { 1 } else { stages };
                let mut v = vec![5; later.saturating_sub(1)];
                v.push(iters);
                v
            }
        };
        let homotopy = HomotopyConfig {
            delta: s.required("delta")?,
            stages,
            two_stage,
            stage0: SolverConfig::newton(s.required("stage0-iters")?, 1e-12),
            inner: solver.clone(),
            inner_iters,
        };
        homotopy
            .validate()
            .map_err(|e| CliError::usage(e.to_string()))?;

        let which: Which = s
            .required::<String>("which")?
            .parse()
            .map_err(|e: String| CliError::usage(format!("--which: {e}")))?;

        let moments: usize = s.required("moments")?;
        let quad: usize = s.required("quad")?;
        if moments == 0 || quad == 0 || quad > MAX_ORDER {
            return Err(CliError::usage(format!(
                "--moments must be positive and --quad in 1..={MAX_ORDER}"
            )));
        }

        Ok(RunConfig {
            family,
            params,
            endpoint,
            shift: s.required("shift")?,
            moments,
            quad,
            solver,
            strict: s.flag("strict")?,
            warm_start: s.path("warm-start"),
            samples: s.required("samples")?,
            curve: s.path("curve"),
            which,
            grid: s.required("grid")?,
            homotopy,
            table: s.flag("table")?,
            budgets: s.list("budgets")?.unwrap_or_default(),
            offsets: s.list("offsets")?.unwrap_or_default(),
            out: s.path("out"),
            format: s.parse("format")?,
        })
    }

    pub fn spec(&self, parameter: f64) -> AverageSpec {
        // Parameters were range-checked when the config was built.
        AverageSpec::new(self.family, parameter, self.endpoint).expect("validated parameter")
    }
}

pub fn load(
    flag_preset: Option<&str>,
    config: Option<&Path>,
    flags: &[(&str, String)],
) -> Result<RunConfig, CliError> {
    let file = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => Vec::new(),
    };
    RunConfig::from_settings(&Settings::merge(flag_preset, &file, flags)?)
}
