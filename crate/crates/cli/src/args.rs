use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "proxavg",
    version,
    about = "Proximal averages of entropy and energy, and moment-problem solvers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate f, f*, (f*)' or (f*)'' on a grid, one block per parameter.
    Eval(Opts),
    /// Solve the dual moment problem for each parameter.
    Solve(Opts),
    /// Run a shifted-generator homotopy for each parameter.
    Homotopy(Opts),
    /// Solve the square discretized system and measure its distance to the orthant.
    Feasibility(Opts),
    /// Residual-by-budget table of a homotopy run.
    Table(Opts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Solve(_) => "solve",
            Command::Homotopy(_) => "homotopy",
            Command::Feasibility(_) => "feasibility",
            Command::Table(_) => "table",
        }
    }

    pub fn opts(&self) -> &Opts {
        match self {
            Command::Eval(o)
            | Command::Solve(o)
            | Command::Homotopy(o)
            | Command::Feasibility(o)
            | Command::Table(o) => o,
        }
    }
}

/// Every option is a string here; values are typed after the config file and
/// preset have been merged underneath them.
#[derive(Debug, Default, Args)]
pub struct Opts {
    /// Flat `key = value` file using the long flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// example1, example2, example3, example5, example5-sos or example5-dual.
    #[arg(long)]
    pub preset: Option<String>,

    /// weighted or proximal.
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated averaging parameters in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<String>,
    /// Evaluate the weighted family at t = 1 as its limit, the positive energy.
    #[arg(long)]
    pub limiting: bool,

    /// Constant c in the generator c + sin(3πs²)/2.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<String>,
    #[arg(long)]
    pub moments: Option<String>,
    /// Number of Gauss–Legendre abscissas.
    #[arg(long)]
    pub quad: Option<String>,

    /// newton, grad-dual or grad-sos.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub step: Option<String>,
    #[arg(long, alias = "max-iter")]
    pub iters: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub pure_newton: bool,
    /// Exit with status 3 if any run fails to converge.
    #[arg(long)]
    pub strict: bool,
    /// JSON output of an earlier solve whose multipliers start this one.
    #[arg(long)]
    pub warm_start: Option<PathBuf>,

    /// Points at which the primal curve is sampled.
    #[arg(long)]
    pub samples: Option<String>,
    /// Write the primal curve CSV here.
    #[arg(long)]
    pub curve: Option<PathBuf>,

    /// f, fstar, fstar_prime or fstar_second.
    #[arg(long)]
    pub which: Option<String>,
    /// lo,hi,count.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Generator shift per homotopy stage.
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub stages: Option<String>,
    /// Solve only the first and the last shifted problem.
    #[arg(long)]
    pub two_stage: bool,
    /// Comma-separated iteration budgets of the stages after the first.
    #[arg(long)]
    pub stage_iters: Option<String>,
    /// Newton iterations for the first stage.
    #[arg(long)]
    pub stage0_iters: Option<String>,
    /// Emit the residual-by-budget table instead of per-stage JSON.
    #[arg(long)]
    pub table: bool,
    /// Iteration counts at which the table reports the residual.
    #[arg(long)]
    pub budgets: Option<String>,

    /// Comma-separated offsets subtracted from --shift.
    #[arg(long, allow_hyphen_values = true)]
    pub offsets: Option<String>,

    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
}

impl Opts {
    /// Explicitly given options as `(key, value)` pairs, keyed like the
    /// config file.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let strings = [
            ("family", &self.family),
            ("param", &self.param),
            ("shift", &self.shift),
            ("moments", &self.moments),
            ("quad", &self.quad),
            ("method", &self.method),
            ("step", &self.step),
            ("iters", &self.iters),
            ("tol", &self.tol),
            ("samples", &self.samples),
            ("which", &self.which),
            ("grid", &self.grid),
            ("delta", &self.delta),
            ("stages", &self.stages),
            ("stage-iters", &self.stage_iters),
            ("stage0-iters", &self.stage0_iters),
            ("budgets", &self.budgets),
            ("offsets", &self.offsets),
            ("format", &self.format),
        ];
        for (key, value) in strings {
            if let Some(v) = value {
                out.push((key, v.clone()));
            }
        }
        let paths = [
            ("warm-start", &self.warm_start),
            ("curve", &self.curve),
            ("out", &self.out),
        ];
        for (key, value) in paths {
            if let Some(p) = value {
                out.push((key, p.display().to_string()));
            }
        }
        let flags = [
            ("limiting", self.limiting),
            ("pure-newton", self.pure_newton),
            ("strict", self.strict),
            ("two-stage", self.two_stage),
            ("table", self.table),
        ];
        for (key, set) in flags {
            if set {
                out.push((key, "true".to_string()));
            }
        }
        out
    }
}
