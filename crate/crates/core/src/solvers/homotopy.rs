use serde::{Deserialize, Serialize};

use super::{newton_solve, solve, Method, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::moment::{Generator, MomentProblem};

/// A sequence of problems with generators `ρ_N = ρ − N·delta`, `N = 0..=stages`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyConfig {
    pub delta: f64,
    pub stages: usize,
    /// Skip the intermediate shifts and go from `N = 0` straight to `N = stages`.
    pub two_stage: bool,
    /// Stage-0 solver. Always Newton.
    pub stage0: SolverConfig,
    /// Template for every later stage; its `start` is replaced by the warm start.
    pub inner: SolverConfig,
    /// Iteration budget of each later stage in order. The last entry repeats;
    /// an empty list falls back to `inner.max_iter`.
    pub inner_iters: Vec<usize>,
}

impl HomotopyConfig {
    pub fn total_shift(&self) -> f64 {
        self.delta * self.stages as f64
    }

    /// The shift indices `N` visited, stage 0 first.
    pub fn schedule(&self) -> Vec<usize> {
        if self.two_stage {
            if self.stages == 0 {
                vec![0]
            } else {
                vec![0, self.stages]
            }
        } else {
            (0..=self.stages).collect()
        }
    }

    fn budget(&self, later_stage: usize) -> usize {
        match self.inner_iters.len() {
            0 => self.inner.max_iter,
            len => self.inner_iters[later_stage.min(len - 1)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::Parameter {
                name: "delta",
                value: self.delta,
                expected: "finite delta >= 0",
            });
        }
        if self.stage0.method != Method::Newton {
            return Err(Error::Parameter {
                name: "stage0.method",
                value: f64::NAN,
                expected: "stage 0 is solved by Newton's method",
            });
        }
        if self.inner_iters.contains(&0) {
            return Err(Error::Parameter {
                name: "inner_iters",
                value: 0.0,
                expected: "positive iteration budgets",
            });
        }
        self.stage0.validate()?;
        self.inner.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum StageOutcome {
    Solved(SolveResult),
    Unsolved { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageResult {
    /// Shift index `N`.
    pub index: usize,
    /// Generator offset `N·delta` subtracted from the base.
    pub offset: f64,
    pub outcome: StageOutcome,
}

impl StageResult {
    pub fn result(&self) -> Option<&SolveResult> {
        match &self.outcome {
            StageOutcome::Solved(r) => Some(r),
            StageOutcome::Unsolved { .. } => None,
        }
    }
}

/// Solves stage 0 with Newton, then each later stage with `cfg.inner`
/// warm-started from the previous stage's multipliers.
///
/// A stage ending in divergence or a failed line search marks every later
/// stage unsolved. Running out of iterations is not a failure.
pub fn homotopy_solve(
    base: &Generator,
    cfg: &HomotopyConfig,
    template: &MomentProblem,
) -> Result<Vec<StageResult>> {
    cfg.validate()?;
    let mut results = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    let mut failure: Option<String> = None;

    for (pos, index) in cfg.schedule().into_iter().enumerate() {
        let offset = index as f64 * cfg.delta;
        if let Some(reason) = &failure {
            results.push(StageResult {
                index,
                offset,
                outcome: StageOutcome::Unsolved {
                    reason: reason.clone(),
                },
            });
            continue;
        }
        let problem = template.with_generator(base.lowered(offset))?;
        let outcome = match &warm {
            None => newton_solve(&problem, &cfg.stage0),
            Some(mu) => {
                let stage_cfg = SolverConfig {
                    max_iter: cfg.budget(pos - 1),
                    start: Some(mu.clone()),
                    ..cfg.inner.clone()
                };
                solve(&problem, &stage_cfg)
            }
        };
        match outcome {
            Ok(res) => {
                if res.stop.is_failure() {
                    failure = Some(format!("stage {index} stopped: {:?}", res.stop));
                }
                warm = Some(res.mu.clone());
                results.push(StageResult {
                    index,
                    offset,
                    outcome: StageOutcome::Solved(res),
                });
            }
            Err(e) => {
                let reason = format!("stage {index} failed: {e}");
                results.push(StageResult {
                    index,
                    offset,
                    outcome: StageOutcome::Unsolved {
                        reason: reason.clone(),
                    },
                });
                failure = Some(reason);
            }
        }
    }
    Ok(results)
}
