//! Root finders for the dual residual: Newton's method, fixed-step descent on
//! the residual itself, fixed-step descent on the sum of squares, and a
//! homotopy driver that chains them over shifted generators.

mod gradient;
mod homotopy;
mod newton;

pub use gradient::{grad_dual_solve, grad_sos_solve};
pub use homotopy::{homotopy_solve, HomotopyConfig, StageOutcome, StageResult};
pub use newton::newton_solve;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::moment::MomentProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Newton,
    GradDual,
    GradSos,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::GradDual => "grad-dual",
            Method::GradSos => "grad-sos",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "newton" => Ok(Method::Newton),
            "grad-dual" => Ok(Method::GradDual),
            "grad-sos" => Ok(Method::GradSos),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iter: usize,
    /// Stop once `‖r‖₂ <= tol`.
    pub tol: f64,
    /// Fixed step of the gradient methods. Ignored by Newton.
    pub step: f64,
    /// Starting multipliers; `None` means every entry `1/2`.
    pub start: Option<Vec<f64>>,
    /// Newton without backtracking.
    pub pure_newton: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::Newton,
            max_iter: 50,
            tol: 1e-12,
            step: 1.0,
            start: None,
            pure_newton: false,
        }
    }
}

impl SolverConfig {
    pub fn newton(max_iter: usize, tol: f64) -> Self {
        SolverConfig {
            method: Method::Newton,
            max_iter,
            tol,
            ..Default::default()
        }
    }

    pub fn gradient(method: Method, max_iter: usize, tol: f64, step: f64) -> Self {
        SolverConfig {
            method,
            max_iter,
            tol,
            step,
            ..Default::default()
        }
    }

    pub fn with_start(mut self, start: Vec<f64>) -> Self {
        self.start = Some(start);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Parameter {
                name: "tol",
                value: self.tol,
                expected: "tol > 0",
            });
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Parameter {
                name: "step",
                value: self.step,
                expected: "finite step > 0",
            });
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter {
                name: "max_iter",
                value: 0.0,
                expected: "max_iter >= 1",
            });
        }
        if let Some(start) = &self.start {
            if start.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parameter {
                    name: "start",
                    value: f64::NAN,
                    expected: "finite starting multipliers",
                });
            }
        }
        Ok(())
    }

    fn initial(&self, problem: &MomentProblem) -> Result<Vec<f64>> {
        let n = problem.n_moments();
        match &self.start {
            Some(mu) if mu.len() != n => Err(Error::Dimension {
                expected: n,
                got: mu.len(),
            }),
            Some(mu) => Ok(mu.clone()),
            None => Ok(vec![0.5; n]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// Residual evaluation overflowed and no shorter step recovered.
    Diverged(String),
    /// Thirty halvings of the Newton step failed to reduce `‖r‖`.
    LineSearchFailed,
}

impl StopReason {
    /// True when the run ended on a numerical breakdown rather than a budget.
    pub fn is_failure(&self) -> bool {
        matches!(self, StopReason::Diverged(_) | StopReason::LineSearchFailed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub mu: Vec<f64>,
    /// `‖r(mu)‖₂`, evaluated afresh at the returned `mu`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `‖r‖₂` at every accepted iterate, starting point included.
    pub residual_history: Vec<f64>,
    pub stop: StopReason,
}

impl SolveResult {
    /// `‖r‖₂` after `k` iterations, or the final value if the run stopped
    /// earlier.
    pub fn residual_at(&self, k: usize) -> f64 {
        let last = self.residual_history.len() - 1;
        self.residual_history[k.min(last)]
    }

    fn finish(problem: &MomentProblem, mu: Vec<f64>, history: Vec<f64>, stop: StopReason) -> Self {
        let residual_norm = problem.residual_norm(&mu).unwrap_or(f64::INFINITY);
        SolveResult {
            iterations: history.len().saturating_sub(1),
            converged: stop == StopReason::Converged,
            mu,
            residual_norm,
            residual_history: history,
            stop,
        }
    }
}

/// Runs the method selected in `config`.
pub fn solve(problem: &MomentProblem, config: &SolverConfig) -> Result<SolveResult> {
    match config.method {
        Method::Newton => newton_solve(problem, config),
        Method::GradDual => grad_dual_solve(problem, config),
        Method::GradSos => grad_sos_solve(problem, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            step: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            max_iter: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Newton, Method::GradDual, Method::GradSos] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bfgs".parse::<Method>().is_err());
    }
}
