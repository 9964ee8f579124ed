use nalgebra::{DMatrix, DVector};

use super::{SolveResult, SolverConfig, StopReason};
use crate::error::{Error, Result};
use crate::moment::{norm, MomentProblem};

const MAX_HALVINGS: usize = 30;
const TIKHONOV: f64 = 1e-12;

fn newton_direction(jac: DMatrix<f64>, r: &[f64]) -> Result<Vec<f64>> {
    let rhs = DVector::from_column_slice(r);
    let attempt = |m: DMatrix<f64>| {
        m.lu()
            .solve(&rhs)
            .filter(|d| d.iter().all(|v| v.is_finite()))
    };
    let n = jac.nrows();
    attempt(jac.clone())
        .or_else(|| attempt(jac + DMatrix::identity(n, n) * TIKHONOV))
        .map(|d| d.as_slice().to_vec())
        .ok_or(Error::SingularJacobian)
}

/// Newton's method on `r(μ) = 0` with the exact Jacobian.
///
/// With backtracking, a step is accepted at the first of `1, ½, ¼, …` (at most
/// thirty halvings) that strictly lowers `‖r‖₂` and evaluates finitely. With
/// `pure_newton` the full step is always taken.
pub fn newton_solve(problem: &MomentProblem, config: &SolverConfig) -> Result<SolveResult> {
    config.validate()?;
    let mut mu = config.initial(problem)?;
    let mut r = match problem.dual_residual(&mu) {
        Ok(r) => r,
        Err(e) => {
            return Ok(SolveResult::finish(
                problem,
                mu,
                vec![f64::INFINITY],
                StopReason::Diverged(e.to_string()),
            ))
        }
    };
    let mut rn = norm(&r);
    let mut history = vec![rn];

    let stop = loop {
        if rn <= config.tol {
            break StopReason::Converged;
        }
        if history.len() > config.max_iter {
            break StopReason::MaxIterations;
        }
        let jac = match problem.dual_jacobian(&mu) {
            Ok(j) => j,
            Err(e) => break StopReason::Diverged(e.to_string()),
        };
        let dir = newton_direction(jac, &r)?;

        let trial =
            |alpha: f64| -> Vec<f64> { mu.iter().zip(&dir).map(|(m, d)| m - alpha * d).collect() };

        if config.pure_newton {
            let next = trial(1.0);
            match problem.dual_residual(&next) {
                Ok(rr) => {
                    mu = next;
                    r = rr;
                    rn = norm(&r);
                    history.push(rn);
                }
                Err(e) => break StopReason::Diverged(e.to_string()),
            }
            continue;
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let next = trial(alpha);
            if let Ok(rr) = problem.dual_residual(&next) {
                let nn = norm(&rr);
                if nn < rn {
                    accepted = Some((next, rr, nn));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((next, rr, nn)) => {
                mu = next;
                r = rr;
                rn = nn;
                history.push(rn);
            }
            None => break StopReason::LineSearchFailed,
        }
    };
    Ok(SolveResult::finish(problem, mu, history, stop))
}
