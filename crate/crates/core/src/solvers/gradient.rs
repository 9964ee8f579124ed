use super::{SolveResult, SolverConfig, StopReason};
use crate::error::Result;
use crate::moment::{norm, MomentProblem};

const MAX_HALVINGS: usize = 30;

/// Shared fixed-step loop. `direction` maps `μ` to the descent direction and
/// the current residual norm.
fn descend<D>(problem: &MomentProblem, config: &SolverConfig, direction: D) -> Result<SolveResult>
where
    D: Fn(&[f64]) -> Result<(Vec<f64>, f64)>,
{
    config.validate()?;
    let mut mu = config.initial(problem)?;
    let (mut dir, mut rn) = match direction(&mu) {
        Ok(v) => v,
        Err(e) => {
            return Ok(SolveResult::finish(
                problem,
                mu,
                vec![f64::INFINITY],
                StopReason::Diverged(e.to_string()),
            ))
        }
    };
    let mut history = vec![rn];

    let stop = loop {
        if rn <= config.tol {
            break StopReason::Converged;
        }
        if history.len() > config.max_iter {
            break StopReason::MaxIterations;
        }
        // Overflow shortens this step only; the next one starts at full size.
        let mut step = config.step;
        let mut outcome = None;
        let mut last_err = None;
        for _ in 0..=MAX_HALVINGS {
            let next: Vec<f64> = mu.iter().zip(&dir).map(|(m, d)| m - step * d).collect();
            match direction(&next) {
                Ok(v) => {
                    outcome = Some((next, v));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
            step *= 0.5;
        }
        match outcome {
            Some((next, (d, n))) => {
                mu = next;
                dir = d;
                rn = n;
                history.push(rn);
            }
            None => {
                let msg = last_err.map(|e| e.to_string()).unwrap_or_default();
                break StopReason::Diverged(msg);
            }
        }
    };
    Ok(SolveResult::finish(problem, mu, history, stop))
}

/// `μ ← μ − step·r(μ)`.
///
/// `r` is the gradient of the convex dual objective, so this is descent on
/// the dual and lowers `‖r‖` for small enough steps.
pub fn grad_dual_solve(problem: &MomentProblem, config: &SolverConfig) -> Result<SolveResult> {
    descend(problem, config, |mu| {
        let r = problem.dual_residual(mu)?;
        let n = norm(&r);
        Ok((r, n))
    })
}

/// `μ ← μ − step·∇G(μ)` with `G = ‖r‖²`. The history records `‖r‖`, not `G`.
pub fn grad_sos_solve(problem: &MomentProblem, config: &SolverConfig) -> Result<SolveResult> {
    descend(problem, config, |mu| {
        let (g, grad) = problem.sos_objective(mu)?;
        Ok((grad, g.sqrt()))
    })
}
