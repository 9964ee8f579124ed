//! The weighted average `f_t = (1 − t)·ent + t·x²/2` and its conjugate.

use super::{energy, ent, EndpointMode, ExtendedReal};
use crate::lambert_w::wexp;

/// `W((t/(1−t))·e^{y/(1−t)})` for `0 < t < 1`.
fn omega(y: f64, t: f64) -> f64 {
    let s = 1.0 - t;
    wexp(y / s + (t / s).ln())
}

/// `f_t(x) = (1 − t)·ent(x) + t·x²/2`, with `0·∞ = 0` at `t = 1`.
pub fn weighted_average(x: f64, t: f64) -> ExtendedReal {
    (1.0 - t) * ent(x) + ExtendedReal::Finite(t * energy(x))
}

/// `f_t*(y) = ((1−t)²/2t)·(W + 2)·W`, with `exp` at `t = 0` and at `t = 1`
/// either the energy (`Exact`) or `max(y, 0)²/2` (`Limiting`).
pub fn weighted_conjugate(y: f64, t: f64, mode: EndpointMode) -> f64 {
    if t == 0.0 {
        return y.exp();
    }
    if t == 1.0 {
        return match mode {
            EndpointMode::Exact => energy(y),
            EndpointMode::Limiting => energy(y.max(0.0)),
        };
    }
    let w = omega(y, t);
    let s = 1.0 - t;
    s * s / (2.0 * t) * (w + 2.0) * w
}

/// `(f_t*)'(y) = ((1−t)/t)·W((t/(1−t))·e^{y/(1−t)})`.
pub fn weighted_conjugate_prime(y: f64, t: f64, mode: EndpointMode) -> f64 {
    if t == 0.0 {
        return y.exp();
    }
    if t == 1.0 {
        return match mode {
            EndpointMode::Exact => y,
            EndpointMode::Limiting => y.max(0.0),
        };
    }
    (1.0 - t) / t * omega(y, t)
}

/// `(f_t*)''(y) = (1/t)·W/(1 + W)`; at the limiting endpoint the unit step.
pub fn weighted_conjugate_second(y: f64, t: f64, mode: EndpointMode) -> f64 {
    if t == 0.0 {
        return y.exp();
    }
    if t == 1.0 {
        return match mode {
            EndpointMode::Exact => 1.0,
            EndpointMode::Limiting if y > 0.0 => 1.0,
            EndpointMode::Limiting => 0.0,
        };
    }
    let w = omega(y, t);
    w / ((1.0 + w) * t)
}
