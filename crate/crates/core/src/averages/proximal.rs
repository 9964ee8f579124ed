//! Closed forms for the proximal average `f_λ = 𝒫(ent, λ, x²/2)`, its
//! conjugate `f_λ* = 𝒫(exp, λ, x²/2)`, and the maximizers that realize both.
//!
//! Every `W(c·eᵘ)` goes through the log-domain evaluation, so the formulas
//! stay finite for `λ → 0` and for large `|x|`.

use super::{energy, ent, ExtendedReal};
use crate::error::{Error, Result};
use crate::lambert_w::wexp;

fn check_interior(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "lambda",
            value: lambda,
            expected: "0 < lambda < 1",
        })
    }
}

/// `W((2/λ − 1)·e^{2x/λ})`.
fn primal_inner(x: f64, lambda: f64) -> f64 {
    wexp(2.0 * x / lambda + (2.0 / lambda - 1.0).ln())
}

/// `ω(x) = W((λ/(2 − λ))·e^{2x/(2−λ)})`.
fn dual_inner(x: f64, lambda: f64) -> f64 {
    wexp(2.0 * x / (2.0 - lambda) + (lambda / (2.0 - lambda)).ln())
}

/// Maximizer of `xy − (1−λ)·½W(eʸ)(W(eʸ)+2) − λy²/4`, i.e. the root of
/// `x − (1−λ)·W(eʸ) − (λ/2)·y = 0`.
pub fn proximal_average_argmax(x: f64, lambda: f64) -> Result<f64> {
    check_interior(lambda)?;
    Ok(argmax_primal_unchecked(x, lambda))
}

fn argmax_primal_unchecked(x: f64, lambda: f64) -> f64 {
    let a = 2.0 / lambda - 1.0;
    -((2.0 / lambda - 2.0) / a) * primal_inner(x, lambda) + 2.0 * x / lambda
}

/// Maximizer of `xy − (1−λ)(y²/2 − W(eʸ) − W(eʸ)²/2) − λy²/4`, the root of
/// `(1−λ)·W(eʸ) + (λ/2 − 1)·y + x = 0`.
pub fn proximal_conjugate_argmax(x: f64, lambda: f64) -> Result<f64> {
    check_interior(lambda)?;
    Ok((2.0 / lambda - 2.0) * dual_inner(x, lambda) + 2.0 * x / (2.0 - lambda))
}

/// The proximal average `f_λ(x)`. Endpoints return `ent` and the energy.
pub fn proximal_average(x: f64, lambda: f64) -> ExtendedReal {
    debug_assert!((0.0..=1.0).contains(&lambda));
    if lambda == 0.0 {
        return ent(x);
    }
    if lambda == 1.0 {
        return ExtendedReal::Finite(energy(x));
    }
    let l = lambda;
    let inner = primal_inner(x, l);
    // The outer exponent is exactly the maximizer p_φ(x).
    let outer = wexp(((2.0 * l - 2.0) / (2.0 - l)) * inner + 2.0 * x / l);
    let value = (l - 1.0) / 2.0 * outer * outer - x * x * (l - 2.0) / (2.0 * l) + (l - 1.0) * outer
        - l * (l - 1.0).powi(2) / (l - 2.0).powi(2) * inner * inner;
    ExtendedReal::Finite(value)
}

/// The conjugate `f_λ*(x) = 𝒫(exp, λ, x²/2)(x)`. Endpoints return `exp` and
/// the energy.
pub fn proximal_conjugate(x: f64, lambda: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&lambda));
    if lambda == 0.0 {
        return x.exp();
    }
    if lambda == 1.0 {
        return energy(x);
    }
    let l = lambda;
    let omega = dual_inner(x, l);
    let outer = wexp((2.0 / l - 2.0) * omega + 2.0 * x / (2.0 - l));
    (1.0 - l) * outer
        + l * x * x / (4.0 - 2.0 * l)
        + 0.5 * (1.0 - l) * outer * outer
        + (l - 1.0).powi(2) * (l - 2.0) / (l * l) * omega * omega
}

/// `(f_λ*)'(x)`, written in terms of `ω(x)` and the nested `W(e^{p_θ(x)})`.
///
/// Takes negative values for every `λ > 0`, unlike the weighted family.
pub fn proximal_conjugate_prime(x: f64, lambda: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&lambda));
    if lambda == 0.0 {
        return x.exp();
    }
    if lambda == 1.0 {
        return x;
    }
    let l = lambda;
    let omega = dual_inner(x, l);
    let nested = wexp((2.0 / l - 2.0) * omega + 2.0 * x / (2.0 - l));
    let bracket = 2.0 * (1.0 - l) / l * (omega - l / (l - 2.0)) * nested
        - 4.0 * (l - 1.0).powi(2) / (l * l) * omega * omega
        + l * x / (2.0 - l) * omega
        + x * l / (2.0 - l);
    bracket / (1.0 + omega)
}

/// `(f_λ*)''(x) = (4(1−λ)/(λ(2−λ)))·ω/(1+ω) + λ/(2−λ)`.
///
/// `(f_λ*)' = p_θ − id`, and differentiating `p_θ` only needs `W'`.
pub fn proximal_conjugate_second(x: f64, lambda: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&lambda));
    if lambda == 0.0 {
        return x.exp();
    }
    if lambda == 1.0 {
        return 1.0;
    }
    let l = lambda;
    let omega = dual_inner(x, l);
    4.0 * (1.0 - l) / (l * (2.0 - l)) * (omega / (1.0 + omega)) + l / (2.0 - l)
}
