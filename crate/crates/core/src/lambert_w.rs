//! Principal branch of the Lambert W function and the log-domain composite
//! `W(eᵘ)`.
//!
//! The averages in this crate evaluate `W(c·eᵘ)` for arguments whose
//! exponential overflows long before the result does, so the log-domain entry
//! points [`wexp`] and [`wexp_scaled`] never form `eᵘ` once `u` exceeds
//! [`U_SAFE`].

use crate::error::{Error, Result};

/// High and low parts of `1/e`, so that `x + 1/e` can be formed without
/// losing the digits that matter near the branch point.
const INV_E_HI: f64 = 0.367_879_441_171_442_33;
const INV_E_LO: f64 = -1.242_875_367_278_836_3e-17;

/// `-1/e` rounded to the nearest double, the left end of the real domain.
pub const BRANCH_POINT: f64 = -INV_E_HI;

/// Above this log-argument `W(eᵘ)` is found from `w + ln w = u` instead of
/// through `eᵘ`.
pub const U_SAFE: f64 = 36.0;

const MAX_ITER: usize = 50;

/// Principal branch `W₀(x)`, the inverse of `w ↦ w·eʷ` on `[-1/e, ∞)`.
///
/// Halley iteration from a piecewise starting guess. Iteration stops once the
/// residual `w·eʷ − x` is below `1e-15·|x|` or the Halley step stalls at
/// rounding level.
pub fn w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if x < BRANCH_POINT {
        return Err(Error::Domain { op: "w0", x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    // Distance to the branch point, carried in extra precision.
    let q = (x + INV_E_HI) + INV_E_LO;
    if q <= 0.0 {
        return Ok(-1.0);
    }

    let mut w = initial_guess(x, q);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-15 * x.abs() {
            break;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 2.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

fn initial_guess(x: f64, q: f64) -> f64 {
    if q < 0.3 {
        // Series in p = sqrt(2(ex + 1)) about the branch point.
        let p = (2.0 * std::f64::consts::E * q).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)))
    } else if x.abs() < 1e-3 {
        x * (1.0 + x * (-1.0 + 1.5 * x))
    } else if x < 20.0 {
        // Winitzki's approximation.
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// `W(eᵘ)` for any finite `u`.
///
/// Up to [`U_SAFE`] this is `w0(exp(u))`; above it the identity
/// `ln W(eᵘ) = u − W(eᵘ)` is solved by Newton's method, seeded at `u − ln u`.
pub fn wexp(u: f64) -> f64 {
    if u.is_nan() {
        return f64::NAN;
    }
    if u <= U_SAFE {
        // exp(u) > 0 > -1/e, so the domain check cannot fail.
        return w0(u.exp()).unwrap_or(f64::NAN);
    }
    if u == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut w = u - u.max(2.0).ln();
    for _ in 0..MAX_ITER {
        let g = w + w.ln() - u;
        let step = g / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= f64::EPSILON * w {
            break;
        }
    }
    w
}

/// `W(c·eᵘ)` computed as `wexp(u + ln c)`.
pub fn wexp_scaled(c: f64, u: f64) -> Result<f64> {
    if c.is_nan() || u.is_nan() {
        return Ok(f64::NAN);
    }
    if c <= 0.0 {
        return Err(Error::Parameter {
            name: "c",
            value: c,
            expected: "c > 0",
        });
    }
    Ok(wexp(u + c.ln()))
}

/// Coefficients (ascending powers of `w`) of the polynomials `pₙ` with
/// `p₁ = 1` and `pₙ₊₁(w) = −(nw + 3n − 1)·pₙ(w) + (1 + w)·pₙ'(w)`.
pub fn derivative_polynomial(n: usize) -> Vec<f64> {
    let mut p = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let mut next = vec![0.0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            // −(3k − 1)·c·wⁱ − k·c·wⁱ⁺¹
            next[i] -= (3.0 * kf - 1.0) * c;
            next[i + 1] -= kf * c;
            // (1 + w)·i·c·wⁱ⁻¹
            if i > 0 {
                let d = i as f64 * c;
                next[i - 1] += d;
                next[i] += d;
            }
        }
        while next.len() > 1 && next.last() == Some(&0.0) {
            next.pop();
        }
        p = next;
    }
    p
}

/// `n`-th derivative of `W₀` at `x > -1/e`:
/// `e^{−nW}·pₙ(W) / (1 + W)^{2n−1}`.
pub fn w0_derivative(x: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
            expected: "derivative order n >= 1",
        });
    }
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    let q = (x + INV_E_HI) + INV_E_LO;
    if x < BRANCH_POINT || q <= 0.0 {
        return Err(Error::Domain {
            op: "w0_derivative",
            x,
        });
    }
    let w = w0(x)?;
    let p = derivative_polynomial(n);
    let pw = p.iter().rev().fold(0.0, |acc, &c| acc * w + c);
    let nf = n as f64;
    Ok((-nf * w).exp() * pw / (1.0 + w).powi(2 * n as i32 - 1))
}

/// Antiderivative `(W² − W + 1)·e^W` of `W₀`, normalized so that it equals 1
/// at `x = 0`.
pub fn w0_antiderivative(x: f64) -> Result<f64> {
    let w = w0(x).map_err(|_| Error::Domain {
        op: "w0_antiderivative",
        x,
    })?;
    Ok((w * w - w + 1.0) * w.exp())
}
