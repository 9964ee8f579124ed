//! Weighted and proximal averages of the negative entropy and the energy.
//!
//! The two base functions are fixed: `f₀ = ent` with conjugate `exp`, and the
//! self-conjugate energy `f₁ = x²/2`. The weighted family `f_t` interpolates
//! them pointwise, the proximal family `f_λ` interpolates them through the
//! proximal average, whose conjugate is the proximal average of `exp` and the
//! energy.

mod numeric;
mod proximal;
mod weighted;

pub use numeric::{
    conjugate_numeric, inner_conjugates, proximal_average_numeric, proximal_average_numeric_with,
    proximal_conjugate_numeric, Bracket,
};
pub use proximal::{
    proximal_average, proximal_average_argmax, proximal_conjugate, proximal_conjugate_argmax,
    proximal_conjugate_prime, proximal_conjugate_second,
};
pub use weighted::{
    weighted_average, weighted_conjugate, weighted_conjugate_prime, weighted_conjugate_second,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// A real number or `+∞`. Never NaN.
///
/// The derived ordering puts every finite value below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// The value as an `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinity => None,
        }
    }

    /// Multiplication by a non-negative weight with the convention `0·∞ = 0`.
    pub fn scale(self, weight: f64) -> ExtendedReal {
        debug_assert!(weight >= 0.0);
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(weight * v),
            ExtendedReal::Infinity if weight == 0.0 => ExtendedReal::Finite(0.0),
            ExtendedReal::Infinity => ExtendedReal::Infinity,
        }
    }
}

impl From<f64> for ExtendedReal {
    /// `+∞` maps to `Infinity`. NaN and `-∞` are not representable and panic
    /// in debug builds.
    fn from(v: f64) -> Self {
        debug_assert!(!v.is_nan() && v != f64::NEG_INFINITY);
        if v == f64::INFINITY {
            ExtendedReal::Infinity
        } else {
            ExtendedReal::Finite(v)
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinity,
        }
    }
}

impl Mul<ExtendedReal> for f64 {
    type Output = ExtendedReal;

    fn mul(self, rhs: ExtendedReal) -> ExtendedReal {
        rhs.scale(self)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

/// Negative Boltzmann–Shannon entropy: `x ln x − x` on `x > 0`, `0` at `0`,
/// `+∞` for `x < 0`.
pub fn ent(x: f64) -> ExtendedReal {
    if x > 0.0 {
        ExtendedReal::Finite(x * x.ln() - x)
    } else if x == 0.0 {
        ExtendedReal::Finite(0.0)
    } else {
        ExtendedReal::Infinity
    }
}

/// The energy `x²/2`.
pub fn energy(x: f64) -> f64 {
    0.5 * x * x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Pointwise convex combination `(1 − t)·ent + t·x²/2`.
    Weighted,
    /// Proximal average `𝒫(ent, λ, x²/2)`.
    Proximal,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Weighted => "weighted",
            Family::Proximal => "proximal",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "weighted" => Ok(Family::Weighted),
            "proximal" => Ok(Family::Proximal),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// How the weighted family is evaluated at `t = 1`.
///
/// `Exact` is the energy itself. `Limiting` is the limit of `f_t` as `t → 1`,
/// the positive energy, whose conjugate derivative is `max(·, 0)`. The mode has
/// no effect anywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointMode {
    #[default]
    Exact,
    Limiting,
}

/// One member of a homotopy family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageSpec {
    family: Family,
    parameter: f64,
    #[serde(default)]
    endpoint: EndpointMode,
}

impl AverageSpec {
    pub fn new(family: Family, parameter: f64, endpoint: EndpointMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&parameter) {
            return Err(Error::Parameter {
                name: "parameter",
                value: parameter,
                expected: "a value in [0, 1]",
            });
        }
        Ok(AverageSpec {
            family,
            parameter,
            endpoint,
        })
    }

    pub fn weighted(t: f64) -> Result<Self> {
        Self::new(Family::Weighted, t, EndpointMode::Exact)
    }

    pub fn weighted_limiting(t: f64) -> Result<Self> {
        Self::new(Family::Weighted, t, EndpointMode::Limiting)
    }

    pub fn proximal(lambda: f64) -> Result<Self> {
        Self::new(Family::Proximal, lambda, EndpointMode::Exact)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    pub fn endpoint(&self) -> EndpointMode {
        self.endpoint
    }

    fn limiting_endpoint(&self) -> bool {
        self.family == Family::Weighted
            && self.parameter == 1.0
            && self.endpoint == EndpointMode::Limiting
    }

    /// The primal function `f(x)`.
    pub fn value(&self, x: f64) -> ExtendedReal {
        match self.family {
            Family::Weighted if self.limiting_endpoint() => {
                if x >= 0.0 {
                    ExtendedReal::Finite(energy(x))
                } else {
                    ExtendedReal::Infinity
                }
            }
            Family::Weighted => weighted_average(x, self.parameter),
            Family::Proximal => proximal_average(x, self.parameter),
        }
    }

    /// The conjugate `f*(y)`.
    pub fn conjugate(&self, y: f64) -> f64 {
        match self.family {
            Family::Weighted => weighted_conjugate(y, self.parameter, self.endpoint),
            Family::Proximal => proximal_conjugate(y, self.parameter),
        }
    }

    /// `(f*)'(y)`, the primal reconstruction map.
    pub fn conjugate_prime(&self, y: f64) -> f64 {
        match self.family {
            Family::Weighted => weighted_conjugate_prime(y, self.parameter, self.endpoint),
            Family::Proximal => proximal_conjugate_prime(y, self.parameter),
        }
    }

    /// `(f*)''(y)`, used by Newton Jacobians.
    pub fn conjugate_second(&self, y: f64) -> f64 {
        match self.family {
            Family::Weighted => weighted_conjugate_second(y, self.parameter, self.endpoint),
            Family::Proximal => proximal_conjugate_second(y, self.parameter),
        }
    }
}

impl fmt::Display for AverageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbol = match self.family {
            Family::Weighted => "t",
            Family::Proximal => "λ",
        };
        write!(f, "{} {} = {}", self.family, symbol, self.parameter)?;
        if self.limiting_endpoint() {
            f.write_str(" (limiting)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ent_values() {
        assert_eq!(ent(1.0), ExtendedReal::Finite(-1.0));
        assert_eq!(ent(0.0), ExtendedReal::Finite(0.0));
        assert_eq!(ent(-0.5), ExtendedReal::Infinity);
    }

    #[test]
    fn extended_real_ordering_and_arithmetic() {
        let a = ExtendedReal::Finite(1e300);
        assert!(a < ExtendedReal::Infinity);
        assert!(ExtendedReal::Finite(-1.0) < ExtendedReal::Finite(2.0));
        assert_eq!(a + ExtendedReal::Infinity, ExtendedReal::Infinity);
        assert_eq!(0.0 * ExtendedReal::Infinity, ExtendedReal::Finite(0.0));
        assert_eq!(0.5 * ExtendedReal::Infinity, ExtendedReal::Infinity);
        assert_eq!(ExtendedReal::from(f64::INFINITY), ExtendedReal::Infinity);
        assert_eq!(ExtendedReal::Infinity.to_string(), "inf");
    }

    #[test]
    fn spec_rejects_out_of_range_parameters() {
        assert!(AverageSpec::proximal(-0.1).is_err());
        assert!(AverageSpec::weighted(1.5).is_err());
        assert!(AverageSpec::proximal(f64::NAN).is_err());
        assert!(AverageSpec::proximal(1.0).is_ok());
    }

    #[test]
    fn limiting_mode_only_touches_the_weighted_endpoint() {
        let exact = AverageSpec::weighted(1.0).unwrap();
        let limiting = AverageSpec::weighted_limiting(1.0).unwrap();
        assert_eq!(exact.conjugate_prime(-2.0), -2.0);
        assert_eq!(limiting.conjugate_prime(-2.0), 0.0);
        assert_eq!(limiting.conjugate(-2.0), 0.0);
        assert_eq!(limiting.value(-1.0), ExtendedReal::Infinity);

        let interior = AverageSpec::weighted_limiting(0.5).unwrap();
        let plain = AverageSpec::weighted(0.5).unwrap();
        assert_eq!(interior.conjugate(0.3), plain.conjugate(0.3));

        let prox = AverageSpec::new(Family::Proximal, 1.0, EndpointMode::Limiting).unwrap();
        assert_eq!(prox.conjugate_prime(-2.0), -2.0);
    }

    #[test]
    fn weighted_examples() {
        assert_eq!(weighted_average(1.0, 0.0), ExtendedReal::Finite(-1.0));
        assert_eq!(weighted_average(2.0, 1.0), ExtendedReal::Finite(2.0));
        assert_eq!(weighted_average(1.0, 0.5), ExtendedReal::Finite(-0.25));
        assert_eq!(weighted_average(-1.0, 0.5), ExtendedReal::Infinity);
        assert_eq!(weighted_average(-1.0, 1.0), ExtendedReal::Finite(0.5));
    }
}
