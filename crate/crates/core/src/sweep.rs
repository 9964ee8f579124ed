//! Order-preserving maps over independent evaluations.
//!
//! With the `parallel` feature, [`map`] runs on the rayon pool; otherwise it is
//! [`map_sequential`]. Either way the output is in input order and every
//! element is computed by the same deterministic code path.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::averages::AverageSpec;

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_sequential(items, f)
}

pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Which function of an [`AverageSpec`] to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    F,
    Fstar,
    FstarPrime,
    FstarSecond,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::F => "f",
            Which::Fstar => "fstar",
            Which::FstarPrime => "fstar_prime",
            Which::FstarSecond => "fstar_second",
        }
    }

    /// The selected function at `x`; `+∞` is returned as `f64::INFINITY`.
    pub fn eval(self, spec: &AverageSpec, x: f64) -> f64 {
        match self {
            Which::F => spec.value(x).to_f64(),
            Which::Fstar => spec.conjugate(x),
            Which::FstarPrime => spec.conjugate_prime(x),
            Which::FstarSecond => spec.conjugate_second(x),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Which {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f" => Ok(Which::F),
            "fstar" => Ok(Which::Fstar),
            "fstar_prime" | "fstar-prime" => Ok(Which::FstarPrime),
            "fstar_second" | "fstar-second" => Ok(Which::FstarSecond),
            other => Err(format!("unknown function {other:?}")),
        }
    }
}

/// `count` equally spaced points from `lo` to `hi` inclusive. A single point
/// is `lo`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        lo + i as f64 * step
                    }
                })
                .collect()
        }
    }
}

pub fn evaluate_grid(spec: &AverageSpec, which: Which, xs: &[f64]) -> Vec<f64> {
    map(xs, |&x| which.eval(spec, x))
}

pub fn evaluate_grid_sequential(spec: &AverageSpec, which: Which, xs: &[f64]) -> Vec<f64> {
    map_sequential(xs, |&x| which.eval(spec, x))
}
