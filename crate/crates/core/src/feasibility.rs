//! Square discretization `Mx = b` of the moment constraints and the distance
//! of its solution from the non-negative orthant.
//!
//! `M` has one row per moment and one column per abscissa, `M_{j,i} = wᵢ·sᵢ^{j−1}`
//! on an `n`-point rule. The data vector always comes from the twenty-point
//! problem, so the only thing that changes with `n` is the discretization.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moment::{data_vector, norm, Generator};
use crate::quadrature::{gauss_legendre, QuadratureRule, DEFAULT_ORDER};

/// Systems at or above this 1-norm condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Components at or above this count as non-negative.
pub const NONNEGATIVE_SLACK: f64 = -1e-12;

#[derive(Debug, Clone)]
pub struct DiscretizedSystem {
    pub matrix: DMatrix<f64>,
    pub b: Vec<f64>,
    pub rule: QuadratureRule,
}

/// `n` moments against `n` abscissas, data from the default twenty-point rule.
pub fn build_system(n: usize, generator: &Generator) -> Result<DiscretizedSystem> {
    build_system_with_data_rule(n, generator, &gauss_legendre(DEFAULT_ORDER)?)
}

pub fn build_system_with_data_rule(
    n: usize,
    generator: &Generator,
    data_rule: &QuadratureRule,
) -> Result<DiscretizedSystem> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
            expected: "n >= 1",
        });
    }
    let rule = gauss_legendre(n)?;
    let mut matrix = DMatrix::zeros(n, n);
    for (i, (s, w)) in rule.iter().enumerate() {
        let mut power = 1.0;
        for j in 0..n {
            matrix[(j, i)] = w * power;
            power *= s;
        }
    }
    let b = data_vector(generator, n, data_rule)?;
    Ok(DiscretizedSystem { matrix, b, rule })
}

impl DiscretizedSystem {
    /// `‖M‖₁·‖M⁻¹‖₁`, or infinity if `M` has no inverse.
    pub fn condition(&self) -> f64 {
        match self.matrix.clone().try_inverse() {
            Some(inv) => one_norm(&self.matrix) * one_norm(&inv),
            None => f64::INFINITY,
        }
    }
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    FeasibleCertificate,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub x: Vec<f64>,
    pub min_component: f64,
    /// `‖min(x, 0)‖₂`.
    pub distance: f64,
    pub classification: Classification,
    pub condition: f64,
    /// `‖Mx − b‖₂`.
    pub residual: f64,
}

pub fn feasibility_report(system: &DiscretizedSystem) -> Result<FeasibilityReport> {
    let condition = system.condition();
    if condition.is_nan() || condition >= MAX_CONDITION {
        return Err(Error::SingularSystem { condition });
    }
    let rhs = DVector::from_column_slice(&system.b);
    let x = system
        .matrix
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem { condition })?;
    let residual = (&system.matrix * &x - &rhs).norm();
    let x = x.as_slice().to_vec();
    let min_component = x.iter().copied().fold(f64::INFINITY, f64::min);
    let negative: Vec<f64> = x.iter().map(|v| v.min(0.0)).collect();
    let classification = if min_component >= NONNEGATIVE_SLACK {
        Classification::FeasibleCertificate
    } else {
        Classification::Indeterminate
    };
    Ok(FeasibilityReport {
        distance: norm(&negative),
        x,
        min_component,
        classification,
        condition,
        residual,
    })
}
