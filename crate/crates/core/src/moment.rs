//! Finite-dimensional dual of the moment-constrained entropy minimization.
//!
//! Minimizing `∫₀¹ f(x(s)) ds` subject to `∫ aₖ(s)x(s) ds = bₖ` reduces to the
//! root of the residual
//!
//! ```text
//! rₖ(μ) = Σᵢ wᵢ·(f*)'(Σⱼ μⱼ aⱼ(sᵢ))·aₖ(sᵢ) − bₖ
//! ```
//!
//! with monomial constraints `aₖ(s) = s^{k−1}` and a Gauss–Legendre rule. The
//! primal solution is recovered as `x(s) = (f*)'(Σⱼ μⱼ aⱼ(s))`.

use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::averages::AverageSpec;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate, QuadratureRule, DEFAULT_ORDER};

pub const DEFAULT_MOMENTS: usize = 8;

/// The function `ρ` whose moments define the data vector.
#[derive(Clone)]
pub enum Generator {
    /// `s ↦ shift + ½·sin(3πs²)`.
    Sine {
        shift: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Generator {
    pub fn sine(shift: f64) -> Self {
        Generator::Sine { shift }
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Generator::Custom(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::custom(move |_| c)
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Generator::Sine { shift } => shift + 0.5 * (3.0 * PI * s * s).sin(),
            Generator::Custom(f) => f(s),
        }
    }

    /// `s ↦ ρ(s) − delta`.
    pub fn lowered(&self, delta: f64) -> Self {
        match self {
            Generator::Sine { shift } => Generator::Sine {
                shift: shift - delta,
            },
            Generator::Custom(f) => {
                let f = Arc::clone(f);
                Self::custom(move |s| f(s) - delta)
            }
        }
    }

    pub fn shift(&self) -> Option<f64> {
        match self {
            Generator::Sine { shift } => Some(*shift),
            Generator::Custom(_) => None,
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sine { shift } => f.debug_struct("Sine").field("shift", shift).finish(),
            Generator::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// The `k`-th constraint function `aₖ(s) = s^{k−1}`, `k ≥ 1`.
pub fn monomial(k: usize, s: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Index {
            index: k,
            max: usize::MAX,
        });
    }
    Ok(s.powi(k as i32 - 1))
}

/// Rows `aₖ(sᵢ)` for `k = 1..=n`, built by repeated multiplication.
fn monomial_table(n: usize, rule: &QuadratureRule) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(n);
    let mut current = vec![1.0; rule.order()];
    for _ in 0..n {
        rows.push(current.clone());
        for (c, &s) in current.iter_mut().zip(rule.nodes()) {
            *c *= s;
        }
    }
    rows
}

/// `bₖ = ∫ aₖ(s)·ρ(s) ds` under `rule`, for `k = 1..=n`.
pub fn data_vector(generator: &Generator, n: usize, rule: &QuadratureRule) -> Result<Vec<f64>> {
    (1..=n)
        .map(|k| integrate(|s| s.powi(k as i32 - 1) * generator.eval(s), rule))
        .collect()
}

/// A fully assembled moment problem. Immutable once built.
#[derive(Debug, Clone)]
pub struct MomentProblem {
    rule: QuadratureRule,
    generator: Generator,
    average: AverageSpec,
    b: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl MomentProblem {
    pub fn new(
        generator: Generator,
        n_moments: usize,
        rule: QuadratureRule,
        average: AverageSpec,
    ) -> Result<Self> {
        if n_moments == 0 {
            return Err(Error::Parameter {
                name: "n_moments",
                value: 0.0,
                expected: "at least one moment",
            });
        }
        let b = data_vector(&generator, n_moments, &rule)?;
        let basis = monomial_table(n_moments, &rule);
        Ok(MomentProblem {
            rule,
            generator,
            average,
            b,
            basis,
        })
    }

    /// Eight moments, twenty-point rule, generator `shift + ½sin(3πs²)`.
    pub fn standard(shift: f64, average: AverageSpec) -> Result<Self> {
        Self::new(
            Generator::sine(shift),
            DEFAULT_MOMENTS,
            gauss_legendre(DEFAULT_ORDER)?,
            average,
        )
    }

    pub fn with_average(&self, average: AverageSpec) -> Self {
        MomentProblem {
            average,
            ..self.clone()
        }
    }

    pub fn with_generator(&self, generator: Generator) -> Result<Self> {
        Self::new(generator, self.n_moments(), self.rule.clone(), self.average)
    }

    pub fn n_moments(&self) -> usize {
        self.b.len()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn average(&self) -> AverageSpec {
        self.average
    }

    pub fn data(&self) -> &[f64] {
        &self.b
    }

    /// `aₖ(s)` with the index checked against this problem's size.
    pub fn constraint(&self, k: usize, s: f64) -> Result<f64> {
        if k == 0 || k > self.n_moments() {
            return Err(Error::Index {
                index: k,
                max: self.n_moments(),
            });
        }
        monomial(k, s)
    }

    fn check_len(&self, mu: &[f64]) -> Result<()> {
        if mu.len() != self.n_moments() {
            return Err(Error::Dimension {
                expected: self.n_moments(),
                got: mu.len(),
            });
        }
        Ok(())
    }

    /// `Σⱼ μⱼ aⱼ(sᵢ)` at every node.
    fn inner_products(&self, mu: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rule.order()];
        for (row, &m) in self.basis.iter().zip(mu) {
            for (yi, &a) in y.iter_mut().zip(row) {
                *yi += m * a;
            }
        }
        y
    }

    fn node_values(&self, mu: &[f64], g: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        self.check_len(mu)?;
        self.inner_products(mu)
            .into_iter()
            .enumerate()
            .map(|(node, inner)| {
                let v = g(inner);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Diverged {
                        node,
                        inner,
                        mu: mu.to_vec(),
                    })
                }
            })
            .collect()
    }

    pub fn dual_residual(&self, mu: &[f64]) -> Result<Vec<f64>> {
        let avg = self.average;
        let fp = self.node_values(mu, |y| avg.conjugate_prime(y))?;
        Ok(self
            .basis
            .iter()
            .zip(&self.b)
            .map(|(row, &bk)| {
                let integral: f64 = row
                    .iter()
                    .zip(self.rule.weights())
                    .zip(&fp)
                    .map(|((a, w), v)| w * v * a)
                    .sum();
                integral - bk
            })
            .collect())
    }

    /// `‖r(μ)‖₂`.
    pub fn residual_norm(&self, mu: &[f64]) -> Result<f64> {
        Ok(norm(&self.dual_residual(mu)?))
    }

    /// `J_{kl} = Σᵢ wᵢ·(f*)''(yᵢ)·aₖ(sᵢ)·a_l(sᵢ)`, symmetric by construction.
    pub fn dual_jacobian(&self, mu: &[f64]) -> Result<DMatrix<f64>> {
        let avg = self.average;
        let fpp = self.node_values(mu, |y| avg.conjugate_second(y))?;
        let weighted: Vec<f64> = fpp
            .iter()
            .zip(self.rule.weights())
            .map(|(v, w)| v * w)
            .collect();
        let n = self.n_moments();
        let mut jac = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in k..n {
                let v: f64 = weighted
                    .iter()
                    .zip(&self.basis[k])
                    .zip(&self.basis[l])
                    .map(|((c, a), b)| c * a * b)
                    .sum();
                jac[(k, l)] = v;
                jac[(l, k)] = v;
            }
        }
        Ok(jac)
    }

    /// `x(s) = (f*)'(Σⱼ μⱼ aⱼ(s))`.
    pub fn primal_solution(&self, mu: &[f64], s: f64) -> f64 {
        let mut inner = 0.0;
        let mut power = 1.0;
        for &m in mu {
            inner += m * power;
            power *= s;
        }
        self.average.conjugate_prime(inner)
    }

    /// The primal curve at `samples` equally spaced points of `[0, 1]`.
    pub fn primal_curve(&self, mu: &[f64], samples: usize) -> Vec<(f64, f64)> {
        let denom = samples.saturating_sub(1).max(1) as f64;
        (0..samples)
            .map(|i| {
                let s = i as f64 / denom;
                (s, self.primal_solution(mu, s))
            })
            .collect()
    }

    /// `G(μ) = Σₖ rₖ(μ)²` and `∇G = 2·Jᵀr`.
    pub fn sos_objective(&self, mu: &[f64]) -> Result<(f64, Vec<f64>)> {
        let r = self.dual_residual(mu)?;
        let jac = self.dual_jacobian(mu)?;
        let value = r.iter().map(|v| v * v).sum();
        let n = r.len();
        let grad = (0..n)
            .map(|l| 2.0 * (0..n).map(|k| jac[(k, l)] * r[k]).sum::<f64>())
            .collect();
        Ok((value, grad))
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averages::AverageSpec;
    use nalgebra::DVector;

    fn ones_problem(n: usize, avg: AverageSpec) -> MomentProblem {
        MomentProblem::new(
            Generator::constant(1.0),
            n,
            gauss_legendre(20).unwrap(),
            avg,
        )
        .unwrap()
    }

    #[test]
    fn constraint_functions() {
        let p = MomentProblem::standard(0.6, AverageSpec::proximal(0.5).unwrap()).unwrap();
        assert_eq!(p.constraint(1, 0.3).unwrap(), 1.0);
        assert_eq!(p.constraint(3, 0.5).unwrap(), 0.25);
        assert_eq!(p.constraint(8, 1.0).unwrap(), 1.0);
        assert!(matches!(p.constraint(0, 0.5), Err(Error::Index { .. })));
        assert!(matches!(p.constraint(9, 0.5), Err(Error::Index { .. })));
    }

    #[test]
    fn data_vectors_of_simple_generators() {
        let rule = gauss_legendre(20).unwrap();
        let b = data_vector(&Generator::constant(1.0), 4, &rule).unwrap();
        for (k, v) in b.iter().enumerate() {
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-12);
        }
        let b = data_vector(&Generator::constant(0.0), 5, &rule).unwrap();
        assert!(b.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn data_vector_is_deterministic() {
        let rule = gauss_legendre(20).unwrap();
        let g = Generator::sine(0.35);
        assert_eq!(
            data_vector(&g, 8, &rule).unwrap(),
            data_vector(&g, 8, &rule).unwrap()
        );
    }

    #[test]
    fn residual_at_zero_for_exp() {
        let p = MomentProblem::standard(0.6, AverageSpec::weighted(0.0).unwrap()).unwrap();
        let r = p.dual_residual(&[0.0; 8]).unwrap();
        for (k, (rk, bk)) in r.iter().zip(p.data()).enumerate() {
            assert!((rk - (1.0 / (k as f64 + 1.0) - bk)).abs() < 1e-14);
        }
    }

    #[test]
    fn energy_problem_is_linear() {
        let p = MomentProblem::standard(0.35, AverageSpec::proximal(1.0).unwrap()).unwrap();
        let gram = p.dual_jacobian(&[0.0; 8]).unwrap();
        assert_eq!(
            gram,
            p.dual_jacobian(&[0.3, -1.0, 2.0, 0.0, 0.0, 1.0, 0.5, 0.1])
                .unwrap()
        );
        // Solve the normal equations directly.
        let mu = gram
            .clone()
            .lu()
            .solve(&DVector::from_column_slice(p.data()))
            .unwrap();
        let r = p.residual_norm(mu.as_slice()).unwrap();
        assert!(r <= 1e-12, "{r}");
    }

    #[test]
    fn jacobian_is_symmetric_and_matches_finite_differences() {
        let mu = [0.4, -0.3, 0.2, 0.1, -0.2, 0.3, 0.05, -0.1];
        for avg in [
            AverageSpec::weighted(0.5).unwrap(),
            AverageSpec::weighted(0.25).unwrap(),
            AverageSpec::proximal(0.25).unwrap(),
            AverageSpec::proximal(0.5).unwrap(),
        ] {
            let p = MomentProblem::standard(0.35, avg).unwrap();
            let jac = p.dual_jacobian(&mu).unwrap();
            assert!((&jac - jac.transpose()).amax() <= 1e-12);
            let h = 1e-6;
            for l in 0..8 {
                let mut plus = mu;
                let mut minus = mu;
                plus[l] += h;
                minus[l] -= h;
                let rp = p.dual_residual(&plus).unwrap();
                let rm = p.dual_residual(&minus).unwrap();
                for k in 0..8 {
                    let fd = (rp[k] - rm[k]) / (2.0 * h);
                    assert!((fd - jac[(k, l)]).abs() < 1e-4, "{avg}: ({k},{l})");
                }
            }
        }
    }

    #[test]
    fn primal_reconstruction() {
        let p = ones_problem(8, AverageSpec::proximal(1.0).unwrap());
        let mut mu = [0.0; 8];
        mu[0] = 0.7;
        assert_eq!(p.primal_solution(&mu, 0.3), 0.7);
        let p = ones_problem(8, AverageSpec::weighted(0.0).unwrap());
        assert_eq!(p.primal_solution(&[0.0; 8], 0.9), 1.0);
        let curve = p.primal_curve(&[0.0; 8], 201);
        assert_eq!(curve.len(), 201);
        assert_eq!(curve[200].0, 1.0);
    }

    #[test]
    fn sum_of_squares_gradient() {
        let p = MomentProblem::standard(0.35, AverageSpec::weighted(0.25).unwrap()).unwrap();
        let mu = [0.3, 0.2, -0.1, 0.4, 0.0, -0.2, 0.1, 0.05];
        let (g, grad) = p.sos_objective(&mu).unwrap();
        let r = p.residual_norm(&mu).unwrap();
        assert!((g - r * r).abs() <= 1e-15 * g.max(1.0));
        let h = 1e-6;
        for l in 0..8 {
            let mut plus = mu;
            let mut minus = mu;
            plus[l] += h;
            minus[l] -= h;
            let fd = (p.sos_objective(&plus).unwrap().0 - p.sos_objective(&minus).unwrap().0)
                / (2.0 * h);
            assert!(
                (fd - grad[l]).abs() <= 1e-4 * grad[l].abs().max(1e-3),
                "{l}: {fd} vs {}",
                grad[l]
            );
        }
    }

    #[test]
    fn divergence_carries_diagnostics() {
        let p = MomentProblem::standard(0.6, AverageSpec::weighted(0.0).unwrap()).unwrap();
        let mut mu = [0.0; 8];
        mu[7] = 2000.0;
        match p.dual_residual(&mu) {
            Err(Error::Diverged { node, inner, mu: m }) => {
                assert!(inner > 700.0);
                assert!(node > 0);
                assert_eq!(m[7], 2000.0);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
        assert!(matches!(
            p.dual_residual(&[0.0; 3]),
            Err(Error::Dimension {
                expected: 8,
                got: 3
            })
        ));
    }
}
