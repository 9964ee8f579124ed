//! Gauss–Legendre rules on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 256;

/// Default number of abscissas for the moment problems.
pub const DEFAULT_ORDER: usize = 20;

/// Nodes in increasing order on `(0, 1)` with positive weights summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `m`-point Gauss–Legendre rule mapped from `[-1, 1]` to `[0, 1]`.
///
/// Roots of `P_m` are found by Newton's method from the Tricomi-style guess
/// `cos(π(i + 3/4)/(m + 1/2))`; only half are computed and mirrored so the
/// rule is exactly symmetric about `1/2`.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::Parameter {
            name: "m",
            value: m as f64,
            expected: "1 <= m <= 256",
        });
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, z);
        if d.is_finite() {
            dp = d;
        }
        let w = 1.0 / ((1.0 - z * z) * dp * dp);
        // z runs from near 1 downwards; (1 − z)/2 runs upwards from near 0.
        nodes[i] = 0.5 * (1.0 - z);
        nodes[m - 1 - i] = 0.5 * (1.0 + z);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.5;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(P_m(z), P_m'(z))` by the three-term recurrence.
fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 1 {
        return (z, 1.0);
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// `Σ wᵢ f(sᵢ)`. A non-finite integrand value is an error.
pub fn integrate<F: Fn(f64) -> f64>(f: F, rule: &QuadratureRule) -> Result<f64> {
    let mut sum = 0.0;
    for (node, (s, w)) in rule.iter().enumerate() {
        let value = f(s);
        if !value.is_finite() {
            return Err(Error::NonFinite { node, s, value });
        }
        sum += w * value;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson, used as an independent reference.
    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn step(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn low_order_rules() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes(), &[0.5]);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);

        let r = gauss_legendre(2).unwrap();
        let off = 0.5 / 3f64.sqrt();
        assert!((r.nodes()[0] - (0.5 - off)).abs() < 1e-15);
        assert!((r.nodes()[1] - (0.5 + off)).abs() < 1e-15);
        assert!((r.weights()[0] - 0.5).abs() < 1e-15);
        assert!((r.weights()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn order_bounds() {
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(257).is_err());
        assert!(gauss_legendre(256).is_ok());
    }

    #[test]
    fn structure_invariants() {
        for m in [1, 2, 3, 7, 8, 20, 64, 129, 256] {
            let r = gauss_legendre(m).unwrap();
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - 1.0).abs() <= 1e-14, "m = {m}: {sum}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(r.nodes().iter().all(|&s| s > 0.0 && s < 1.0));
        }
    }

    #[test]
    fn twenty_point_rule_is_exact_to_degree_39() {
        let r = gauss_legendre(20).unwrap();
        let v = integrate(|s| s.powi(39), &r).unwrap();
        assert!((v - 1.0 / 40.0).abs() < 1e-13);
        assert!((integrate(|_| 1.0, &r).unwrap() - 1.0).abs() < 1e-14);
        assert!((integrate(|s| s.powi(4), &r).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn smooth_oscillatory_integrand() {
        let f = |s: f64| (3.0 * std::f64::consts::PI * s * s).sin();
        let oracle = adaptive_simpson(&f, 0.0, 1.0, 1e-12);
        let v = integrate(f, &gauss_legendre(20).unwrap()).unwrap();
        assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = gauss_legendre(4).unwrap();
        let err = integrate(|s| if s > 0.5 { f64::INFINITY } else { 1.0 }, &r).unwrap_err();
        assert!(matches!(err, Error::NonFinite { node: 2, .. }));
    }
}
