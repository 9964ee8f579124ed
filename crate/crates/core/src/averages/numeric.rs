//! Brute-force conjugates and proximal averages, used as independent oracles
//! for the closed forms.

use super::ExtendedReal;
use crate::error::{Error, Result};
use crate::lambert_w::wexp;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Search interval for a numeric supremum.
///
/// The grid is scanned first; the best cell is then refined by golden-section
/// search down to `tol`. A maximum sitting on an edge of the grid with the
/// objective still rising widens the interval on that side, at most
/// `max_expansions` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub tol: f64,
    pub max_expansions: usize,
}

impl Default for Bracket {
    fn default() -> Self {
        Bracket {
            lo: -50.0,
            hi: 50.0,
            points: 20_001,
            tol: 1e-10,
            max_expansions: 4,
        }
    }
}

/// `f*(x) = sup_y {x·y − f(y)}` by grid scan plus golden-section refinement.
pub fn conjugate_numeric<F>(f: F, x: f64, bracket: &Bracket) -> Result<f64>
where
    F: Fn(f64) -> ExtendedReal,
{
    let objective = |y: f64| match f(y) {
        ExtendedReal::Finite(v) => x * y - v,
        ExtendedReal::Infinity => f64::NEG_INFINITY,
    };
    let points = bracket.points.max(3);
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);

    for _ in 0..=bracket.max_expansions {
        let h = (hi - lo) / (points - 1) as f64;
        let grid = |i: usize| {
            if i == points - 1 {
                hi
            } else {
                lo + i as f64 * h
            }
        };

        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        let mut first = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        let mut prev = f64::NEG_INFINITY;
        let mut last = f64::NEG_INFINITY;
        for i in 0..points {
            let v = objective(grid(i));
            if i == 0 {
                first = v;
            } else if i == 1 {
                second = v;
            }
            if i == points - 1 {
                prev = last;
            }
            last = v;
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if best_val == f64::NEG_INFINITY {
            return Err(Error::Domain {
                op: "conjugate_numeric",
                x,
            });
        }

        let width = hi - lo;
        if best == 0 && first > second {
            lo -= width;
            continue;
        }
        if best == points - 1 && last > prev {
            hi += width;
            continue;
        }

        let a = grid(best.saturating_sub(1));
        let b = grid((best + 1).min(points - 1));
        let refined = golden_max(&objective, a, b, bracket.tol);
        return Ok(refined.max(best_val));
    }
    Err(Error::Unbounded { x })
}

fn golden_max(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    while (b - a).abs() > tol {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd).max(g(0.5 * (a + b)))
}

/// The two inner conjugates that enter the proximal averages:
/// `(ent + ½·²)*(x) = ½W(eˣ)(W(eˣ) + 2)` and
/// `(exp + ½·²)*(x) = ½x² − W(eˣ) − ½W(eˣ)²`.
pub fn inner_conjugates(x: f64) -> (f64, f64) {
    let w = wexp(x);
    (0.5 * w * (w + 2.0), 0.5 * x * x - w - 0.5 * w * w)
}

/// `((1−λ)·g₀ + λ·g₁)*(x) − ½x²`, where `g₀, g₁` are the already-conjugated
/// `(f₀ + ½·²)*` and `(f₁ + ½·²)*`.
pub fn proximal_average_numeric_with<G0, G1>(
    g0: G0,
    g1: G1,
    lambda: f64,
    x: f64,
    bracket: &Bracket,
) -> Result<f64>
where
    G0: Fn(f64) -> f64,
    G1: Fn(f64) -> f64,
{
    let mix = |y: f64| ExtendedReal::Finite((1.0 - lambda) * g0(y) + lambda * g1(y));
    Ok(conjugate_numeric(mix, x, bracket)? - 0.5 * x * x)
}

fn quarter_energy(y: f64) -> f64 {
    0.25 * y * y
}

/// `𝒫(ent, λ, ½·²)(x)` by one numeric conjugation of the closed-form inner
/// conjugates.
pub fn proximal_average_numeric(lambda: f64, x: f64) -> Result<f64> {
    proximal_average_numeric_with(
        |y| inner_conjugates(y).0,
        quarter_energy,
        lambda,
        x,
        &Bracket::default(),
    )
}

/// `𝒫(exp, λ, ½·²)(x)`, the oracle for the conjugate of the proximal average.
pub fn proximal_conjugate_numeric(lambda: f64, x: f64) -> Result<f64> {
    proximal_average_numeric_with(
        |y| inner_conjugates(y).1,
        quarter_energy,
        lambda,
        x,
        &Bracket::default(),
    )
}
