//! Trapezoid quadrature of `(1/2πi)∮ g(ζ) dζ` on circles.
//!
//! With nodes ζₖ = c + r·e^{iθₖ}, θₖ = 2πk/N, the rule is
//! `(1/N) Σ g(ζₖ)·r·e^{iθₖ}`; it converges geometrically for integrands
//! analytic in an annulus around the circle.

use num_complex::Complex;
use thiserror::Error;

use crate::cocycle::ContourSpec;
use crate::scalar::{is_finite, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integrand is not finite at node {node} (ζ = {zeta})")]
    NonFiniteSample { node: usize, zeta: String },
}

/// Default agreement tolerance between successive doublings.
pub const ADAPTIVE_TOL: f64 = 1e-12;
/// Maximum node count of the adaptive rule.
pub const NODE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T, const K: usize> {
    pub value: [Complex<T>; K],
    pub nodes: usize,
    pub converged: bool,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Sum of `g(ζ)·(ζ − c)` over nodes `start, start + step, ...` of an `n`-node rule.
fn partial_sum<T: Real, const K: usize, G>(
    g: &G,
    c: &ContourSpec<T>,
    n: usize,
    start: usize,
    step: usize,
) -> Result<[Complex<T>; K], QuadratureError>
where
    G: Fn(Complex<T>) -> [Complex<T>; K],
{
    let mut acc = [zero::<T>(); K];
    let two_pi = T::lit(2.0) * T::PI();
    for k in (start..n).step_by(step) {
        let th = two_pi * T::lit(k as f64) / T::lit(n as f64);
        let w = Complex::from_polar(c.radius, th);
        let zeta = c.center + w;
        let v = g(zeta);
        for (a, &vi) in acc.iter_mut().zip(&v) {
            if !is_finite(vi) {
                return Err(QuadratureError::NonFiniteSample { node: k, zeta: format!("{zeta}") });
            }
            *a += vi * w;
        }
    }
    Ok(acc)
}

/// Fixed `c.nodes`-point rule for a vector of integrands sharing the nodes.
pub fn contour_integral_vec<T: Real, const K: usize, G>(g: G, c: &ContourSpec<T>) -> Result<[Complex<T>; K], QuadratureError>
where
    G: Fn(Complex<T>) -> [Complex<T>; K],
{
    let s = partial_sum(&g, c, c.nodes, 0, 1)?;
    let n = T::lit(c.nodes as f64);
    Ok(s.map(|v| v / n))
}

pub fn contour_integral<T: Real, G>(g: G, c: &ContourSpec<T>) -> Result<Complex<T>, QuadratureError>
where
    G: Fn(Complex<T>) -> Complex<T>,
{
    contour_integral_vec(|z| [g(z)], c).map(|[v]| v)
}

/// Doubles the node count from `c.nodes` until two successive values agree to
/// `tol·max(1, |I|)` in every component, reusing earlier nodes. Stops at `cap`.
pub fn adaptive_contour_integral<T: Real, const K: usize, G>(
    g: G,
    c: &ContourSpec<T>,
    tol: T,
    cap: usize,
) -> Result<Quadrature<T, K>, QuadratureError>
where
    G: Fn(Complex<T>) -> [Complex<T>; K],
{
    let mut n = c.nodes;
    let mut sum = partial_sum(&g, c, n, 0, 1)?;
    let mut prev = sum.map(|v| v / T::lit(n as f64));
    while 2 * n <= cap {
        // Odd nodes of the 2n rule are the new ones.
        let odd = partial_sum(&g, c, 2 * n, 1, 2)?;
        for (s, o) in sum.iter_mut().zip(&odd) {
            *s += *o;
        }
        n *= 2;
        let cur = sum.map(|v| v / T::lit(n as f64));
        let done = cur.iter().zip(&prev).all(|(a, b)| (*a - *b).norm() <= tol * T::one().max(a.norm()));
        prev = cur;
        if done {
            return Ok(Quadrature { value: cur, nodes: n, converged: true });
        }
    }
    Ok(Quadrature { value: prev, nodes: n, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn circle(n: usize) -> ContourSpec<f64> {
        ContourSpec::new(1.0, C::new(0.0, 0.0), n).unwrap()
    }

    #[test]
    fn residue_examples() {
        let one = contour_integral(|z: C| z.inv(), &circle(32)).unwrap();
        assert!((one - C::new(1.0, 0.0)).norm() < 1e-13);
        let zero = contour_integral(|z: C| z, &circle(32)).unwrap();
        assert!(zero.norm() < 1e-13);
        let half = contour_integral(|z: C| (z - C::new(0.5, 0.0)).inv(), &circle(64)).unwrap();
        assert!((half - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn off_centre_contour() {
        let c = ContourSpec::new(0.5, C::new(2.0, 1.0), 64).unwrap();
        let v = contour_integral(|z: C| (z - C::new(2.1, 0.9)).inv() * (z - C::new(0.0, 0.0)).inv(), &c).unwrap();
        let want = C::new(2.1, 0.9).inv();
        assert!((v - want).norm() < 1e-13);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let e = contour_integral(|z: C| (z - C::new(1.0, 0.0)).inv(), &circle(8)).unwrap_err();
        assert!(matches!(e, QuadratureError::NonFiniteSample { node: 0, .. }));
    }

    #[test]
    fn adaptive_doubling_reuses_nodes() {
        let g = |z: C| [(z - C::new(0.9, 0.0)).inv(), z * (z - C::new(0.9, 0.0)).inv()];
        let q = adaptive_contour_integral(g, &circle(64), 1e-12, NODE_CAP).unwrap();
        assert!(q.converged);
        assert!(q.nodes > 64 && q.nodes <= NODE_CAP);
        assert!((q.value[0] - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!((q.value[1] - C::new(0.9, 0.0)).norm() < 1e-12);
        let direct = contour_integral_vec(g, &circle(q.nodes)).unwrap();
        assert!((direct[0] - q.value[0]).norm() < 1e-15);
    }

    #[test]
    fn cap_is_respected() {
        let g = |z: C| [(z - C::new(0.999, 0.0)).inv()];
        let q = adaptive_contour_integral(g, &circle(64), 1e-15, 256).unwrap();
        assert_eq!(q.nodes, 256);
        assert!(!q.converged);
    }
}
