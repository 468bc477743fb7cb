//! Coordinates and incidence relations for the example double fibrations.
//!
//! Conventions (also recorded in [`crate::conventions`]):
//! * minitwistor fibre coordinate: η(x, ζ) = (x₁ + i x₂) + 2 x₃ ζ − (x₁ − i x₂) ζ²;
//! * Minkowski two-spinor matrix X(x) = [[x₀+x₃, x₁−i x₂], [x₁+i x₂, x₀−x₃]],
//!   signature (+,−,−,−), incidence (z₁, z₂) = i X(x) π, (z₃, z₄) = π.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointR3<T> {
    pub coords: [T; 3],
}

impl<T: Real> PointR3<T> {
    pub fn new(x1: T, x2: T, x3: T) -> Self {
        Self { coords: [x1, x2, x3] }
    }

    pub fn norm(&self) -> T {
        self.coords.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMink<T> {
    pub coords: [T; 4],
}

impl<T: Real> PointMink<T> {
    pub fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        Self { coords: [x0, x1, x2, x3] }
    }

    /// Minkowski square x₀² − x₁² − x₂² − x₃².
    pub fn interval(&self) -> T {
        let [a, b, c, d] = self.coords;
        a * a - b * b - c * c - d * d
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|v| v.is_finite())
    }
}

/// A point of hyperbolic 3-space in the upper half-space model, height `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointH3<T> {
    pub x1: T,
    pub x2: T,
    pub y: T,
}

/// Homogeneous coordinates on CP³.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TwistorCP3<T> {
    pub z: [Complex<T>; 4],
}

impl<T: Real> TwistorCP3<T> {
    /// `None` for the zero vector, which is not a projective point.
    pub fn new(z: [Complex<T>; 4]) -> Option<Self> {
        z.iter().any(|c| c.norm_sqr() > T::zero()).then_some(Self { z })
    }

    pub fn norm_sqr(&self) -> T {
        self.z.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, t: Complex<T>) -> Self {
        Self { z: self.z.map(|c| c * t) }
    }

    /// Equality in CP³: the vectors are proportional (relative tolerance `tol`).
    pub fn projectively_eq(&self, other: &Self, tol: T) -> bool {
        // |z ∧ w|² = Σ_{i<j} |z_i w_j − z_j w_i|² vanishes iff proportional.
        let zz = self.norm_sqr();
        let ww = other.norm_sqr();
        let mut wedge = T::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                wedge += (self.z[i] * other.z[j] - self.z[j] * other.z[i]).norm_sqr();
            }
        }
        wedge <= tol * tol * zz * ww
    }
}

/// Affine coordinate on the CP¹ fibre of τ, or its point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FibreCoord<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> FibreCoord<T> {
    /// Homogeneous spinor (π₀, π₁) = (1, ζ), or (0, 1) at infinity.
    pub fn spinor(self) -> [Complex<T>; 2] {
        match self {
            FibreCoord::Finite(z) => [Complex::new(T::one(), T::zero()), z],
            FibreCoord::Infinity => [Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())],
        }
    }
}

/// Coefficients `[e₀, e₁, e₂]` of η(x, ζ) = e₀ + e₁ ζ + e₂ ζ².
pub fn eta_coefficients<T: Real>(x: &PointR3<T>) -> [Complex<T>; 3] {
    let [x1, x2, x3] = x.coords;
    [
        Complex::new(x1, x2),
        Complex::new(T::lit(2.0) * x3, T::zero()),
        Complex::new(-x1, x2),
    ]
}

pub fn incidence_minitwistor<T: Real>(x: &PointR3<T>, zeta: Complex<T>) -> Complex<T> {
    let [e0, e1, e2] = eta_coefficients(x);
    e0 + zeta * (e1 + zeta * e2)
}

/// The Hermitian matrix X(x), row index unprimed, column index primed.
pub fn spinor_matrix<T: Real>(x: &PointMink<T>) -> [[Complex<T>; 2]; 2] {
    let [x0, x1, x2, x3] = x.coords;
    let z = T::zero();
    [
        [Complex::new(x0 + x3, z), Complex::new(x1, -x2)],
        [Complex::new(x1, x2), Complex::new(x0 - x3, z)],
    ]
}

/// Twistor Z(x, π) = (i X(x) π, π) for a spinor π = (π₀, π₁).
pub fn incidence_spinor<T: Real>(x: &PointMink<T>, pi: [Complex<T>; 2]) -> TwistorCP3<T> {
    let m = spinor_matrix(x);
    let i = Complex::new(T::zero(), T::one());
    let w0 = i * (m[0][0] * pi[0] + m[0][1] * pi[1]);
    let w1 = i * (m[1][0] * pi[0] + m[1][1] * pi[1]);
    TwistorCP3 { z: [w0, w1, pi[0], pi[1]] }
}

pub fn incidence_minkowski<T: Real>(x: &PointMink<T>, pi: FibreCoord<T>) -> TwistorCP3<T> {
    incidence_spinor(x, pi.spinor())
}

/// Φ(z, w) = z₁ w̄₃ + z₂ w̄₄ + z₃ w̄₁ + z₄ w̄₂.
pub fn phi_form<T: Real>(z: &TwistorCP3<T>, w: &TwistorCP3<T>) -> Complex<T> {
    let (a, b) = (&z.z, &w.z);
    a[0] * b[2].conj() + a[1] * b[3].conj() + a[2] * b[0].conj() + a[3] * b[1].conj()
}

/// Membership in Z = {Φ(z, z) = 0} minus the line I = {z₃ = z₄ = 0}.
pub fn on_z_quadric<T: Real>(z: &TwistorCP3<T>, tol: T) -> bool {
    let n2 = z.norm_sqr();
    let phi = phi_form(z, z);
    let off_line = z.z[2].norm_sqr() + z.z[3].norm_sqr();
    phi.norm() <= tol * n2 && off_line > tol * n2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn cp(z: [(f64, f64); 4]) -> TwistorCP3<f64> {
        TwistorCP3::new(z.map(|(a, b)| C::new(a, b))).unwrap()
    }

    #[test]
    fn minitwistor_examples() {
        let zeta = C::new(0.3, -1.2);
        assert_eq!(incidence_minitwistor(&PointR3::new(0.0, 0.0, 0.0), zeta), C::new(0.0, 0.0));
        assert_eq!(incidence_minitwistor(&PointR3::new(1.0, 0.0, 0.0), C::new(0.0, 0.0)), C::new(1.0, 0.0));
    }

    #[test]
    fn eta_gradient_is_null() {
        // ∂η/∂x = (1 − ζ², i(1 + ζ²), 2ζ) squares to zero for every ζ.
        let zeta = C::new(0.7, 0.4);
        let g = [C::new(1.0, 0.0) - zeta * zeta, C::new(0.0, 1.0) * (C::new(1.0, 0.0) + zeta * zeta), zeta * 2.0];
        let s: C = g.iter().map(|v| v * v).sum();
        assert!(s.norm() < 1e-15);
        let h = 1e-3;
        let x = PointR3::new(0.2, -0.4, 0.9);
        for (k, gk) in g.iter().enumerate() {
            let mut xp = x;
            xp.coords[k] += h;
            let d = incidence_minitwistor(&xp, zeta) - incidence_minitwistor(&x, zeta);
            assert!((d / h - gk).norm() < 1e-12);
        }
    }

    #[test]
    fn minkowski_origin() {
        let pi = [C::new(0.4, 1.0), C::new(-2.0, 0.5)];
        let z = incidence_spinor(&PointMink::new(0.0, 0.0, 0.0, 0.0), pi);
        assert_eq!(z.z, [C::new(0.0, 0.0), C::new(0.0, 0.0), pi[0], pi[1]]);
    }

    #[test]
    fn phi_examples() {
        let e1 = cp([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_eq!(phi_form(&e1, &e1), C::new(0.0, 0.0));
        let z = cp([(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(phi_form(&z, &z), C::new(2.0, 0.0));
    }

    #[test]
    fn quadric_examples() {
        assert!(!on_z_quadric(&cp([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]), 1e-12));
        assert!(on_z_quadric(&cp([(0.0, 1.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]), 1e-12));
        assert!(!on_z_quadric(&cp([(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]), 1e-12));
    }

    #[test]
    fn infinity_chart() {
        let x = PointMink::new(0.3, 0.1, -0.2, 0.5);
        let z = incidence_minkowski(&x, FibreCoord::Infinity);
        assert!(on_z_quadric(&z, 1e-12));
        assert_eq!(z.z[2], C::new(0.0, 0.0));
    }

    #[test]
    fn projective_equality() {
        let z = cp([(1.0, 2.0), (0.0, -1.0), (3.0, 0.0), (0.5, 0.5)]);
        assert!(z.projectively_eq(&z.scale(C::new(-0.3, 2.0)), 1e-12));
        let w = cp([(1.0, 2.0), (0.0, -1.0), (3.0, 0.1), (0.5, 0.5)]);
        assert!(!z.projectively_eq(&w, 1e-6));
        assert!(TwistorCP3::<f64>::new([C::new(0.0, 0.0); 4]).is_none());
    }

    #[test]
    fn generic_f32_incidence() {
        let x = PointR3::<f32>::new(1.0, 0.0, 0.0);
        assert_eq!(incidence_minitwistor(&x, c::<f32>(0.0, 0.0)), c::<f32>(1.0, 0.0));
    }

    fn cplx() -> impl Strategy<Value = C> {
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| C::new(a, b))
    }

    fn real4() -> impl Strategy<Value = [f64; 4]> {
        prop::array::uniform4(-5.0..5.0f64)
    }

    proptest! {
        #[test]
        fn fibre_lies_in_quadric(x in real4(), p0 in cplx(), p1 in cplx()) {
            prop_assume!(p0.norm() + p1.norm() > 1e-3);
            let z = incidence_spinor(&PointMink { coords: x }, [p0, p1]);
            prop_assert!(on_z_quadric(&z, 1e-12));
        }

        #[test]
        fn incidence_is_homogeneous(x in real4(), p0 in cplx(), p1 in cplx(), t in cplx()) {
            let x = PointMink { coords: x };
            let a = incidence_spinor(&x, [p0 * t, p1 * t]);
            let b = incidence_spinor(&x, [p0, p1]).scale(t);
            for k in 0..4 {
                prop_assert!((a.z[k] - b.z[k]).norm() <= 1e-12 * (1.0 + b.z[k].norm()));
            }
        }

        #[test]
        fn minitwistor_is_real_linear(x in prop::array::uniform3(-4.0..4.0f64), y in prop::array::uniform3(-4.0..4.0f64), z in cplx()) {
            let s = PointR3 { coords: [x[0] + y[0], x[1] + y[1], x[2] + y[2]] };
            let lhs = incidence_minitwistor(&s, z);
            let rhs = incidence_minitwistor(&PointR3 { coords: x }, z) + incidence_minitwistor(&PointR3 { coords: y }, z);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm() + lhs.norm()));
        }

        #[test]
        fn phi_is_hermitian(a in prop::array::uniform4(cplx()), b in prop::array::uniform4(cplx())) {
            let z = TwistorCP3 { z: a };
            let w = TwistorCP3 { z: b };
            let d = phi_form(&z, &w) - phi_form(&w, &z).conj();
            prop_assert!(d.norm() < 1e-12);
            prop_assert!(phi_form(&z, &z).im.abs() < 1e-12);
        }

        #[test]
        fn eta_vanishes_only_at_origin(x in prop::array::uniform3(-4.0..4.0f64)) {
            let p = PointR3 { coords: x };
            let coeffs = eta_coefficients(&p);
            let all_zero = coeffs.iter().all(|c| c.norm() == 0.0);
            prop_assert_eq!(all_zero, x.iter().all(|v| *v == 0.0));
        }
    }
}
