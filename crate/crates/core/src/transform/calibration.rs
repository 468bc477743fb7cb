//! Calibration of the Helmholtz kernel exp(κ λ ℓ(x, ζ)).
//!
//! For any F, Δ[exp(κλℓ) F(η)] = κ²λ²(∇ℓ·∇ℓ) exp(κλℓ) F(η) as long as
//! ∇η·∇η = 0 and ∇ℓ·∇η = 0, so the integrand solves (Δ + 2λ²)u = 0 at every
//! ζ iff κ²(∇ℓ·∇ℓ) = −2. The routine measures the two inner products by
//! central differences over a sample family, fits ∇ℓ·∇ℓ by least squares and
//! returns the principal root κ. Normalization is fixed by requiring the λ = 0
//! transform of 1/η to be 1/(2|x|), i.e. the plain harmonic transform.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::helmholtz_phase;
use crate::geometry::{incidence_minitwistor, PointR3};

/// κ as `[re, im]`; equals i√2.
pub const HELMHOLTZ_KAPPA: [f64; 2] = [0.0, std::f64::consts::SQRT_2];
pub const HELMHOLTZ_NORMALIZATION: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelmholtzCalibration {
    pub kappa_re: f64,
    pub kappa_im: f64,
    pub normalization: f64,
    /// Fitted ∇ℓ·∇ℓ.
    pub phase_gradient_square: f64,
    /// max |∇ℓ·∇η| over the sample family.
    pub cross_term: f64,
    /// max |∇η·∇η| over the sample family.
    pub eta_gradient_square: f64,
}

impl HelmholtzCalibration {
    pub fn kappa(&self) -> Complex64 {
        Complex64::new(self.kappa_re, self.kappa_im)
    }
}

fn gradient(f: impl Fn(&PointR3<f64>) -> Complex64, x: &PointR3<f64>, h: f64) -> [Complex64; 3] {
    std::array::from_fn(|a| {
        let mut p = *x;
        let mut m = *x;
        p.coords[a] += h;
        m.coords[a] -= h;
        (f(&p) - f(&m)) / (2.0 * h)
    })
}

fn dot(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

pub fn calibrate_helmholtz_kernel() -> HelmholtzCalibration {
    let h = 1e-4;
    let mut sum_ll = Complex64::new(0.0, 0.0);
    let mut count = 0.0;
    let mut cross: f64 = 0.0;
    let mut ee: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let t = i as f64 * 0.37 + j as f64 * 0.11;
            let x = PointR3::new(0.2 * t.sin(), 0.3 * (1.7 * t).cos(), 0.6 + 0.1 * i as f64);
            let zeta = Complex64::from_polar(0.3 + 0.15 * j as f64, 1.3 * t);
            let gl = gradient(|p| helmholtz_phase(p, zeta), &x, h);
            let ge = gradient(|p| incidence_minitwistor(p, zeta), &x, h);
            // Least squares for a constant s in gl·gl ≈ s is the sample mean.
            sum_ll += dot(&gl, &gl);
            count += 1.0;
            cross = cross.max(dot(&gl, &ge).norm());
            ee = ee.max(dot(&ge, &ge).norm());
        }
    }
    let s = sum_ll / count;
    let kappa = (Complex64::new(-2.0, 0.0) / s).sqrt();
    HelmholtzCalibration {
        kappa_re: kappa.re,
        kappa_im: kappa.im,
        normalization: HELMHOLTZ_NORMALIZATION,
        phase_gradient_square: s.re,
        cross_term: cross,
        eta_gradient_square: ee,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_reproduces_recorded_constant() {
        let c = calibrate_helmholtz_kernel();
        assert!((c.phase_gradient_square - 1.0).abs() < 1e-8);
        assert!(c.cross_term < 1e-8 && c.eta_gradient_square < 1e-8);
        let k = Complex64::new(HELMHOLTZ_KAPPA[0], HELMHOLTZ_KAPPA[1]);
        assert!((c.kappa() - k).norm() < 1e-8);
        assert_eq!(c.normalization, HELMHOLTZ_NORMALIZATION);
    }
}
