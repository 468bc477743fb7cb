//! Compactly supported primitive of a one-form whose ASD curvature vanishes.
//!
//! Each axis gives a candidate primitive by integrating ω along lines parallel
//! to that axis, starting from the low face where everything vanishes. The
//! integrator is the leapfrog recurrence `f_{i+1} = f_{i−1} + 2hω_i`, which
//! inverts the central difference exactly, so for `ω = d_h g` every candidate
//! reproduces `g` to rounding. Disagreement between candidates measures the
//! path dependence, and hence the full `d_h ω`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::PairingError;
use crate::field::ops::{asd_project, ext_d_1form};
use crate::field::{FieldError, Geometry, GridField, Rank};
use crate::scalar::Real;

/// Input tolerance relative to ‖ω‖∞ on ‖asd(d_h ω)‖∞.
pub const POINCARE_TOL_IN: f64 = 1e-8;
/// `C` in the output tolerance `C h² ‖ω‖∞`.
pub const POINCARE_TOL_OUT_C: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PoincareSolution<T> {
    /// Scalar primitive with support box `ω`'s box enlarged by one layer.
    pub field: GridField<T>,
    /// Max over axes and nodes of the disagreement between candidate primitives.
    pub path_residual: T,
    /// Max of the primitive outside the enlarged box, and at the far faces.
    pub outside_residual: T,
    pub tol_in: T,
    pub tol_out: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareTolerances {
    pub tol_in_relative: f64,
    pub tol_out_c: f64,
}

impl Default for PoincareTolerances {
    fn default() -> Self {
        Self { tol_in_relative: POINCARE_TOL_IN, tol_out_c: POINCARE_TOL_OUT_C }
    }
}

pub fn asd_poincare_solve<T: Real>(omega: &GridField<T>) -> Result<PoincareSolution<T>, PairingError> {
    asd_poincare_solve_with(omega, PoincareTolerances::default())
}

pub fn asd_poincare_solve_with<T: Real>(
    omega: &GridField<T>,
    tols: PoincareTolerances,
) -> Result<PoincareSolution<T>, PairingError> {
    if omega.spec.geometry != Geometry::R4Lorentz {
        return Err(FieldError::WrongGeometry { expected: Geometry::R4Lorentz, got: omega.spec.geometry }.into());
    }
    if omega.rank != Rank::OneForm {
        return Err(FieldError::WrongRank { expected: Rank::OneForm, got: omega.rank }.into());
    }
    let b = omega.support_box.clone().ok_or(PairingError::NoSupportBox)?;
    let collar = b.collar(&omega.spec);
    if collar < super::MIN_COLLAR {
        return Err(PairingError::BoxTooLarge { collar });
    }
    let spec = &omega.spec;
    let h = spec.spacing;
    let scale = omega.max_norm();
    let tol_in = T::tol(tols.tol_in_relative) * scale;
    let tol_out = T::lit(tols.tol_out_c) * h * h * scale;
    let measured = asd_project(&ext_d_1form(omega)?)?.max_norm();
    if measured > tol_in {
        return Err(PairingError::HypothesisFailed { measured: measured.as_f64(), tol: tol_in.as_f64() });
    }

    let candidates: Vec<Vec<Complex<T>>> = (0..4).map(|a| integrate_axis(omega, a)).collect();
    let mut path_residual = T::zero();
    for cand in &candidates[1..] {
        for (p, q) in cand.iter().zip(&candidates[0]) {
            path_residual = path_residual.max((*p - *q).norm());
        }
    }
    if path_residual > tol_out {
        return Err(PairingError::Inconsistent {
            what: "path dependence",
            measured: path_residual.as_f64(),
            tol: tol_out.as_f64(),
        });
    }

    let out_box = b.enlarged(1, spec);
    let mut outside = T::zero();
    for (a, cand) in candidates.iter().enumerate() {
        let n = spec.extents[a];
        for (k, v) in cand.iter().enumerate() {
            let m = spec.multi(k);
            if !out_box.contains(&m[..4]) || m[a] + 1 >= n {
                outside = outside.max(v.norm());
            }
        }
    }
    if outside > tol_out {
        return Err(PairingError::Inconsistent { what: "support leak", measured: outside.as_f64(), tol: tol_out.as_f64() });
    }

    let mut field = GridField::zeros(spec, Rank::Scalar);
    field.values = candidates.into_iter().next().unwrap_or_default();
    let field = field.with_support(out_box)?;
    Ok(PoincareSolution { field, path_residual, outside_residual: outside, tol_in, tol_out })
}

/// Leapfrog primitive of `ω_a` along axis `a`, zero on the first two layers.
fn integrate_axis<T: Real>(omega: &GridField<T>, a: usize) -> Vec<Complex<T>> {
    let spec = &omega.spec;
    let stride = spec.strides()[a];
    let n = spec.extents[a];
    let two_h = spec.spacing * T::lit(2.0);
    let zero = Complex::new(T::zero(), T::zero());
    let mut f = vec![zero; spec.len()];
    for start in 0..spec.len() {
        if spec.multi(start)[a] != 0 {
            continue;
        }
        for i in 1..n - 1 {
            let k = start + i * stride;
            f[k + stride] = f[k - stride] + omega.values[k * 4 + a] * two_h;
        }
    }
    f
}

/// `ω = d_h g` with the support box of `g` enlarged by the stencil width.
pub fn exact_one_form<T: Real>(g: &GridField<T>) -> Result<GridField<T>, PairingError> {
    Ok(crate::field::ops::ext_d_0form(g)?)
}

#[cfg(test)]
mod tests {
    use super::super::kernels::bump;
    use super::*;
    use crate::field::{GridSpec, SupportBox};

    type C = Complex<f64>;

    fn r4() -> GridSpec<f64> {
        GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.25, 17).unwrap()
    }

    #[test]
    fn recovers_a_bump() {
        let s = r4();
        let g = bump(&s, Rank::Scalar, 0, &[0.02, -0.03, 0.01, 0.0], 0.12).unwrap();
        let w = exact_one_form(&g).unwrap();
        let sol = asd_poincare_solve(&w).unwrap();
        let err = sol.field.axpy(C::new(-1.0, 0.0), &g).unwrap().max_norm();
        assert!(err <= sol.tol_out, "{err}");
        assert!(err < 1e-14, "{err}");
        assert!(sol.path_residual <= 1e-10 * w.max_norm());
        assert!(sol.field.respects_support());
    }

    #[test]
    fn zero_in_zero_out() {
        let s = r4();
        let w = GridField::zeros(&s, Rank::OneForm).with_support(SupportBox::centered(&s, 5)).unwrap();
        let sol = asd_poincare_solve(&w).unwrap();
        assert_eq!(sol.field.max_norm(), 0.0);
    }

    #[test]
    fn exact_perturbation_stays_consistent() {
        let s = r4();
        let g = bump(&s, Rank::Scalar, 0, &[0.0; 4], 0.12).unwrap();
        let p = bump(&s, Rank::Scalar, 0, &[0.05, 0.0, 0.0, 0.03], 0.09).unwrap().scale(C::new(1e-3, 0.0));
        let sum = g.axpy(C::new(1.0, 0.0), &p).unwrap().with_support(g.support_box.clone().unwrap()).unwrap();
        let sol = asd_poincare_solve(&exact_one_form(&sum).unwrap()).unwrap();
        assert!(sol.path_residual < 1e-3);
        assert!(sol.field.axpy(C::new(-1.0, 0.0), &sum).unwrap().max_norm() < 1e-14);
    }

    #[test]
    fn non_closed_input_is_rejected() {
        let s = r4();
        let b = bump(&s, Rank::OneForm, 1, &[0.0; 4], 0.12).unwrap();
        assert!(matches!(asd_poincare_solve(&b), Err(PairingError::HypothesisFailed { .. })));
    }

    #[test]
    fn missing_box_is_rejected() {
        let s = r4();
        let w = GridField::zeros(&s, Rank::OneForm);
        assert_eq!(asd_poincare_solve(&w).unwrap_err(), PairingError::NoSupportBox);
    }
}
