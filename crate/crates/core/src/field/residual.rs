//! Operator dispatch, residual norms and observed convergence orders.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::ops::{
    asd_project, dirac_minus_apply, dirac_plus_apply, ext_d_1form, ext_d_2form, helmholtz_apply,
    hyperbolic_helmholtz_apply, wave_apply,
};
use super::{FieldError, Geometry, GridField, Rank};
use crate::recipes::OperatorId;
use crate::scalar::{from_c64, Real};

/// Residuals at or below this (relative to max(1, ‖f‖∞)) count as exact zeros.
pub const EXACT_RESIDUAL: f64 = 1e-12;

pub fn apply_operator<T: Real>(f: &GridField<T>, op: &OperatorId) -> Result<GridField<T>, FieldError> {
    match *op {
        OperatorId::Helmholtz(l) => helmholtz_apply(f, from_c64(l)),
        OperatorId::Wave => wave_apply(f),
        OperatorId::DiracMinus => dirac_minus_apply(f),
        OperatorId::DiracPlus => dirac_plus_apply(f),
        OperatorId::ExtDerivAsdStage1 => asd_project(&ext_d_1form(f)?),
        OperatorId::ExtDerivAsdStage2 => ext_d_2form(f),
        OperatorId::HyperbolicHelmholtz(l, 1) => hyperbolic_helmholtz_apply(f, from_c64(l)),
        OperatorId::HyperbolicHelmholtz(..) => Err(FieldError::UnsupportedOperator(op.describe())),
    }
}

/// Geometry, input rank and output rank of a grid operator.
pub fn operator_signature(op: &OperatorId) -> (Geometry, Rank, Rank) {
    match op {
        OperatorId::Helmholtz(_) => (Geometry::R3, Rank::Scalar, Rank::Scalar),
        OperatorId::Wave => (Geometry::R4Lorentz, Rank::Scalar, Rank::Scalar),
        OperatorId::DiracMinus => (Geometry::R4Lorentz, Rank::SpinorMinus, Rank::SpinorPlus),
        OperatorId::DiracPlus => (Geometry::R4Lorentz, Rank::SpinorPlus, Rank::SpinorMinus),
        OperatorId::ExtDerivAsdStage1 => (Geometry::R4Lorentz, Rank::OneForm, Rank::TwoForm),
        OperatorId::ExtDerivAsdStage2 => (Geometry::R4Lorentz, Rank::TwoForm, Rank::ThreeForm),
        OperatorId::HyperbolicHelmholtz(..) => (Geometry::H3UpperHalf, Rank::Scalar, Rank::Scalar),
    }
}

/// Max-norm of `op f` over valid nodes.
pub fn residual_norm<T: Real>(f: &GridField<T>, op: &OperatorId) -> Result<T, FieldError> {
    Ok(apply_operator(f, op)?.max_norm())
}

/// Checks that `fine` samples the same box as `coarse` at half the spacing.
pub fn check_nested<T: Real>(coarse: &GridField<T>, fine: &GridField<T>) -> Result<(), FieldError> {
    let (a, b) = (&coarse.spec, &fine.spec);
    let fail = |why: &str| Err(FieldError::GridMismatch(why.into()));
    if a.geometry != b.geometry || coarse.rank != fine.rank {
        return fail("geometry or rank differs");
    }
    let tol = T::tol(1e-12);
    if ((a.spacing - b.spacing * T::lit(2.0)) / a.spacing).abs() > tol {
        return fail("spacing is not halved");
    }
    let scale = a.spacing * T::lit(a.extents.iter().copied().max().unwrap_or(1) as f64);
    if a.origin.iter().zip(&b.origin).any(|(p, q)| (*p - *q).abs() > tol * scale) {
        return fail("origins differ");
    }
    if a.extents.iter().zip(&b.extents).any(|(n, m)| 2 * (n - 1) + 1 != *m) {
        return fail("extents are not refined by 2");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ConvergenceReport<T> {
    pub residuals: [T; 3],
    /// log₂ ratios of successive residuals.
    pub orders: [T; 2],
    /// Mean of `orders`, or NaN when some residual is an exact zero.
    pub order: T,
}

impl<T: Real> ConvergenceReport<T> {
    pub fn is_exact(&self) -> bool {
        self.order.is_nan()
    }
}

/// Residual-based observed order from residual norms `r` at h, h/2, h/4 and field scales.
pub fn order_from_residuals<T: Real>(r: [T; 3], scales: [T; 3]) -> ConvergenceReport<T> {
    let exact = r.iter().zip(&scales).any(|(ri, s)| *ri <= T::tol(EXACT_RESIDUAL) * T::one().max(*s));
    let orders = [(r[0] / r[1]).log2(), (r[1] / r[2]).log2()];
    let order = if exact { T::nan() } else { (orders[0] + orders[1]) * T::lit(0.5) };
    ConvergenceReport { residuals: r, orders, order }
}

pub fn convergence_report<T: Real>(
    f_h: &GridField<T>,
    f_h2: &GridField<T>,
    f_h4: &GridField<T>,
    op: &OperatorId,
) -> Result<ConvergenceReport<T>, FieldError> {
    check_nested(f_h, f_h2)?;
    check_nested(f_h2, f_h4)?;
    let r = [residual_norm(f_h, op)?, residual_norm(f_h2, op)?, residual_norm(f_h4, op)?];
    Ok(order_from_residuals(r, [f_h.max_norm(), f_h2.max_norm(), f_h4.max_norm()]))
}

/// Mean of log₂(res_h / res_{h/2}) over the two refinements; NaN for exact kernel elements.
pub fn convergence_order<T: Real>(
    f_h: &GridField<T>,
    f_h2: &GridField<T>,
    f_h4: &GridField<T>,
    op: &OperatorId,
) -> Result<T, FieldError> {
    convergence_report(f_h, f_h2, f_h4, op).map(|r| r.order)
}

/// Samples `f` on a spec and its two refinements.
pub fn sample_levels<T: Real, F>(spec: &super::GridSpec<T>, rank: Rank, f: F) -> [GridField<T>; 3]
where
    F: Fn(&[T], &mut [Complex<T>]) + Sync,
{
    let s2 = spec.refined();
    let s4 = s2.refined();
    [GridField::from_fn(spec, rank, &f), GridField::from_fn(&s2, rank, &f), GridField::from_fn(&s4, rank, &f)]
}

#[cfg(test)]
mod tests {
    use super::super::GridSpec;
    use super::*;
    use num_complex::Complex64;

    type C = Complex<f64>;

    #[test]
    fn exact_kernel_element_reports_nan() {
        let s = GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.5, 5).unwrap();
        let levels = sample_levels(&s, Rank::Scalar, |x: &[f64], o: &mut [C]| o[0] = C::new((x[0] - x[1]).powi(2), 0.0));
        let r = convergence_report(&levels[0], &levels[1], &levels[2], &OperatorId::Wave).unwrap();
        assert!(r.is_exact());
        assert!(r.residuals.iter().all(|&v| v <= 1e-12));
    }

    #[test]
    fn smooth_kernel_element_is_second_order() {
        let l = 0.7f64;
        let k = (2.0f64).sqrt() * l;
        let s = GridSpec::cube(Geometry::R3, &[0.0; 3], 1.0, 9).unwrap();
        let levels = sample_levels(&s, Rank::Scalar, |x: &[f64], o: &mut [C]| {
            o[0] = C::new(0.0, k * (0.6 * x[0] + 0.8 * x[2])).exp();
        });
        let order = convergence_order(&levels[0], &levels[1], &levels[2], &OperatorId::Helmholtz(Complex64::new(l, 0.0))).unwrap();
        assert!((1.7..=2.3).contains(&order), "{order}");
    }

    #[test]
    fn non_solution_has_order_zero() {
        let s = GridSpec::cube(Geometry::R3, &[0.0; 3], 1.0, 9).unwrap();
        let levels = sample_levels(&s, Rank::Scalar, |x: &[f64], o: &mut [C]| o[0] = C::new(x[0].cos(), 0.0));
        let order = convergence_order(&levels[0], &levels[1], &levels[2], &OperatorId::Helmholtz(Complex64::new(1.0, 0.0))).unwrap();
        assert!(order.abs() < 0.1, "{order}");
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let s = GridSpec::cube(Geometry::R3, &[0.0; 3], 1.0, 9).unwrap();
        let a = GridField::zeros(&s, Rank::Scalar);
        let b = GridField::zeros(&s, Rank::Scalar);
        let c = GridField::zeros(&s.refined(), Rank::Scalar);
        assert!(matches!(convergence_order(&a, &b, &c, &OperatorId::Wave), Err(FieldError::GridMismatch(_))));
    }

    #[test]
    fn hyperbolic_n_above_one_is_unsupported() {
        let s = GridSpec::new(Geometry::H3UpperHalf, vec![0.0, 0.0, 1.0], 0.1, vec![5; 3]).unwrap();
        let f = GridField::zeros(&s, Rank::Scalar);
        let op = OperatorId::HyperbolicHelmholtz(Complex64::new(0.0, 0.0), 2);
        assert!(matches!(residual_norm(&f, &op), Err(FieldError::UnsupportedOperator(_))));
    }
}
