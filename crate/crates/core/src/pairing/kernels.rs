//! Test fields for the pairing checks: compact bumps and kernel elements of
//! the discrete operators themselves (not just of their continuum limits).

use num_complex::Complex;

use crate::field::{FieldError, Geometry, GridField, GridSpec, Rank, SupportBox};
use crate::scalar::Real;

/// Smooth bump `(1 − |x − c|²/R²)⁶` (zero outside the ball) in component
/// `comp` of a field of rank `rank`, with the tightest enclosing support box.
pub fn bump<T: Real>(
    spec: &GridSpec<T>,
    rank: Rank,
    comp: usize,
    center: &[T],
    radius: T,
) -> Result<GridField<T>, FieldError> {
    let d = spec.dim();
    let h = spec.spacing;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for (a, (&c, &o)) in center.iter().zip(&spec.origin).enumerate().take(d) {
        let l = ((c - radius - o) / h).ceil().max(T::zero());
        let u = ((c + radius - o) / h).floor();
        let n = spec.extents[a];
        let (l, u) = (l.to_usize().unwrap_or(0), u.to_usize().unwrap_or(0).min(n - 1));
        if u < l {
            return Err(FieldError::InvalidSpec("bump misses the grid".into()));
        }
        lo.push(l);
        hi.push(u);
    }
    let r2 = radius * radius;
    let f = GridField::from_fn(spec, rank, |x, o| {
        o.iter_mut().for_each(|v| *v = Complex::new(T::zero(), T::zero()));
        let s: T = x.iter().zip(center).map(|(p, q)| (*p - *q) * (*p - *q)).sum::<T>() / r2;
        if s < T::one() {
            o[comp] = Complex::new((T::one() - s).powi(6), T::zero());
        }
    });
    f.with_support(SupportBox::new(lo, hi))
}

/// `exp(i k x_axis)` with `(2cos(kh) − 2)/h² = −2λ²`, an exact kernel element of
/// the discrete Helmholtz operator.
pub fn helmholtz_discrete_wave<T: Real>(spec: &GridSpec<T>, lambda: Complex<T>, axis: usize) -> GridField<T> {
    let h = spec.spacing;
    let c = Complex::new(T::one(), T::zero()) - lambda * lambda * h * h;
    // k h = acos(c), principal branch.
    let kh = acos(c);
    let k = kh / h;
    let i = Complex::new(T::zero(), T::one());
    GridField::scalar_from_fn(spec, |x| (i * k * x[axis]).exp())
}

fn acos<T: Real>(z: Complex<T>) -> Complex<T> {
    // acos z = −i log(z + i√(1 − z²)).
    let i = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    -i * (z + i * (one - z * z).sqrt()).ln()
}

/// `g(x₀ − x₁)`: the two second differences agree node by node.
pub fn wave_discrete_kernel<T: Real>(spec: &GridSpec<T>, g: impl Fn(T) -> Complex<T> + Sync) -> GridField<T> {
    GridField::scalar_from_fn(spec, |x| g(x[0] - x[1]))
}

/// `(g(x₀ + x₃), 0)` in S⁻: only ∂₀ − ∂₃ and ∂₁ ± i∂₂ reach it, and both vanish.
pub fn dirac_discrete_kernel<T: Real>(spec: &GridSpec<T>, g: impl Fn(T) -> Complex<T> + Sync) -> GridField<T> {
    GridField::from_fn(spec, Rank::SpinorMinus, |x, o| {
        o[0] = g(x[0] + x[3]);
        o[1] = Complex::new(T::zero(), T::zero());
    })
}

/// `(1, i, 0, 0, −1, −i)·g(x₀ + x₃)`: anti-self-dual and closed under the
/// central-difference d for any grid function g.
pub fn asd_discrete_kernel<T: Real>(spec: &GridSpec<T>, g: impl Fn(T) -> Complex<T> + Sync) -> GridField<T> {
    let i = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    let z = Complex::new(T::zero(), T::zero());
    let pattern = [one, i, z, z, -one, -i];
    GridField::from_fn(spec, Rank::TwoForm, |x, o| {
        let v = g(x[0] + x[3]);
        for (oi, p) in o.iter_mut().zip(&pattern) {
            *oi = *p * v;
        }
    })
}

/// Exact kernel element of the discrete shifted H³ Laplacian depending on y
/// only: the three-term recurrence is marched upward from y^{1+λ} at the two
/// lowest rows.
pub fn hyperbolic_discrete_kernel<T: Real>(spec: &GridSpec<T>, lambda: Complex<T>) -> Result<GridField<T>, FieldError> {
    if spec.geometry != Geometry::H3UpperHalf {
        return Err(FieldError::WrongGeometry { expected: Geometry::H3UpperHalf, got: spec.geometry });
    }
    let h = spec.spacing;
    let half = h * T::lit(0.5);
    let shift = lambda * lambda - T::one();
    let s = lambda + T::one();
    let ny = spec.extents[2];
    let y = |j: usize| spec.coord(2, j);
    let mut col = vec![Complex::new(T::zero(), T::zero()); ny];
    col[0] = (s * y(0).ln()).exp();
    col[1] = (s * y(1).ln()).exp();
    for j in 1..ny - 1 {
        let yj = y(j);
        // y³[(f₊ − f₀)/(y + h/2) − (f₀ − f₋)/(y − h/2)]/h² = shift·f₀.
        let rhs = shift * col[j] * h * h / (yj * yj * yj) + (col[j] - col[j - 1]) / (yj - half);
        col[j + 1] = col[j] + rhs * (yj + half);
    }
    let origin = spec.origin[2];
    Ok(GridField::scalar_from_fn(spec, |x| {
        let j = ((x[2] - origin) / h).round().to_usize().unwrap_or(0);
        col[j]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ops::{dirac_minus_apply, ext_d_2form, helmholtz_apply, hyperbolic_helmholtz_apply, sd_project, wave_apply};

    type C = Complex<f64>;

    fn r4() -> GridSpec<f64> {
        GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.25, 9).unwrap()
    }

    fn g(t: f64) -> C {
        C::new((3.0 * t).sin(), t * t)
    }

    #[test]
    fn discrete_kernels_are_exact() {
        let s3 = GridSpec::cube(Geometry::R3, &[0.0; 3], 0.5, 9).unwrap();
        for l in [C::new(0.0, 0.0), C::new(0.7, 0.0), C::new(0.4, 0.3)] {
            let f = helmholtz_discrete_wave(&s3, l, 1);
            assert!(helmholtz_apply(&f, l).unwrap().max_norm() < 1e-12, "{l}");
        }
        assert!(wave_apply(&wave_discrete_kernel(&r4(), g)).unwrap().max_norm() < 1e-12);
        assert!(dirac_minus_apply(&dirac_discrete_kernel(&r4(), g)).unwrap().max_norm() < 1e-12);
        let f = asd_discrete_kernel(&r4(), g);
        assert!(ext_d_2form(&f).unwrap().max_norm() < 1e-12);
        assert_eq!(sd_project(&f).unwrap().max_norm(), 0.0);
        let sh = GridSpec::new(Geometry::H3UpperHalf, vec![-0.5, -0.5, 0.5], 0.125, vec![9; 3]).unwrap();
        for l in [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.5, 0.5)] {
            let f = hyperbolic_discrete_kernel(&sh, l).unwrap();
            assert!(hyperbolic_helmholtz_apply(&f, l).unwrap().max_norm() < 1e-12, "{l}");
        }
    }

    #[test]
    fn bump_support() {
        let s = r4();
        let b = bump(&s, Rank::Scalar, 0, &[0.0; 4], 0.13).unwrap();
        let sb = b.support_box.clone().unwrap();
        assert_eq!(sb.lo, vec![2; 4]);
        assert_eq!(sb.hi, vec![6; 4]);
        assert!(b.respects_support());
        assert_eq!(b.values[s.flat(&[4, 4, 4, 4])], C::new(1.0, 0.0));
    }
}
