//! Penrose transforms as contour integrals over the fibres of the double fibration.
//!
//! Every transform restricts a cocycle to the fibre over a base point, in the
//! affine chart π = (1, ζ), multiplies by a fixed weight and integrates
//! `(1/2πi)∮ · dζ` with the adaptive trapezoid rule.
//!
//! | transform | space | weights |
//! |---|---|---|
//! | Helmholtz | minitwistor, O(−2, λ) | `exp(κ λ ℓ(x, ζ))`, ℓ = x₃ − (x₁ − i x₂) ζ |
//! | wave | CR quadric, O(−2) | `1` |
//! | Dirac | CR quadric, O(−3) | `π₀, π₁ = 1, ζ` |
//! | Maxwell | CR quadric, O(−4) | `π₀π₀, π₀π₁, π₁π₁ = 1, ζ, ζ²` |

pub mod calibration;
pub mod contour;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{BasePoint, CocycleError, ContourSpec, FibreFunction, RationalCocycle};
use crate::field::{forms, FieldError, Geometry, GridField, GridSpec, Rank};
use crate::geometry::{eta_coefficients, PointH3, PointMink, PointR3};
use crate::recipes::SpaceId;
use crate::scalar::Real;

pub use calibration::{calibrate_helmholtz_kernel, HelmholtzCalibration, HELMHOLTZ_KAPPA, HELMHOLTZ_NORMALIZATION};
pub use contour::{adaptive_contour_integral, contour_integral, contour_integral_vec, Quadrature, QuadratureError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("at base point {point:?}: {source}")]
    Cocycle { point: Vec<f64>, source: CocycleError },
    #[error("at base point {point:?}: {source}")]
    Quadrature { point: Vec<f64>, source: QuadratureError },
    #[error("{transform} needs a cocycle on {expected} of homogeneity {n}")]
    WrongBundle { transform: &'static str, expected: SpaceId, n: i32 },
    #[error("terms of a linear combination live in different bundles")]
    IncompatibleTerms,
    #[error("height must be positive, got y = {0}")]
    NonpositiveHeight(f64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chirality {
    Minus,
    Plus,
}

/// Two-spinor field value with its chirality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorFieldSample<T> {
    pub components: [Complex<T>; 2],
    pub chirality: Chirality,
}

/// Anti-self-dual two-form in the basis of [`forms::from_asd_coefficients`],
/// which is orthonormal for the bilinear form on two-forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ASDFormSample<T> {
    pub components: [Complex<T>; 3],
}

impl<T: Real> ASDFormSample<T> {
    /// From the symmetric spinor `(φ₀₀, φ₀₁, φ₁₁)`.
    pub fn from_spinor(phi: &[Complex<T>; 3]) -> Self {
        Self { components: forms::asd_coefficients(&forms::spinor_to_two_form(phi)) }
    }

    pub fn to_two_form(&self) -> [Complex<T>; 6] {
        forms::from_asd_coefficients(&self.components)
    }
}

/// `Σ cᵢ fᵢ` over cocycles of one bundle. Transforms are linear, so a
/// combination is integrated as a single fibre integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleCombination<T> {
    pub terms: Vec<(Complex<T>, RationalCocycle<T>)>,
}

impl<T: Real> CocycleCombination<T> {
    pub fn new(terms: Vec<(Complex<T>, RationalCocycle<T>)>) -> Result<Self, TransformError> {
        if let Some((_, first)) = terms.first() {
            let same = |c: &RationalCocycle<T>| {
                c.space == first.space && c.homogeneity == first.homogeneity && c.lambda == first.lambda
            };
            if !terms.iter().all(|(_, c)| same(c)) {
                return Err(TransformError::IncompatibleTerms);
            }
        }
        Ok(Self { terms })
    }

    fn bundle(&self) -> Option<(SpaceId, i32, Complex<T>)> {
        self.terms.first().map(|(_, c)| (c.space, c.homogeneity, c.lambda))
    }
}

impl<T: Real> From<RationalCocycle<T>> for CocycleCombination<T> {
    fn from(c: RationalCocycle<T>) -> Self {
        Self { terms: vec![(Complex::new(T::one(), T::zero()), c)] }
    }
}

fn point_f64<T: Real>(x: &BasePoint<T>) -> Vec<f64> {
    x.coords().iter().map(|v| v.as_f64()).collect()
}

type WeightedFibres<T> = Vec<(Complex<T>, FibreFunction<T>)>;

/// Restricts every term and checks that no pole sits on the contour.
fn prepare<T: Real>(
    comb: &CocycleCombination<T>,
    x: &BasePoint<T>,
    c: &ContourSpec<T>,
) -> Result<WeightedFibres<T>, TransformError> {
    let err = |source| TransformError::Cocycle { point: point_f64(x), source };
    comb.terms
        .iter()
        .map(|(w, f)| {
            f.classify_poles(x, c).map_err(err)?;
            Ok((*w, f.restrict(x).map_err(err)?))
        })
        .collect()
}

fn fibre_integral<T: Real, const K: usize>(
    comb: &CocycleCombination<T>,
    x: &BasePoint<T>,
    c: &ContourSpec<T>,
    weights: impl Fn(Complex<T>) -> [Complex<T>; K],
) -> Result<[Complex<T>; K], TransformError> {
    let fibres = prepare(comb, x, c)?;
    let g = |z: Complex<T>| {
        let f = fibres.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (w, fib)| acc + *w * fib.eval(z));
        weights(z).map(|wk| wk * f)
    };
    let q = adaptive_contour_integral(g, c, T::tol(contour::ADAPTIVE_TOL), contour::NODE_CAP)
        .map_err(|source| TransformError::Quadrature { point: point_f64(x), source })?;
    Ok(q.value)
}

fn require<T: Real>(
    comb: &CocycleCombination<T>,
    transform: &'static str,
    space: SpaceId,
    n: i32,
) -> Result<(), TransformError> {
    match comb.bundle() {
        Some((s, h, _)) if s == space && h == n => Ok(()),
        None => Ok(()),
        _ => Err(TransformError::WrongBundle { transform, expected: space, n }),
    }
}

/// The exponent ℓ(x, ζ) = x₃ − (x₁ − i x₂) ζ of the Helmholtz kernel. Its
/// gradient in x has unit square and is orthogonal to ∇η.
pub fn helmholtz_phase<T: Real>(x: &PointR3<T>, zeta: Complex<T>) -> Complex<T> {
    let [x1, x2, x3] = x.coords;
    Complex::new(x3, T::zero()) - Complex::new(x1, -x2) * zeta
}

/// φ(x) = (1/2πi)∮ exp(κλℓ(x, ζ)) f(η(x, ζ), ζ) dζ for f ∈ H¹(O(−2, λ)).
pub fn helmholtz_transform<T: Real>(
    f: &CocycleCombination<T>,
    x: &PointR3<T>,
    c: &ContourSpec<T>,
) -> Result<Complex<T>, TransformError> {
    require(f, "helmholtz_transform", SpaceId::MinitwistorR3, -2)?;
    let lambda = f.bundle().map(|b| b.2).unwrap_or_default();
    let kl = HELMHOLTZ_KAPPA.map(T::lit);
    let kappa_lambda = Complex::new(kl[0], kl[1]) * lambda;
    let norm = T::lit(HELMHOLTZ_NORMALIZATION);
    let [v] = fibre_integral(f, &BasePoint::R3(*x), c, |z| [(kappa_lambda * helmholtz_phase(x, z)).exp() * norm])?;
    Ok(v)
}

pub fn wave_transform<T: Real>(
    f: &CocycleCombination<T>,
    x: &PointMink<T>,
    c: &ContourSpec<T>,
) -> Result<Complex<T>, TransformError> {
    require(f, "wave_transform", SpaceId::MinkowskiCr, -2)?;
    let [v] = fibre_integral(f, &BasePoint::Mink(*x), c, |_| [Complex::new(T::one(), T::zero())])?;
    Ok(v)
}

/// φ_{A'} = (1/2πi)∮ π_{A'} f(Z(x, π)) dζ, a section of S⁻.
pub fn dirac_transform<T: Real>(
    f: &CocycleCombination<T>,
    x: &PointMink<T>,
    c: &ContourSpec<T>,
) -> Result<SpinorFieldSample<T>, TransformError> {
    require(f, "dirac_transform", SpaceId::MinkowskiCr, -3)?;
    let components = fibre_integral(f, &BasePoint::Mink(*x), c, |z| [Complex::new(T::one(), T::zero()), z])?;
    Ok(SpinorFieldSample { components, chirality: Chirality::Minus })
}

/// Symmetric spinor φ_{A'B'} = (1/2πi)∮ π_{A'}π_{B'} f dζ as `(φ₀₀, φ₀₁, φ₁₁)`.
pub fn maxwell_spinor<T: Real>(
    f: &CocycleCombination<T>,
    x: &PointMink<T>,
    c: &ContourSpec<T>,
) -> Result<[Complex<T>; 3], TransformError> {
    require(f, "maxwell_asd_transform", SpaceId::MinkowskiCr, -4)?;
    fibre_integral(f, &BasePoint::Mink(*x), c, |z| [Complex::new(T::one(), T::zero()), z, z * z])
}

pub fn maxwell_asd_transform<T: Real>(
    f: &CocycleCombination<T>,
    x: &PointMink<T>,
    c: &ContourSpec<T>,
) -> Result<ASDFormSample<T>, TransformError> {
    maxwell_spinor(f, x, c).map(|phi| ASDFormSample::from_spinor(&phi))
}

/// y^{1+λ} (principal branch), an eigenfunction of the H³ Laplacian with eigenvalue λ² − 1.
pub fn hyperbolic_kernel_sample<T: Real>(lambda: Complex<T>, x: &PointH3<T>) -> Result<Complex<T>, TransformError> {
    if x.y.is_nan() || x.y <= T::zero() {
        return Err(TransformError::NonpositiveHeight(x.y.as_f64()));
    }
    let s = lambda + T::one();
    Ok((s * x.y.ln()).exp())
}

/// Evaluates the transform that matches the cocycle's bundle at every grid node.
///
/// Minitwistor O(−2, λ) needs an `R3` grid and gives a scalar; CR-quadric
/// O(−2), O(−3), O(−4) need `R4Lorentz` and give a scalar, an S⁻ spinor and an
/// anti-self-dual two-form. The first failing node in row-major order is reported.
pub fn transform_grid<T: Real>(
    f: &CocycleCombination<T>,
    spec: &GridSpec<T>,
    c: &ContourSpec<T>,
) -> Result<GridField<T>, TransformError> {
    let Some((space, n, _)) = f.bundle() else {
        return Ok(GridField::zeros(spec, Rank::Scalar));
    };
    let (geometry, rank) = match (space, n) {
        (SpaceId::MinitwistorR3, -2) => (Geometry::R3, Rank::Scalar),
        (SpaceId::MinkowskiCr, -2) => (Geometry::R4Lorentz, Rank::Scalar),
        (SpaceId::MinkowskiCr, -3) => (Geometry::R4Lorentz, Rank::SpinorMinus),
        (SpaceId::MinkowskiCr, -4) => (Geometry::R4Lorentz, Rank::TwoForm),
        _ => {
            return Err(TransformError::WrongBundle { transform: "transform_grid", expected: space, n });
        }
    };
    if spec.geometry != geometry {
        return Err(FieldError::WrongGeometry { expected: geometry, got: spec.geometry }.into());
    }
    let node = |k: usize| -> Result<Vec<Complex<T>>, TransformError> {
        let x = spec.coords(k);
        match rank {
            Rank::Scalar if geometry == Geometry::R3 => {
                Ok(vec![helmholtz_transform(f, &PointR3::new(x[0], x[1], x[2]), c)?])
            }
            Rank::Scalar => Ok(vec![wave_transform(f, &PointMink { coords: x }, c)?]),
            Rank::SpinorMinus => Ok(dirac_transform(f, &PointMink { coords: x }, c)?.components.to_vec()),
            _ => Ok(forms::spinor_to_two_form(&maxwell_spinor(f, &PointMink { coords: x }, c)?).to_vec()),
        }
    };
    let results: Vec<_> = (0..spec.len()).into_par_iter().map(node).collect();
    let mut out = GridField::zeros(spec, rank);
    for (k, r) in results.into_iter().enumerate() {
        out.node_mut(k).copy_from_slice(&r?);
    }
    Ok(out)
}

/// Samples y^{1+λ} on an H³ grid.
pub fn hyperbolic_kernel_grid<T: Real>(lambda: Complex<T>, spec: &GridSpec<T>) -> Result<GridField<T>, TransformError> {
    if spec.geometry != Geometry::H3UpperHalf {
        return Err(FieldError::WrongGeometry { expected: Geometry::H3UpperHalf, got: spec.geometry }.into());
    }
    let s = lambda + T::one();
    Ok(GridField::scalar_from_fn(spec, |x| (s * x[2].ln()).exp()))
}

/// Roots of η over `x` (both finite when x₁² + x₂² > 0).
pub fn eta_roots<T: Real>(x: &PointR3<T>) -> Vec<Complex<T>> {
    crate::roots::roots(&eta_coefficients(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::incidence_spinor;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn cv(v: [(f64, f64); 4]) -> [C; 4] {
        v.map(|(a, b)| C::new(a, b))
    }

    const A: [(f64, f64); 4] = [(0.3, 0.0), (0.0, 0.2), (0.25, 0.0), (1.0, 0.0)];
    const B: [(f64, f64); 4] = [(0.0, 0.2), (0.3, 0.0), (1.0, 0.0), (0.2, 0.0)];
    const D: [(f64, f64); 4] = [(0.1, 0.0), (0.0, -0.2), (0.8, 0.0), (-0.3, 0.0)];

    /// a + bζ for the factor A·Z(x, (1, ζ)).
    fn linear(a: [C; 4], x: &PointMink<f64>) -> (C, C) {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        let z0 = incidence_spinor(x, [one, zero]).z;
        let z1 = incidence_spinor(x, [zero, one]).z;
        let dot = |z: [C; 4]| a.iter().zip(&z).map(|(p, q)| p * q).sum::<C>();
        (dot(z0), dot(z1))
    }

    #[test]
    fn wave_matches_residue_at_origin_region() {
        let (a, b) = (cv(A), cv(B));
        let f: CocycleCombination<f64> = RationalCocycle::elementary_state(a, b).into();
        let x = PointMink::new(0.1, -0.05, 0.2, 0.03);
        let (aa, ba) = linear(a, &x);
        let (ab, bb) = linear(b, &x);
        let want = (ba * ab - aa * bb).inv();
        let got = wave_transform(&f, &x, &ContourSpec::unit()).unwrap();
        assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn one_sided_poles_give_zero() {
        let f: CocycleCombination<f64> = RationalCocycle::elementary_state(cv(B), cv(D)).into();
        let x = PointMink::new(0.0, 0.1, 0.0, -0.1);
        assert!(wave_transform(&f, &x, &ContourSpec::unit()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn wrong_bundle_is_rejected() {
        let f: CocycleCombination<f64> = RationalCocycle::elementary_state(cv(A), cv(B)).into();
        let x = PointMink::new(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(dirac_transform(&f, &x, &ContourSpec::unit()), Err(TransformError::WrongBundle { .. })));
    }

    #[test]
    fn pole_error_carries_point() {
        // A root on the unit circle: A·Z(0, (1, ζ)) = ζ + 1.
        let a = cv([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        let f: CocycleCombination<f64> = RationalCocycle::elementary_state(a, cv(B)).into();
        let x = PointMink::new(0.0, 0.0, 0.0, 0.0);
        match wave_transform(&f, &x, &ContourSpec::unit()) {
            Err(TransformError::Cocycle { point, source: CocycleError::PoleOnContour { .. } }) => {
                assert_eq!(point, vec![0.0; 4]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn harmonic_inverse_distance() {
        let f: CocycleCombination<f64> = RationalCocycle::zeta_power_over_eta(C::new(0.0, 0.0), 0).into();
        for x in [PointR3::new(0.3, -0.2, 0.8), PointR3::new(0.0, 0.4, 1.2), PointR3::new(-0.1, 0.1, 0.5)] {
            let got = helmholtz_transform(&f, &x, &ContourSpec::unit()).unwrap();
            let want = 0.5 / x.norm();
            assert!((got - C::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_samples() {
        let p = |y| PointH3 { x1: 0.3, x2: -1.0, y };
        assert!((hyperbolic_kernel_sample(C::new(1.0, 0.0), &p(2.0)).unwrap() - C::new(4.0, 0.0)).norm() < 1e-14);
        assert!((hyperbolic_kernel_sample(C::new(0.5, 0.5), &p(1.0)).unwrap() - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(hyperbolic_kernel_sample(C::new(0.0, 0.0), &p(0.0)), Err(TransformError::NonpositiveHeight(_))));
    }

    #[test]
    fn maxwell_output_is_asd() {
        let f: CocycleCombination<f64> = RationalCocycle::minkowski_inverse_product(&[cv(A), cv(A), cv(B), cv(D)]).into();
        let x = PointMink::new(0.05, 0.1, -0.1, 0.0);
        let s = maxwell_asd_transform(&f, &x, &ContourSpec::unit()).unwrap();
        let two = s.to_two_form();
        assert!(forms::sd_part(&two).iter().all(|z| z.norm() < 1e-13));
        let back = ASDFormSample { components: forms::asd_coefficients(&two) };
        for k in 0..3 {
            assert!((back.components[k] - s.components[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn grid_batch_matches_pointwise() {
        let f: CocycleCombination<f64> =
            RationalCocycle::minkowski_inverse_product(&[cv(A), cv(B), cv(D)]).into();
        let spec = GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.2, 5).unwrap();
        let g = transform_grid(&f, &spec, &ContourSpec::unit()).unwrap();
        assert_eq!(g.rank, Rank::SpinorMinus);
        let k = 123;
        let x = spec.coords(k);
        let p = dirac_transform(&f, &PointMink { coords: x }, &ContourSpec::unit()).unwrap();
        assert_eq!(g.node(k), &p.components[..]);
        let again = transform_grid(&f, &spec, &ContourSpec::unit()).unwrap();
        assert_eq!(g.values, again.values);
        let r3 = GridSpec::cube(Geometry::R3, &[0.0, 0.0, 1.0], 0.5, 5).unwrap();
        assert!(matches!(transform_grid(&f, &r3, &ContourSpec::unit()), Err(TransformError::Field(_))));
    }

    fn cplx() -> impl Strategy<Value = C> {
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C::new(a, b))
    }

    proptest! {
        #[test]
        fn transform_is_linear(a in cplx(), b in cplx(), x in prop::array::uniform4(-0.25..0.25f64)) {
            let f = RationalCocycle::elementary_state(cv(A), cv(B));
            let g = RationalCocycle::elementary_state(cv(A), cv(D));
            let x = PointMink { coords: x };
            let c = ContourSpec::unit();
            let comb = CocycleCombination::new(vec![(a, f.clone()), (b, g.clone())]).unwrap();
            let lhs = wave_transform(&comb, &x, &c).unwrap();
            let rhs = a * wave_transform(&f.into(), &x, &c).unwrap() + b * wave_transform(&g.into(), &x, &c).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }

        #[test]
        fn contour_radius_independence(r in 0.7..1.3f64, x in prop::array::uniform3(-0.3..0.3f64), x3 in 0.5..1.5f64) {
            let x = PointR3::new(x[0], x[1], x3);
            let roots = eta_roots(&x);
            let (lo, hi) = roots.iter().fold((f64::MAX, 0.0f64), |(lo, hi), z| (lo.min(z.norm()), hi.max(z.norm())));
            prop_assume!(lo < 0.95 * r && hi > 1.05 * r);
            let f: CocycleCombination<f64> = RationalCocycle::zeta_power_over_eta(C::new(0.4, 0.3), 1).into();
            let v1 = helmholtz_transform(&f, &x, &ContourSpec::unit()).unwrap();
            let v2 = helmholtz_transform(&f, &x, &ContourSpec::unit().with_radius(r)).unwrap();
            prop_assert!((v1 - v2).norm() <= 1e-10 * v1.norm().max(1.0));
        }
    }
}
