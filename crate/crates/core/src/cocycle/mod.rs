//! Rational Čech representatives of degree-1 twistor cohomology classes.
//!
//! A [`RationalCocycle`] is a constant times a ratio of products of factors.
//! On the CR quadric every factor is a linear form `A·Z`; on minitwistor space
//! every factor is a polynomial `Σ c η^j ζ^k` that is homogeneous in η. The
//! restriction of a cocycle to the fibre over a point of X is a rational
//! function of the affine fibre coordinate ζ, and [`RationalCocycle::pole_partition`]
//! splits its poles by a contour in that fibre.

mod file;

use num_complex::Complex;
use thiserror::Error;

use crate::geometry::{eta_coefficients, incidence_spinor, PointMink, PointR3, TwistorCP3};
use crate::recipes::SpaceId;
use crate::roots;
use crate::scalar::Real;

pub use file::{parse_cocycle, write_cocycle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error("denominator factor {factor} vanishes at the evaluation point")]
    PoleHit { factor: usize },
    #[error("denominator factor {factor} has a root at ζ = {root} on the contour")]
    PoleOnContour { factor: usize, root: String },
    #[error("denominator factor {factor} has roots on both sides of the contour")]
    MixedFactor { factor: usize },
    #[error("evaluation point or factor does not belong to {0}")]
    SpaceMismatch(SpaceId),
    #[error("factor {factor} is not homogeneous in η")]
    InhomogeneousFactor { factor: usize },
    #[error("declared homogeneity {declared} but factors give {computed}")]
    DegreeMismatch { declared: i32, computed: i32 },
    #[error("cocycles are only supported on minitwistor space and the CR quadric, not {0}")]
    UnsupportedSpace(SpaceId),
    #[error("λ twist is only meaningful on minitwistor space")]
    UnexpectedLambda,
    #[error("cocycle file: {0}")]
    Parse(String),
}

/// `c η^j ζ^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial<T> {
    pub coeff: Complex<T>,
    pub eta_pow: u32,
    pub zeta_pow: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor<T> {
    /// Linear form `A·Z` on C⁴.
    Linear([Complex<T>; 4]),
    /// Polynomial in (η, ζ).
    Poly(Vec<Monomial<T>>),
}

impl<T: Real> Factor<T> {
    pub fn eta(coeff: Complex<T>) -> Self {
        Factor::Poly(vec![Monomial { coeff, eta_pow: 1, zeta_pow: 0 }])
    }

    pub fn zeta_power(k: u32) -> Self {
        Factor::Poly(vec![Monomial { coeff: Complex::new(T::one(), T::zero()), eta_pow: 0, zeta_pow: k }])
    }

    /// Weight under the fibre scaling: 1 for `A·Z`, 2 per power of η.
    pub fn weight(&self) -> Option<i32> {
        match self {
            Factor::Linear(_) => Some(1),
            Factor::Poly(terms) => {
                let j = terms.first()?.eta_pow;
                terms.iter().all(|m| m.eta_pow == j).then_some(2 * j as i32)
            }
        }
    }

    fn fits(&self, space: SpaceId) -> bool {
        matches!(
            (self, space),
            (Factor::Linear(_), SpaceId::MinkowskiCr) | (Factor::Poly(_), SpaceId::MinitwistorR3)
        )
    }

    /// Value and magnitude scale (sum of absolute term values) at a point.
    fn eval_scaled(&self, p: &TwistorPoint<T>) -> Option<(Complex<T>, T)> {
        match (self, p) {
            (Factor::Linear(a), TwistorPoint::Projective(z)) => {
                let v: Complex<T> = a.iter().zip(&z.z).map(|(x, y)| x * y).sum();
                let s = a.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt() * z.norm_sqr().sqrt();
                Some((v, s))
            }
            (Factor::Poly(terms), TwistorPoint::Minitwistor { eta, zeta }) => {
                let mut v = Complex::new(T::zero(), T::zero());
                let mut s = T::zero();
                for m in terms {
                    let t = m.coeff * eta.powu(m.eta_pow) * zeta.powu(m.zeta_pow);
                    v += t;
                    s += t.norm();
                }
                Some((v, s))
            }
            _ => None,
        }
    }

    /// Restriction to the fibre over `x`, as ascending coefficients in ζ.
    fn fibre_poly(&self, x: &BasePoint<T>) -> Option<Vec<Complex<T>>> {
        match (self, x) {
            (Factor::Linear(a), BasePoint::Mink(p)) => {
                let one = Complex::new(T::one(), T::zero());
                let zero = Complex::new(T::zero(), T::zero());
                let z0 = incidence_spinor(p, [one, zero]);
                let z1 = incidence_spinor(p, [zero, one]);
                let dot = |z: &TwistorCP3<T>| a.iter().zip(&z.z).map(|(x, y)| x * y).sum::<Complex<T>>();
                Some(vec![dot(&z0), dot(&z1)])
            }
            (Factor::Poly(terms), BasePoint::R3(p)) => {
                let eta = eta_coefficients(p);
                let mut out = Vec::new();
                for m in terms {
                    let mut t = roots::pow(&eta, m.eta_pow);
                    let mut shifted = vec![Complex::new(T::zero(), T::zero()); m.zeta_pow as usize];
                    shifted.append(&mut t);
                    for c in shifted.iter_mut() {
                        *c *= m.coeff;
                    }
                    roots::add_assign(&mut out, &shifted);
                }
                Some(out)
            }
            _ => None,
        }
    }
}

/// Point of twistor space at which a cocycle is evaluated.
#[derive(Debug, Clone, Copy)]
pub enum TwistorPoint<T> {
    Minitwistor { eta: Complex<T>, zeta: Complex<T> },
    Projective(TwistorCP3<T>),
}

impl<T: Real> TwistorPoint<T> {
    /// The fibre scaling by `t`: η ↦ t²η on minitwistor space, Z ↦ tZ on CP³.
    pub fn scale(&self, t: Complex<T>) -> Self {
        match *self {
            TwistorPoint::Minitwistor { eta, zeta } => TwistorPoint::Minitwistor { eta: eta * t * t, zeta },
            TwistorPoint::Projective(z) => TwistorPoint::Projective(z.scale(t)),
        }
    }
}

/// Point of the parameter space X over which a fibre is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasePoint<T> {
    R3(PointR3<T>),
    Mink(PointMink<T>),
}

impl<T: Real> BasePoint<T> {
    pub fn coords(&self) -> Vec<T> {
        match self {
            BasePoint::R3(p) => p.coords.to_vec(),
            BasePoint::Mink(p) => p.coords.to_vec(),
        }
    }
}

/// A circular contour |ζ − center| = radius in the affine fibre coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec<T> {
    pub radius: T,
    pub center: Complex<T>,
    pub nodes: usize,
}

impl<T: Real> ContourSpec<T> {
    pub fn new(radius: T, center: Complex<T>, nodes: usize) -> Option<Self> {
        (radius > T::zero() && radius.is_finite() && nodes >= 8 && nodes.is_multiple_of(2))
            .then_some(Self { radius, center, nodes })
    }

    /// Unit circle about the origin with 64 nodes.
    pub fn unit() -> Self {
        Self { radius: T::one(), center: Complex::new(T::zero(), T::zero()), nodes: 64 }
    }

    pub fn with_radius(self, radius: T) -> Self {
        Self { radius, ..self }
    }

    pub fn is_inside(&self, z: Complex<T>) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Signed distance of `z` from the circle relative to the radius.
    pub fn relative_gap(&self, z: Complex<T>) -> T {
        ((z - self.center).norm() - self.radius).abs() / self.radius
    }
}

/// Factor-level split of the denominator by a contour.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolePartition {
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole<T> {
    pub factor: usize,
    pub root: Complex<T>,
}

/// Root-level split of the denominator by a contour. A factor may contribute
/// roots to both sides; roots at infinity are counted outside.
#[derive(Debug, Clone, PartialEq)]
pub struct RootPartition<T> {
    pub inside: Vec<Pole<T>>,
    pub outside: Vec<Pole<T>>,
    pub at_infinity: usize,
}

/// Fibre restriction of a cocycle: `scale · Π num(ζ) / Π den(ζ)`.
#[derive(Debug, Clone)]
pub struct FibreFunction<T> {
    pub scale: Complex<T>,
    pub numerator: Vec<Vec<Complex<T>>>,
    pub denominator: Vec<Vec<Complex<T>>>,
}

impl<T: Real> FibreFunction<T> {
    #[inline]
    pub fn eval(&self, zeta: Complex<T>) -> Complex<T> {
        let mut num = self.scale;
        for p in &self.numerator {
            num *= roots::eval(p, zeta);
        }
        let mut den = Complex::new(T::one(), T::zero());
        for p in &self.denominator {
            den *= roots::eval(p, zeta);
        }
        num / den
    }
}

const POLE_HIT_TOL: f64 = 1e-13;
const ON_CONTOUR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalCocycle<T> {
    pub space: SpaceId,
    pub homogeneity: i32,
    /// Twist parameter of O(n, λ); zero on the CR quadric.
    pub lambda: Complex<T>,
    pub scale: Complex<T>,
    pub numerator: Vec<Factor<T>>,
    pub denominator: Vec<Factor<T>>,
}

impl<T: Real> RationalCocycle<T> {
    /// Assembles a cocycle without checking the declared homogeneity.
    pub fn from_parts(
        space: SpaceId,
        homogeneity: i32,
        lambda: Complex<T>,
        numerator: Vec<Factor<T>>,
        denominator: Vec<Factor<T>>,
    ) -> Self {
        Self {
            space,
            homogeneity,
            lambda,
            scale: Complex::new(T::one(), T::zero()),
            numerator,
            denominator,
        }
    }

    /// Checks factor kinds, η-homogeneity, λ placement and the declared weight.
    pub fn validate(&self) -> Result<(), CocycleError> {
        if !matches!(self.space, SpaceId::MinkowskiCr | SpaceId::MinitwistorR3) {
            return Err(CocycleError::UnsupportedSpace(self.space));
        }
        if self.space == SpaceId::MinkowskiCr && self.lambda.norm_sqr() != T::zero() {
            return Err(CocycleError::UnexpectedLambda);
        }
        let computed = self.computed_homogeneity()?;
        if computed != self.homogeneity {
            return Err(CocycleError::DegreeMismatch { declared: self.homogeneity, computed });
        }
        Ok(())
    }

    /// Weight of numerator minus weight of denominator.
    pub fn computed_homogeneity(&self) -> Result<i32, CocycleError> {
        let mut w = 0;
        for (k, f) in self.numerator.iter().chain(&self.denominator).enumerate() {
            if !f.fits(self.space) {
                return Err(CocycleError::SpaceMismatch(self.space));
            }
            let fw = f.weight().ok_or(CocycleError::InhomogeneousFactor { factor: k })?;
            w += if k < self.numerator.len() { fw } else { -fw };
        }
        Ok(w)
    }

    /// `1 / ((A·Z)(B·Z))` on the CR quadric.
    pub fn elementary_state(a: [Complex<T>; 4], b: [Complex<T>; 4]) -> Self {
        Self::minkowski_inverse_product(&[a, b])
    }

    /// `1 / Π (Aᵢ·Z)`, homogeneity −(number of factors).
    pub fn minkowski_inverse_product(covectors: &[[Complex<T>; 4]]) -> Self {
        Self::from_parts(
            SpaceId::MinkowskiCr,
            -(covectors.len() as i32),
            Complex::new(T::zero(), T::zero()),
            Vec::new(),
            covectors.iter().map(|a| Factor::Linear(*a)).collect(),
        )
    }

    /// `ζ^k / η` on minitwistor space: a class in H¹(O(−2, λ)).
    pub fn zeta_power_over_eta(lambda: Complex<T>, k: u32) -> Self {
        let numerator = if k == 0 { Vec::new() } else { vec![Factor::zeta_power(k)] };
        Self::from_parts(
            SpaceId::MinitwistorR3,
            -2,
            lambda,
            numerator,
            vec![Factor::eta(Complex::new(T::one(), T::zero()))],
        )
    }

    pub fn scaled(mut self, s: Complex<T>) -> Self {
        self.scale *= s;
        self
    }

    pub fn evaluate(&self, p: &TwistorPoint<T>) -> Result<Complex<T>, CocycleError> {
        let tol = T::tol(POLE_HIT_TOL);
        let mut num = self.scale;
        for f in &self.numerator {
            let (v, _) = f.eval_scaled(p).ok_or(CocycleError::SpaceMismatch(self.space))?;
            num *= v;
        }
        let mut den = Complex::new(T::one(), T::zero());
        for (k, f) in self.denominator.iter().enumerate() {
            let (v, s) = f.eval_scaled(p).ok_or(CocycleError::SpaceMismatch(self.space))?;
            if v.norm() <= tol * s || s == T::zero() {
                return Err(CocycleError::PoleHit { factor: k });
            }
            den *= v;
        }
        Ok(num / den)
    }

    /// |f(t·z) − tⁿ f(z)| / |tⁿ f(z)|.
    pub fn homogeneity_defect(&self, p: &TwistorPoint<T>, t: Complex<T>) -> Result<T, CocycleError> {
        let base = self.evaluate(p)?;
        let scaled = self.evaluate(&p.scale(t))?;
        let expected = base * t.powi(self.homogeneity);
        if expected.norm() == T::zero() {
            return Ok(if scaled.norm() == T::zero() { T::zero() } else { T::infinity() });
        }
        Ok((scaled - expected).norm() / expected.norm())
    }

    /// Restriction to the fibre over `x` in the affine chart π = (1, ζ).
    pub fn restrict(&self, x: &BasePoint<T>) -> Result<FibreFunction<T>, CocycleError> {
        let polys = |fs: &[Factor<T>]| -> Result<Vec<_>, CocycleError> {
            fs.iter()
                .map(|f| f.fibre_poly(x).ok_or(CocycleError::SpaceMismatch(self.space)))
                .collect()
        };
        Ok(FibreFunction {
            scale: self.scale,
            numerator: polys(&self.numerator)?,
            denominator: polys(&self.denominator)?,
        })
    }

    /// Classifies every denominator root over `x` relative to the contour.
    pub fn classify_poles(&self, x: &BasePoint<T>, c: &ContourSpec<T>) -> Result<RootPartition<T>, CocycleError> {
        let fibre = self.restrict(x)?;
        let gap = T::tol(ON_CONTOUR_TOL);
        let mut part = RootPartition { inside: Vec::new(), outside: Vec::new(), at_infinity: 0 };
        for (k, p) in fibre.denominator.iter().enumerate() {
            if p.iter().all(|c| c.norm_sqr() == T::zero()) {
                // Factor vanishes identically on this fibre.
                return Err(CocycleError::PoleOnContour { factor: k, root: "entire fibre".into() });
            }
            for r in roots::roots(p) {
                if c.relative_gap(r) <= gap {
                    return Err(CocycleError::PoleOnContour { factor: k, root: format!("{r}") });
                }
                let pole = Pole { factor: k, root: r };
                if c.is_inside(r) {
                    part.inside.push(pole);
                } else {
                    part.outside.push(pole);
                }
            }
            part.at_infinity += roots::roots_at_infinity(p);
        }
        Ok(part)
    }

    /// Splits the denominator factors by the side of the contour holding their roots.
    /// Factors with no finite roots count as outside.
    pub fn pole_partition(&self, x: &BasePoint<T>, c: &ContourSpec<T>) -> Result<PolePartition, CocycleError> {
        let roots = self.classify_poles(x, c)?;
        let mut part = PolePartition::default();
        for k in 0..self.denominator.len() {
            let ins = roots.inside.iter().any(|p| p.factor == k);
            let out = roots.outside.iter().any(|p| p.factor == k);
            match (ins, out) {
                (true, true) => return Err(CocycleError::MixedFactor { factor: k }),
                (true, false) => part.inside.push(k),
                _ => part.outside.push(k),
            }
        }
        Ok(part)
    }
}
