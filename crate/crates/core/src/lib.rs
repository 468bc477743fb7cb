//! Numerical Penrose transforms on the flat-model examples: minitwistor space
//! over ℝ³, the CR quadric over Minkowski space, and hyperbolic space.
//!
//! * [`recipes`]: the table of (co)kernel isomorphisms and Serre duals.
//! * [`geometry`], [`cocycle`]: incidence relations and rational Čech representatives.
//! * [`transform`]: fibre contour integrals producing fields on the base.
//! * [`field`]: grids, finite-difference operators, residuals and file formats.
//! * [`pairing`]: duality pairings, compact-support injectivity and the
//!   compactly supported Poincaré solver.
//!
//! Numerics are generic over [`scalar::Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod cocycle;
pub mod conventions;
pub mod field;
pub mod geometry;
pub mod pairing;
pub mod recipes;
pub mod roots;
pub mod scalar;
pub mod transform;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type GridField64 = field::GridField<f64>;
pub type GridField32 = field::GridField<f32>;
pub type GridSpec64 = field::GridSpec<f64>;
pub type GridSpec32 = field::GridSpec<f32>;
pub type RationalCocycle64 = cocycle::RationalCocycle<f64>;
pub type RationalCocycle32 = cocycle::RationalCocycle<f32>;
pub type ContourSpec64 = cocycle::ContourSpec<f64>;
pub type CocycleCombination64 = transform::CocycleCombination<f64>;
