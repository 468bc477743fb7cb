//! Sampled fields on structured grids over the parameter space.
//!
//! Values are stored node-major with the components of each node contiguous;
//! nodes are ordered row-major (last axis fastest). Stencil operators mark the
//! outermost `margin` layers as invalid and write zeros there.

pub mod forms;
pub mod io;
pub mod ops;
pub mod residual;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("operator needs {expected:?} geometry, field is {got:?}")]
    WrongGeometry { expected: Geometry, got: Geometry },
    #[error("operator needs a {expected:?} field, got {got:?}")]
    WrongRank { expected: Rank, got: Rank },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidSpec(String),
    #[error("field has non-finite values")]
    NonFinite,
    #[error("operator {0} is not implemented on grids")]
    UnsupportedOperator(String),
    #[error("field file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Geometry {
    /// Euclidean ℝ³, axes (x₁, x₂, x₃).
    R3,
    /// Minkowski ℝ⁴, axes (x₀, x₁, x₂, x₃), signature (+,−,−,−).
    R4Lorentz,
    /// Upper half-space model of H³, axes (x₁, x₂, y) with height y > 0.
    H3UpperHalf,
}

impl Geometry {
    pub fn dim(self) -> usize {
        match self {
            Geometry::R4Lorentz => 4,
            Geometry::R3 | Geometry::H3UpperHalf => 3,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Geometry::R3 => "R3",
            Geometry::R4Lorentz => "R4Lorentz",
            Geometry::H3UpperHalf => "H3UpperHalf",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "R3" => Some(Geometry::R3),
            "R4Lorentz" => Some(Geometry::R4Lorentz),
            "H3UpperHalf" => Some(Geometry::H3UpperHalf),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rank {
    Scalar,
    SpinorMinus,
    SpinorPlus,
    OneForm,
    TwoForm,
    ThreeForm,
}

impl Rank {
    /// Components per node on a four-dimensional base (scalars have one on any base).
    pub fn components(self) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::SpinorMinus | Rank::SpinorPlus => 2,
            Rank::OneForm | Rank::ThreeForm => 4,
            Rank::TwoForm => 6,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Rank::Scalar => "scalar",
            Rank::SpinorMinus => "spinor_minus",
            Rank::SpinorPlus => "spinor_plus",
            Rank::OneForm => "one_form",
            Rank::TwoForm => "two_form",
            Rank::ThreeForm => "three_form",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Rank::Scalar, Rank::SpinorMinus, Rank::SpinorPlus, Rank::OneForm, Rank::TwoForm, Rank::ThreeForm]
            .into_iter()
            .find(|r| r.tag() == s)
    }
}

pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GridSpec<T> {
    pub geometry: Geometry,
    pub origin: Vec<T>,
    pub spacing: T,
    pub extents: Vec<usize>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(geometry: Geometry, origin: Vec<T>, spacing: T, extents: Vec<usize>) -> Result<Self, FieldError> {
        let s = Self { geometry, origin, spacing, extents };
        s.validate()?;
        Ok(s)
    }

    /// Cube `[center − half, center + half]^d` sampled with `points` nodes per axis.
    pub fn cube(geometry: Geometry, center: &[T], half_width: T, points: usize) -> Result<Self, FieldError> {
        if points < 2 {
            return Err(FieldError::InvalidSpec("need at least two points per axis".into()));
        }
        let h = half_width * T::lit(2.0) / T::lit((points - 1) as f64);
        let origin = center.iter().map(|&c| c - half_width).collect();
        Self::new(geometry, origin, h, vec![points; geometry.dim()])
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        let d = self.geometry.dim();
        if self.origin.len() != d || self.extents.len() != d {
            return Err(FieldError::InvalidSpec(format!("{} needs {d} axes", self.geometry.tag())));
        }
        if !(self.spacing > T::zero() && self.spacing.is_finite()) {
            return Err(FieldError::InvalidSpec("spacing must be positive".into()));
        }
        if self.origin.iter().any(|v| !v.is_finite()) {
            return Err(FieldError::InvalidSpec("origin must be finite".into()));
        }
        if self.extents.iter().any(|&n| n < 5) {
            return Err(FieldError::InvalidSpec("every extent must be ≥ 5".into()));
        }
        if self.geometry == Geometry::H3UpperHalf && self.origin[2] < self.spacing * T::lit(2.0) {
            return Err(FieldError::InvalidSpec("H3 grids need y_min ≥ 2h".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> [usize; MAX_DIM] {
        let mut s = [0; MAX_DIM];
        let mut acc = 1;
        for a in (0..self.dim()).rev() {
            s[a] = acc;
            acc *= self.extents[a];
        }
        s
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        let s = self.strides();
        idx.iter().zip(&s).map(|(i, s)| i * s).sum()
    }

    pub fn multi(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut m = [0; MAX_DIM];
        for a in (0..self.dim()).rev() {
            m[a] = flat % self.extents[a];
            flat /= self.extents[a];
        }
        m
    }

    pub fn coord(&self, axis: usize, i: usize) -> T {
        self.origin[axis] + self.spacing * T::lit(i as f64)
    }

    pub fn coords(&self, flat: usize) -> [T; MAX_DIM] {
        let m = self.multi(flat);
        let mut x = [T::zero(); MAX_DIM];
        for a in 0..self.dim() {
            x[a] = self.coord(a, m[a]);
        }
        x
    }

    pub fn y_min(&self) -> Option<T> {
        (self.geometry == Geometry::H3UpperHalf).then(|| self.origin[2])
    }

    /// Same box with half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            geometry: self.geometry,
            origin: self.origin.clone(),
            spacing: self.spacing / T::lit(2.0),
            extents: self.extents.iter().map(|n| 2 * (n - 1) + 1).collect(),
        }
    }

    /// Physical volume element h^d.
    pub fn cell_volume(&self) -> T {
        self.spacing.powi(self.dim() as i32)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.geometry == other.geometry
            && self.extents == other.extents
            && self.spacing == other.spacing
            && self.origin == other.origin
    }
}

/// Inclusive index box `lo[a] ..= hi[a]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportBox {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl SupportBox {
    pub fn new(lo: Vec<usize>, hi: Vec<usize>) -> Self {
        Self { lo, hi }
    }

    /// Box of `size` nodes per axis centred in the grid.
    pub fn centered<T: Real>(spec: &GridSpec<T>, size: usize) -> Self {
        let lo: Vec<usize> = spec.extents.iter().map(|n| (n - size) / 2).collect();
        let hi = lo.iter().map(|l| l + size - 1).collect();
        Self { lo, hi }
    }

    pub fn contains(&self, m: &[usize]) -> bool {
        self.lo.iter().zip(&self.hi).zip(m).all(|((l, h), i)| l <= i && i <= h)
    }

    /// Number of zero layers between the box and the grid boundary (minimum over axes and sides).
    pub fn collar<T: Real>(&self, spec: &GridSpec<T>) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(&spec.extents)
            .map(|((&l, &h), &n)| l.min(n.saturating_sub(h + 1)))
            .min()
            .unwrap_or(0)
    }

    pub fn enlarged<T: Real>(&self, k: usize, spec: &GridSpec<T>) -> Self {
        Self {
            lo: self.lo.iter().map(|l| l.saturating_sub(k)).collect(),
            hi: self.hi.iter().zip(&spec.extents).map(|(h, n)| (h + k).min(n - 1)).collect(),
        }
    }

    pub fn fits<T: Real>(&self, spec: &GridSpec<T>) -> bool {
        self.lo.len() == spec.dim()
            && self.hi.len() == spec.dim()
            && self.lo.iter().zip(&self.hi).zip(&spec.extents).all(|((l, h), n)| l <= h && h < n)
    }

    pub fn node_count(&self) -> usize {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l + 1).product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    pub spec: GridSpec<T>,
    pub rank: Rank,
    pub values: Vec<Complex<T>>,
    pub support_box: Option<SupportBox>,
    /// Number of outer node layers that carry no valid data.
    pub margin: usize,
}

impl<T: Real> GridField<T> {
    pub fn zeros(spec: &GridSpec<T>, rank: Rank) -> Self {
        Self {
            spec: spec.clone(),
            rank,
            values: vec![Complex::new(T::zero(), T::zero()); spec.len() * rank.components()],
            support_box: None,
            margin: 0,
        }
    }

    /// Samples `f(coords, out)` at every node, in parallel.
    pub fn from_fn<F>(spec: &GridSpec<T>, rank: Rank, f: F) -> Self
    where
        F: Fn(&[T], &mut [Complex<T>]) + Sync,
    {
        let mut field = Self::zeros(spec, rank);
        let nc = rank.components();
        let d = spec.dim();
        field.values.par_chunks_mut(nc).enumerate().for_each(|(k, out)| {
            let x = spec.coords(k);
            f(&x[..d], out);
        });
        field
    }

    pub fn scalar_from_fn<F>(spec: &GridSpec<T>, f: F) -> Self
    where
        F: Fn(&[T]) -> Complex<T> + Sync,
    {
        Self::from_fn(spec, Rank::Scalar, |x, out| out[0] = f(x))
    }

    pub fn components(&self) -> usize {
        self.rank.components()
    }

    pub fn node(&self, flat: usize) -> &[Complex<T>] {
        let nc = self.components();
        &self.values[flat * nc..(flat + 1) * nc]
    }

    pub fn node_mut(&mut self, flat: usize) -> &mut [Complex<T>] {
        let nc = self.components();
        &mut self.values[flat * nc..(flat + 1) * nc]
    }

    /// True when every index lies at least `margin` nodes from the boundary.
    pub fn is_valid(&self, m: &[usize]) -> bool {
        is_inside_margin(&self.spec, m, self.margin)
    }

    /// Restricts the field to `b`, zeroing everything outside it.
    pub fn with_support(mut self, b: SupportBox) -> Result<Self, FieldError> {
        if !b.fits(&self.spec) {
            return Err(FieldError::InvalidSpec("support box does not fit the grid".into()));
        }
        let nc = self.components();
        let spec = self.spec.clone();
        self.values.par_chunks_mut(nc).enumerate().for_each(|(k, v)| {
            let m = spec.multi(k);
            if !b.contains(&m[..spec.dim()]) {
                v.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
            }
        });
        self.support_box = Some(b);
        Ok(self)
    }

    /// Max |component| over valid nodes.
    pub fn max_norm(&self) -> T {
        let nc = self.components();
        let d = self.spec.dim();
        self.values
            .par_chunks(nc)
            .enumerate()
            .filter(|(k, _)| self.is_valid(&self.spec.multi(*k)[..d]))
            .map(|(_, v)| v.iter().map(|z| z.norm()).fold(T::zero(), T::max))
            .reduce(T::zero, T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Checks the support-box invariant: all values outside the box vanish exactly.
    pub fn respects_support(&self) -> bool {
        let Some(b) = &self.support_box else { return true };
        let d = self.spec.dim();
        (0..self.spec.len()).all(|k| {
            b.contains(&self.spec.multi(k)[..d]) || self.node(k).iter().all(|z| z.norm_sqr() == T::zero())
        })
    }

    pub fn map_nodes<F>(&self, rank: Rank, f: F) -> Self
    where
        F: Fn(&[Complex<T>], &mut [Complex<T>]) + Sync,
    {
        let mut out = Self::zeros(&self.spec, rank);
        out.margin = self.margin;
        let (ni, no) = (self.components(), rank.components());
        out.values
            .par_chunks_mut(no)
            .zip(self.values.par_chunks(ni))
            .for_each(|(o, i)| f(i, o));
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|z| *z *= s);
        out
    }

    /// `self + s·other`; support boxes are dropped unless equal.
    pub fn axpy(&self, s: Complex<T>, other: &Self) -> Result<Self, FieldError> {
        if !self.spec.same_grid(&other.spec) || self.rank != other.rank {
            return Err(FieldError::GridMismatch("axpy operands differ".into()));
        }
        let mut out = self.clone();
        out.values.iter_mut().zip(&other.values).for_each(|(a, &b)| *a += b * s);
        out.margin = self.margin.max(other.margin);
        if self.support_box != other.support_box {
            out.support_box = None;
        }
        Ok(out)
    }
}

pub(crate) fn is_inside_margin<T: Real>(spec: &GridSpec<T>, m: &[usize], margin: usize) -> bool {
    m.iter().zip(&spec.extents).all(|(&i, &n)| i >= margin && i + margin < n)
}
