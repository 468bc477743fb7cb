//! Central-difference operators.
//!
//! Every stencil reaches one node along each axis, so its output has margin
//! `input.margin + 1`; invalid nodes hold zero. Pointwise maps keep the margin.

use num_complex::Complex;
use rayon::prelude::*;

use super::forms::{self, PAIRS, TRIPLES};
use super::{is_inside_margin, FieldError, Geometry, GridField, Rank, MAX_DIM};
use crate::scalar::Real;

/// Read access to a field with difference quotients.
pub struct Stencil<'a, T> {
    f: &'a GridField<T>,
    strides: [usize; MAX_DIM],
    nc: usize,
    inv_2h: T,
    inv_h2: T,
}

impl<'a, T: Real> Stencil<'a, T> {
    fn new(f: &'a GridField<T>) -> Self {
        let h = f.spec.spacing;
        Self {
            f,
            strides: f.spec.strides(),
            nc: f.components(),
            inv_2h: (h + h).recip(),
            inv_h2: (h * h).recip(),
        }
    }

    #[inline]
    pub fn at(&self, k: usize, comp: usize) -> Complex<T> {
        self.f.values[k * self.nc + comp]
    }

    #[inline]
    fn pm(&self, k: usize, axis: usize, comp: usize) -> (Complex<T>, Complex<T>) {
        let s = self.strides[axis];
        (self.at(k + s, comp), self.at(k - s, comp))
    }

    /// (f₊ − f₋) / 2h.
    #[inline]
    pub fn d1(&self, k: usize, axis: usize, comp: usize) -> Complex<T> {
        let (p, m) = self.pm(k, axis, comp);
        (p - m) * self.inv_2h
    }

    /// (f₊ − 2f₀ + f₋) / h².
    #[inline]
    pub fn d2(&self, k: usize, axis: usize, comp: usize) -> Complex<T> {
        let (p, m) = self.pm(k, axis, comp);
        let c = self.at(k, comp);
        (p - c - c + m) * self.inv_h2
    }

    pub fn spacing(&self) -> T {
        self.f.spec.spacing
    }
}

fn check_geometry<T: Real>(f: &GridField<T>, expected: Geometry) -> Result<(), FieldError> {
    if f.spec.geometry != expected {
        return Err(FieldError::WrongGeometry { expected, got: f.spec.geometry });
    }
    Ok(())
}

fn check_rank<T: Real>(f: &GridField<T>, expected: Rank) -> Result<(), FieldError> {
    if f.rank != expected {
        return Err(FieldError::WrongRank { expected, got: f.rank });
    }
    Ok(())
}

/// Applies `op(stencil, node, coords, out)` on every node at least `margin + 1`
/// from the boundary.
pub fn stencil_map<T, F>(f: &GridField<T>, rank: Rank, op: F) -> GridField<T>
where
    T: Real,
    F: Fn(&Stencil<T>, usize, &[T], &mut [Complex<T>]) + Sync,
{
    let st = Stencil::new(f);
    let spec = &f.spec;
    let d = spec.dim();
    let margin = f.margin + 1;
    let mut out = GridField::zeros(spec, rank);
    out.margin = margin;
    out.support_box = f.support_box.as_ref().map(|b| b.enlarged(1, spec));
    out.values.par_chunks_mut(rank.components()).enumerate().for_each(|(k, o)| {
        let m = spec.multi(k);
        if is_inside_margin(spec, &m[..d], margin) {
            let x = spec.coords(k);
            op(&st, k, &x[..d], o);
        }
    });
    out
}

fn r3_laplacian<T: Real>(s: &Stencil<T>, k: usize, comp: usize) -> Complex<T> {
    s.d2(k, 0, comp) + s.d2(k, 1, comp) + s.d2(k, 2, comp)
}

pub fn laplacian_r3<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R3)?;
    Ok(stencil_map(f, f.rank, |s, k, _, o| {
        for (c, v) in o.iter_mut().enumerate() {
            *v = r3_laplacian(s, k, c);
        }
    }))
}

/// Δf + 2λ²f.
pub fn helmholtz_apply<T: Real>(f: &GridField<T>, lambda: Complex<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R3)?;
    let shift = lambda * lambda * T::lit(2.0);
    Ok(stencil_map(f, f.rank, |s, k, _, o| {
        for (c, v) in o.iter_mut().enumerate() {
            *v = r3_laplacian(s, k, c) + shift * s.at(k, c);
        }
    }))
}

/// □f = ∂₀²f − ∂₁²f − ∂₂²f − ∂₃²f, componentwise.
pub fn wave_apply<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    Ok(stencil_map(f, f.rank, |s, k, _, o| {
        for (c, v) in o.iter_mut().enumerate() {
            *v = s.d2(k, 0, c) - s.d2(k, 1, c) - s.d2(k, 2, c) - s.d2(k, 3, c);
        }
    }))
}

/// The four first-order operators ∂_{AA'} read off X(x):
/// `[∂₀+∂₃, ∂₁+i∂₂, ∂₁−i∂₂, ∂₀−∂₃]` applied to component `c`.
fn weyl<T: Real>(s: &Stencil<T>, k: usize, c: usize) -> [Complex<T>; 4] {
    let i = Complex::new(T::zero(), T::one());
    let d: [Complex<T>; 4] = std::array::from_fn(|a| s.d1(k, a, c));
    [d[0] + d[3], d[1] + i * d[2], d[1] - i * d[2], d[0] - d[3]]
}

/// D⁻: S⁻ → S⁺, `(D⁻ψ)₀ = N₀₀ψ₁ − N₀₁ψ₀`, `(D⁻ψ)₁ = N₁₀ψ₁ − N₁₁ψ₀`.
pub fn dirac_minus_apply<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    check_rank(f, Rank::SpinorMinus)?;
    Ok(stencil_map(f, Rank::SpinorPlus, |s, k, _, o| {
        let (n0, n1) = (weyl(s, k, 0), weyl(s, k, 1));
        o[0] = n1[0] - n0[1];
        o[1] = n1[2] - n0[3];
    }))
}

/// D⁺: S⁺ → S⁻, `(D⁺χ)₀ = N₁₀χ₀ − N₀₀χ₁`, `(D⁺χ)₁ = N₁₁χ₀ − N₀₁χ₁`, so D⁺D⁻ = □.
pub fn dirac_plus_apply<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    check_rank(f, Rank::SpinorPlus)?;
    Ok(stencil_map(f, Rank::SpinorMinus, |s, k, _, o| {
        let (n0, n1) = (weyl(s, k, 0), weyl(s, k, 1));
        o[0] = n0[2] - n1[0];
        o[1] = n0[3] - n1[1];
    }))
}

pub fn ext_d_0form<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    check_rank(f, Rank::Scalar)?;
    Ok(stencil_map(f, Rank::OneForm, |s, k, _, o| {
        for (a, v) in o.iter_mut().enumerate() {
            *v = s.d1(k, a, 0);
        }
    }))
}

/// (dω)_{μν} = ∂_μ ω_ν − ∂_ν ω_μ.
pub fn ext_d_1form<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    check_rank(f, Rank::OneForm)?;
    Ok(stencil_map(f, Rank::TwoForm, |s, k, _, o| {
        for (v, &(m, n)) in o.iter_mut().zip(&PAIRS) {
            *v = s.d1(k, m, n) - s.d1(k, n, m);
        }
    }))
}

/// (dF)_{μνρ} = ∂_μ F_{νρ} − ∂_ν F_{μρ} + ∂_ρ F_{μν}.
pub fn ext_d_2form<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    check_rank(f, Rank::TwoForm)?;
    let idx = |a: usize, b: usize| PAIRS.iter().position(|&p| p == (a, b)).expect("ordered pair");
    Ok(stencil_map(f, Rank::ThreeForm, |s, k, _, o| {
        for (v, &(m, n, r)) in o.iter_mut().zip(&TRIPLES) {
            *v = s.d1(k, m, idx(n, r)) - s.d1(k, n, idx(m, r)) + s.d1(k, r, idx(m, n));
        }
    }))
}

fn two_form_pointwise<T: Real>(
    f: &GridField<T>,
    map: fn(&[Complex<T>]) -> [Complex<T>; 6],
) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::R4Lorentz)?;
    check_rank(f, Rank::TwoForm)?;
    let mut out = f.map_nodes(Rank::TwoForm, |i, o| o.copy_from_slice(&map(i)));
    out.support_box = f.support_box.clone();
    Ok(out)
}

pub fn hodge_star<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    two_form_pointwise(f, forms::hodge_star)
}

/// ½(F + i★F).
pub fn asd_project<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    two_form_pointwise(f, forms::asd_part)
}

/// ½(F − i★F).
pub fn sd_project<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    two_form_pointwise(f, forms::sd_part)
}

/// Δ_H f = y³ ∂ᵢ(y⁻¹ ∂ᵢ f) = y²(∂₁² + ∂₂² + ∂_y²)f − y ∂_y f in divergence form:
/// the y-flux is evaluated at half nodes y ± h/2. The discrete operator is
/// symmetric for the weight y⁻³ h³ and annihilates 1 and y² exactly.
pub fn hyperbolic_laplacian<T: Real>(f: &GridField<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::H3UpperHalf)?;
    Ok(stencil_map(f, f.rank, |s, k, x, o| hyperbolic_node(s, k, x[2], o, None)))
}

/// Δ_H f − (λ² − 1) f.
pub fn hyperbolic_helmholtz_apply<T: Real>(f: &GridField<T>, lambda: Complex<T>) -> Result<GridField<T>, FieldError> {
    check_geometry(f, Geometry::H3UpperHalf)?;
    let shift = lambda * lambda - T::one();
    Ok(stencil_map(f, f.rank, |s, k, x, o| hyperbolic_node(s, k, x[2], o, Some(shift))))
}

fn hyperbolic_node<T: Real>(s: &Stencil<T>, k: usize, y: T, o: &mut [Complex<T>], shift: Option<Complex<T>>) {
    let h = s.spacing();
    let half = h * T::lit(0.5);
    let (wp, wm) = ((y + half).recip(), (y - half).recip());
    let y2 = y * y;
    let y3 = y2 * y;
    let inv_h2 = (h * h).recip();
    for (c, v) in o.iter_mut().enumerate() {
        let (p, m) = s.pm(k, 2, c);
        let f0 = s.at(k, c);
        let flux = ((p - f0) * wp - (f0 - m) * wm) * inv_h2;
        let mut r = (s.d2(k, 0, c) + s.d2(k, 1, c)) * y2 + flux * y3;
        if let Some(sh) = shift {
            r -= sh * f0;
        }
        *v = r;
    }
}
