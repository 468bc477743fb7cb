//! Duality pairings between kernel elements and compactly supported fields,
//! their descent to cokernel classes, discrete triviality of compactly
//! supported kernels, and the compactly supported Poincaré solver.
//!
//! Integrals are Riemann sums `h^d Σ` over the support box of the compact
//! argument; on H³ the hyperbolic volume weight y⁻³ is included.

pub mod injectivity;
pub mod kernels;
pub mod poincare;

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::residual::{apply_operator, operator_signature};
use crate::field::{forms, FieldError, Geometry, GridField, GridSpec, Rank, SupportBox};
use crate::recipes::OperatorId;
use crate::scalar::{to_c64, Real};

pub use injectivity::{compact_injectivity_check, InjectivityReport};
pub use poincare::{
    asd_poincare_solve, asd_poincare_solve_with, PoincareSolution, PoincareTolerances, POINCARE_TOL_IN, POINCARE_TOL_OUT_C,
};

/// Minimum number of zero layers between a support box and the grid boundary.
pub const MIN_COLLAR: usize = 2;
/// Relative tolerance on the self-dual part of fields passed to [`pair_asd`].
pub const ASD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairingError {
    #[error("the compactly supported argument has no support box")]
    NoSupportBox,
    #[error("support box leaves a collar of {collar} layers, need ≥ {MIN_COLLAR}")]
    BoxTooLarge { collar: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("{which} has a self-dual part of size {sd_norm:e}")]
    NotASD { which: &'static str, sd_norm: f64 },
    #[error("‖asd(dω)‖∞ = {measured:e} exceeds {tol:e}")]
    HypothesisFailed { measured: f64, tol: f64 },
    #[error("path integration is inconsistent: {what} = {measured:e} exceeds {tol:e}")]
    Inconsistent { what: &'static str, measured: f64, tol: f64 },
    #[error("{0} is not a pairing partner here")]
    WrongOperator(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingTolerances {
    pub asd_relative: f64,
    pub min_collar: usize,
}

impl Default for PairingTolerances {
    fn default() -> Self {
        Self { asd_relative: ASD_TOL, min_collar: MIN_COLLAR }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub value_re: f64,
    pub value_im: f64,
    pub well_definedness_residual: f64,
    pub quadrature: String,
    pub grid: GridSpec<f64>,
    pub operator: String,
    pub tolerances: PairingTolerances,
}

impl PairingReport {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

fn spec_f64<T: Real>(s: &GridSpec<T>) -> GridSpec<f64> {
    GridSpec {
        geometry: s.geometry,
        origin: s.origin.iter().map(|v| v.as_f64()).collect(),
        spacing: s.spacing.as_f64(),
        extents: s.extents.clone(),
    }
}

fn quadrature_note(g: Geometry) -> String {
    match g {
        Geometry::H3UpperHalf => "Riemann sum h^3 Σ y^-3 over the support box".into(),
        _ => format!("Riemann sum h^{} Σ over the support box", g.dim()),
    }
}

fn same_grid<T: Real>(f: &GridField<T>, g: &GridField<T>) -> Result<(), PairingError> {
    if !f.spec.same_grid(&g.spec) {
        return Err(PairingError::GridMismatch("fields live on different grids".into()));
    }
    Ok(())
}

fn compact_box<T: Real>(g: &GridField<T>) -> Result<&SupportBox, PairingError> {
    let b = g.support_box.as_ref().ok_or(PairingError::NoSupportBox)?;
    let collar = b.collar(&g.spec);
    if collar < MIN_COLLAR {
        return Err(PairingError::BoxTooLarge { collar });
    }
    Ok(b)
}

/// Flat indices of the nodes of `b` in row-major order.
pub fn box_nodes<T: Real>(spec: &GridSpec<T>, b: &SupportBox) -> Vec<usize> {
    let d = spec.dim();
    let mut out = Vec::with_capacity(b.node_count());
    let mut idx = b.lo.clone();
    loop {
        out.push(spec.flat(&idx));
        let mut a = d;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            if idx[a] < b.hi[a] {
                idx[a] += 1;
                break;
            }
            idx[a] = b.lo[a];
        }
    }
}

/// Pointwise pairing of two values of the same rank: product for scalars, the
/// skew form ε for spinors, the metric contraction for forms.
pub fn pointwise_pairing<T: Real>(rank: Rank, a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    let m = forms::METRIC;
    match rank {
        Rank::Scalar => a[0] * b[0],
        Rank::SpinorMinus | Rank::SpinorPlus => a[0] * b[1] - a[1] * b[0],
        Rank::OneForm => (0..4).map(|k| a[k] * b[k] * T::lit(m[k])).sum(),
        Rank::TwoForm => forms::bilinear(a, b),
        Rank::ThreeForm => forms::TRIPLES
            .iter()
            .enumerate()
            .map(|(k, &(p, q, r))| a[k] * b[k] * T::lit(m[p] * m[q] * m[r]))
            .sum(),
    }
}

fn volume_weight<T: Real>(spec: &GridSpec<T>, k: usize) -> T {
    let h = spec.cell_volume();
    match spec.geometry {
        Geometry::H3UpperHalf => {
            let y = spec.coords(k)[2];
            h / (y * y * y)
        }
        _ => h,
    }
}

/// `Σ_{k ∈ b} ⟨f_k, g_k⟩ w_k` in a fixed node order.
fn riemann<T: Real>(f: &GridField<T>, g: &GridField<T>, b: &SupportBox) -> Complex<T> {
    box_nodes(&f.spec, b)
        .into_iter()
        .map(|k| pointwise_pairing(f.rank, f.node(k), g.node(k)) * volume_weight(&f.spec, k))
        .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v)
}

/// `|Σ f·(op h)·w| / (‖f‖∞ ‖h‖∞ V)` with V the volume of the support of `op h`.
/// Small values certify that pairing with `f` descends to the cokernel of `op`.
pub fn pairing_well_defined<T: Real>(f: &GridField<T>, h: &GridField<T>, op: &OperatorId) -> Result<T, PairingError> {
    same_grid(f, h)?;
    compact_box(h)?;
    let (_, input, output) = operator_signature(op);
    if h.rank != input || f.rank != output {
        return Err(PairingError::WrongOperator(op.describe()));
    }
    let oh = apply_operator(h, op)?;
    let b = oh.support_box.clone().ok_or(PairingError::NoSupportBox)?;
    let v = riemann(f, &oh, &b);
    let volume = f.spec.cell_volume() * T::lit(b.node_count() as f64);
    let scale = f.max_norm() * h.max_norm() * volume;
    if scale == T::zero() {
        return Ok(T::zero());
    }
    Ok(v.norm() / scale)
}

/// A bump of the given rank and component centred in `b`, small enough that
/// it keeps the minimum collar.
fn probe<T: Real>(spec: &GridSpec<T>, b: &SupportBox, rank: Rank, comp: usize) -> Result<GridField<T>, PairingError> {
    let h = spec.spacing;
    let center: Vec<T> = (0..spec.dim())
        .map(|a| spec.coord(a, b.lo[a]) + h * T::lit((b.hi[a] - b.lo[a]) as f64 * 0.5))
        .collect();
    let half = b.lo.iter().zip(&b.hi).map(|(l, u)| u - l).min().unwrap_or(0) as f64 * 0.5;
    let radius = h * T::lit(half.max(1.5));
    let p = kernels::bump(spec, rank, comp, &center, radius)?;
    compact_box(&p)?;
    Ok(p)
}

fn report<T: Real>(value: Complex<T>, residual: T, spec: &GridSpec<T>, op: &OperatorId) -> PairingReport {
    let v = to_c64(value);
    PairingReport {
        value_re: v.re,
        value_im: v.im,
        well_definedness_residual: residual.as_f64(),
        quadrature: quadrature_note(spec.geometry),
        grid: spec_f64(spec),
        operator: op.describe(),
        tolerances: PairingTolerances::default(),
    }
}

/// `∫ f g` for a kernel element `f` of `op` and a compactly supported `g`.
/// The residual comes from [`pairing_well_defined`] on a bump probe.
pub fn pair_scalar<T: Real>(f: &GridField<T>, g: &GridField<T>, op: &OperatorId) -> Result<PairingReport, PairingError> {
    same_grid(f, g)?;
    let b = compact_box(g)?;
    if f.rank != Rank::Scalar || g.rank != Rank::Scalar {
        return Err(PairingError::WrongOperator(op.describe()));
    }
    let (geometry, _, _) = operator_signature(op);
    if geometry != f.spec.geometry || matches!(op, OperatorId::DiracMinus | OperatorId::DiracPlus) {
        return Err(PairingError::WrongOperator(op.describe()));
    }
    let value = riemann(f, g, b);
    let p = probe(&f.spec, b, Rank::Scalar, 0)?;
    let residual = pairing_well_defined(f, &p, op)?;
    Ok(report(value, residual, &f.spec, op))
}

/// `∫ ε(α, β) = h⁴ Σ (α₀β₁ − α₁β₀)`; descent is probed with β ↦ β + D⁺γ.
pub fn pair_spinor<T: Real>(alpha: &GridField<T>, beta: &GridField<T>) -> Result<PairingReport, PairingError> {
    same_grid(alpha, beta)?;
    let b = compact_box(beta)?;
    if alpha.rank != Rank::SpinorMinus || beta.rank != Rank::SpinorMinus {
        return Err(PairingError::Field(FieldError::WrongRank { expected: Rank::SpinorMinus, got: beta.rank }));
    }
    let value = riemann(alpha, beta, b);
    let mut residual = T::zero();
    for comp in 0..2 {
        let p = probe(&alpha.spec, b, Rank::SpinorPlus, comp)?;
        residual = residual.max(pairing_well_defined(alpha, &p, &OperatorId::DiracPlus)?);
    }
    Ok(report(value, residual, &alpha.spec, &OperatorId::DiracPlus))
}

fn sd_size<T: Real>(f: &GridField<T>) -> Result<T, PairingError> {
    let sd = crate::field::ops::sd_project(f)?;
    Ok(sd.max_norm() / T::one().max(f.max_norm()))
}

/// `∫ ⟨F, G⟩` for anti-self-dual two-forms; descent is probed with G ↦ G + asd(dω).
pub fn pair_asd<T: Real>(f: &GridField<T>, g: &GridField<T>) -> Result<PairingReport, PairingError> {
    same_grid(f, g)?;
    let b = compact_box(g)?;
    for (which, x) in [("kernel form", f), ("compact form", g)] {
        let s = sd_size(x)?;
        if s > T::tol(ASD_TOL) {
            return Err(PairingError::NotASD { which, sd_norm: s.as_f64() });
        }
    }
    let value = riemann(f, g, b);
    let mut residual = T::zero();
    for comp in 0..4 {
        let p = probe(&f.spec, b, Rank::OneForm, comp)?;
        residual = residual.max(pairing_well_defined(f, &p, &OperatorId::ExtDerivAsdStage1)?);
    }
    Ok(report(value, residual, &f.spec, &OperatorId::ExtDerivAsdStage1))
}
