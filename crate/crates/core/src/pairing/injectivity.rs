//! Discrete triviality of compactly supported kernels: the operator restricted
//! to fields supported in a box, read off on the full interior, has trivial
//! kernel iff its smallest singular value is positive.
//!
//! The matrix is dense and the SVD runs in f64 whatever the field scalar.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{box_nodes, PairingError, MIN_COLLAR};
use crate::field::residual::{apply_operator, operator_signature};
use crate::field::{FieldError, GridField, GridSpec, SupportBox};
use crate::recipes::OperatorId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub operator: String,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rows: usize,
    pub cols: usize,
}

/// `λ` at which `Δ_h + 2λ²` has a Dirichlet eigenfunction on a cube of
/// `box_size` nodes per axis: the lowest mode `Π sin(π k_a / (box_size + 1))`.
pub fn dirichlet_resonant_lambda(spacing: f64, box_size: usize) -> f64 {
    let s = (std::f64::consts::PI / (2.0 * (box_size + 1) as f64)).sin();
    6f64.sqrt() * s / spacing
}

pub fn compact_injectivity_check(
    op: &OperatorId,
    spec: &GridSpec<f64>,
    support: &SupportBox,
) -> Result<InjectivityReport, PairingError> {
    let (geometry, input, output) = operator_signature(op);
    if geometry != spec.geometry {
        return Err(FieldError::WrongGeometry { expected: geometry, got: spec.geometry }.into());
    }
    if !support.fits(spec) {
        return Err(FieldError::InvalidSpec("support box does not fit the grid".into()).into());
    }
    let collar = support.collar(spec);
    if collar < MIN_COLLAR {
        return Err(PairingError::BoxTooLarge { collar });
    }
    let d = spec.dim();
    let (ni, no) = (input.components(), output.components());
    let interior: Vec<usize> = (0..spec.len())
        .filter(|&k| crate::field::is_inside_margin(spec, &spec.multi(k)[..d], 1))
        .collect();
    let cols_nodes = box_nodes(spec, support);
    let rows = interior.len() * no;
    let cols = cols_nodes.len() * ni;
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    let mut unit = GridField::<f64>::zeros(spec, input);
    for (j, &k) in cols_nodes.iter().enumerate() {
        for c in 0..ni {
            unit.values[k * ni + c] = Complex64::new(1.0, 0.0);
            let img = apply_operator(&unit, op)?;
            unit.values[k * ni + c] = Complex64::new(0.0, 0.0);
            for (r, &m) in interior.iter().enumerate() {
                for o in 0..no {
                    a[(r * no + o, j * ni + c)] = img.values[m * no + o];
                }
            }
        }
    }
    let sv = a.singular_values();
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    Ok(InjectivityReport { operator: op.describe(), sigma_min, sigma_max, rows, cols })
}
