//! Sign and normalization conventions, serialized into every report.

use serde::{Deserialize, Serialize};

use crate::transform::{HELMHOLTZ_KAPPA, HELMHOLTZ_NORMALIZATION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub signature: String,
    pub orientation: String,
    pub hodge_star: String,
    pub asd_eigenvalue: String,
    pub two_form_order: String,
    pub spinor_matrix: String,
    pub twistor_incidence: String,
    pub minitwistor_incidence: String,
    pub fibre_chart: String,
    pub contour_measure: String,
    pub helmholtz_kernel: String,
    pub helmholtz_kappa: [f64; 2],
    pub helmholtz_normalization: f64,
    pub hyperbolic_laplacian: String,
    pub field_dtype: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            signature: "(+,-,-,-)".into(),
            orientation: "dx0^dx1^dx2^dx3 > 0".into(),
            hodge_star: "(*F)_{mn} = 1/2 eps_{mnrs} F^{rs}, eps_0123 = 1".into(),
            asd_eigenvalue: "*F = -i F".into(),
            two_form_order: "01,02,03,12,13,23".into(),
            spinor_matrix: "X = [[x0+x3, x1-i x2], [x1+i x2, x0-x3]]".into(),
            twistor_incidence: "Z = (i X pi, pi)".into(),
            minitwistor_incidence: "eta = (x1+i x2) + 2 x3 zeta - (x1-i x2) zeta^2".into(),
            fibre_chart: "pi = (1, zeta)".into(),
            contour_measure: "(1/2 pi i) oint d zeta".into(),
            helmholtz_kernel: "exp(kappa lambda (x3 - (x1-i x2) zeta))".into(),
            helmholtz_kappa: HELMHOLTZ_KAPPA,
            helmholtz_normalization: HELMHOLTZ_NORMALIZATION,
            hyperbolic_laplacian: "y^3 d_i(y^-1 d_i f), upper half-space".into(),
            field_dtype: "complex64 = f64 re/im, little-endian".into(),
        }
    }
}
