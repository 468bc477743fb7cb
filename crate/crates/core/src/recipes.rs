//! Bundle bookkeeping for the three example double fibrations.
//!
//! Each tabulated line bundle knows which cohomology groups map to the kernel
//! or cokernel of which differential operator on the parameter space, for
//! both ordinary and compactly supported cohomology, and who its Serre-dual
//! partner is. The tables are static data; nothing here computes direct
//! images.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecipeError {
    #[error("no tabulated transform for {bundle} (compact = {compact})")]
    UnknownBundle { bundle: BundleSpec, compact: bool },
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
}

/// Which example twistor space a bundle lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceId {
    /// T(CP¹) over Euclidean ℝ³.
    MinitwistorR3,
    /// The CR quadric in CP³ minus a line, over Minkowski ℝ⁴.
    MinkowskiCr,
    /// Open orbit in the isotropic Grassmannian over hyperbolic space of dimension 2n+1.
    Hyperbolic { n: u32 },
}

impl SpaceId {
    /// Real dimension of the η-fibres; the degree shift for compact support.
    pub fn fibre_dim_eta(self) -> u32 {
        1
    }

    /// Rank of Q^{0,1}: the complex (or CR) dimension of Z.
    pub fn q_rank(self) -> u32 {
        match self {
            SpaceId::MinitwistorR3 | SpaceId::MinkowskiCr => 2,
            SpaceId::Hyperbolic { n } => n * (n + 3) / 2,
        }
    }

    /// Homogeneity of the canonical bundle κ_Q.
    pub fn canonical_degree(self) -> i32 {
        match self {
            SpaceId::MinitwistorR3 | SpaceId::MinkowskiCr => -4,
            SpaceId::Hyperbolic { n } => -2 * n as i32 - 2,
        }
    }

    /// `n(n+1)/2` for hyperbolic spaces; the degree carrying the O(−2n) kernel.
    pub fn hyperbolic_triangle(self) -> Option<u32> {
        match self {
            SpaceId::Hyperbolic { n } => Some(n * (n + 1) / 2),
            _ => None,
        }
    }

    pub fn carries_lambda(self) -> bool {
        !matches!(self, SpaceId::MinkowskiCr)
    }

    pub fn tag(self) -> String {
        match self {
            SpaceId::MinitwistorR3 => "minitwistor".to_string(),
            SpaceId::MinkowskiCr => "minkowski".to_string(),
            SpaceId::Hyperbolic { n } => format!("hyperbolic:{n}"),
        }
    }

    pub fn parse(s: &str) -> Option<SpaceId> {
        match s {
            "minitwistor" | "minitwistor_r3" => Some(SpaceId::MinitwistorR3),
            "minkowski" | "minkowski_cr" => Some(SpaceId::MinkowskiCr),
            _ => {
                let n = s.strip_prefix("hyperbolic:")?.parse().ok()?;
                (n >= 1).then_some(SpaceId::Hyperbolic { n })
            }
        }
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// A homogeneous line bundle O(n, λ), or O(n) on the CR quadric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundleSpec {
    pub space: SpaceId,
    pub homogeneity: i32,
    pub lambda: Complex64,
}

impl BundleSpec {
    pub fn new(space: SpaceId, homogeneity: i32, lambda: Complex64) -> Result<Self, RecipeError> {
        if !space.carries_lambda() && lambda != Complex64::new(0.0, 0.0) {
            return Err(RecipeError::InvalidBundle(format!(
                "{space} bundles carry no λ parameter (got {lambda})"
            )));
        }
        if let SpaceId::Hyperbolic { n: 0 } = space {
            return Err(RecipeError::InvalidBundle("hyperbolic n must be ≥ 1".into()));
        }
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(RecipeError::InvalidBundle("λ must be finite".into()));
        }
        Ok(Self { space, homogeneity, lambda })
    }

    pub fn minitwistor(homogeneity: i32, lambda: Complex64) -> Self {
        Self { space: SpaceId::MinitwistorR3, homogeneity, lambda }
    }

    pub fn minkowski(homogeneity: i32) -> Self {
        Self { space: SpaceId::MinkowskiCr, homogeneity, lambda: Complex64::new(0.0, 0.0) }
    }

    pub fn hyperbolic(n: u32, homogeneity: i32, lambda: Complex64) -> Self {
        Self { space: SpaceId::Hyperbolic { n }, homogeneity, lambda }
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.space.carries_lambda() {
            write!(f, "O({}, {}) on {}", self.homogeneity, self.lambda, self.space)
        } else {
            write!(f, "O({}) on {}", self.homogeneity, self.space)
        }
    }
}

/// Differential operators appearing on the parameter-space side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorId {
    /// Δ + 2λ² on ℝ³.
    Helmholtz(Complex64),
    /// □ = ∂₀² − ∂₁² − ∂₂² − ∂₃².
    Wave,
    /// Weyl operator S⁻ → S⁺.
    DiracMinus,
    /// Weyl operator S⁺ → S⁻.
    DiracPlus,
    /// Anti-self-dual part of d: Λ¹ → Λ²₋.
    ExtDerivAsdStage1,
    /// d: Λ²₋ → Λ³.
    ExtDerivAsdStage2,
    /// Δ_{H} − (λ² − n²) on hyperbolic space of dimension 2n+1.
    HyperbolicHelmholtz(Complex64, u32),
}

impl OperatorId {
    pub fn tag(&self) -> &'static str {
        match self {
            OperatorId::Helmholtz(_) => "helmholtz",
            OperatorId::Wave => "wave",
            OperatorId::DiracMinus => "dirac_minus",
            OperatorId::DiracPlus => "dirac_plus",
            OperatorId::ExtDerivAsdStage1 => "ext_deriv_asd_stage1",
            OperatorId::ExtDerivAsdStage2 => "ext_deriv_asd_stage2",
            OperatorId::HyperbolicHelmholtz(..) => "hyperbolic_helmholtz",
        }
    }

    /// Human-readable form including parameters.
    pub fn describe(&self) -> String {
        match self {
            OperatorId::Helmholtz(l) => format!("Δ + 2λ² (λ = {l})"),
            OperatorId::Wave => "□".into(),
            OperatorId::DiracMinus => "D⁻".into(),
            OperatorId::DiracPlus => "D⁺".into(),
            OperatorId::ExtDerivAsdStage1 => "d₋: Λ¹ → Λ²₋".into(),
            OperatorId::ExtDerivAsdStage2 => "d: Λ²₋ → Λ³".into(),
            OperatorId::HyperbolicHelmholtz(l, n) => format!("Δ − (λ² − {}) (λ = {l})", n * n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Kernel,
    Cokernel,
    /// Cohomology of a complex at the stage after the p-th map.
    ComplexStage(u32),
}

impl Side {
    pub fn tag(&self) -> String {
        match self {
            Side::Kernel => "kernel".into(),
            Side::Cokernel => "cokernel".into(),
            Side::ComplexStage(p) => format!("complex_stage:{p}"),
        }
    }
}

/// One isomorphism `H^degree_(c)(Z, bundle) ≅ side(operator)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recipe {
    pub bundle: BundleSpec,
    pub compact: bool,
    pub degree: u32,
    pub operator: OperatorId,
    pub side: Side,
}

/// Flat JSON row for a recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipeRecord {
    pub space: String,
    pub n: i32,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub compact: bool,
    pub degree: u32,
    pub operator: String,
    pub side: String,
}

impl Recipe {
    pub fn to_record(&self) -> RecipeRecord {
        RecipeRecord {
            space: self.bundle.space.tag(),
            n: self.bundle.homogeneity,
            lambda_re: self.bundle.lambda.re,
            lambda_im: self.bundle.lambda.im,
            compact: self.compact,
            degree: self.degree,
            operator: self.operator.tag().to_string(),
            side: self.side.tag(),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.compact { "_c" } else { "" };
        let side = match self.side {
            Side::Kernel => "Ker".to_string(),
            Side::Cokernel => "Coker".to_string(),
            Side::ComplexStage(p) => format!("H_{p}"),
        };
        write!(f, "H^{}{}({}) ≅ {}({}{})", self.degree, c, self.bundle, side, self.operator.describe(), c)
    }
}

/// V* ⊗ κ_Q. λ is negated by subtraction so that a zero part stays +0.
pub fn serre_dual(b: &BundleSpec) -> BundleSpec {
    BundleSpec {
        space: b.space,
        homogeneity: -b.homogeneity + b.space.canonical_degree(),
        lambda: Complex64::new(0.0, 0.0) - b.lambda,
    }
}

fn rec(bundle: BundleSpec, compact: bool, degree: u32, operator: OperatorId, side: Side) -> Recipe {
    Recipe { bundle, compact, degree, operator, side }
}

/// Every isomorphism tabulated for `b`, with degrees and sides as displayed in the examples.
pub fn lookup_recipe(b: &BundleSpec, compact: bool) -> Result<Vec<Recipe>, RecipeError> {
    let unknown = || RecipeError::UnknownBundle { bundle: *b, compact };
    let mut out = Vec::new();
    match b.space {
        SpaceId::MinitwistorR3 => {
            if b.homogeneity != -2 {
                return Err(unknown());
            }
            let op = OperatorId::Helmholtz(b.lambda);
            if compact {
                out.push(rec(*b, true, 0, op, Side::Kernel));
                out.push(rec(*b, true, 1, op, Side::Cokernel));
            } else {
                out.push(rec(*b, false, 1, op, Side::Kernel));
                out.push(rec(*b, false, 2, op, Side::Cokernel));
            }
        }
        SpaceId::MinkowskiCr => match (b.homogeneity, compact) {
            (-2, false) => out.push(rec(*b, false, 1, OperatorId::Wave, Side::Kernel)),
            (-2, true) => {
                out.push(rec(*b, true, 0, OperatorId::Wave, Side::Kernel));
                out.push(rec(*b, true, 1, OperatorId::Wave, Side::Cokernel));
            }
            (-3, false) => out.push(rec(*b, false, 1, OperatorId::DiracMinus, Side::Kernel)),
            (-1, true) => out.push(rec(*b, true, 1, OperatorId::DiracPlus, Side::Cokernel)),
            (-4, false) => {
                out.push(rec(*b, false, 1, OperatorId::ExtDerivAsdStage2, Side::Kernel))
            }
            (0, false) => {
                out.push(rec(*b, false, 1, OperatorId::ExtDerivAsdStage1, Side::ComplexStage(1)));
                out.push(rec(*b, false, 2, OperatorId::ExtDerivAsdStage1, Side::Cokernel));
            }
            (0, true) => {
                out.push(rec(*b, true, 0, OperatorId::ExtDerivAsdStage1, Side::ComplexStage(1)));
                out.push(rec(*b, true, 1, OperatorId::ExtDerivAsdStage1, Side::Cokernel));
            }
            _ => return Err(unknown()),
        },
        SpaceId::Hyperbolic { n } => {
            if n == 0 {
                return Err(unknown());
            }
            let op = OperatorId::HyperbolicHelmholtz(b.lambda, n);
            let tri = n * (n + 1) / 2;
            let mut push_family = |ker_degree: u32| {
                if compact {
                    out.push(rec(*b, true, ker_degree - 1, op, Side::Kernel));
                    out.push(rec(*b, true, ker_degree, op, Side::Cokernel));
                } else {
                    out.push(rec(*b, false, ker_degree, op, Side::Kernel));
                    out.push(rec(*b, false, ker_degree + 1, op, Side::Cokernel));
                }
            };
            // O(−2n) and O(−2) coincide when n = 1; the statements are then identical.
            let h = b.homogeneity;
            if h == -2 * n as i32 {
                push_family(tri);
            }
            if h == -2 && n != 1 {
                push_family(n);
            }
            if out.is_empty() {
                return Err(unknown());
            }
        }
    }
    Ok(out)
}

/// Degree of the compactly supported group carrying the same operator side.
pub fn compact_shift(r: &Recipe) -> i64 {
    r.degree as i64 - r.bundle.space.fibre_dim_eta() as i64
}

/// A Serre-duality pairing H^k_c(Z, V) × H^l(Z, V* ⊗ κ) → ℂ as displayed in the examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingEntry {
    pub compact_bundle: BundleSpec,
    pub compact_degree: u32,
    pub dual_bundle: BundleSpec,
    pub dual_degree: u32,
}

/// All displayed pairings for a space, instantiated at `lambda` (ignored on the CR quadric).
pub fn pairing_table(space: SpaceId, lambda: Complex64) -> Vec<PairingEntry> {
    match space {
        SpaceId::MinitwistorR3 => vec![PairingEntry {
            compact_bundle: BundleSpec::minitwistor(-2, lambda),
            compact_degree: 1,
            dual_bundle: BundleSpec::minitwistor(-2, -lambda),
            dual_degree: 1,
        }],
        SpaceId::MinkowskiCr => [(-2, -2), (-1, -3), (0, -4)]
            .into_iter()
            .map(|(c, d)| PairingEntry {
                compact_bundle: BundleSpec::minkowski(c),
                compact_degree: 1,
                dual_bundle: BundleSpec::minkowski(d),
                dual_degree: 1,
            })
            .collect(),
        SpaceId::Hyperbolic { n } => {
            let tri = n * (n + 1) / 2;
            let n2 = -2 * n as i32;
            vec![
                PairingEntry {
                    compact_bundle: BundleSpec::hyperbolic(n, -2, lambda),
                    compact_degree: n,
                    dual_bundle: BundleSpec::hyperbolic(n, n2, -lambda),
                    dual_degree: tri,
                },
                PairingEntry {
                    compact_bundle: BundleSpec::hyperbolic(n, n2, lambda),
                    compact_degree: tri,
                    dual_bundle: BundleSpec::hyperbolic(n, -2, -lambda),
                    dual_degree: n,
                },
            ]
        }
    }
}

/// Every tabulated bundle on `space` (at the given λ), in a fixed order.
pub fn tabulated_bundles(space: SpaceId, lambda: Complex64) -> Vec<BundleSpec> {
    match space {
        SpaceId::MinitwistorR3 => vec![BundleSpec::minitwistor(-2, lambda)],
        SpaceId::MinkowskiCr => (-4..=0).map(BundleSpec::minkowski).collect(),
        SpaceId::Hyperbolic { n } => {
            let mut v = vec![BundleSpec::hyperbolic(n, -2 * n as i32, lambda)];
            if n != 1 {
                v.push(BundleSpec::hyperbolic(n, -2, lambda));
            }
            v
        }
    }
}

/// Full recipe table for a space as JSON records (compact and non-compact).
pub fn recipe_table(space: SpaceId, lambda: Complex64) -> Vec<RecipeRecord> {
    let lambda = if space.carries_lambda() { lambda } else { Complex64::new(0.0, 0.0) };
    let mut rows = Vec::new();
    for b in tabulated_bundles(space, lambda) {
        for compact in [false, true] {
            if let Ok(rs) = lookup_recipe(&b, compact) {
                rows.extend(rs.iter().map(Recipe::to_record));
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> Complex64 {
        Complex64::new(0.5, -0.25)
    }

    #[test]
    fn canonical_bundles() {
        assert_eq!(SpaceId::MinitwistorR3.canonical_degree(), -4);
        assert_eq!(SpaceId::MinkowskiCr.canonical_degree(), -4);
        assert_eq!(SpaceId::Hyperbolic { n: 3 }.canonical_degree(), -8);
        assert_eq!(SpaceId::Hyperbolic { n: 2 }.q_rank(), 5);
    }

    #[test]
    fn serre_dual_examples() {
        let b = BundleSpec::minitwistor(-2, lam());
        assert_eq!(serre_dual(&b), BundleSpec::minitwistor(-2, -lam()));
        assert_eq!(serre_dual(&BundleSpec::minkowski(-2)), BundleSpec::minkowski(-2));
        assert_eq!(serre_dual(&BundleSpec::minkowski(0)), BundleSpec::minkowski(-4));
        for n in 1..6 {
            let b = BundleSpec::hyperbolic(n, -2, lam());
            assert_eq!(serre_dual(&b), BundleSpec::hyperbolic(n, -2 * n as i32, -lam()));
        }
    }

    #[test]
    fn serre_dual_is_involution() {
        for space in [SpaceId::MinitwistorR3, SpaceId::MinkowskiCr, SpaceId::Hyperbolic { n: 1 }, SpaceId::Hyperbolic { n: 4 }] {
            for b in tabulated_bundles(space, lam()) {
                assert_eq!(serre_dual(&serre_dual(&b)), b);
            }
        }
    }

    #[test]
    fn minitwistor_lookup() {
        let b = BundleSpec::minitwistor(-2, lam());
        let nc = lookup_recipe(&b, false).unwrap();
        assert_eq!(nc.len(), 2);
        assert_eq!((nc[0].degree, nc[0].side), (1, Side::Kernel));
        assert_eq!((nc[1].degree, nc[1].side), (2, Side::Cokernel));
        assert_eq!(nc[0].operator, OperatorId::Helmholtz(lam()));
        let c = lookup_recipe(&b, true).unwrap();
        assert_eq!((c[0].degree, c[0].side), (0, Side::Kernel));
        assert_eq!((c[1].degree, c[1].side), (1, Side::Cokernel));
    }

    #[test]
    fn minkowski_dirac_compact() {
        let r = lookup_recipe(&BundleSpec::minkowski(-1), true).unwrap();
        assert_eq!(r, vec![rec(BundleSpec::minkowski(-1), true, 1, OperatorId::DiracPlus, Side::Cokernel)]);
        assert!(lookup_recipe(&BundleSpec::minkowski(-1), false).is_err());
    }

    #[test]
    fn untabulated_bundles_error() {
        assert!(matches!(
            lookup_recipe(&BundleSpec::minkowski(7), false),
            Err(RecipeError::UnknownBundle { .. })
        ));
        assert!(lookup_recipe(&BundleSpec::minitwistor(-3, lam()), false).is_err());
        assert!(lookup_recipe(&BundleSpec::hyperbolic(3, -4, lam()), true).is_err());
    }

    #[test]
    fn compact_shift_examples() {
        let h = lookup_recipe(&BundleSpec::minitwistor(-2, lam()), false).unwrap();
        assert_eq!(compact_shift(&h[0]), 0);
        let w = lookup_recipe(&BundleSpec::minkowski(-2), false).unwrap();
        assert_eq!(compact_shift(&w[0]), 0);
        for n in 1..5u32 {
            let b = BundleSpec::hyperbolic(n, -2 * n as i32, lam());
            let r = lookup_recipe(&b, false).unwrap();
            assert_eq!(compact_shift(&r[0]), (n * (n + 1) / 2) as i64 - 1);
        }
    }

    #[test]
    fn compact_degrees_shift_elementwise() {
        for space in [SpaceId::MinitwistorR3, SpaceId::MinkowskiCr, SpaceId::Hyperbolic { n: 1 }, SpaceId::Hyperbolic { n: 3 }] {
            for b in tabulated_bundles(space, lam()) {
                let (Ok(nc), Ok(c)) = (lookup_recipe(&b, false), lookup_recipe(&b, true)) else {
                    continue;
                };
                for k in &c {
                    if let Some(a) = nc.iter().find(|a| a.side == k.side && a.operator == k.operator) {
                        assert_eq!(compact_shift(a), k.degree as i64, "{b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn pairings_are_serre_dual_and_fill_rank() {
        for space in [SpaceId::MinitwistorR3, SpaceId::MinkowskiCr, SpaceId::Hyperbolic { n: 1 }, SpaceId::Hyperbolic { n: 2 }, SpaceId::Hyperbolic { n: 5 }] {
            for p in pairing_table(space, lam()) {
                assert_eq!(serre_dual(&p.compact_bundle), p.dual_bundle);
                assert_eq!(p.compact_degree + p.dual_degree, space.q_rank());
                let c = lookup_recipe(&p.compact_bundle, true).unwrap();
                let k = lookup_recipe(&p.dual_bundle, false).unwrap();
                let coker = c.iter().find(|r| r.degree == p.compact_degree).unwrap();
                let ker = k.iter().find(|r| r.degree == p.dual_degree).unwrap();
                assert_ne!(coker.side, Side::Kernel);
                assert_ne!(ker.side, Side::Cokernel);
            }
        }
    }

    #[test]
    fn json_rows() {
        let rows = recipe_table(SpaceId::MinkowskiCr, lam());
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.lambda_re == 0.0 && r.lambda_im == 0.0));
        let s = serde_json::to_string(&rows[0]).unwrap();
        for key in ["space", "n", "lambda_re", "lambda_im", "compact", "degree", "operator", "side"] {
            assert!(s.contains(&format!("\"{key}\"")), "{s}");
        }
    }

    #[test]
    fn bundle_validation() {
        assert!(BundleSpec::new(SpaceId::MinkowskiCr, -2, Complex64::new(1.0, 0.0)).is_err());
        assert!(BundleSpec::new(SpaceId::Hyperbolic { n: 0 }, -2, lam()).is_err());
        assert!(BundleSpec::new(SpaceId::MinitwistorR3, -2, lam()).is_ok());
    }
}
