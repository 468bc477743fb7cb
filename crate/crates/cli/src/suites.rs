//! Property suites behind `verify`. Each suite seeds its own generator from
//! the run seed, so results do not depend on which other suites ran.

use clap::ValueEnum;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twistor_core::cocycle::{ContourSpec, RationalCocycle};
use twistor_core::field::ops::{
    asd_project, dirac_plus_apply, ext_d_0form, ext_d_1form, helmholtz_apply, hyperbolic_helmholtz_apply, sd_project,
    wave_apply,
};
use twistor_core::field::residual::{convergence_report, order_from_residuals, ConvergenceReport};
use twistor_core::field::{Geometry, GridField, GridSpec, Rank, SupportBox};
use twistor_core::geometry::{PointMink, PointR3};
use twistor_core::pairing::injectivity::dirichlet_resonant_lambda;
use twistor_core::pairing::kernels::{
    asd_discrete_kernel, bump, dirac_discrete_kernel, helmholtz_discrete_wave, hyperbolic_discrete_kernel,
    wave_discrete_kernel,
};
use twistor_core::pairing::{asd_poincare_solve_with, compact_injectivity_check, pair_asd, pair_scalar, pair_spinor};
use twistor_core::recipes::OperatorId;
use twistor_core::transform::{
    dirac_transform, eta_roots, helmholtz_transform, maxwell_spinor, transform_grid, wave_transform, CocycleCombination,
};
use twistor_core::{GridField64, GridSpec64};

use crate::config::RunConfig;
use crate::oracle::oracle_at;

const ORDER_BAND: (f64, f64) = (1.7, 2.3);
const EXACT_PAIRING: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-10;
const ORACLE_POINTS: usize = 100;

const A: [C; 4] = [C::new(0.3, 0.0), C::new(0.0, 0.2), C::new(0.25, 0.0), C::new(1.0, 0.0)];
const B: [C; 4] = [C::new(0.0, 0.2), C::new(0.3, 0.0), C::new(1.0, 0.0), C::new(0.2, 0.0)];
const D: [C; 4] = [C::new(0.1, 0.0), C::new(0.0, -0.2), C::new(0.8, 0.0), C::new(-0.3, 0.0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Helmholtz,
    Wave,
    Dirac,
    Maxwell,
    Hyperbolic,
    Exactness,
    Injectivity,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Helmholtz => "helmholtz",
            Suite::Wave => "wave",
            Suite::Dirac => "dirac",
            Suite::Maxwell => "maxwell",
            Suite::Hyperbolic => "hyperbolic",
            Suite::Exactness => "exactness",
            Suite::Injectivity => "injectivity",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Helmholtz,
                Suite::Wave,
                Suite::Dirac,
                Suite::Maxwell,
                Suite::Hyperbolic,
                Suite::Exactness,
                Suite::Injectivity,
            ],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    /// `None` for a residual sequence that vanishes exactly.
    pub measured: Option<f64>,
    pub criterion: String,
    pub pass: bool,
}

struct Checks {
    suite: &'static str,
    out: Vec<Check>,
}

impl Checks {
    fn new(suite: Suite) -> Self {
        Self { suite: suite.name(), out: Vec::new() }
    }

    fn push(&mut self, check: impl Into<String>, measured: Option<f64>, criterion: impl Into<String>, pass: bool) {
        self.out.push(Check { suite: self.suite, check: check.into(), measured, criterion: criterion.into(), pass });
    }

    fn at_most(&mut self, check: impl Into<String>, measured: f64, limit: f64) {
        self.push(check, Some(measured), format!("≤ {limit:.0e}"), measured <= limit);
    }

    fn at_least(&mut self, check: impl Into<String>, measured: f64, limit: f64) {
        self.push(check, Some(measured), format!("≥ {limit}"), measured >= limit);
    }

    fn order_in_band(&mut self, check: impl Into<String>, r: &ConvergenceReport<f64>, allow_exact: bool) {
        let criterion = format!("∈ [{}, {}]{}", ORDER_BAND.0, ORDER_BAND.1, if allow_exact { " or exact" } else { "" });
        let pass = if r.is_exact() { allow_exact } else { (ORDER_BAND.0..=ORDER_BAND.1).contains(&r.order) };
        self.push(check, (!r.is_exact()).then_some(r.order), criterion, pass);
    }

    /// Decay at least second-order-like; an exact zero decays faster than any power.
    fn order_at_least(&mut self, check: impl Into<String>, r: &ConvergenceReport<f64>) {
        let pass = r.is_exact() || r.order >= ORDER_BAND.0;
        self.push(check, (!r.is_exact()).then_some(r.order), format!("≥ {} or exact", ORDER_BAND.0), pass);
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Vec<Check> {
    suite
        .members()
        .into_iter()
        .flat_map(|s| {
            let mut c = Checks::new(s);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            match s {
                Suite::Helmholtz => helmholtz(&mut c, &mut rng),
                Suite::Wave => wave(&mut c, &mut rng),
                Suite::Dirac => dirac(&mut c, &mut rng),
                Suite::Maxwell => maxwell(&mut c, &mut rng),
                Suite::Hyperbolic => hyperbolic(&mut c),
                Suite::Exactness => exactness(&mut c, &mut rng, cfg),
                Suite::Injectivity => injectivity(&mut c),
                Suite::All => unreachable!("expanded by members()"),
            }
            c.out
        })
        .collect()
}

// ---------------------------------------------------------------------------

fn levels(spec: &GridSpec64) -> [GridSpec64; 3] {
    let s2 = spec.refined();
    let s4 = s2.refined();
    [spec.clone(), s2, s4]
}

fn mink_box() -> GridSpec64 {
    GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.25, 9).expect("valid grid")
}

fn transform_levels(state: &CocycleCombination<f64>) -> [GridField64; 3] {
    levels(&mink_box()).map(|s| transform_grid(state, &s, &ContourSpec::unit()).expect("pole-free state"))
}

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(-0.25..0.25))
}

fn rel(got: C, want: C) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

/// Mean log₂ ratio of successive magnitudes.
fn decay(v: [f64; 3]) -> f64 {
    ((v[0] / v[1]).log2() + (v[1] / v[2]).log2()) * 0.5
}

fn state(covectors: &[[C; 4]]) -> CocycleCombination<f64> {
    RationalCocycle::minkowski_inverse_product(covectors).into()
}

/// Largest relative change of a transform when the contour radius moves
/// within the pole-free annulus around the unit circle.
fn radius_drift(rng: &mut ChaCha8Rng, samples: usize, eval: impl Fn(&[f64; 4], &ContourSpec<f64>) -> Option<Vec<C>>) -> (f64, usize) {
    let unit = ContourSpec::unit();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for _ in 0..samples {
        let x = random_point(rng);
        let other = unit.with_radius(rng.gen_range(0.75..1.3));
        if let (Some(a), Some(b)) = (eval(&x, &other), eval(&x, &unit)) {
            worst = a.iter().zip(&b).map(|(p, q)| rel(*p, *q)).fold(worst, f64::max);
            compared += 1;
        }
    }
    (worst, compared)
}

/// Mink transforms agree across radii only if no pole crosses; skip those points.
fn same_side(covectors: &[[C; 4]], x: &[f64; 4], radius: f64) -> bool {
    covectors.iter().all(|a| {
        let (c0, c1) = crate::oracle::linear_coeffs(a, x);
        let r = (-c0 / c1).norm();
        (r < 1.0) == (r < radius)
    })
}

// ---------------------------------------------------------------------------

fn helmholtz(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let spec = GridSpec::cube(Geometry::R3, &[0.0, 0.0, 2.0], 0.5, 17).expect("valid grid");
    let contour = ContourSpec::unit();
    for lambda in [C::new(0.0, 0.0), C::new(0.7, 0.0), C::new(0.4, 0.3)] {
        for k in 0..3 {
            let f: CocycleCombination<f64> = RationalCocycle::zeta_power_over_eta(lambda, k).into();
            let [a, b, d] = levels(&spec).map(|s| transform_grid(&f, &s, &contour).expect("pole-free"));
            let r = convergence_report(&a, &b, &d, &OperatorId::Helmholtz(lambda)).expect("nested grids");
            c.order_in_band(format!("ζ^{k}/η, λ = {lambda}: (Δ+2λ²) order 17³→65³"), &r, false);
        }
    }

    let helm: CocycleCombination<f64> = RationalCocycle::zeta_power_over_eta(C::new(0.4, 0.3), 1).into();
    let (drift, n) = radius_drift(rng, 60, |x, other| {
        let p = PointR3::new(x[1], x[2], 1.0 + 2.0 * x[0]);
        let apart = eta_roots(&p).iter().all(|z| (z.norm() - 1.0) * (z.norm() - other.radius) > 0.0);
        apart.then(|| vec![helmholtz_transform(&helm, &p, other).expect("pole-free")])
    });
    c.at_most(format!("contour radius drift ({n} points)"), drift, DRIFT_TOL);

    let lam = C::new(0.7, 0.0);
    let op = OperatorId::Helmholtz(lam);
    let r3 = GridSpec::cube(Geometry::R3, &[0.0; 3], 0.5, 17).expect("valid grid");
    let center = [0.03, -0.02, 0.01];
    let img = |s: &GridSpec64| helmholtz_apply(&bump(s, Rank::Scalar, 0, &center, 0.2).expect("bump fits"), lam).expect("R3");
    let exact = pair_scalar(&helmholtz_discrete_wave(&r3, lam, 0), &img(&r3), &op).expect("pairing").value().norm();
    c.at_most("⟨discrete kernel, (Δ+2λ²)h⟩", exact, EXACT_PAIRING);
    let k = 2f64.sqrt() * lam.re;
    let analytic = levels(&r3).map(|s| {
        let f = GridField::scalar_from_fn(&s, |x: &[f64]| C::new(0.0, k * (0.6 * x[0] + 0.8 * x[2])).exp());
        pair_scalar(&f, &img(&s), &op).expect("pairing").value().norm()
    });
    c.at_least("⟨plane wave, (Δ+2λ²)h⟩ decay order", decay(analytic), ORDER_BAND.0);
}

fn wave(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let st = state(&[A, B]);
    let contour = ContourSpec::unit();
    let worst = (0..ORACLE_POINTS)
        .map(|_| {
            let x = random_point(rng);
            let got = wave_transform(&st, &PointMink { coords: x }, &contour).expect("pole-free");
            rel(got, oracle_at(&[A, B], &x, 0).expect("simple poles"))
        })
        .fold(0.0, f64::max);
    c.at_most(format!("1/((A·Z)(B·Z)) vs residues ({ORACLE_POINTS} points)"), worst, ORACLE_TOL);

    let l = transform_levels(&st);
    let r = convergence_report(&l[0], &l[1], &l[2], &OperatorId::Wave).expect("nested grids");
    c.order_in_band("□ order 9⁴→33⁴", &r, false);

    let (drift, n) = radius_drift(rng, 60, |x, other| {
        same_side(&[A, B], x, other.radius)
            .then(|| vec![wave_transform(&st, &PointMink { coords: *x }, other).expect("pole-free")])
    });
    c.at_most(format!("contour radius drift ({n} points)"), drift, DRIFT_TOL);

    let m = mink_box();
    let img = |s: &GridSpec64| wave_apply(&bump(s, Rank::Scalar, 0, &[0.01; 4], 0.1).expect("bump fits")).expect("R4");
    let g = |t: f64| C::new((3.0 * t).sin(), t * t);
    let exact = pair_scalar(&wave_discrete_kernel(&m, g), &img(&m), &OperatorId::Wave).expect("pairing").value().norm();
    c.at_most("⟨discrete kernel, □h⟩", exact, EXACT_PAIRING);
    let analytic = levels(&m).map(|s| {
        let f = GridField::scalar_from_fn(&s, |x: &[f64]| C::new(0.0, 5.0 * (x[0] - 0.6 * x[1] - 0.8 * x[2])).exp());
        pair_scalar(&f, &img(&s), &OperatorId::Wave).expect("pairing").value().norm()
    });
    c.at_least("⟨null plane wave, □h⟩ decay order", decay(analytic), ORDER_BAND.0);
}

fn dirac(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let covs = [A, B, D];
    let st = state(&covs);
    let contour = ContourSpec::unit();
    let mut worst: f64 = 0.0;
    for _ in 0..ORACLE_POINTS {
        let x = random_point(rng);
        let s = dirac_transform(&st, &PointMink { coords: x }, &contour).expect("pole-free");
        for j in 0..2 {
            worst = worst.max(rel(s.components[j], oracle_at(&covs, &x, j as i32).expect("simple poles")));
        }
    }
    c.at_most(format!("π_{{A'}}/((A·Z)(B·Z)(D·Z)) vs residues ({ORACLE_POINTS} points)"), worst, ORACLE_TOL);

    let l = transform_levels(&st);
    let r = convergence_report(&l[0], &l[1], &l[2], &OperatorId::DiracMinus).expect("nested grids");
    c.order_in_band("D⁻ order 9⁴→33⁴", &r, false);

    let (drift, n) = radius_drift(rng, 60, |x, other| {
        same_side(&covs, x, other.radius)
            .then(|| dirac_transform(&st, &PointMink { coords: *x }, other).expect("pole-free").components.to_vec())
    });
    c.at_most(format!("contour radius drift ({n} points)"), drift, DRIFT_TOL);

    let m = mink_box();
    let img = |s: &GridSpec64| dirac_plus_apply(&bump(s, Rank::SpinorPlus, 1, &[0.01; 4], 0.1).expect("bump fits")).expect("R4");
    let g = |t: f64| C::new((3.0 * t).sin(), t * t);
    let exact = pair_spinor(&dirac_discrete_kernel(&m, g), &img(&m)).expect("pairing").value().norm();
    c.at_most("ε(discrete kernel, D⁺γ)", exact, EXACT_PAIRING);
    let analytic: [f64; 3] = std::array::from_fn(|k| pair_spinor(&l[k], &img(&l[k].spec)).expect("pairing").value().norm());
    c.at_least("ε(transform output, D⁺γ) decay order", decay(analytic), ORDER_BAND.0);

    let beta = bump(&m, Rank::SpinorMinus, 0, &[0.0; 4], 0.15)
        .and_then(|b| b.axpy(C::new(0.3, -0.7), &bump(&m, Rank::SpinorMinus, 1, &[0.01; 4], 0.12)?))
        .and_then(|b| b.with_support(SupportBox::centered(&m, 5)))
        .expect("bumps fit");
    let skew = pair_spinor(&beta, &beta).expect("pairing").value().norm();
    c.at_most("ε(β, β)", skew, 1e-14);
}

fn maxwell(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let covs = [A, A, B, D];
    let st = state(&covs);
    let contour = ContourSpec::unit();
    let mut worst: f64 = 0.0;
    for _ in 0..ORACLE_POINTS {
        let x = random_point(rng);
        let phi = maxwell_spinor(&st, &PointMink { coords: x }, &contour).expect("pole-free");
        for (j, v) in phi.iter().enumerate() {
            worst = worst.max(rel(*v, oracle_at(&covs, &x, j as i32).expect("double poles at most")));
        }
    }
    c.at_most(format!("π_{{A'}}π_{{B'}}/((A·Z)²(B·Z)(D·Z)) vs residues ({ORACLE_POINTS} points)"), worst, ORACLE_TOL);

    let l = transform_levels(&st);
    let r = convergence_report(&l[0], &l[1], &l[2], &OperatorId::ExtDerivAsdStage2).expect("nested grids");
    c.order_at_least("d(F) decay order 9⁴→33⁴", &r);
    let sd: [f64; 3] = std::array::from_fn(|k| sd_project(&l[k]).expect("two-form").max_norm());
    let scales: [f64; 3] = std::array::from_fn(|k| l[k].max_norm());
    c.order_at_least("sd(F) decay order 9⁴→33⁴", &order_from_residuals(sd, scales));

    let m = mink_box();
    let img = |s: &GridSpec64| {
        let w = bump(s, Rank::OneForm, 2, &[0.01; 4], 0.1).expect("bump fits");
        asd_project(&ext_d_1form(&w).expect("R4")).expect("two-form")
    };
    let g = |t: f64| C::new((3.0 * t).sin(), t * t);
    let exact = pair_asd(&asd_discrete_kernel(&m, g), &img(&m)).expect("pairing").value().norm();
    c.at_most("⟨discrete ASD kernel, asd dω⟩", exact, EXACT_PAIRING);
    let analytic: [f64; 3] = std::array::from_fn(|k| pair_asd(&l[k], &img(&l[k].spec)).expect("pairing").value().norm());
    c.at_least("⟨transform output, asd dω⟩ decay order", decay(analytic), ORDER_BAND.0);
}

fn hyperbolic(c: &mut Checks) {
    let spec = GridSpec::cube(Geometry::H3UpperHalf, &[0.0, 0.0, 1.0], 0.5, 17).expect("valid grid");
    for lam in [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.5, 0.5)] {
        let s = lam + 1.0;
        let [a, b, d] = levels(&spec).map(|sp| GridField::scalar_from_fn(&sp, |x: &[f64]| (s * x[2].ln()).exp()));
        let r = convergence_report(&a, &b, &d, &OperatorId::HyperbolicHelmholtz(lam, 1)).expect("nested grids");
        // y² (λ = 1) is reproduced exactly by second-order stencils.
        c.order_in_band(format!("y^(1+λ), λ = {lam}: (Δ_H − (λ²−1)) order"), &r, true);
    }

    let lam = C::new(0.5, 0.5);
    let op = OperatorId::HyperbolicHelmholtz(lam, 1);
    let img = |s: &GridSpec64| {
        hyperbolic_helmholtz_apply(&bump(s, Rank::Scalar, 0, &[0.02, -0.01, 1.03], 0.2).expect("bump fits"), lam).expect("H3")
    };
    let kernel = hyperbolic_discrete_kernel(&spec, lam).expect("H3");
    let exact = pair_scalar(&kernel, &img(&spec), &op).expect("pairing").value().norm();
    c.at_most("⟨discrete kernel, (Δ_H − (λ²−1))h⟩", exact, EXACT_PAIRING);
    let analytic = levels(&spec).map(|s| {
        let f = GridField::scalar_from_fn(&s, |x: &[f64]| ((lam + 1.0) * x[2].ln()).exp());
        pair_scalar(&f, &img(&s), &op).expect("pairing").value().norm()
    });
    c.at_least("⟨y^(1+λ), (Δ_H − (λ²−1))h⟩ decay order", decay(analytic), ORDER_BAND.0);
}

fn exactness(c: &mut Checks, rng: &mut ChaCha8Rng, cfg: &RunConfig) {
    let s = GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.25, 17).expect("valid grid");
    let bound = cfg.poincare.tol_out_c * s.spacing * s.spacing;
    for k in 0..5 {
        let center: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.05..0.05));
        let radius = rng.gen_range(0.08..0.13);
        let amp = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let g = bump(&s, Rank::Scalar, 0, &center, radius).expect("bump fits").scale(amp);
        let omega = ext_d_0form(&g).expect("R4");
        let label = format!("bump {k} (r = {radius:.3})");
        let sol = match asd_poincare_solve_with(&omega, cfg.poincare) {
            Ok(sol) => sol,
            Err(e) => {
                c.push(format!("{label}: solve"), None, format!("succeeds ({e})"), false);
                continue;
            }
        };
        let err = sol.field.axpy(C::new(-1.0, 0.0), &g).expect("same grid").max_norm();
        c.at_most(format!("{label}: max |g − primitive|"), err, bound);
        let enlarged = omega.support_box.clone().expect("bump has a box").enlarged(1, &s);
        let leak = (0..s.len())
            .filter(|&n| !enlarged.contains(&s.multi(n)[..4]))
            .map(|n| sol.field.values[n].norm())
            .fold(0.0, f64::max);
        c.push(format!("{label}: primitive outside enlarged box"), Some(leak), "= 0", leak == 0.0);
        c.at_most(format!("{label}: path residual / ‖ω‖∞"), sol.path_residual / omega.max_norm(), 1e-10);
    }
}

fn injectivity(c: &mut Checks) {
    let s3 = GridSpec::cube(Geometry::R3, &[0.0; 3], 0.5, 9).expect("valid grid");
    let b3 = SupportBox::centered(&s3, 5);
    let resonant = dirichlet_resonant_lambda(s3.spacing, 5);
    let s4 = GridSpec::cube(Geometry::R4Lorentz, &[0.0; 4], 0.3, 7).expect("valid grid");
    let b4 = SupportBox::centered(&s4, 3);
    let cases = [
        ("9³ / 5³", OperatorId::Helmholtz(C::new(0.0, 0.0)), &s3, &b3),
        ("9³ / 5³, Dirichlet-resonant λ", OperatorId::Helmholtz(C::new(resonant, 0.0)), &s3, &b3),
        ("7⁴ / 3⁴", OperatorId::Wave, &s4, &b4),
        ("7⁴ / 3⁴", OperatorId::DiracMinus, &s4, &b4),
    ];
    for (grid, op, s, b) in cases {
        match compact_injectivity_check(&op, s, b) {
            Ok(r) => c.push(
                format!("σ_min of {} on {grid} ({}×{})", r.operator, r.rows, r.cols),
                Some(r.sigma_min),
                "> 1e-6",
                r.sigma_min > 1e-6,
            ),
            Err(e) => c.push(format!("{} on {grid}", op.describe()), None, format!("runs ({e})"), false),
        }
    }
}
