//! `recipe`, `transform` and `pair`.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use twistor_core::cocycle::{parse_cocycle, ContourSpec};
use twistor_core::field::io::{load_field, peek_dtype, save_field, write_csv};
use twistor_core::field::ops::sd_project;
use twistor_core::field::residual::residual_norm;
use twistor_core::field::{Geometry, GridField, GridSpec, Rank};
use twistor_core::pairing::{pair_asd, pair_scalar, pair_spinor, PairingReport};
use twistor_core::recipes::{lookup_recipe, serre_dual, BundleSpec, OperatorId, RecipeRecord, SpaceId};
use twistor_core::scalar::Real;
use twistor_core::transform::{transform_grid, CocycleCombination};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::grid::{cast_spec, load_grid};
use crate::report::{ensure_parent, Envelope};

/// Residuals at or below this multiple of max(1, ‖f‖∞) count as exact zeros.
const EXACT_RESIDUAL: f64 = 1e-12;

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re` or `re,im`, got `{s}`")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err("λ must be finite".into())
    }
}

pub fn parse_space(s: &str) -> Result<SpaceId, String> {
    SpaceId::parse(s).ok_or_else(|| format!("unknown space `{s}` (minitwistor, minkowski or hyperbolic:N)"))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecipeFormat {
    Json,
    Text,
}

#[derive(Debug, Serialize)]
struct BundleOut {
    space: String,
    n: i32,
    lambda: [f64; 2],
    display: String,
}

impl From<&BundleSpec> for BundleOut {
    fn from(b: &BundleSpec) -> Self {
        Self { space: b.space.tag(), n: b.homogeneity, lambda: [b.lambda.re, b.lambda.im], display: b.to_string() }
    }
}

#[derive(Debug, Serialize)]
struct RecipeBody {
    bundle: BundleOut,
    compact: bool,
    recipes: Vec<RecipeRecord>,
    statements: Vec<String>,
    serre_dual: BundleOut,
}

pub fn cmd_recipe(
    cfg: &RunConfig,
    space: SpaceId,
    n: i32,
    lambda: Complex64,
    compact: bool,
    format: RecipeFormat,
) -> Result<(), CliError> {
    let bundle = BundleSpec::new(space, n, lambda)?;
    let recipes = lookup_recipe(&bundle, compact)?;
    let dual = serre_dual(&bundle);
    match format {
        RecipeFormat::Text => {
            for r in &recipes {
                println!("{r}");
            }
            println!("Serre dual: {dual}");
            Ok(())
        }
        RecipeFormat::Json => {
            let body = RecipeBody {
                bundle: (&bundle).into(),
                compact,
                recipes: recipes.iter().map(|r| r.to_record()).collect(),
                statements: recipes.iter().map(|r| r.to_string()).collect(),
                serre_dual: (&dual).into(),
            };
            Envelope::new("recipe", cfg, body).emit(None)
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F64,
    F32,
}

pub struct TransformArgs {
    pub cocycle: PathBuf,
    pub grid: PathBuf,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub precision: Precision,
}

#[derive(Debug, Serialize)]
struct ContourOut {
    radius: f64,
    nodes: usize,
}

#[derive(Debug, Serialize)]
struct TransformBody {
    cocycle: PathBuf,
    field: PathBuf,
    precision: Precision,
    grid: GridSpec<f64>,
    rank: &'static str,
    contour: ContourOut,
    operator: String,
    field_max: f64,
    residual_h: f64,
    residual_h2: f64,
    /// log₂(residual_h / residual_h2); `null` when a residual is an exact zero.
    order: Option<f64>,
    exact: bool,
    /// Self-dual part of a two-form output at h and h/2.
    sd_residual: Option<[f64; 2]>,
}

/// Operator whose kernel a transform output of this shape belongs to.
fn output_operator(geometry: Geometry, rank: Rank, lambda: Complex64) -> Result<OperatorId, CliError> {
    match (geometry, rank) {
        (Geometry::R3, Rank::Scalar) => Ok(OperatorId::Helmholtz(lambda)),
        (Geometry::R4Lorentz, Rank::Scalar) => Ok(OperatorId::Wave),
        (Geometry::R4Lorentz, Rank::SpinorMinus) => Ok(OperatorId::DiracMinus),
        (Geometry::R4Lorentz, Rank::TwoForm) => Ok(OperatorId::ExtDerivAsdStage2),
        _ => Err(CliError::input(format!("no residual operator for a {rank:?} field on {geometry:?}"))),
    }
}

fn is_exact(residual: f64, scale: f64) -> bool {
    residual <= EXACT_RESIDUAL * scale.max(1.0)
}

struct TransformRun<T> {
    field: GridField<T>,
    body: TransformBody,
}

fn run_transform<T: Real>(text: &str, grid: &GridSpec<f64>, args: &TransformArgs, cfg: &RunConfig) -> Result<TransformRun<T>, CliError> {
    let cocycle = parse_cocycle::<T>(text)?;
    let lambda = Complex64::new(cocycle.lambda.re.as_f64(), cocycle.lambda.im.as_f64());
    let comb: CocycleCombination<T> = cocycle.into();
    let contour = ContourSpec::new(T::lit(cfg.contour_radius), Default::default(), cfg.contour_nodes)
        .ok_or_else(|| CliError::input("invalid contour"))?;
    let spec = cast_spec::<T>(grid);
    let field = transform_grid(&comb, &spec, &contour)?;
    let fine = transform_grid(&comb, &spec.refined(), &contour)?;
    let op = output_operator(spec.geometry, field.rank, lambda)?;
    let r = [residual_norm(&field, &op)?.as_f64(), residual_norm(&fine, &op)?.as_f64()];
    let scales = [field.max_norm().as_f64(), fine.max_norm().as_f64()];
    let exact = is_exact(r[0], scales[0]) || is_exact(r[1], scales[1]);
    let sd_residual = if field.rank == Rank::TwoForm {
        Some([sd_project(&field)?.max_norm().as_f64(), sd_project(&fine)?.max_norm().as_f64()])
    } else {
        None
    };
    let body = TransformBody {
        cocycle: args.cocycle.clone(),
        field: PathBuf::new(),
        precision: args.precision,
        grid: grid.clone(),
        rank: field.rank.tag(),
        contour: ContourOut { radius: cfg.contour_radius, nodes: cfg.contour_nodes },
        operator: op.describe(),
        field_max: scales[0],
        residual_h: r[0],
        residual_h2: r[1],
        order: (!exact).then(|| (r[0] / r[1]).log2()),
        exact,
        sd_residual,
    };
    Ok(TransformRun { field, body })
}

fn finish_transform<T: Real>(run: TransformRun<T>, args: &TransformArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let TransformRun { field, mut body } = run;
    let out = args.output.clone().unwrap_or_else(|| cfg.out_dir.join("field.twf"));
    ensure_parent(&out)?;
    save_field(&field, &out)?;
    if let Some(csv) = &args.csv {
        ensure_parent(csv)?;
        let file = std::fs::File::create(csv).map_err(|e| CliError::io(csv, e))?;
        write_csv(&field, std::io::BufWriter::new(file))?;
    }
    let report = args.report.clone().unwrap_or_else(|| out.with_extension("json"));
    body.field = out;
    Envelope::new("transform", cfg, body).emit(Some(&report))
}

pub fn cmd_transform(cfg: &RunConfig, args: &TransformArgs) -> Result<(), CliError> {
    let text = read_text(&args.cocycle)?;
    let grid = load_grid(&args.grid)?;
    match args.precision {
        Precision::F64 => finish_transform(run_transform::<f64>(&text, &grid, args, cfg)?, args, cfg),
        Precision::F32 => finish_transform(run_transform::<f32>(&text, &grid, args, cfg)?, args, cfg),
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairOperator {
    /// Δ + 2λ² on ℝ³.
    Helmholtz,
    /// □ on Minkowski space.
    Wave,
    /// ε(α, β) between S⁻ fields, compact side an image of D⁺.
    Dirac,
    /// Bilinear form on ASD two-forms, compact side an image of asd∘d.
    Asd,
    /// Δ_H − (λ² − 1) on upper half-space.
    Hyperbolic,
}

pub struct PairArgs {
    pub kernel: PathBuf,
    pub compact: PathBuf,
    pub operator: PairOperator,
    pub lambda: Complex64,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct PairBody {
    kernel: PathBuf,
    compact: PathBuf,
    dtype: String,
    threshold: f64,
    within_threshold: bool,
    #[serde(flatten)]
    pairing: PairingReport,
}

fn pair_fields<T: Real>(args: &PairArgs) -> Result<PairingReport, CliError> {
    let f: GridField<T> = load_field(&args.kernel)?;
    let g: GridField<T> = load_field(&args.compact)?;
    let report = match args.operator {
        PairOperator::Helmholtz => pair_scalar(&f, &g, &OperatorId::Helmholtz(args.lambda))?,
        PairOperator::Wave => pair_scalar(&f, &g, &OperatorId::Wave)?,
        PairOperator::Hyperbolic => pair_scalar(&f, &g, &OperatorId::HyperbolicHelmholtz(args.lambda, 1))?,
        PairOperator::Dirac => pair_spinor(&f, &g)?,
        PairOperator::Asd => pair_asd(&f, &g)?,
    };
    Ok(report)
}

pub fn cmd_pair(cfg: &RunConfig, args: &PairArgs) -> Result<(), CliError> {
    let (dk, dc) = (peek_dtype(&args.kernel)?, peek_dtype(&args.compact)?);
    if dk != dc {
        return Err(CliError::GridMismatch(format!("kernel is {dk}, compact field is {dc}")));
    }
    let pairing = match dk.as_str() {
        "complex64" => pair_fields::<f64>(args)?,
        "complex32" => pair_fields::<f32>(args)?,
        other => return Err(CliError::input(format!("unsupported dtype `{other}`"))),
    };
    let measured = pairing.well_definedness_residual;
    let threshold = cfg.pair_threshold;
    let body = PairBody {
        kernel: args.kernel.clone(),
        compact: args.compact.clone(),
        dtype: dk,
        threshold,
        within_threshold: measured <= threshold,
        pairing,
    };
    let report = args.report.clone().unwrap_or_else(|| cfg.out_dir.join("pairing.json"));
    Envelope::new("pair", cfg, body).emit(Some(&report))?;
    if measured > threshold {
        return Err(CliError::NotWellDefined { measured, threshold });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.4, 0.3").unwrap(), Complex64::new(0.4, 0.3));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn output_operators_follow_the_field_shape() {
        let l = Complex64::new(0.7, 0.0);
        assert_eq!(output_operator(Geometry::R3, Rank::Scalar, l).unwrap(), OperatorId::Helmholtz(l));
        assert_eq!(output_operator(Geometry::R4Lorentz, Rank::TwoForm, l).unwrap(), OperatorId::ExtDerivAsdStage2);
        assert!(output_operator(Geometry::H3UpperHalf, Rank::Scalar, l).is_err());
    }
}
