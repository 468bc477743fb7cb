//! Grid description files.
//!
//! ```toml
//! geometry = "R4Lorentz"        # R3, R4Lorentz or H3UpperHalf
//! center = [0.0, 0.0, 0.0, 0.0]
//! half_width = 0.25
//! points = 17
//! ```
//!
//! or, for non-cubic grids, `origin`, `spacing` and `extents` in place of the
//! last three keys.

use std::path::Path;

use serde::Deserialize;
use twistor_core::field::{Geometry, GridSpec};
use twistor_core::scalar::Real;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    geometry: String,
    center: Option<Vec<f64>>,
    half_width: Option<f64>,
    points: Option<usize>,
    origin: Option<Vec<f64>>,
    spacing: Option<f64>,
    extents: Option<Vec<usize>>,
}

pub fn parse_grid(text: &str) -> Result<GridSpec<f64>, CliError> {
    let doc: GridDoc = toml::from_str(text).map_err(|e| CliError::input(format!("grid: {e}")))?;
    let geometry = Geometry::parse(&doc.geometry)
        .ok_or_else(|| CliError::input(format!("grid: unknown geometry `{}`", doc.geometry)))?;
    let spec = match doc {
        GridDoc { center: Some(c), half_width: Some(w), points: Some(n), origin: None, spacing: None, extents: None, .. } => {
            if c.len() != geometry.dim() {
                return Err(CliError::input(format!("grid: center needs {} entries", geometry.dim())));
            }
            GridSpec::cube(geometry, &c, w, n)?
        }
        GridDoc { origin: Some(o), spacing: Some(h), extents: Some(e), center: None, half_width: None, points: None, .. } => {
            GridSpec::new(geometry, o, h, e)?
        }
        _ => {
            return Err(CliError::input(
                "grid: give either center/half_width/points or origin/spacing/extents",
            ))
        }
    };
    Ok(spec)
}

pub fn load_grid(path: &Path) -> Result<GridSpec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_grid(&text)
}

pub fn cast_spec<T: Real>(s: &GridSpec<f64>) -> GridSpec<T> {
    GridSpec {
        geometry: s.geometry,
        origin: s.origin.iter().map(|&v| T::lit(v)).collect(),
        spacing: T::lit(s.spacing),
        extents: s.extents.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_and_explicit_forms_agree() {
        let a = parse_grid("geometry = \"R3\"\ncenter = [0.0, 0.0, 2.0]\nhalf_width = 0.5\npoints = 5\n").unwrap();
        let b = parse_grid("geometry = \"R3\"\norigin = [-0.5, -0.5, 1.5]\nspacing = 0.25\nextents = [5, 5, 5]\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_grids_are_input_errors() {
        for text in [
            "geometry = \"R5\"\ncenter = [0.0]\nhalf_width = 1.0\npoints = 3\n",
            "geometry = \"R3\"\ncenter = [0.0, 0.0]\nhalf_width = 1.0\npoints = 3\n",
            "geometry = \"R3\"\ncenter = [0.0, 0.0, 0.0]\nhalf_width = 1.0\npoints = 3\nspacing = 0.1\n",
            "geometry = \"H3UpperHalf\"\ncenter = [0.0, 0.0, 0.0]\nhalf_width = 1.0\npoints = 5\n",
        ] {
            assert_eq!(parse_grid(text).unwrap_err().exit_code(), 4, "{text}");
        }
    }
}
