//! TOML description of a rational cocycle.
//!
//! ```toml
//! space = "minkowski"          # or "minitwistor"
//! n = -2                       # declared homogeneity
//! lambda = [0.7, 0.0]          # minitwistor only; [re, im], default 0
//! scale = [1.0, 0.0]           # optional constant prefactor
//!
//! [[denominator]]              # CR quadric: linear form A·Z
//! covector = [[0.3, 0.0], [0.0, 0.2], [0.25, 0.0], [1.0, 0.0]]
//! power = 1                    # optional repeat count
//!
//! [[numerator]]                # minitwistor: Σ c η^j ζ^k, rows [j, k, re, im]
//! terms = [[0, 1, 1.0, 0.0]]
//! ```
//!
//! Every complex number is a two-element array `[re, im]`. A factor table has
//! exactly one of `covector` (CR quadric) or `terms` (minitwistor).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{CocycleError, Factor, Monomial, RationalCocycle};
use crate::recipes::SpaceId;
use crate::scalar::Real;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleDoc {
    space: String,
    n: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    numerator: Vec<FactorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    denominator: Vec<FactorDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    covector: Option<[[f64; 2]; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<[f64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power: Option<u32>,
}

fn cx<T: Real>(v: [f64; 2]) -> Complex<T> {
    Complex::new(T::lit(v[0]), T::lit(v[1]))
}

fn arr<T: Real>(z: Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn factor_from_doc<T: Real>(d: &FactorDoc, idx: usize) -> Result<Vec<Factor<T>>, CocycleError> {
    let f = match (&d.covector, &d.terms) {
        (Some(a), None) => Factor::Linear(a.map(cx)),
        (None, Some(rows)) => {
            if rows.is_empty() {
                return Err(CocycleError::Parse(format!("factor {idx}: empty term list")));
            }
            let mut terms = Vec::with_capacity(rows.len());
            for r in rows {
                let (j, k) = (r[0], r[1]);
                if j < 0.0 || k < 0.0 || j.fract() != 0.0 || k.fract() != 0.0 {
                    return Err(CocycleError::Parse(format!(
                        "factor {idx}: powers must be non-negative integers, got [{j}, {k}]"
                    )));
                }
                terms.push(Monomial { coeff: cx([r[2], r[3]]), eta_pow: j as u32, zeta_pow: k as u32 });
            }
            Factor::Poly(terms)
        }
        _ => {
            return Err(CocycleError::Parse(format!(
                "factor {idx}: exactly one of `covector` or `terms` is required"
            )))
        }
    };
    let p = d.power.unwrap_or(1);
    if p == 0 {
        return Err(CocycleError::Parse(format!("factor {idx}: power must be ≥ 1")));
    }
    Ok(vec![f; p as usize])
}

/// Parses and validates a cocycle description.
pub fn parse_cocycle<T: Real>(text: &str) -> Result<RationalCocycle<T>, CocycleError> {
    let doc: CocycleDoc = toml::from_str(text).map_err(|e| CocycleError::Parse(e.to_string()))?;
    let space = SpaceId::parse(&doc.space)
        .ok_or_else(|| CocycleError::Parse(format!("unknown space `{}`", doc.space)))?;
    let mut numerator = Vec::new();
    for (i, f) in doc.numerator.iter().enumerate() {
        numerator.extend(factor_from_doc(f, i)?);
    }
    let mut denominator = Vec::new();
    for (i, f) in doc.denominator.iter().enumerate() {
        denominator.extend(factor_from_doc(f, i)?);
    }
    let mut c = RationalCocycle::from_parts(
        space,
        doc.n,
        doc.lambda.map(cx).unwrap_or_else(|| Complex::new(T::zero(), T::zero())),
        numerator,
        denominator,
    );
    if let Some(s) = doc.scale {
        c.scale = cx(s);
    }
    c.validate()?;
    Ok(c)
}

fn factor_to_doc<T: Real>(f: &Factor<T>) -> FactorDoc {
    match f {
        Factor::Linear(a) => FactorDoc { covector: Some(a.map(arr)), terms: None, power: None },
        Factor::Poly(ts) => FactorDoc {
            covector: None,
            terms: Some(
                ts.iter()
                    .map(|m| [m.eta_pow as f64, m.zeta_pow as f64, m.coeff.re.as_f64(), m.coeff.im.as_f64()])
                    .collect(),
            ),
            power: None,
        },
    }
}

pub fn write_cocycle<T: Real>(c: &RationalCocycle<T>) -> String {
    let doc = CocycleDoc {
        space: c.space.tag(),
        n: c.homogeneity,
        lambda: (c.space == SpaceId::MinitwistorR3).then(|| arr(c.lambda)),
        scale: (c.scale != Complex::new(T::one(), T::zero())).then(|| arr(c.scale)),
        numerator: c.numerator.iter().map(factor_to_doc).collect(),
        denominator: c.denominator.iter().map(factor_to_doc).collect(),
    };
    toml::to_string(&doc).expect("cocycle document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    const ELEMENTARY: &str = r#"
space = "minkowski"
n = -2

[[denominator]]
covector = [[0.3, 0.0], [0.0, 0.2], [0.25, 0.0], [1.0, 0.0]]

[[denominator]]
covector = [[0.0, 0.2], [0.3, 0.0], [1.0, 0.0], [0.2, 0.0]]
"#;

    #[test]
    fn parses_elementary_state() {
        let c: RationalCocycle<f64> = parse_cocycle(ELEMENTARY).unwrap();
        assert_eq!(c.space, SpaceId::MinkowskiCr);
        assert_eq!(c.denominator.len(), 2);
        assert_eq!(c.denominator[0], Factor::Linear([C::new(0.3, 0.0), C::new(0.0, 0.2), C::new(0.25, 0.0), C::new(1.0, 0.0)]));
    }

    #[test]
    fn parses_minitwistor_with_power() {
        let text = r#"
space = "minitwistor"
n = -4
lambda = [0.7, 0.0]
[[numerator]]
terms = [[0, 1, 1.0, 0.0]]
[[denominator]]
terms = [[1, 0, 1.0, 0.0]]
power = 2
"#;
        let c: RationalCocycle<f64> = parse_cocycle(text).unwrap();
        assert_eq!(c.denominator.len(), 2);
        assert_eq!(c.lambda, C::new(0.7, 0.0));
    }

    #[test]
    fn round_trip() {
        let c: RationalCocycle<f64> = parse_cocycle(ELEMENTARY).unwrap();
        let again: RationalCocycle<f64> = parse_cocycle(&write_cocycle(&c)).unwrap();
        assert_eq!(c, again);
        let m = RationalCocycle::<f64>::zeta_power_over_eta(C::new(0.4, 0.3), 1).scaled(C::new(2.0, -1.0));
        assert_eq!(parse_cocycle::<f64>(&write_cocycle(&m)).unwrap(), m);
    }

    #[test]
    fn diagnostics() {
        assert!(matches!(parse_cocycle::<f64>("space = 3"), Err(CocycleError::Parse(_))));
        assert!(matches!(parse_cocycle::<f64>("space = \"ads\"\nn = 0"), Err(CocycleError::Parse(_))));
        let wrong_degree = ELEMENTARY.replace("n = -2", "n = -3");
        assert!(matches!(parse_cocycle::<f64>(&wrong_degree), Err(CocycleError::DegreeMismatch { .. })));
        let both = "space = \"minkowski\"\nn = -1\n[[denominator]]\ncovector = [[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]\nterms = [[1,0,1.0,0.0]]\n";
        assert!(matches!(parse_cocycle::<f64>(both), Err(CocycleError::Parse(_))));
    }
}
