//! Closed-form contour integrals for products of linear factors, used to
//! check the quadrature-based transforms from outside the library.

use num_complex::Complex64 as C;

/// `A·Z = c₀ + c₁ζ` for `Z = (iXπ, π)`, `π = (1, ζ)`, written out from
/// `X = [[x₀+x₃, x₁−ix₂], [x₁+ix₂, x₀−x₃]]`.
pub fn linear_coeffs(a: &[C; 4], x: &[f64; 4]) -> (C, C) {
    let i = C::i();
    let x00 = C::new(x[0] + x[3], 0.0);
    let x01 = C::new(x[1], -x[2]);
    let x10 = C::new(x[1], x[2]);
    let x11 = C::new(x[0] - x[3], 0.0);
    (i * (a[0] * x00 + a[1] * x10) + a[2], i * (a[0] * x01 + a[1] * x11) + a[3])
}

/// `(1/2πi)∮_{|ζ|=1} ζ^j / Π(c₀ + c₁ζ)` by residues at the roots inside the
/// unit circle. Equal factors are grouped; poles of order > 2 give `None`.
pub fn residue_sum(factors: &[(C, C)], j: i32) -> Option<C> {
    let mut total = C::new(0.0, 0.0);
    let mut seen: Vec<(C, C)> = Vec::new();
    for &f in factors {
        if seen.contains(&f) {
            continue;
        }
        seen.push(f);
        let (a, b) = f;
        let r = -a / b;
        if r.norm() >= 1.0 {
            continue;
        }
        let m = factors.iter().filter(|g| **g == f).count() as i32;
        let others: Vec<(C, C)> = factors.iter().copied().filter(|g| *g != f).collect();
        let rest = others.iter().fold(C::new(1.0, 0.0), |acc, (p, q)| acc * (p + q * r)).inv() / b.powi(m);
        total += match m {
            1 => r.powi(j) * rest,
            2 => {
                let log_deriv: C = others.iter().map(|(p, q)| q / (p + q * r)).sum();
                let d_pow = if j == 0 { C::new(0.0, 0.0) } else { r.powi(j - 1) * j as f64 };
                d_pow * rest - r.powi(j) * rest * log_deriv
            }
            _ => return None,
        };
    }
    Some(total)
}

pub fn oracle_at(covectors: &[[C; 4]], x: &[f64; 4], j: i32) -> Option<C> {
    let factors: Vec<(C, C)> = covectors.iter().map(|a| linear_coeffs(a, x)).collect();
    residue_sum(&factors, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_and_double_poles() {
        let a = C::new(0.3, 0.2);
        let b = C::new(2.0, -1.0);
        // 1/((ζ − a)(ζ − b)) has a single residue 1/(a − b) inside.
        let f = [(-a, C::new(1.0, 0.0)), (-b, C::new(1.0, 0.0))];
        assert!((residue_sum(&f, 0).unwrap() - (a - b).inv()).norm() < 1e-15);
        // ζ/(ζ − a)² has residue 1.
        let g = [(-a, C::new(1.0, 0.0)), (-a, C::new(1.0, 0.0))];
        assert!((residue_sum(&g, 1).unwrap() - 1.0).norm() < 1e-15);
        assert!(residue_sum(&[g[0], g[0], g[0]], 0).is_none());
    }
}
