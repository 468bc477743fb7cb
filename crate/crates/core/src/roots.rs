//! Complex polynomial helpers: Horner evaluation, products and root finding.
//!
//! Coefficients are stored in ascending order, `p[k]` multiplies `ζ^k`.

use num_complex::Complex;

use crate::scalar::Real;

pub fn eval<T: Real>(p: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    p.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

pub fn mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex::new(T::zero(), T::zero()); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add_assign<T: Real>(a: &mut Vec<Complex<T>>, b: &[Complex<T>]) {
    if a.len() < b.len() {
        a.resize(b.len(), Complex::new(T::zero(), T::zero()));
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

pub fn pow<T: Real>(p: &[Complex<T>], k: u32) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::one(), T::zero())];
    for _ in 0..k {
        out = mul(&out, p);
    }
    out
}

/// Drops leading coefficients that are negligible relative to the largest one.
/// The dropped degrees correspond to roots at infinity.
pub fn trim<T: Real>(p: &[Complex<T>]) -> &[Complex<T>] {
    let scale = p.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let cut = scale * T::epsilon() * T::lit(64.0);
    let mut end = p.len();
    while end > 0 && p[end - 1].norm() <= cut {
        end -= 1;
    }
    &p[..end]
}

/// All finite roots of `p`, with multiplicity. Degrees lost to [`trim`] are
/// reported by [`roots_at_infinity`].
pub fn roots<T: Real>(p: &[Complex<T>]) -> Vec<Complex<T>> {
    let p = trim(p);
    match p.len() {
        0 | 1 => Vec::new(),
        2 => vec![-p[0] / p[1]],
        3 => quadratic(p[0], p[1], p[2]),
        _ => aberth(p),
    }
}

pub fn roots_at_infinity<T: Real>(p: &[Complex<T>]) -> usize {
    p.len() - trim(p).len()
}

fn quadratic<T: Real>(c0: Complex<T>, c1: Complex<T>, c2: Complex<T>) -> Vec<Complex<T>> {
    let two = T::lit(2.0);
    let disc = (c1 * c1 - c0 * c2 * T::lit(4.0)).sqrt();
    // Pick the sign that avoids cancellation, then use Vieta for the other root.
    let s = if (c1.conj() * disc).re >= T::zero() { c1 + disc } else { c1 - disc };
    if s.norm() == T::zero() {
        // c1 = 0 and disc = 0: double root at zero.
        return vec![Complex::new(T::zero(), T::zero()); 2];
    }
    let r1 = -s / (c2 * two);
    let r2 = -(c0 * two) / s;
    vec![r1, r2]
}

/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
fn aberth<T: Real>(p: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = p.len() - 1;
    let dp: Vec<Complex<T>> = p.iter().enumerate().skip(1).map(|(k, &c)| c * T::lit(k as f64)).collect();
    // Cauchy bound for the initial circle.
    let lead = p[n].norm();
    let radius = T::one() + p[..n].iter().map(|c| c.norm() / lead).fold(T::zero(), T::max);
    let r0 = radius * T::lit(0.5);
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let th = T::lit(2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4);
            Complex::from_polar(r0, th)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = T::zero();
        for i in 0..n {
            let pv = eval(p, z[i]);
            let dv = eval(&dp, z[i]);
            if pv.norm() == T::zero() {
                continue;
            }
            let ratio = pv / dv;
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] -= w;
            moved = moved.max(w.norm() / (T::one() + z[i].norm()));
        }
        if moved <= T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dv = eval(&dp, *zi);
            if dv.norm() == T::zero() {
                break;
            }
            let step = eval(p, *zi) / dv;
            if step.re.is_finite() && step.im.is_finite() {
                *zi -= step;
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn from_roots(rs: &[C]) -> Vec<C> {
        rs.iter().fold(vec![C::new(1.0, 0.0)], |acc, &r| mul(&acc, &[-r, C::new(1.0, 0.0)]))
    }

    fn matches(found: &[C], want: &[C], tol: f64) -> bool {
        let mut used = vec![false; want.len()];
        found.iter().all(|f| {
            let hit = want.iter().enumerate().position(|(k, w)| !used[k] && (f - w).norm() < tol);
            if let Some(k) = hit {
                used[k] = true;
                true
            } else {
                false
            }
        }) && found.len() == want.len()
    }

    #[test]
    fn linear_and_quadratic() {
        assert_eq!(roots(&[C::new(-0.3, 0.0), C::new(1.0, 0.0)]), vec![C::new(0.3, 0.0)]);
        let want = [C::new(0.2, -0.1), C::new(-3.0, 4.0)];
        let r = roots(&from_roots(&want));
        assert!(matches(&r, &want, 1e-13), "{r:?}");
    }

    #[test]
    fn quartic_and_sextic() {
        let want = [C::new(0.3, 0.0), C::new(-0.5, 0.2), C::new(2.0, -1.0), C::new(0.0, 3.0)];
        assert!(matches(&roots(&from_roots(&want)), &want, 1e-11));
        let want6 = [
            C::new(0.1, 0.1),
            C::new(-0.7, 0.0),
            C::new(1.5, 0.5),
            C::new(0.0, -2.0),
            C::new(3.0, 0.0),
            C::new(-1.0, -1.0),
        ];
        assert!(matches(&roots(&from_roots(&want6)), &want6, 1e-9));
    }

    #[test]
    fn vanishing_leading_coefficient_is_root_at_infinity() {
        let p = [C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(0.0, 0.0)];
        assert_eq!(roots(&p), vec![C::new(-0.5, 0.0)]);
        assert_eq!(roots_at_infinity(&p), 1);
    }

    #[test]
    fn horner() {
        let p = [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(2.0, 0.0)];
        let z = C::new(0.5, -1.0);
        assert!((eval(&p, z) - (p[0] + p[1] * z + p[2] * z * z)).norm() < 1e-15);
        assert_eq!(pow(&p, 0), vec![C::new(1.0, 0.0)]);
        assert_eq!(pow(&p, 2), mul(&p, &p));
    }
}
