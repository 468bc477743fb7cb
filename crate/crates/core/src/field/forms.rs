//! Pointwise algebra of forms and spinors on Minkowski space.
//!
//! Two-forms are stored as the six components `F₀₁, F₀₂, F₀₃, F₁₂, F₁₃, F₂₃`
//! of `Σ_{μ<ν} F_{μν} dx^μ ∧ dx^ν`; three-forms as `F₀₁₂, F₀₁₃, F₀₂₃, F₁₂₃`.
//! Signature (+,−,−,−), volume form dx⁰∧dx¹∧dx²∧dx³, Hodge star
//! `(★F)_{μν} = ½ ε_{μνρσ} F^{ρσ}` with ε₀₁₂₃ = 1, so ★² = −1 on two-forms.
//! Λ²₋ is the (−i)-eigenspace of ★.

use num_complex::Complex;

use crate::scalar::Real;

pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
pub const TRIPLES: [(usize, usize, usize); 4] = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn pair_index(mu: usize, nu: usize) -> Option<(usize, f64)> {
    if mu == nu {
        return None;
    }
    let (a, b, s) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    PAIRS.iter().position(|&p| p == (a, b)).map(|k| (k, s))
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub fn hodge_star<T: Real>(f: &[Complex<T>]) -> [Complex<T>; 6] {
    [f[5], -f[4], f[3], -f[2], f[1], -f[0]]
}

/// ½(F + i★F).
pub fn asd_part<T: Real>(f: &[Complex<T>]) -> [Complex<T>; 6] {
    let s = hodge_star(f);
    let half = T::lit(0.5);
    std::array::from_fn(|k| (f[k] + i_unit::<T>() * s[k]) * half)
}

/// ½(F − i★F).
pub fn sd_part<T: Real>(f: &[Complex<T>]) -> [Complex<T>; 6] {
    let s = hodge_star(f);
    let half = T::lit(0.5);
    std::array::from_fn(|k| (f[k] - i_unit::<T>() * s[k]) * half)
}

/// ½ F_{μν} G^{μν}.
pub fn bilinear<T: Real>(f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
    PAIRS
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| f[k] * g[k] * T::lit(METRIC[a] * METRIC[b]))
        .fold(zero(), |acc, v| acc + v)
}

/// Anti-self-dual two-form with coefficients `c` in the basis orthonormal for
/// [`bilinear`]: `F₀ₖ = (i/√2) cₖ`, magnetic part fixed by ★F = −iF.
pub fn from_asd_coefficients<T: Real>(c: &[Complex<T>; 3]) -> [Complex<T>; 6] {
    let e = Complex::new(T::zero(), T::FRAC_1_SQRT_2());
    let (f01, f02, f03) = (e * c[0], e * c[1], e * c[2]);
    let i = i_unit::<T>();
    [f01, f02, f03, -i * f03, i * f02, -i * f01]
}

/// Coefficients of the anti-self-dual part of `f` in the basis of [`from_asd_coefficients`].
pub fn asd_coefficients<T: Real>(f: &[Complex<T>]) -> [Complex<T>; 3] {
    let a = asd_part(f);
    let s = Complex::new(T::zero(), -T::SQRT_2());
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Pauli-type matrices with x^{AA'} = Σ_μ x^μ σ_μ^{AA'}.
pub fn sigma<T: Real>(mu: usize) -> [[Complex<T>; 2]; 2] {
    let o = Complex::new(T::one(), T::zero());
    let z = zero::<T>();
    let i = i_unit::<T>();
    match mu {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// Two-form `F_{μν} = σ_μ^{AA'} ε_{AB} σ_ν^{BB'} φ_{A'B'}` of a symmetric primed spinor
/// given as `(φ₀₀, φ₀₁, φ₁₁)`. It is anti-self-dual.
pub fn spinor_to_two_form<T: Real>(phi: &[Complex<T>; 3]) -> [Complex<T>; 6] {
    let p = [[phi[0], phi[1]], [phi[1], phi[2]]];
    let eps = [[0.0, 1.0], [-1.0, 0.0]];
    let mut out = [zero(); 6];
    for (k, &(mu, nu)) in PAIRS.iter().enumerate() {
        let (sm, sn) = (sigma::<T>(mu), sigma::<T>(nu));
        let mut acc = zero();
        for a in 0..2 {
            for b in 0..2 {
                if eps[a][b] == 0.0 {
                    continue;
                }
                for ap in 0..2 {
                    for bp in 0..2 {
                        acc += sm[a][ap] * sn[b][bp] * p[ap][bp] * T::lit(eps[a][b]);
                    }
                }
            }
        }
        out[k] = acc;
    }
    out
}

/// Wedge of two two-forms as the coefficient of dx⁰∧dx¹∧dx²∧dx³.
pub fn wedge_top<T: Real>(f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
    // dx01∧dx23 = dx02∧dx31 = dx03∧dx12 = vol.
    f[0] * g[5] + f[5] * g[0] - f[1] * g[4] - f[4] * g[1] + f[2] * g[3] + f[3] * g[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn levi_civita(p: [usize; 4]) -> f64 {
        let mut s = 1.0;
        let mut v = p;
        for i in 0..4 {
            for j in 0..3 - i {
                if v[j] == v[j + 1] {
                    return 0.0;
                }
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    s = -s;
                }
            }
        }
        s
    }

    /// Full antisymmetric tensor from stored components.
    fn full(f: &[C]) -> [[C; 4]; 4] {
        let mut t = [[C::new(0.0, 0.0); 4]; 4];
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            t[a][b] = f[k];
            t[b][a] = -f[k];
        }
        t
    }

    fn star_oracle(f: &[C]) -> [C; 6] {
        let t = full(f);
        std::array::from_fn(|k| {
            let (m, n) = PAIRS[k];
            let mut acc = C::new(0.0, 0.0);
            for r in 0..4 {
                for s in 0..4 {
                    acc += t[r][s] * METRIC[r] * METRIC[s] * levi_civita([m, n, r, s]) * 0.5;
                }
            }
            acc
        })
    }

    fn rand6() -> impl Strategy<Value = [C; 6]> {
        prop::array::uniform6((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C::new(a, b)))
    }

    #[test]
    fn star_matches_levi_civita() {
        for k in 0..6 {
            let mut e = [C::new(0.0, 0.0); 6];
            e[k] = C::new(1.0, 0.0);
            assert_eq!(hodge_star(&e), star_oracle(&e));
        }
    }

    #[test]
    fn dx01_splits_evenly() {
        let mut f = [C::new(0.0, 0.0); 6];
        f[0] = C::new(1.0, 0.0);
        let a = asd_part(&f);
        let s = sd_part(&f);
        assert_eq!(a[0], C::new(0.5, 0.0));
        assert_eq!(a[5], C::new(0.0, -0.5));
        assert_eq!(s[0], C::new(0.5, 0.0));
        assert_eq!(s[5], C::new(0.0, 0.5));
    }

    #[test]
    fn basis_is_orthonormal_and_asd() {
        for j in 0..3 {
            for k in 0..3 {
                let mut cj = [C::new(0.0, 0.0); 3];
                let mut ck = cj;
                cj[j] = C::new(1.0, 0.0);
                ck[k] = C::new(1.0, 0.0);
                let (bj, bk) = (from_asd_coefficients(&cj), from_asd_coefficients(&ck));
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((bilinear(&bj, &bk) - C::new(want, 0.0)).norm() < 1e-15);
            }
            let mut c = [C::new(0.0, 0.0); 3];
            c[j] = C::new(1.0, 0.0);
            let b = from_asd_coefficients(&c);
            assert!(sd_part(&b).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn spinor_forms_are_asd() {
        let phi = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
        let f = spinor_to_two_form(&phi);
        assert_eq!(f, [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)]);
        let phi = [C::new(0.3, -1.0), C::new(2.0, 0.5), C::new(-0.7, 0.2)];
        let f = spinor_to_two_form(&phi);
        assert!(sd_part(&f).iter().all(|z| z.norm() < 1e-14));
        let back = from_asd_coefficients(&asd_coefficients(&f));
        for k in 0..6 {
            assert!((back[k] - f[k]).norm() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn projections_are_complementary(f in rand6()) {
            let a = asd_part(&f);
            let s = sd_part(&f);
            for k in 0..6 {
                prop_assert!((a[k] + s[k] - f[k]).norm() < 1e-14);
            }
            let aa = asd_part(&a);
            let ss = sd_part(&s);
            let sa = sd_part(&a);
            let as_ = asd_part(&s);
            for k in 0..6 {
                prop_assert!((aa[k] - a[k]).norm() < 1e-14);
                prop_assert!((ss[k] - s[k]).norm() < 1e-14);
                prop_assert!(sa[k].norm() < 1e-14 && as_[k].norm() < 1e-14);
            }
            let ss2 = hodge_star(&hodge_star(&f));
            for k in 0..6 {
                prop_assert!((ss2[k] + f[k]).norm() < 1e-15);
            }
        }

        #[test]
        fn wedge_star_is_bilinear_form(f in rand6(), g in rand6()) {
            // α ∧ ★β = ⟨α, β⟩ vol.
            let lhs = wedge_top(&f, &hodge_star(&g));
            prop_assert!((lhs - bilinear(&f, &g)).norm() < 1e-12);
        }
    }
}
