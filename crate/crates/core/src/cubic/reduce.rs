//! Reduction of binary cubic forms under `{+-f . gamma : gamma in GL_2(Z)}`.
//!
//! Positive discriminant: the Hessian `(P, Q, R)` is positive definite and
//! the form is weakly reduced when `0 <= Q <= P <= R`.
//!
//! Negative discriminant: write `f = a (x - theta y)(x^2 - s x y + t y^2)`
//! with `theta` the real root. The quadratic factor plays the Hessian's role
//! and is reduced when `0 <= s <= 1 <= t`. Its signs are read exactly off
//! integer polynomials in the coefficients:
//!
//! * `ad - bc` has the sign of `s`,
//! * `(a + b)^2 + ac - (ad - bc)` has the sign of `1 - s`,
//! * `(a - b)^2 + ac + (ad - bc)` has the sign of `1 + s`,
//! * `d^2 - bd + ac - a^2` has the sign of `t - 1`.
//!
//! In both cases `a > 0` is also required. Interior points of the reduced
//! region have exactly one representative per class; on the boundary the
//! class's weakly reduced forms are all related by matrices with entries in
//! `{-1, 0, 1}`, and the lexicographically smallest `(a, b, c, d)` wins.

use super::form::{small_unimodular, CubicForm, Transform};
use crate::error::{Error, Result};

/// Exact sign data for a negative-discriminant form.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ComplexFactorSigns {
    /// sign of `s`
    pub s0: i128,
    /// sign of `1 - s`
    pub s1: i128,
    /// sign of `1 + s`
    pub s2: i128,
    /// sign of `t - 1`
    pub t: i128,
}

pub(crate) fn complex_factor_signs(f: &CubicForm) -> ComplexFactorSigns {
    let (a, b, c, d) = (i128::from(f.a), i128::from(f.b), i128::from(f.c), i128::from(f.d));
    let cross = a * d - b * c;
    ComplexFactorSigns {
        s0: cross,
        s1: (a + b) * (a + b) + a * c - cross,
        s2: (a - b) * (a - b) + a * c + cross,
        t: d * d - b * d + a * c - a * a,
    }
}

/// Whether `f` lies in the (closed) reduced region, including `a > 0`.
pub fn is_weakly_reduced(f: &CubicForm) -> bool {
    if f.a <= 0 {
        return false;
    }
    let disc = f.discriminant();
    if disc > 0 {
        let (p, q, r) = f.hessian();
        0 <= q && q <= p && p <= r
    } else if disc < 0 {
        let s = complex_factor_signs(f);
        s.s0 >= 0 && s.s1 >= 0 && s.t >= 0
    } else {
        false
    }
}

/// Whether a weakly reduced `f` sits on a face of the reduced region.
pub(crate) fn on_boundary(f: &CubicForm, disc: i128) -> bool {
    if disc > 0 {
        let (p, q, r) = f.hessian();
        q == 0 || q == p || p == r
    } else {
        let s = complex_factor_signs(f);
        s.s0 == 0 || s.s1 == 0 || s.t == 0
    }
}

/// `+-f . gamma` for every small unimodular `gamma`, normalized to a
/// positive leading coefficient, keeping the weakly reduced ones.
fn reduced_neighbours(f: &CubicForm) -> impl Iterator<Item = CubicForm> + '_ {
    small_unimodular().filter_map(move |g| {
        let h = f.transform(&g);
        let h = if h.a < 0 { h.neg() } else { h };
        is_weakly_reduced(&h).then_some(h)
    })
}

/// For a weakly reduced boundary form: no equivalent weakly reduced form is
/// lexicographically smaller.
pub(crate) fn is_boundary_minimum(f: &CubicForm) -> bool {
    reduced_neighbours(f).all(|h| h >= *f)
}

/// Whether `f` is the chosen representative of its class.
pub fn is_class_representative(f: &CubicForm) -> bool {
    if !is_weakly_reduced(f) {
        return false;
    }
    let disc = f.discriminant();
    !on_boundary(f, disc) || is_boundary_minimum(f)
}

/// The class representative equivalent to `f`.
///
/// `f` must have non-zero discriminant and no rational linear factor.
pub fn reduce(f: &CubicForm) -> Result<CubicForm> {
    let disc = f.discriminant();
    if disc == 0 {
        return Err(Error::domain("form", "zero discriminant"));
    }
    if f.is_reducible() {
        return Err(Error::domain("form", "has a rational linear factor"));
    }
    let mut g = *f;
    for _ in 0..10_000 {
        if g.a < 0 {
            g = g.neg();
        }
        if is_weakly_reduced(&g) {
            let best = reduced_neighbours(&g).fold(g, |m, h| m.min(h));
            return Ok(best);
        }
        let step = if disc > 0 { hessian_step(&g) } else { complex_step(&g) };
        g = g.transform(&step);
    }
    Err(Error::Invariant("reduction did not converge"))
}

/// One Gauss step on the Hessian.
fn hessian_step(f: &CubicForm) -> Transform {
    let (p, q, r) = f.hessian();
    if q.abs() > p {
        // Translating x -> x + n y sends Q to Q + 2nP.
        let n = round_div(-q, 2 * p);
        Transform { p: 1, q: n as i64, r: 0, s: 1 }
    } else if p > r {
        Transform { p: 0, q: 1, r: 1, s: 0 }
    } else {
        Transform { p: 1, q: 0, r: 0, s: -1 }
    }
}

/// One Gauss step on the complex-root factor, with exact signs deciding the
/// move and floating point only choosing the translation length.
fn complex_step(f: &CubicForm) -> Transform {
    let signs = complex_factor_signs(f);
    if signs.s1 < 0 || signs.s2 < 0 {
        // s -> s - 2n under x -> x + n y.
        let theta = real_root(f);
        let s = -(f.b as f64) / (f.a as f64) - theta;
        let mut n = libm::round(s / 2.0) as i64;
        if n == 0 {
            n = if signs.s1 < 0 { 1 } else { -1 };
        }
        Transform { p: 1, q: n, r: 0, s: 1 }
    } else if signs.t < 0 {
        Transform { p: 0, q: 1, r: 1, s: 0 }
    } else {
        Transform { p: 1, q: 0, r: 0, s: -1 }
    }
}

fn round_div(n: i128, d: i128) -> i128 {
    debug_assert!(d > 0);
    (2 * n + d).div_euclid(2 * d)
}

/// The real root of `f(x, 1)` for a negative-discriminant form with `a != 0`,
/// by bisection.
pub(crate) fn real_root(f: &CubicForm) -> f64 {
    let (a, b, c, d) = (f.a as f64, f.b as f64, f.c as f64, f.d as f64);
    let eval = |x: f64| ((a * x + b) * x + c) * x + d;
    let bound = 1.0 + (libm::fabs(b).max(libm::fabs(c)).max(libm::fabs(d))) / libm::fabs(a);
    let (mut lo, mut hi) = (-bound, bound);
    let lo_sign = eval(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (eval(mid) < 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(s, t)` of the monic complex factor, in floating point.
    fn complex_factor(f: &CubicForm) -> (f64, f64) {
        let theta = real_root(f);
        let s = -(f.b as f64) / (f.a as f64) - theta;
        let t = f.c as f64 / f.a as f64 - s * theta;
        (s, t)
    }

    #[test]
    fn exact_signs_track_the_quadratic_factor() {
        let mut checked = 0;
        for a in 1..6i64 {
            for b in -6..7i64 {
                for c in -6..7i64 {
                    for d in -6..7i64 {
                        let f = CubicForm::new(a, b, c, d);
                        if f.discriminant() >= 0 {
                            continue;
                        }
                        let (s, t) = complex_factor(&f);
                        let sg = complex_factor_signs(&f);
                        let tol = 1e-9;
                        if s.abs() > tol {
                            assert_eq!(sg.s0 > 0, s > 0.0, "{f:?}");
                        }
                        if (1.0 - s).abs() > tol {
                            assert_eq!(sg.s1 > 0, s < 1.0, "{f:?}");
                        }
                        if (1.0 + s).abs() > tol {
                            assert_eq!(sg.s2 > 0, s > -1.0, "{f:?}");
                        }
                        if (t - 1.0).abs() > tol {
                            assert_eq!(sg.t > 0, t > 1.0, "{f:?}");
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn reduce_small_examples() {
        // x^3 - x - 1 sits on the boundary; its class minimum is
        // x^3 - x^2 y + 2 x y^2 - y^3.
        let f = CubicForm::new(1, 0, -1, -1);
        let rep = CubicForm::new(1, -1, 2, -1);
        assert_eq!(reduce(&f).unwrap(), rep);
        let g = f.transform(&Transform { p: 2, q: 1, r: 1, s: 1 });
        assert_eq!(reduce(&g).unwrap(), rep);
        let h = CubicForm::new(1, 1, -2, -1);
        let h2 = h.transform(&Transform { p: 3, q: -1, r: -5, s: 2 }).neg();
        assert_eq!(reduce(&h2).unwrap(), reduce(&h).unwrap());
        assert!(reduce(&CubicForm::new(1, 0, 0, 0)).is_err());
        assert!(reduce(&CubicForm::new(2, -3, 2, -3)).is_err());
    }

    #[test]
    fn representatives_are_reduced() {
        for f in [CubicForm::new(1, 0, -1, -1), CubicForm::new(7, -3, 11, 4), CubicForm::new(2, 9, -5, 1)] {
            if f.is_reducible() {
                continue;
            }
            let r = reduce(&f).unwrap();
            assert!(is_class_representative(&r), "{r:?}");
            assert_eq!(r.discriminant(), f.discriminant());
        }
    }
}
