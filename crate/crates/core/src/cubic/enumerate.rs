//! One representative per class of irreducible forms with `0 < |disc| <= X`.
//!
//! Coefficient bounds, positive discriminant (`0 <= Q <= P <= R`):
//! `3D = 4PR - Q^2 >= 3P^2` gives `P <= sqrt X`; the syzygy
//! `4H^3 = G^2 + 27 D f^2` at `(1, 0)` gives `27 D a^2 <= 4 P^3`, hence
//! `a^2 <= 4 sqrt(X) / 27`, and solving it for `b` gives
//! `-sqrt P <= b <= 3a/2 + sqrt P`. Then `c` runs over `1 <= P <= sqrt X`,
//! and `d` over the intersection of `0 <= Q <= P` with `P <= R <= (3X + P^2) / 4P`.
//!
//! Negative discriminant, with `f = a (x - theta y) q(x, y)` and `q` reduced:
//! `|D| = a^4 q(theta)^2 (4t - s^2) >= 27 a^4 / 16`, and with
//! `L = X / 4a^4`, `W = sqrt(4L/3) - 3/4`: `|theta - s/2| <= sqrt W`,
//! `t <= L^{1/3} + 1/4`. Reading off `b = -a(s + theta)`,
//! `c = a(t + s theta)` bounds `b` and `c`; `d` is pinned by the exact sign
//! conditions and by `-X <= D(d) <= -1`, a quadratic in `d`.
//!
//! Every float bound is padded outward and every candidate is checked
//! exactly, so rounding can only cost iterations.

use alloc::vec::Vec;

use super::form::CubicForm;
use super::reduce::{complex_factor_signs, is_boundary_minimum};
use crate::primes::{iroot4, isqrt};

/// Sign of the discriminant handled by a work unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiscSign {
    Positive,
    Negative,
}

/// Independent slice of the search: fixed sign and leading coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorkUnit {
    pub sign: DiscSign,
    pub a: i64,
    pub b: i64,
}

/// Work units covering every class with `|disc| <= x`, positive sign first,
/// then by `a` and `b`.
pub fn work_units(x: u64) -> Vec<WorkUnit> {
    let mut units = Vec::new();
    let xf = x as f64;
    let root4 = iroot4(x) as i64 + 1;
    let a_max = libm::sqrt(4.0 * libm::sqrt(xf) / 27.0) as i64 + 1;
    for a in 1..=a_max {
        for b in -root4..=(3 * a) / 2 + root4 + 1 {
            units.push(WorkUnit { sign: DiscSign::Positive, a, b });
        }
    }
    let a_max = libm::pow(16.0 * xf / 27.0, 0.25) as i64 + 1;
    for a in 1..=a_max {
        if let Some(shape) = NegativeShape::new(x, a) {
            let (lo, hi) = shape.b_range();
            for b in lo..=hi {
                units.push(WorkUnit { sign: DiscSign::Negative, a, b });
            }
        }
    }
    units
}

/// Calls `emit(form, disc)` for every class representative in the unit:
/// weakly reduced, boundary-minimal, irreducible, `0 < |disc| <= x`.
/// Returns the number of representatives emitted.
pub fn for_each_form_in_unit(x: u64, unit: WorkUnit, mut emit: impl FnMut(&CubicForm, i64)) -> u64 {
    let mut count = 0u64;
    let mut accept = |f: &CubicForm, disc: i64, boundary: bool| {
        if boundary && !is_boundary_minimum(f) {
            return;
        }
        if f.is_reducible() {
            return;
        }
        count += 1;
        emit(f, disc);
    };
    match unit.sign {
        DiscSign::Positive => positive_unit(x, unit.a, unit.b, &mut accept),
        DiscSign::Negative => negative_unit(x, unit.a, unit.b, &mut accept),
    }
    count
}

/// Every class representative with `0 < |disc| <= x`, in work-unit order.
pub fn enumerate_reduced_forms(x: u64) -> Vec<CubicForm> {
    let mut out = Vec::new();
    for unit in work_units(x) {
        for_each_form_in_unit(x, unit, |f, _| out.push(*f));
    }
    out
}

#[inline]
fn div_floor(n: i64, d: i64) -> i64 {
    n.div_euclid(d)
}

#[inline]
fn div_ceil(n: i64, d: i64) -> i64 {
    -((-n).div_euclid(d))
}

fn positive_unit(x: u64, a: i64, b: i64, accept: &mut impl FnMut(&CubicForm, i64, bool)) {
    let p_max = isqrt(x) as i64;
    // P >= b^2 for b < 0, P >= (b - 3a/2)^2 for b > 3a/2, and
    // P^3 >= 27 a^2 / 4 from the syzygy with D >= 1.
    let mut p_min = 1i64;
    if b < 0 {
        p_min = p_min.max(b * b);
    }
    if 2 * b > 3 * a {
        let t = (2 * b - 3 * a) as f64 / 2.0;
        p_min = p_min.max((t * t) as i64);
    }
    let syz = libm::cbrt(27.0 * (a * a) as f64 / 4.0) as i64;
    p_min = p_min.max(syz).max(1);
    // Pad the float-derived lower bound outward.
    p_min = (p_min - 1).max(1);
    if p_min > p_max {
        return;
    }
    let b2 = b * b;
    let three_a = 3 * a;
    let c_lo = div_ceil(b2 - p_max, three_a);
    let c_hi = div_floor(b2 - p_min, three_a);
    let x3 = 3 * x as i64;
    for c in c_lo..=c_hi {
        let p = b2 - three_a * c;
        if p < 1 || p > p_max {
            continue;
        }
        let bc = b * c;
        // 0 <= Q = bc - 9ad <= P.
        let mut d_lo = div_ceil(bc - p, 9 * a);
        let mut d_hi = div_floor(bc, 9 * a);
        // P <= R = c^2 - 3bd <= (3X + P^2) / 4P.
        let r_max = (x3 + p * p) / (4 * p);
        let c2 = c * c;
        if b > 0 {
            d_lo = d_lo.max(div_ceil(c2 - r_max, 3 * b));
            d_hi = d_hi.min(div_floor(c2 - p, 3 * b));
        } else if b < 0 {
            let nb = -b;
            d_lo = d_lo.max(div_ceil(p - c2, 3 * nb));
            d_hi = d_hi.min(div_floor(r_max - c2, 3 * nb));
        } else if c2 < p || c2 > r_max {
            continue;
        }
        for d in d_lo..=d_hi {
            let q = bc - 9 * a * d;
            let r = c2 - 3 * b * d;
            if q < 0 || q > p || r < p {
                continue;
            }
            let three_disc = 4 * i128::from(p) * i128::from(r) - i128::from(q) * i128::from(q);
            if three_disc > i128::from(x3) {
                continue;
            }
            let disc = (three_disc / 3) as i64;
            let boundary = q == 0 || q == p || p == r;
            accept(&CubicForm::new(a, b, c, d), disc, boundary);
        }
    }
}

/// Float bounds for a negative-discriminant unit with leading coefficient `a`.
struct NegativeShape {
    a: i64,
    /// `sqrt W`, padded.
    sw: f64,
    /// `L^{1/3}`.
    l3: f64,
}

impl NegativeShape {
    fn new(x: u64, a: i64) -> Option<Self> {
        let af = a as f64;
        let l = x as f64 / (4.0 * af * af * af * af);
        let w = libm::sqrt(4.0 * l / 3.0) - 0.75;
        if w < -1e-9 {
            return None;
        }
        Some(NegativeShape { a, sw: libm::sqrt(w.max(0.0)) + 1e-9, l3: libm::cbrt(l) })
    }

    fn b_range(&self) -> (i64, i64) {
        let af = self.a as f64;
        (libm::floor(-af * (1.5 + self.sw)) as i64 - 1, libm::ceil(af * self.sw) as i64 + 1)
    }

    fn c_range(&self) -> (i64, i64) {
        let af = self.a as f64;
        (libm::floor(af * (1.0 - self.sw)) as i64 - 1, libm::ceil(af * (self.l3 + 0.75 + self.sw)) as i64 + 1)
    }
}

fn negative_unit(x: u64, a: i64, b: i64, accept: &mut impl FnMut(&CubicForm, i64, bool)) {
    let Some(shape) = NegativeShape::new(x, a) else { return };
    let (c_lo, c_hi) = shape.c_range();
    let xi = i128::from(x);
    let (ai, bi) = (i128::from(a), i128::from(b));
    for c in c_lo..=c_hi {
        let ci = i128::from(c);
        // S0 >= 0 and S1 >= 0: bc <= ad <= (a + b)^2 + ac + bc.
        let bc = b * c;
        let d_lo = div_ceil(bc, a);
        let d_hi = div_floor((a + b) * (a + b) + a * c + bc, a);
        if d_lo > d_hi {
            continue;
        }
        // D(d) = k2 d^2 + k1 d + k0 with k2 = -27 a^2.
        let k2 = 27.0 * (a * a) as f64;
        let k1 = (18 * ai * bi * ci - 4 * bi * bi * bi) as f64;
        let k0 = (bi * bi * ci * ci - 4 * ai * ci * ci * ci) as f64;
        // D(d) >= -X  <=>  k2 d^2 - k1 d - (k0 + X) <= 0.
        let disc_outer = k1 * k1 + 4.0 * k2 * (k0 + x as f64);
        if disc_outer < 0.0 {
            continue;
        }
        let so = libm::sqrt(disc_outer);
        let outer_lo = libm::floor((k1 - so) / (2.0 * k2)) as i64 - 2;
        let outer_hi = libm::ceil((k1 + so) / (2.0 * k2)) as i64 + 2;
        // D(d) <= -1 fails strictly inside the roots of k2 d^2 - k1 d - (k0 + 1).
        let disc_inner = k1 * k1 + 4.0 * k2 * (k0 + 1.0);
        let (gap_lo, gap_hi) = if disc_inner > 0.0 {
            let si = libm::sqrt(disc_inner);
            (libm::ceil((k1 - si) / (2.0 * k2)) as i64 + 2, libm::floor((k1 + si) / (2.0 * k2)) as i64 - 2)
        } else {
            (1, 0)
        };
        let lo = d_lo.max(outer_lo);
        let hi = d_hi.min(outer_hi);
        let mut d = lo;
        while d <= hi {
            if gap_lo <= gap_hi && d >= gap_lo && d <= gap_hi {
                d = gap_hi + 1;
                continue;
            }
            let f = CubicForm::new(a, b, c, d);
            let disc = f.discriminant();
            if disc < 0 && -disc <= xi {
                let s = complex_factor_signs(&f);
                if s.s0 >= 0 && s.s1 >= 0 && s.t >= 0 {
                    let boundary = s.s0 == 0 || s.s1 == 0 || s.t == 0;
                    accept(&f, disc as i64, boundary);
                }
            }
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::reduce::{is_class_representative, reduce};
    use alloc::collections::BTreeSet;

    #[test]
    fn smallest_discriminant() {
        let forms = enumerate_reduced_forms(23);
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].discriminant(), -23);
        assert!(enumerate_reduced_forms(22).is_empty());
    }

    #[test]
    fn emitted_forms_are_distinct_representatives() {
        let x = 3000;
        let forms = enumerate_reduced_forms(x);
        let set: BTreeSet<_> = forms.iter().copied().collect();
        assert_eq!(set.len(), forms.len());
        for f in &forms {
            assert!(is_class_representative(f), "{f:?}");
            assert_eq!(reduce(f).unwrap(), *f, "{f:?}");
            let d = f.discriminant();
            assert!(d != 0 && d.unsigned_abs() <= u128::from(x));
        }
    }

    /// Reduce every irreducible form in a coefficient box; each class hit
    /// with `|disc| <= x` must have been emitted.
    #[test]
    fn box_search_finds_nothing_new() {
        let x = 400;
        let emitted: BTreeSet<_> = enumerate_reduced_forms(x).into_iter().collect();
        let mut reached = BTreeSet::new();
        let r = 7i64;
        for a in 1..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        let f = CubicForm::new(a, b, c, d);
                        let disc = f.discriminant();
                        if disc == 0 || disc.unsigned_abs() > u128::from(x) || f.is_reducible() {
                            continue;
                        }
                        reached.insert(reduce(&f).unwrap());
                    }
                }
            }
        }
        assert!(reached.len() > 50);
        let missing: Vec<_> = reached.difference(&emitted).collect();
        assert!(missing.is_empty(), "missing {missing:?}");
    }
}
