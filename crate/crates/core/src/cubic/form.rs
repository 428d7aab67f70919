//! Integral binary cubic forms `a x^3 + b x^2 y + c x y^2 + d y^3`.

use core::fmt;

use serde::{Deserialize, Serialize};

/// Coefficients `(a, b, c, d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Debug for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// A 2x2 integer matrix `[[p, q], [r, s]]` acting by
/// `f(x, y) -> f(p x + q y, r x + s y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transform {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { p: 1, q: 0, r: 0, s: 1 };

    pub fn det(&self) -> i64 {
        self.p * self.s - self.q * self.r
    }

    /// `self` followed by `other`: `(f . self) . other = f . (self * other)`.
    pub fn then(&self, other: &Transform) -> Transform {
        Transform {
            p: self.p * other.p + self.q * other.r,
            q: self.p * other.q + self.q * other.s,
            r: self.r * other.p + self.s * other.r,
            s: self.r * other.q + self.s * other.s,
        }
    }
}

impl CubicForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        CubicForm { a, b, c, d }
    }

    /// `f(x, y)` in `i128`.
    #[inline]
    pub fn eval(&self, x: i128, y: i128) -> i128 {
        let (a, b, c, d) = self.wide();
        ((a * x + b * y) * x + c * y * y) * x + d * y * y * y
    }

    #[inline]
    fn wide(&self) -> (i128, i128, i128, i128) {
        (i128::from(self.a), i128::from(self.b), i128::from(self.c), i128::from(self.d))
    }

    /// `18abcd + b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2`.
    #[inline]
    pub fn discriminant(&self) -> i128 {
        let (a, b, c, d) = self.wide();
        18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d
    }

    /// Hessian covariant `P x^2 + Q x y + R y^2` with
    /// `P = b^2 - 3ac`, `Q = bc - 9ad`, `R = c^2 - 3bd`; `4PR - Q^2 = 3 disc`.
    #[inline]
    pub fn hessian(&self) -> (i128, i128, i128) {
        let (a, b, c, d) = self.wide();
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0 && self.d == 0
    }

    pub fn neg(&self) -> CubicForm {
        CubicForm::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// `f . gamma`. Panics on `i64` overflow, which cannot happen for the
    /// small transforms used in reduction of forms with `|disc| <= 10^9`.
    pub fn transform(&self, g: &Transform) -> CubicForm {
        let (p, q, r, s) = (i128::from(g.p), i128::from(g.q), i128::from(g.r), i128::from(g.s));
        let (a, b, c, d) = self.wide();
        let fx = |x: i128, y: i128| (3 * a * x + 2 * b * y) * x + c * y * y;
        let fy = |x: i128, y: i128| (b * x + 2 * c * y) * x + 3 * d * y * y;
        let na = self.eval(p, r);
        let nd = self.eval(q, s);
        let nb = q * fx(p, r) + s * fy(p, r);
        let nc = p * fx(q, s) + r * fy(q, s);
        let narrow = |v: i128| i64::try_from(v).expect("transformed coefficient overflows i64");
        CubicForm::new(narrow(na), narrow(nb), narrow(nc), narrow(nd))
    }

    /// Whether `f` has a linear factor over the rationals. The zero form and
    /// forms with a repeated factor count as reducible only through a linear
    /// factor, so callers should reject `disc == 0` separately.
    pub fn is_reducible(&self) -> bool {
        if self.a == 0 || self.d == 0 {
            return true;
        }
        // A linear factor gives a root on P^1(F_p) for every p; most
        // irreducible forms miss one of these residue fields.
        for p in [2i64, 3, 5, 7, 11, 13] {
            if !has_projective_root_mod(self, p) {
                return false;
            }
        }
        // Rational root u/v in lowest terms: v | a and u | d.
        let mut found = false;
        for_each_divisor(self.a.unsigned_abs(), |v| {
            if found {
                return;
            }
            for_each_divisor(self.d.unsigned_abs(), |u| {
                let (u, v) = (i128::from(u), i128::from(v));
                if !found && (self.eval(u, v) == 0 || self.eval(-u, v) == 0) {
                    found = true;
                }
            });
        });
        found
    }

    pub fn is_irreducible(&self) -> bool {
        !self.is_reducible()
    }
}

fn has_projective_root_mod(f: &CubicForm, p: i64) -> bool {
    let (a, b, c, d) = (f.a.rem_euclid(p), f.b.rem_euclid(p), f.c.rem_euclid(p), f.d.rem_euclid(p));
    if a == 0 {
        return true;
    }
    (0..p).any(|x| (((a * x + b) * x + c) * x + d) % p == 0)
}

/// Calls `f` on every positive divisor of `n > 0`.
fn for_each_divisor(n: u64, mut f: impl FnMut(u64)) {
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            f(i);
            if i * i != n {
                f(n / i);
            }
        }
        i += 1;
    }
}

/// Every matrix in `GL_2(Z)` with entries in `{-1, 0, 1}`.
pub(crate) fn small_unimodular() -> impl Iterator<Item = Transform> {
    (0..81).filter_map(|i: i64| {
        let e = |k: u32| (i / 3i64.pow(k)) % 3 - 1;
        let g = Transform { p: e(0), q: e(1), r: e(2), s: e(3) };
        (g.det().abs() == 1).then_some(g)
    })
}
