//! Local maximality of the cubic ring attached to a form.
//!
//! The ring of `f` fails to be maximal at `p` exactly when `f = 0 mod p`, or
//! `f` is equivalent to a form with `p^2 | a` and `p | b`. The second case
//! needs a multiple root of `f` on `P^1(F_p)`; moving that root to
//! `(1 : 0)` turns the condition into `p^2 | f(root)`, which does not depend
//! on the lift of the root because the derivative vanishes there mod `p`.

use super::form::CubicForm;

/// Below this, the multiple root is found by trying every residue.
const BRUTE_FORCE_BELOW: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MultipleRoot {
    Infinity,
    Finite(i128),
}

/// Whether the cubic ring of `f` is maximal at the prime `p`.
///
/// Returns `true` straight away unless `p^2` divides the discriminant.
pub fn is_maximal_at(f: &CubicForm, p: u64) -> bool {
    let disc = f.discriminant();
    let pi = i128::from(p);
    let p2 = pi * pi;
    if disc % p2 != 0 {
        return true;
    }
    let [a, b, c, d] = [f.a, f.b, f.c, f.d].map(|v| i128::from(v).rem_euclid(pi));
    if a == 0 && b == 0 && c == 0 && d == 0 {
        return false;
    }
    match multiple_root(f, (a, b, c, d), pi) {
        Some(MultipleRoot::Infinity) => i128::from(f.a) % p2 != 0,
        Some(MultipleRoot::Finite(r)) => f.eval(r, 1) % p2 != 0,
        // p | disc with f != 0 mod p forces a multiple root; keep the ring
        // if arithmetic says otherwise rather than dropping a field.
        None => {
            debug_assert!(false, "no multiple root of {f:?} mod {p}");
            true
        }
    }
}

fn multiple_root(f: &CubicForm, (a, b, c, d): (i128, i128, i128, i128), p: i128) -> Option<MultipleRoot> {
    if a == 0 && b == 0 {
        return Some(MultipleRoot::Infinity);
    }
    let is_double = |r: i128| {
        let value = (((a * r + b) * r + c) * r + d).rem_euclid(p);
        let slope = ((3 * a * r + 2 * b) * r + c).rem_euclid(p);
        value == 0 && slope == 0
    };
    if p >= BRUTE_FORCE_BELOW as i128 {
        let candidate = if a == 0 {
            // f(x, 1) = b x^2 + c x + d mod p.
            Some(-c * inverse(2 * b, p))
        } else {
            let (hp, hq, _) = f.hessian();
            let (hp, hq) = (hp.rem_euclid(p), hq.rem_euclid(p));
            if hp != 0 {
                // The Hessian is P (x - r y)^2 mod p at a double root r.
                Some(-hq * inverse(2 * hp, p))
            } else if hq == 0 {
                // Hessian vanishes: triple root -b / 3a.
                Some(-b * inverse(3 * a, p))
            } else {
                None
            }
        };
        if let Some(r) = candidate.map(|r| r.rem_euclid(p)) {
            if is_double(r) {
                return Some(MultipleRoot::Finite(r));
            }
        }
    }
    (0..p).find(|&r| is_double(r)).map(MultipleRoot::Finite)
}

/// Inverse of `v` mod the prime `p`, or 0 when `p | v`.
fn inverse(v: i128, p: i128) -> i128 {
    let (mut r0, mut r1) = (v.rem_euclid(p), p);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 {
        s0.rem_euclid(p)
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_discriminant_is_maximal() {
        let f = CubicForm::new(1, 0, -1, -1);
        for p in [2, 3, 5, 23] {
            assert!(is_maximal_at(&f, p));
        }
    }

    #[test]
    fn imprimitive_forms_are_not_maximal() {
        let g = CubicForm::new(1, 0, -1, -1);
        for p in [2i64, 3, 7, 101] {
            let f = CubicForm::new(p * g.a, p * g.b, p * g.c, p * g.d);
            assert!(!is_maximal_at(&f, p as u64));
        }
    }

    #[test]
    fn index_forms() {
        // x^3 - 2 has discriminant -108 and is maximal at 2 and 3 (Z[cbrt 2]
        // is the full ring of integers).
        let f = CubicForm::new(1, 0, 0, -2);
        assert_eq!(f.discriminant(), -108);
        assert!(is_maximal_at(&f, 2) && is_maximal_at(&f, 3));
        // x^3 - 10: disc -2700, Z[cbrt 10] has index 3 in the maximal order.
        let g = CubicForm::new(1, 0, 0, -10);
        assert!(is_maximal_at(&g, 2) && is_maximal_at(&g, 5));
        assert!(!is_maximal_at(&g, 3));
        // x^3 - 3x - 1 (disc 81) generates the cyclic field of conductor 9.
        let h = CubicForm::new(1, 0, -3, -1);
        assert_eq!(h.discriminant(), 81);
        assert!(is_maximal_at(&h, 3));
        // Rescaling y by p makes the ring non-maximal at p.
        let k = CubicForm::new(1, 0, -3 * 49, -343);
        assert!(!is_maximal_at(&k, 7));
    }

    #[test]
    fn large_prime_fast_path_agrees_with_brute_force() {
        // (x - 5)^2 (x + 2) = x^3 - 8x^2 + 5x + 50, perturbed by multiples of p.
        let p = 101i64;
        let pp = i128::from(p * p);
        let mut compared = 0;
        for e1 in 0..30i64 {
            for e2 in 0..30i64 {
                let f = CubicForm::new(1 + p * (e1 % 3), -8, 5 + p * e1, 50 + p * e2);
                if f.discriminant() % pp != 0 {
                    continue;
                }
                let brute = (0..i128::from(p))
                    .find(|&r| {
                        f.eval(r, 1) % i128::from(p) == 0
                            && (3 * i128::from(f.a) * r * r + 2 * i128::from(f.b) * r + i128::from(f.c)) % i128::from(p)
                                == 0
                    })
                    .map(|r| f.eval(r, 1) % pp != 0)
                    .unwrap();
                assert_eq!(is_maximal_at(&f, p as u64), brute, "{f:?}");
                compared += 1;
            }
        }
        assert!(compared > 0);
    }

    #[test]
    fn inverse_mod_p() {
        for v in 1..97 {
            assert_eq!((v * inverse(v, 97)) % 97, 1);
        }
        assert_eq!(inverse(0, 97), 0);
    }
}
