//! Brute-force list of cubic field discriminants, built without binary cubic
//! forms.
//!
//! Hunter's bound gives, in every cubic field of discriminant `D`, an
//! algebraic integer `alpha` outside `Z` with trace 0 or 1 and
//! `T2(alpha) <= 1/3 + (2/3) sqrt|D|`. Its minimal polynomial
//! `x^3 - s1 x^2 + s2 x - s3` therefore lies in a small box. For each such
//! polynomial the field discriminant is `disc / index^2`, with the index
//! counted prime by prime as the number of integral elements of
//! `p^{-e} Z[alpha]` modulo `Z[alpha]`. Isomorphic fields are merged by
//! looking for an explicit embedding `h(alpha)` that is a root of the other
//! polynomial.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Monic `x^3 + c2 x^2 + c1 x + c0`, stored as `[c0, c1, c2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monic(pub [i128; 3]);

impl Monic {
    fn from_symmetric(s1: i128, s2: i128, s3: i128) -> Self {
        Monic([-s3, s2, -s1])
    }

    pub fn discriminant(&self) -> i128 {
        let [d, c, b] = self.0;
        // a = 1
        18 * b * c * d + b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d
    }

    fn eval(&self, x: i128) -> i128 {
        let [c0, c1, c2] = self.0;
        ((x + c2) * x + c1) * x + c0
    }

    /// Irreducible over Q iff no integer root (monic, so rational roots are
    /// integers dividing c0).
    fn is_irreducible(&self) -> bool {
        let c0 = self.0[0];
        if c0 == 0 {
            return false;
        }
        let n = c0.unsigned_abs();
        let mut k = 1u128;
        while k * k <= n {
            if n % k == 0 {
                for r in [k, n / k] {
                    let r = r as i128;
                    if self.eval(r) == 0 || self.eval(-r) == 0 {
                        return false;
                    }
                }
            }
            k += 1;
        }
        true
    }

    fn roots(&self) -> [C; 3] {
        let [c0, c1, c2] = self.0.map(|v| v as f64);
        let p = |z: C| ((z + C::re(c2)) * z + C::re(c1)) * z + C::re(c0);
        let mut r = [C { re: 0.4, im: 0.9 }, C { re: 0.4, im: 0.9 }.powi(2), C { re: 0.4, im: 0.9 }.powi(3)];
        let scale = 1.0 + c0.abs().max(c1.abs()).max(c2.abs());
        for z in r.iter_mut() {
            *z = *z * C::re(scale);
        }
        for _ in 0..500 {
            for i in 0..3 {
                let mut den = C::re(1.0);
                for j in 0..3 {
                    if i != j {
                        den = den * (r[i] - r[j]);
                    }
                }
                r[i] = r[i] - p(r[i]) / den;
            }
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct C {
    re: f64,
    im: f64,
}

impl C {
    fn re(re: f64) -> Self {
        C { re, im: 0.0 }
    }
    fn powi(self, n: u32) -> Self {
        (0..n).fold(C::re(1.0), |acc, _| acc * self)
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl std::ops::Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        C { re: self.re + o.re, im: self.im + o.im }
    }
}
impl std::ops::Sub for C {
    type Output = C;
    fn sub(self, o: C) -> C {
        C { re: self.re - o.re, im: self.im - o.im }
    }
}
impl std::ops::Mul for C {
    type Output = C;
    fn mul(self, o: C) -> C {
        C { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}
impl std::ops::Div for C {
    type Output = C;
    fn div(self, o: C) -> C {
        let n = o.re * o.re + o.im * o.im;
        C { re: (self.re * o.re + self.im * o.im) / n, im: (self.im * o.re - self.re * o.im) / n }
    }
}

type Mat = [[i128; 3]; 3];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Multiplication-by-alpha matrix on the basis `1, alpha, alpha^2` (acting on
/// column coordinate vectors).
fn companion(f: &Monic) -> Mat {
    let [c0, c1, c2] = f.0;
    [[0, 0, -c0], [1, 0, -c1], [0, 1, -c2]]
}

/// Characteristic polynomial coefficients `(e1, e2, e3)` of a 3x3 matrix.
fn char_poly(m: &Mat) -> (i128, i128, i128) {
    let e1 = m[0][0] + m[1][1] + m[2][2];
    let e2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let e3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    (e1, e2, e3)
}

fn factor(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `[O_K : Z[alpha]]`, prime by prime.
fn index(f: &Monic) -> i128 {
    let disc = f.discriminant();
    let cm = companion(f);
    let cm2 = mat_mul(&cm, &cm);
    let tr1 = cm[0][0] + cm[1][1] + cm[2][2];
    let tr2 = cm2[0][0] + cm2[1][1] + cm2[2][2];
    let mut idx = 1i128;
    for (p, v) in factor(disc.unsigned_abs()) {
        let e = v / 2;
        if e == 0 {
            continue;
        }
        let p = p as i128;
        let m = p.pow(e);
        let mut count = 0i128;
        for c1 in 0..m {
            for c2 in 0..m {
                // Tr(c0 + c1 alpha + c2 alpha^2) = 3 c0 + c1 tr1 + c2 tr2 must
                // vanish mod m; for p != 3 that fixes c0.
                let rest = c1 * tr1 + c2 * tr2;
                let c0s: Vec<i128> = if p == 3 {
                    (0..m).filter(|c0| (3 * c0 + rest).rem_euclid(m) == 0).collect()
                } else {
                    (0..m).filter(|c0| (3 * c0 + rest).rem_euclid(m) == 0).take(1).collect()
                };
                for c0 in c0s {
                    let mut mn = [[0i128; 3]; 3];
                    for i in 0..3 {
                        for j in 0..3 {
                            mn[i][j] = c1 * cm[i][j] + c2 * cm2[i][j] + if i == j { c0 } else { 0 };
                        }
                    }
                    let (e1, e2, e3) = char_poly(&mn);
                    if e1 % m == 0 && e2 % (m * m) == 0 && e3 % (m * m * m) == 0 {
                        count += 1;
                    }
                }
            }
        }
        idx *= count;
    }
    idx
}

/// Whether the fields of `f` and `g` are isomorphic: some
/// `h(alpha) = (h0 + h1 alpha + h2 alpha^2) / den` is a root of `g`.
fn isomorphic(f: &Monic, g: &Monic) -> bool {
    let ra = f.roots();
    let rb = g.roots();
    let den = f.discriminant().abs();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in perms {
        // Solve the Vandermonde system h(ra[i]) = rb[perm[i]] by Lagrange
        // interpolation.
        let mut h = [C::re(0.0); 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let w = rb[perm[i]] / ((ra[i] - ra[j]) * (ra[i] - ra[k]));
            // w (x - ra_j)(x - ra_k) = w x^2 - w (ra_j + ra_k) x + w ra_j ra_k
            h[2] = h[2] + w;
            h[1] = h[1] - w * (ra[j] + ra[k]);
            h[0] = h[0] + w * ra[j] * ra[k];
        }
        let coeffs: Option<Vec<i128>> = h
            .iter()
            .map(|z| {
                let v = z.re * den as f64;
                (z.im.abs() * (den as f64) < 1e-3 && (v - v.round()).abs() < 1e-3).then(|| v.round() as i128)
            })
            .collect();
        let Some(hc) = coeffs else { continue };
        if embeds(f, g, [hc[0], hc[1], hc[2]], den) {
            return true;
        }
    }
    false
}

/// Exact check that `den^3 g(H / den) = 0 mod f` for `H = h0 + h1 x + h2 x^2`.
fn embeds(f: &Monic, g: &Monic, hc: [i128; 3], den: i128) -> bool {
    // Work with column vectors in the basis 1, x, x^2 of Z[x]/f.
    let cm = companion(f);
    let mul = |u: [i128; 3], v: [i128; 3]| -> [i128; 3] {
        // u * v where v is expanded through powers of the companion matrix.
        let mut out = [0i128; 3];
        let mut pow = u;
        for vk in v {
            for i in 0..3 {
                out[i] += vk * pow[i];
            }
            let mut next = [0i128; 3];
            for i in 0..3 {
                next[i] = (0..3).map(|k| cm[i][k] * pow[k]).sum();
            }
            pow = next;
        }
        out
    };
    let [g0, g1, g2] = g.0;
    let h1 = hc;
    let h2 = mul(h1, h1);
    let h3 = mul(h2, h1);
    let mut total = [0i128; 3];
    for i in 0..3 {
        total[i] = h3[i] + g2 * den * h2[i] + g1 * den * den * h1[i];
    }
    total[0] += g0 * den * den * den;
    total == [0, 0, 0]
}

/// Field discriminants of all cubic fields with `|D| <= x`, sorted, one
/// entry per isomorphism class.
pub fn cubic_field_discriminants(x: u64) -> Vec<i64> {
    let xf = x as f64;
    let t2_max = 1.0 / 3.0 + (2.0 / 3.0) * xf.sqrt() + 1e-9;
    let s3_max = (t2_max / 3.0).powf(1.5).floor() as i128 + 1;
    let t2i = t2_max.floor() as i128 + 1;
    let mut by_disc: BTreeMap<i64, Vec<Monic>> = BTreeMap::new();
    for s1 in 0..=1i128 {
        // |s1^2 - 2 s2| <= T2.
        let s2_lo = (s1 * s1 - t2i) / 2 - 1;
        let s2_hi = (s1 * s1 + t2i) / 2 + 1;
        for s2 in s2_lo..=s2_hi {
            for s3 in -s3_max..=s3_max {
                let f = Monic::from_symmetric(s1, s2, s3);
                let disc = f.discriminant();
                if disc == 0 || !f.is_irreducible() {
                    continue;
                }
                let roots = f.roots();
                let t2: f64 = roots.iter().map(|z| z.abs().powi(2)).sum();
                if t2 > t2_max + 1e-6 {
                    continue;
                }
                let idx = index(&f);
                let dk = disc / (idx * idx);
                assert_eq!(dk * idx * idx, disc);
                if dk.unsigned_abs() > u128::from(x) {
                    continue;
                }
                let dk = dk as i64;
                let reps = by_disc.entry(dk).or_default();
                if !reps.iter().any(|g| isomorphic(g, &f)) {
                    reps.push(f);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (d, reps) in by_disc {
        out.resize(out.len() + reps.len(), d);
    }
    out
}
