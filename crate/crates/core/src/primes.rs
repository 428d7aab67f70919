//! Prime tables and trial-division factorization.
//!
//! A [`PrimeTable`] is built once by a segmented odd-only sieve and then shared
//! read-only by every sieve block, enumeration unit and statistic.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest limit a table accepts; primes are stored as `u32`.
pub const MAX_LIMIT: u64 = u32::MAX as u64;

const SIEVE_SEGMENT: usize = 1 << 18;

/// Divisibility by an odd prime without a hardware divide: for odd `p`,
/// `n * p^{-1} mod 2^32 <= (2^32 - 1) / p` exactly when `p | n`, and the
/// product is then the exact quotient.
#[derive(Clone, Copy, Debug)]
struct OddDivisor {
    p: u32,
    inv: u32,
    max_quot: u32,
}

impl OddDivisor {
    fn new(p: u32) -> Self {
        debug_assert!(p % 2 == 1);
        // Newton iteration for the inverse mod 2^32; each step doubles the
        // number of correct low bits, starting from 3 (p * p == 1 mod 8).
        let mut inv = p;
        for _ in 0..4 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        OddDivisor { p, inv, max_quot: u32::MAX / p }
    }

    #[inline]
    fn exact_quotient(&self, n: u32) -> Option<u32> {
        let q = n.wrapping_mul(self.inv);
        (q <= self.max_quot).then_some(q)
    }
}

/// All primes up to a limit, with O(1) primality lookups below it.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    /// Bit `k` set when `2k + 1` is composite (or 1).
    odd_composite: Vec<u64>,
    primes: Vec<u32>,
    /// Odd primes below 2^16 in increasing order.
    small: Vec<OddDivisor>,
}

impl PrimeTable {
    /// Sieve every prime `<= limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit > MAX_LIMIT {
            return Err(Error::domain("prime table limit", "must fit in 32 bits"));
        }
        let limit = limit.max(2);
        let odd_count = (limit as usize).div_ceil(2); // odd numbers 1, 3, ..., <= limit
        let mut odd_composite = vec![0u64; odd_count.div_ceil(64)];
        let mut primes: Vec<u32> = Vec::with_capacity(prime_count_estimate(limit));
        primes.push(2);

        let root = isqrt(limit);
        let base = simple_odd_primes(root);

        let mut segment = vec![false; SIEVE_SEGMENT];
        // Segment over odd indices k, representing n = 2k + 1.
        let mut start = 0usize;
        while start < odd_count {
            let end = (start + SIEVE_SEGMENT).min(odd_count);
            let seg = &mut segment[..end - start];
            seg.fill(false);
            for &p in &base {
                let p = p as usize;
                // Smallest odd multiple of p that is >= max(p^2, 2*start+1).
                let lo_n = 2 * start + 1;
                let mut m = (p * p).max(lo_n.div_ceil(p) * p);
                if m % 2 == 0 {
                    m += p;
                }
                let mut k = (m - 1) / 2;
                while k < end {
                    seg[k - start] = true;
                    k += p;
                }
            }
            for (i, &composite) in seg.iter().enumerate() {
                let k = start + i;
                if composite || k == 0 {
                    odd_composite[k / 64] |= 1 << (k % 64);
                } else {
                    primes.push((2 * k + 1) as u32);
                }
            }
            start = end;
        }

        let small = primes.iter().skip(1).take_while(|&&p| p < 1 << 16).map(|&p| OddDivisor::new(p)).collect();

        Ok(PrimeTable { limit, odd_composite, primes, small })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Every prime `<= limit`, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// The primes `<= z`.
    pub fn primes_up_to(&self, z: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| u64::from(p) <= z);
        &self.primes[..end]
    }

    /// Number of primes `<= z` (requires `z <= limit` for an exact answer).
    pub fn prime_pi(&self, z: u64) -> usize {
        self.primes_up_to(z).len()
    }

    /// Primality; table lookup below the limit, Miller-Rabin above it.
    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            if n < 2 {
                return false;
            }
            if n % 2 == 0 {
                return n == 2;
            }
            let k = (n / 2) as usize;
            self.odd_composite[k / 64] & (1 << (k % 64)) == 0
        } else {
            is_prime_u64(n)
        }
    }

    fn ensure_trial_range(&self, needed: u64) -> Result<()> {
        if needed > self.limit {
            return Err(Error::TableTooSmall { limit: self.limit, needed });
        }
        Ok(())
    }

    /// Distinct-prime count of `n` together with the primes whose square
    /// divides `n`.
    ///
    /// Trial division stops once `p^3` exceeds the unfactored part `m`; then
    /// `m` is 1, a prime, the square of a prime, or a product of two distinct
    /// primes, which is all `omega` and the square test need. Requires the
    /// table to reach `cbrt(n)`.
    pub fn square_signature(&self, n: u64) -> Result<SquareSignature> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        self.ensure_trial_range(icbrt(n))?;
        let mut sig = SquareSignature::default();
        let mut m = n;

        let tz = m.trailing_zeros();
        if tz > 0 {
            m >>= tz;
            sig.omega += 1;
            if tz >= 2 {
                sig.push_square(2);
            }
        }

        if m <= u64::from(u32::MAX) {
            let mut m32 = m as u32;
            for div in &self.small {
                let p = div.p;
                if u64::from(p) * u64::from(p) * u64::from(p) > u64::from(m32) {
                    break;
                }
                if let Some(mut q) = div.exact_quotient(m32) {
                    sig.omega += 1;
                    let mut e = 1;
                    while let Some(q2) = div.exact_quotient(q) {
                        q = q2;
                        e += 1;
                    }
                    m32 = q;
                    if e >= 2 {
                        sig.push_square(u64::from(p));
                    }
                }
            }
            m = u64::from(m32);
            // Past 2^16 the cube of the next prime exceeds any u32, so the
            // loop above always terminates inside `small`.
        } else {
            for &p in &self.primes[1..] {
                let p = u64::from(p);
                if p.saturating_mul(p).saturating_mul(p) > m {
                    break;
                }
                if m % p == 0 {
                    sig.omega += 1;
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    if e >= 2 {
                        sig.push_square(p);
                    }
                }
            }
        }

        if m > 1 {
            let r = isqrt(m);
            if r * r == m {
                sig.omega += 1;
                sig.push_square(r);
            } else if self.is_prime(m) {
                sig.omega += 1;
            } else {
                sig.omega += 2;
            }
        }
        Ok(sig)
    }

    /// Full factorization by trial division (table must reach `sqrt(n)`).
    pub fn factor(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        self.ensure_trial_range(isqrt(n))?;
        let mut out = Factorization::default();
        let mut m = n;
        for &p in &self.primes {
            let p = u64::from(p);
            if p * p > m {
                break;
            }
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                out.push(p, e);
            }
        }
        if m > 1 {
            out.push(m, 1);
        }
        Ok(out)
    }

    /// `#{p <= z : p | n}`. Only primes up to `min(z, sqrt(n))` are tried.
    pub fn count_prime_divisors_up_to(&self, n: u64, z: u64) -> u32 {
        debug_assert!(n > 0);
        let mut m = n;
        let mut count = 0;
        let mut exhausted = true;
        for &p in &self.primes {
            let p = u64::from(p);
            if p > z {
                exhausted = false;
                break;
            }
            if p * p > m {
                break;
            }
            if m % p == 0 {
                count += 1;
                while m % p == 0 {
                    m /= p;
                }
            }
        }
        // Either every remaining factor exceeds z, or m is 1 or a prime.
        if exhausted && m > 1 && m <= z {
            count += 1;
        }
        count
    }
}

/// What the cubic-field filter needs from `|disc|`: `omega` and the primes
/// `p` with `p^2 | disc`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SquareSignature {
    pub omega: u8,
    squares: [u64; 15],
    n_squares: u8,
}

impl SquareSignature {
    fn push_square(&mut self, p: u64) {
        self.squares[self.n_squares as usize] = p;
        self.n_squares += 1;
    }

    /// Primes whose square divides the number, ascending.
    pub fn square_primes(&self) -> &[u64] {
        &self.squares[..self.n_squares as usize]
    }

    pub fn is_squarefree(&self) -> bool {
        self.n_squares == 0
    }
}

/// Prime-power factorization of a `u64` (at most 15 distinct primes).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    primes: [u64; 15],
    exps: [u8; 15],
    len: u8,
}

impl Factorization {
    fn push(&mut self, p: u64, e: u8) {
        self.primes[self.len as usize] = p;
        self.exps[self.len as usize] = e;
        self.len += 1;
    }

    pub fn omega(&self) -> u32 {
        u32::from(self.len)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.primes[..self.len as usize].iter().copied().zip(self.exps[..self.len as usize].iter().copied())
    }
}

/// Odd primes `<= n` by the plain sieve; used for the base of the segmented one.
fn simple_odd_primes(n: u64) -> Vec<u32> {
    let n = n as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

fn prime_count_estimate(limit: u64) -> usize {
    if limit < 100 {
        return 32;
    }
    let x = limit as f64;
    (x / (libm::log(x) - 1.2)) as usize + 16
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = libm::sqrt(n as f64) as u64;
    while !r.checked_mul(r).is_some_and(|v| v <= n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Floor of the cube root.
pub fn icbrt(n: u64) -> u64 {
    let cube = |r: u64| r.checked_mul(r).and_then(|v| v.checked_mul(r));
    let mut r = libm::cbrt(n as f64) as u64;
    while !cube(r).is_some_and(|v| v <= n) {
        r -= 1;
    }
    while cube(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Floor of the fourth root.
pub fn iroot4(n: u64) -> u64 {
    isqrt(isqrt(n))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
