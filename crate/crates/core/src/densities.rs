//! Local ramification densities and the Gaussian reference values.
//!
//! For a degree-`d` family the proportion of fields whose discriminant is
//! divisible by a squarefree `q` tends to a multiplicative `rho_d(q)`; at a
//! prime it is `1 - 1 / (1 + p^-1 + ...)` with a degree-dependent
//! denominator. Values are exact rationals over `i128`.

use core::fmt;

use num_rational::Ratio;
use num_traits::{CheckedMul, One};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime_u64;

/// Exact rational carrier for densities; always in lowest terms with a
/// positive denominator.
pub type Rational = Ratio<i128>;

/// Field degree `d` together with the error-term exponents of the counting
/// theorem for that degree.
///
/// The exponents only matter for the truncation point `Z` used in the moment
/// comparison (see [`crate::model::paper_cutoff`]).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FamilySpec {
    degree: u32,
}

impl FamilySpec {
    pub const QUADRATIC: FamilySpec = FamilySpec { degree: 2 };
    pub const CUBIC: FamilySpec = FamilySpec { degree: 3 };
    pub const QUARTIC: FamilySpec = FamilySpec { degree: 4 };
    pub const QUINTIC: FamilySpec = FamilySpec { degree: 5 };

    pub const ALL: [FamilySpec; 4] = [Self::QUADRATIC, Self::CUBIC, Self::QUARTIC, Self::QUINTIC];

    pub fn new(degree: u32) -> Result<Self> {
        match degree {
            2..=5 => Ok(FamilySpec { degree }),
            other => Err(Error::Degree(other)),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Power saving in `X`: 1/2, 1/6, 1/240, 1/200.
    pub fn alpha(&self) -> Rational {
        let den = match self.degree {
            2 => 2,
            3 => 6,
            4 => 240,
            _ => 200,
        };
        Ratio::new_raw(1, den)
    }

    /// Exponent of `q` in the error term: -1/2, 2/3, 9/10, 1.
    pub fn beta(&self) -> Rational {
        match self.degree {
            2 => Ratio::new_raw(-1, 2),
            3 => Ratio::new_raw(2, 3),
            4 => Ratio::new_raw(9, 10),
            _ => Ratio::new_raw(1, 1),
        }
    }
}

impl fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FamilySpec(d={})", self.degree)
    }
}

impl TryFrom<u32> for FamilySpec {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        FamilySpec::new(d)
    }
}

impl From<FamilySpec> for u32 {
    fn from(s: FamilySpec) -> u32 {
        s.degree
    }
}

/// `rho_d(p)` for a prime `p`, in lowest terms.
///
/// Closed forms after clearing the `p^-k` denominators:
/// `1/(p+1)`, `(p+1)/(p^2+p+1)`, `(p+1)^2/(p^3+p^2+2p+1)` and
/// `(p^3+2p^2+2p+1)/(p^4+p^3+2p^2+2p+1)`.
pub fn local_density(spec: FamilySpec, p: u64) -> Result<Rational> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    local_density_unchecked(spec, p)
}

/// As [`local_density`] without the primality check, for callers iterating a
/// prime table.
pub(crate) fn local_density_unchecked(spec: FamilySpec, p: u64) -> Result<Rational> {
    let (num, den) = local_density_parts(spec, p).ok_or(Error::Overflow("local density"))?;
    Ok(Ratio::new(num, den))
}

/// Numerator and denominator of `rho_d(p)` before reduction. They are already
/// coprime for every prime `p`, but callers that need the reduced form should
/// go through [`Ratio::new`].
pub(crate) fn local_density_parts(spec: FamilySpec, p: u64) -> Option<(i128, i128)> {
    let p = i128::from(p);
    let p2 = p.checked_mul(p)?;
    let p3 = p2.checked_mul(p)?;
    Some(match spec.degree {
        2 => (1, p + 1),
        3 => (p + 1, p2 + p + 1),
        4 => ((p + 1) * (p + 1), p3 + p2 + 2 * p + 1),
        _ => {
            let p4 = p3.checked_mul(p)?;
            (p3 + 2 * p2 + 2 * p + 1, p4 + p3 + 2 * p2 + 2 * p + 1)
        }
    })
}

/// `rho_d(p)` as the nearest `f64`.
pub fn local_density_f64(spec: FamilySpec, p: u64) -> f64 {
    let (num, den) = local_density_parts(spec, p).expect("p^4 fits in i128 for p < 2^31");
    crate::float::DoubleDouble::from_ratio(num, den).to_f64()
}

/// Distinct prime factors of `q` by trial division up to `sqrt(q)`, failing
/// on the first repeated prime.
fn squarefree_primes(q: u64) -> Result<([u64; 15], usize)> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut out = [0u64; 15];
    let mut len = 0;
    let mut m = q;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Err(Error::NotSquarefree { q, prime: p });
            }
            out[len] = p;
            len += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out[len] = m;
        len += 1;
    }
    Ok((out, len))
}

/// Checks that `q` is a positive squarefree integer.
pub fn ensure_squarefree(q: u64) -> Result<()> {
    squarefree_primes(q).map(|_| ())
}

/// `rho_d(q)` for squarefree `q`: the product of the local densities over the
/// primes dividing `q`, with `rho_d(1) = 1`.
pub fn density(spec: FamilySpec, q: u64) -> Result<Rational> {
    let (primes, len) = squarefree_primes(q)?;
    let mut acc = Rational::one();
    for &p in &primes[..len] {
        let local = local_density_unchecked(spec, p)?;
        acc = acc.checked_mul(&local).ok_or(Error::Overflow("density"))?;
    }
    Ok(acc)
}

/// `c_k`, the `k`-th moment of the standard Gaussian: `(k-1)!!` for even `k`,
/// zero for odd `k`.
///
/// # Panics
///
/// If the value overflows `u128`, which first happens at `k = 60`.
pub fn gaussian_moment(k: u32) -> u128 {
    if k % 2 == 1 {
        return 0;
    }
    (1..k)
        .step_by(2)
        .try_fold(1u128, |acc, j| acc.checked_mul(u128::from(j)))
        .expect("gaussian moment overflows u128 for k >= 60")
}

/// `mu(X) = log log X`, the shared mean and variance scale. Requires `X > e`.
pub fn loglog_mean(x: f64) -> Result<f64> {
    // The domain check is on the value rather than `x > E` so that `X = e^e`
    // style inputs that round below e are still rejected consistently.
    if !(x.is_finite() && x > core::f64::consts::E) {
        return Err(Error::domain("X", "log log X needs X > e"));
    }
    Ok(libm::log(libm::log(x)))
}
