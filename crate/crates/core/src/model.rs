//! The independent-Bernoulli model `R_d(Z) = sum_{p <= Z} R_{d,p}` where
//! `R_{d,p}` is 1 with probability `rho_d(p)`.
//!
//! Two moment paths are kept on purpose: the exact law by convolution (cheap
//! for small `Z`, memory bounded by `cap`) and cumulant accumulation, which
//! streams over primes up to `10^8`. Each is the other's oracle.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::densities::{local_density_parts, local_density_unchecked, loglog_mean, FamilySpec, Rational};
use crate::error::{Error, Result};
use crate::float::{binomial, CompensatedSum, DoubleDouble};
use crate::histogram::Histogram;
use crate::primes::PrimeTable;

/// Largest moment order handled by the cumulant path.
pub const MAX_MOMENT: u32 = 12;
pub const DEFAULT_CAP: usize = 64;

/// The Bernoulli summands for one degree and cutoff: every prime `p <= Z`
/// with success probability `rho_d(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliFamily {
    spec: FamilySpec,
    cutoff: u64,
    primes: Vec<u32>,
}

impl BernoulliFamily {
    pub fn new(spec: FamilySpec, cutoff: u64) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::domain("Z", "the model needs Z >= 2"));
        }
        let table = PrimeTable::new(cutoff)?;
        Self::from_table(spec, &table, cutoff)
    }

    /// Reuses an existing prime table covering `cutoff`.
    pub fn from_table(spec: FamilySpec, table: &PrimeTable, cutoff: u64) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::domain("Z", "the model needs Z >= 2"));
        }
        if cutoff > table.limit() {
            return Err(Error::TableTooSmall { limit: table.limit(), needed: cutoff });
        }
        Ok(BernoulliFamily { spec, cutoff, primes: table.primes_up_to(cutoff).to_vec() })
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `(p, rho_d(p))` in increasing `p`.
    pub fn probabilities(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        self.primes.iter().map(move |&p| {
            let p = u64::from(p);
            (p, local_density_unchecked(self.spec, p).expect("p < 2^32 cannot overflow"))
        })
    }

    fn probability_dd(&self, p: u32) -> DoubleDouble {
        let (n, d) = local_density_parts(self.spec, u64::from(p)).expect("p < 2^32 cannot overflow");
        DoubleDouble::from_ratio(n, d)
    }
}

/// Law of `R_d(Z)` on `0..=cap`; whatever would land above `cap` is kept in
/// `tail_mass`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDistribution {
    pub cap: usize,
    pub mass: Vec<f64>,
    pub tail_mass: f64,
}

impl ModelDistribution {
    /// `E((R - center)^k)` over the capped law. Ignores the tail, so it is
    /// only meaningful when `tail_mass` is negligible.
    pub fn moment_about(&self, center: f64, k: u32) -> f64 {
        let s: CompensatedSum =
            self.mass.iter().enumerate().map(|(n, &m)| m * libm::pow(n as f64 - center, f64::from(k))).collect();
        s.value()
    }

    pub fn mean(&self) -> f64 {
        self.moment_about(0.0, 1)
    }
}

/// Poisson–binomial law by sequential convolution in double-double.
pub fn exact_distribution(fam: &BernoulliFamily, cap: usize) -> Result<ModelDistribution> {
    if cap < 1 {
        return Err(Error::domain("cap", "must be at least 1"));
    }
    let mut mass = vec![DoubleDouble::ZERO; cap + 1];
    mass[0] = DoubleDouble::ONE;
    let mut tail = DoubleDouble::ZERO;
    let mut top = 0usize;
    for &p in fam.primes() {
        let r = fam.probability_dd(p);
        let q = DoubleDouble::ONE - r;
        tail = tail + mass[cap] * r;
        if top < cap {
            top += 1;
        }
        for n in (1..=top).rev() {
            mass[n] = mass[n] * q + mass[n - 1] * r;
        }
        mass[0] = mass[0] * q;

        let total = mass[..=top].iter().fold(tail, |acc, &m| acc + m);
        if libm::fabs((total - DoubleDouble::ONE).to_f64()) > 1e-12 {
            return Err(Error::Invariant("model mass no longer sums to one"));
        }
    }
    Ok(ModelDistribution { cap, mass: mass.iter().map(|m| m.to_f64()).collect(), tail_mass: tail.to_f64() })
}

/// Where a [`MomentReport`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentSource {
    ModelExact,
    ModelSampled,
    Fields,
}

/// Moments of orders `0..=k`; entry `i` of each vector is order `i`, so
/// every vector starts with the zeroth moment `1`.
///
/// `central` is about the distribution's own mean. `standardized` is about
/// `mu(X) = log log X`, divided by `mu(X)^{k/2}`, and is present only when
/// an `X` was supplied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub source: MomentSource,
    #[serde(rename = "X")]
    pub x: Option<f64>,
    #[serde(rename = "Z")]
    pub z: u64,
    pub k: u32,
    pub raw: Vec<f64>,
    pub central: Vec<f64>,
    pub standardized: Option<Vec<f64>>,
}

impl MomentReport {
    /// Builds a report from the mean and the central moments of orders
    /// `0..=k` (`central[0] = 1`, `central[1] = 0`).
    pub fn from_central(source: MomentSource, z: u64, mean: f64, central: Vec<f64>) -> Self {
        let k = central.len() as u32 - 1;
        let raw = (0..=k).map(|n| shifted_moment(&central, mean, n)).collect();
        MomentReport { source, x: None, z, k, raw, central, standardized: None }
    }

    /// Adds the moments about `mu(X)` scaled by `mu^{k/2}`.
    pub fn with_standardization(mut self, x: f64) -> Result<Self> {
        let mu = loglog_mean(x)?;
        let mean = self.mean();
        let shift = mean - mu;
        let std =
            (0..=self.k).map(|n| shifted_moment(&self.central, shift, n) / libm::pow(mu, f64::from(n) / 2.0)).collect();
        self.x = Some(x);
        self.standardized = Some(std);
        Ok(self)
    }

    pub fn mean(&self) -> f64 {
        self.raw.get(1).copied().unwrap_or(0.0)
    }

    pub fn raw(&self, k: u32) -> Option<f64> {
        order(&self.raw, k)
    }

    pub fn central(&self, k: u32) -> Option<f64> {
        order(&self.central, k)
    }

    pub fn standardized(&self, k: u32) -> Option<f64> {
        self.standardized.as_deref().and_then(|s| order(s, k))
    }
}

fn order(v: &[f64], k: u32) -> Option<f64> {
    v.get(k as usize).copied()
}

/// `E((Y + shift)^n)` from the central moments of `Y` (orders `0..`).
fn shifted_moment(central: &[f64], shift: f64, n: u32) -> f64 {
    let terms = (0..=n).map(|j| binomial(n, j) * central[j as usize] * libm::pow(shift, f64::from(n - j)));
    terms.collect::<CompensatedSum>().value()
}

/// Cumulants `kappa_1..=kappa_n` of a Bernoulli(r) variable, from its moment
/// sequence (every raw moment equals `r`).
fn bernoulli_cumulants(r: f64, n: usize, out: &mut [f64; MAX_MOMENT as usize + 1]) {
    for m in 1..=n {
        let mut acc = r;
        for (j, &kj) in out.iter().enumerate().take(m).skip(1) {
            acc -= binomial(m as u32 - 1, j as u32 - 1) * kj * r;
        }
        out[m] = acc;
    }
}

/// Central moments of orders `0..=n` from cumulants `kappa[1..=n]`.
fn central_from_cumulants(kappa: &[f64], n: usize) -> Vec<f64> {
    let mut mu = vec![0.0; n + 1];
    mu[0] = 1.0;
    for m in 2..=n {
        let mut acc = CompensatedSum::new();
        for j in 2..=m {
            acc.add(binomial(m as u32 - 1, j as u32 - 1) * kappa[j] * mu[m - j]);
        }
        mu[m] = acc.value();
    }
    mu
}

/// Mean and central moments of `R_d(Z)` up to `k_max` by cumulant
/// accumulation; no truncation is involved.
pub fn exact_moments(fam: &BernoulliFamily, k_max: u32) -> Result<MomentReport> {
    if !(1..=MAX_MOMENT).contains(&k_max) {
        return Err(Error::domain("k", "moment order must be between 1 and 12"));
    }
    let n = k_max as usize;
    let mut sums = [CompensatedSum::new(); MAX_MOMENT as usize + 1];
    let mut kappa = [0.0; MAX_MOMENT as usize + 1];
    for &p in fam.primes() {
        let r = fam.probability_dd(p).to_f64();
        bernoulli_cumulants(r, n, &mut kappa);
        for (s, &c) in sums.iter_mut().zip(&kappa).take(n + 1).skip(1) {
            s.add(c);
        }
    }
    let totals: Vec<f64> = sums.iter().map(|s| s.value()).collect();
    let central = central_from_cumulants(&totals, n);
    Ok(MomentReport::from_central(MomentSource::ModelExact, fam.cutoff(), totals[1], central))
}

/// [`exact_moments`] plus moments about `mu(X)` scaled by `mu(X)^{k/2}`.
pub fn standardized_moments(fam: &BernoulliFamily, x: f64, k_max: u32) -> Result<MomentReport> {
    loglog_mean(x)?;
    exact_moments(fam, k_max)?.with_standardization(x)
}

/// Seeded sampler for `R_d(Z)`.
///
/// Draw `i` reads the ChaCha8 stream number `i` under the key expanded from
/// the seed, one 32-bit word per prime in increasing order, so the outcome
/// for (seed, draw, prime index) never depends on how draws are split.
#[derive(Clone, Debug)]
pub struct BernoulliSampler {
    thresholds: Vec<u64>,
    seed: u64,
}

impl BernoulliSampler {
    pub fn new(fam: &BernoulliFamily, seed: u64) -> Self {
        let scale = 4_294_967_296.0; // 2^32
        let thresholds =
            fam.primes().iter().map(|&p| libm::round(fam.probability_dd(p).to_f64() * scale) as u64).collect();
        BernoulliSampler { thresholds, seed }
    }

    /// Histogram of the draws with indices in `draws`.
    pub fn draw_range(&self, draws: Range<u64>) -> Histogram {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut tally: Vec<u64> = vec![0; 16];
        for draw in draws {
            rng.set_stream(draw);
            rng.set_word_pos(0);
            let mut hits = 0usize;
            for &t in &self.thresholds {
                hits += (u64::from(rng.next_u32()) < t) as usize;
            }
            if hits >= tally.len() {
                tally.resize(hits + 1, 0);
            }
            tally[hits] += 1;
        }
        let mut h = Histogram::new();
        for (v, &c) in tally.iter().enumerate() {
            if c > 0 {
                h.add_count(v as u32, c);
            }
        }
        h
    }
}

/// `n` independent draws of `R_d(Z)`.
pub fn sample(fam: &BernoulliFamily, n: u64, seed: u64) -> Result<Histogram> {
    if n == 0 {
        return Err(Error::domain("n", "need at least one draw"));
    }
    Ok(BernoulliSampler::new(fam, seed).draw_range(0..n))
}

/// `floor(X^{alpha / (2k(beta + 1))})`, never below 1.
pub fn paper_cutoff(spec: FamilySpec, x: f64, k: u32) -> Result<u64> {
    if !(x.is_finite() && x >= 2.0) {
        return Err(Error::domain("X", "cutoff needs X >= 2"));
    }
    if k == 0 {
        return Err(Error::domain("k", "cutoff needs k >= 1"));
    }
    let e = spec.alpha() / (spec.beta() + Rational::from_integer(1)) / Rational::from_integer(2 * i128::from(k));
    let e = *e.numer() as f64 / *e.denom() as f64;
    let log_x = libm::log(x);
    // Guard against `10^4 = 9999.999...` style rounding on exact powers.
    let mut z = libm::floor(libm::exp(e * log_x) * (1.0 + 1e-12));
    if z >= 2.0 && libm::log(z) > e * log_x * (1.0 + 1e-12) {
        z -= 1.0;
    }
    Ok((z as u64).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(d: u32, z: u64) -> BernoulliFamily {
        BernoulliFamily::new(FamilySpec::new(d).unwrap(), z).unwrap()
    }

    #[test]
    fn distribution_examples() {
        let dist = exact_distribution(&fam(2, 2), 4).unwrap();
        assert!((dist.mass[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((dist.mass[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(dist.tail_mass, 0.0);

        let dist = exact_distribution(&fam(2, 3), 4).unwrap();
        assert!((dist.mass[2] - 1.0 / 12.0).abs() < 1e-15);

        let dist = exact_distribution(&fam(3, 100), 1).unwrap();
        assert!(dist.tail_mass > 0.0);
        assert!(exact_distribution(&fam(3, 100), 0).is_err());
    }

    #[test]
    fn moments_examples() {
        let rep = exact_moments(&fam(2, 3), 4).unwrap();
        assert!((rep.mean() - 7.0 / 12.0).abs() < 1e-15);
        assert!((rep.central(2).unwrap() - 59.0 / 144.0).abs() < 1e-15);
        assert_eq!(rep.central(1), Some(0.0));
        assert!(exact_moments(&fam(2, 3), 0).is_err());
        assert!(exact_moments(&fam(2, 3), 13).is_err());
    }

    #[test]
    fn two_paths_agree() {
        for d in 2..=5 {
            let f = fam(d, 500);
            let dist = exact_distribution(&f, f.len()).unwrap();
            let rep = exact_moments(&f, 6).unwrap();
            let mean = dist.mean();
            assert!((mean - rep.mean()).abs() < 1e-12);
            for k in 2..=6 {
                assert!((dist.moment_about(mean, k) - rep.central(k).unwrap()).abs() < 1e-10, "d={d} k={k}");
                assert!((dist.moment_about(0.0, k) - rep.raw(k).unwrap()).abs() < 1e-9, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn standardized_shift() {
        let f = fam(3, 1000);
        let x = 1e6;
        let rep = standardized_moments(&f, x, 4).unwrap();
        let dist = exact_distribution(&f, 64).unwrap();
        let mu = loglog_mean(x).unwrap();
        for k in 1..=4 {
            let direct = dist.moment_about(mu, k) / libm::pow(mu, f64::from(k) / 2.0);
            assert!((direct - rep.standardized(k).unwrap()).abs() < 1e-10);
        }
        assert!(standardized_moments(&f, 2.0, 4).is_err());
    }

    #[test]
    fn sampler_determinism_and_splits() {
        let f = fam(3, 200);
        let s = BernoulliSampler::new(&f, 7);
        let whole = s.draw_range(0..5000);
        let mut parts = s.draw_range(0..1234);
        parts.merge(&s.draw_range(1234..4000));
        parts.merge(&s.draw_range(4000..5000));
        assert_eq!(whole, parts);
        assert_eq!(whole, sample(&f, 5000, 7).unwrap());
        assert_ne!(whole, sample(&f, 5000, 8).unwrap());
        assert_eq!(sample(&f, 1, 3).unwrap().total(), 1);
        assert!(sample(&f, 0, 3).is_err());
    }

    #[test]
    fn cutoff_examples() {
        assert_eq!(paper_cutoff(FamilySpec::CUBIC, 1e8, 4).unwrap(), 1);
        assert_eq!(paper_cutoff(FamilySpec::QUADRATIC, 1e8, 1).unwrap(), 10_000);
        assert_eq!(paper_cutoff(FamilySpec::QUINTIC, 2.0, 50).unwrap(), 1);
        assert!(paper_cutoff(FamilySpec::CUBIC, 1.0, 1).is_err());
    }

    #[test]
    fn family_rejects_small_cutoff() {
        assert!(BernoulliFamily::new(FamilySpec::CUBIC, 1).is_err());
        assert_eq!(fam(3, 100).len(), 25);
    }
}
