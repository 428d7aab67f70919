//! Statistics over enumerated fields.
//!
//! Everything reduces to folds into [`Histogram`]s (plain `omega`, `omega`
//! truncated at `Z`) and exact divisibility counts; both merge by addition,
//! so any partition of the records gives the same final numbers.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::densities::{density, ensure_squarefree, loglog_mean, FamilySpec};
use crate::error::{Error, Result};
use crate::float::{binomial, normal_cdf, CompensatedSum};
use crate::histogram::Histogram;
use crate::model::{exact_moments, BernoulliFamily, MomentReport, MomentSource};
use crate::primes::PrimeTable;
use crate::quadratic::FieldRecord;

/// `(1/N) sum count(w) (w - mu(X))^k`.
pub fn central_moment(h: &Histogram, k: u32, x: f64) -> Result<f64> {
    let mu = loglog_mean(x)?;
    if k == 0 {
        return if h.is_empty() { Err(Error::Empty) } else { Ok(1.0) };
    }
    h.moment_about(mu, k)
}

/// `(1/N) sum count(w) w^k`.
pub fn raw_moment(h: &Histogram, k: u32) -> Result<f64> {
    if k == 0 {
        return if h.is_empty() { Err(Error::Empty) } else { Ok(1.0) };
    }
    h.moment_about(0.0, k)
}

/// Counts prime divisors up to a fixed `Z`.
#[derive(Clone, Debug)]
pub struct TruncatedOmega {
    z: u64,
    table: Option<PrimeTable>,
}

impl TruncatedOmega {
    pub fn new(z: u64) -> Result<Self> {
        let table = if z >= 2 { Some(PrimeTable::new(z)?) } else { None };
        Ok(TruncatedOmega { z, table })
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    /// `#{p <= Z : p | n}` for `n >= 1`.
    pub fn count(&self, n: u64) -> u32 {
        match &self.table {
            Some(t) => t.count_prime_divisors_up_to(n, self.z),
            None => 0,
        }
    }
}

/// Histogram of `omega(K; Z)` over the records.
pub fn truncated_omega(records: impl IntoIterator<Item = FieldRecord>, z: u64) -> Result<Histogram> {
    let trunc = TruncatedOmega::new(z)?;
    Ok(records.into_iter().map(|r| trunc.count(r.abs_discriminant())).collect())
}

/// Histogram of `omega(K)` over the records.
pub fn omega_histogram(records: impl IntoIterator<Item = FieldRecord>) -> Histogram {
    records.into_iter().map(|r| u32::from(r.omega)).collect()
}

/// `(1/N) sum omega(K; Z)^k` from the truncated histogram, next to the
/// model's `E(R_d(Z)^k)`.
pub fn truncated_raw_moment(
    truncated: &Histogram,
    data_family: FamilySpec,
    z: u64,
    k: u32,
    model: &BernoulliFamily,
) -> Result<(f64, f64)> {
    if model.spec() != data_family {
        return Err(Error::Mismatch("degree differs"));
    }
    if model.cutoff() != z {
        return Err(Error::Mismatch("cutoff differs"));
    }
    if k == 0 {
        return if truncated.is_empty() { Err(Error::Empty) } else { Ok((1.0, 1.0)) };
    }
    let left = raw_moment(truncated, k)?;
    let right = exact_moments(model, k)?.raw(k).expect("order k was computed");
    Ok((left, right))
}

/// `sum_j C(k, j) (-mu)^j Mtilde_{k-j}`: the centred moment rebuilt from the
/// truncated raw moments `raw[0..=k]` (`raw[j]` of order `j`).
pub fn central_from_raw(raw: &[f64], mu: f64, k: u32) -> f64 {
    let s: CompensatedSum = (0..=k)
        .map(|j| {
            let m = raw[(k - j) as usize];
            binomial(k, j) * libm::pow(-mu, f64::from(j)) * m
        })
        .collect();
    s.value()
}

/// Moment summary of an `omega` histogram: raw moments, moments about the
/// sample mean, and (when `x > e`) about `mu(X)` scaled by `mu^{k/2}`.
pub fn histogram_moments(h: &Histogram, x: Option<f64>, z: u64, k_max: u32) -> Result<MomentReport> {
    if h.is_empty() {
        return Err(Error::Empty);
    }
    let mean = h.mean()?;
    let central =
        (0..=k_max).map(|k| if k == 1 { Ok(0.0) } else { h.moment_about(mean, k) }).collect::<Result<Vec<_>>>()?;
    let raw = (0..=k_max).map(|k| h.moment_about(0.0, k)).collect::<Result<Vec<_>>>()?;
    let standardized = match x {
        Some(x) => {
            let mu = loglog_mean(x)?;
            Some(
                (0..=k_max)
                    .map(|k| Ok(h.moment_about(mu, k)? / libm::pow(mu, f64::from(k) / 2.0)))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        None => None,
    };
    Ok(MomentReport { source: MomentSource::Fields, x, z, k: k_max, raw, central, standardized })
}

/// An `omega` histogram together with its normalisation `mu = log log X`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardizedSample {
    x: f64,
    mu: f64,
    values: Histogram,
}

impl StandardizedSample {
    pub fn new(values: Histogram, x: f64) -> Result<Self> {
        let mu = loglog_mean(x)?;
        if values.is_empty() {
            return Err(Error::Empty);
        }
        Ok(StandardizedSample { x, mu, values })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn values(&self) -> &Histogram {
        &self.values
    }

    /// `(w - mu) / sqrt(mu)`.
    pub fn z(&self, w: f64) -> f64 {
        (w - self.mu) / libm::sqrt(self.mu)
    }

    /// Where the empirical CDF steps up for the value `w`: half-way to the
    /// next integer, i.e. `z(w + 1/2)`.
    pub fn step_point(&self, w: u32) -> f64 {
        self.z(f64::from(w) + 0.5)
    }
}

/// One row of the standardized empirical CDF.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EcdfRow {
    pub omega: u32,
    pub z: f64,
    /// Empirical CDF just after the step at `z`.
    pub empirical: f64,
    pub normal: f64,
}

/// The step points of the empirical CDF, one per non-empty `omega` value.
pub fn ecdf_rows(sample: &StandardizedSample) -> Vec<EcdfRow> {
    let total = sample.values.total() as f64;
    let mut below = 0u64;
    sample
        .values
        .iter()
        .map(|(w, c)| {
            below += c;
            let z = sample.step_point(w);
            EcdfRow { omega: w, z, empirical: below as f64 / total, normal: normal_cdf(z) }
        })
        .collect()
}

/// `sup_z |F(z) - Phi(z)|` for the step function `F` of [`ecdf_rows`]. Both
/// one-sided limits are compared at each step, which is where the supremum
/// of a monotone-versus-step difference is reached.
pub fn ks_distance(sample: &StandardizedSample) -> f64 {
    let mut before = 0.0f64;
    let mut worst = 0.0f64;
    for row in ecdf_rows(sample) {
        worst = worst.max(libm::fabs(before - row.normal)).max(libm::fabs(row.empirical - row.normal));
        before = row.empirical;
    }
    worst
}

/// Number of records with `q | D`.
pub fn divisibility_count(records: impl IntoIterator<Item = FieldRecord>, q: u64) -> Result<u64> {
    ensure_squarefree(q)?;
    Ok(records.into_iter().filter(|r| r.abs_discriminant() % q == 0).count() as u64)
}

/// Exact counts of `q | D` for a fixed list of moduli; merges by addition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityTally {
    pub moduli: Vec<u64>,
    pub hits: Vec<u64>,
    pub total: u64,
}

impl DivisibilityTally {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        for &q in moduli {
            ensure_squarefree(q)?;
        }
        Ok(DivisibilityTally { moduli: moduli.to_vec(), hits: alloc::vec![0; moduli.len()], total: 0 })
    }

    #[inline]
    pub fn add(&mut self, rec: &FieldRecord) {
        let n = rec.abs_discriminant();
        self.total += 1;
        for (h, &q) in self.hits.iter_mut().zip(&self.moduli) {
            *h += u64::from(n % q == 0);
        }
    }

    pub fn merge(&mut self, other: &DivisibilityTally) {
        assert_eq!(self.moduli, other.moduli, "merging tallies over different moduli");
        for (a, b) in self.hits.iter_mut().zip(&other.hits) {
            *a += b;
        }
        self.total += other.total;
    }

    /// `q`, count, ratio, `rho_d(q)` and ratio minus density.
    pub fn rows(&self, family: FamilySpec) -> Result<Vec<DivisibilityRow>> {
        if self.total == 0 {
            return Err(Error::Empty);
        }
        self.moduli
            .iter()
            .zip(&self.hits)
            .map(|(&q, &count)| {
                let rho = density(family, q)?;
                let rho = *rho.numer() as f64 / *rho.denom() as f64;
                let ratio = count as f64 / self.total as f64;
                Ok(DivisibilityRow { q, count, ratio, density: rho, difference: ratio - rho })
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityRow {
    pub q: u64,
    pub count: u64,
    pub ratio: f64,
    pub density: f64,
    pub difference: f64,
}
