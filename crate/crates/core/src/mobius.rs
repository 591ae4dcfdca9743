//! Segmented Möbius sieve and the arithmetic-progression lemmas used by the
//! entropy argument for the strongly correlated Toeplitz sequence.

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlation::{correlate, CorrelationSeries, SampleSchedule};
use crate::error::{invalid, Error, Result};
use crate::sequence::SymbolSequence;

/// Default number of primes entering the partial product of
/// [`tail_product_bound`]: all primes below one million.
pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

/// Slack absorbing floating-point rounding in the tail-product comparison.
/// With `n_partial == k` the two sides agree exactly in real arithmetic.
pub const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest accepted segment, in cells.
    pub max_segment: usize,
    /// Largest prime the internal prime sieve will produce.
    pub prime_cap: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max_segment: 1 << 24,
            prime_cap: 2_000_000_000,
        }
    }
}

/// μ(n) for 1 ≤ n ≤ n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// μ(n), or `None` outside `1..=n_max`.
    pub fn mu(&self, n: usize) -> Option<i8> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// All values, index `i` holding μ(i + 1).
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Mertens function M(n) = Σ_{i ≤ n} μ(i).
    pub fn mertens(&self, n: usize) -> Result<i64> {
        self.check_range(n)?;
        Ok(self.values[..n].iter().map(|&v| v as i64).sum())
    }

    pub fn to_sequence(&self) -> SymbolSequence {
        SymbolSequence::new(self.values.clone())
    }

    pub(crate) fn check_range(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.values.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Primes `p ≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The first `count` primes.
pub fn first_primes(count: usize, config: &SieveConfig) -> Result<Vec<u64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // p_n < n (ln n + ln ln n) for n ≥ 6
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64 + 1;
    if bound > config.prime_cap {
        return Err(invalid(format!(
            "{count} primes need a sieve to {bound}, above the cap {}",
            config.prime_cap
        )));
    }
    let mut primes = primes_up_to(bound);
    primes.truncate(count);
    Ok(primes)
}

pub fn mobius_sieve(n_max: usize, segment_size: usize) -> Result<MobiusTable> {
    mobius_sieve_with(n_max, segment_size, &SieveConfig::default())
}

/// Segmented sieve for μ on `1..=n_max`. Segments are processed in parallel;
/// the output does not depend on `segment_size`.
pub fn mobius_sieve_with(
    n_max: usize,
    segment_size: usize,
    config: &SieveConfig,
) -> Result<MobiusTable> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    if segment_size == 0 || segment_size > config.max_segment {
        return Err(Error::SegmentSize {
            requested: segment_size,
            cap: config.max_segment,
        });
    }
    let root = (n_max as f64).sqrt() as u64 + 1;
    if root > config.prime_cap {
        return Err(invalid("n_max exceeds the configured prime cap"));
    }
    let primes = primes_up_to(root);

    let mut values = vec![0i8; n_max];
    values
        .par_chunks_mut(segment_size)
        .enumerate()
        .for_each(|(i, chunk)| {
            let lo = (i * segment_size) as u64 + 1;
            sieve_segment(lo, chunk, &primes);
        });
    Ok(MobiusTable { values })
}

fn sieve_segment(lo: u64, out: &mut [i8], primes: &[u64]) {
    let hi = lo + out.len() as u64;
    let mut radical = vec![1u64; out.len()];
    out.fill(1);
    for &p in primes {
        if p * p > hi - 1 {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            out[i] = -out[i];
            radical[i] *= p;
            m += p;
        }
        let pp = p * p;
        let mut m = lo.div_ceil(pp) * pp;
        while m < hi {
            out[(m - lo) as usize] = 0;
            m += pp;
        }
    }
    for (i, (v, r)) in out.iter_mut().zip(&radical).enumerate() {
        // Whatever is left after removing primes below the square root is 1 or a prime.
        if *v != 0 && *r != lo + i as u64 {
            *v = -*v;
        }
    }
}

/// #{i ≤ n : |μ(i)| = 1} / n.
pub fn squarefree_density(table: &MobiusTable, n: usize) -> Result<Ratio<u64>> {
    table.check_range(n)?;
    let count = table.values[..n].iter().filter(|&&v| v != 0).count() as u64;
    Ok(Ratio::new(count, n as u64))
}

/// Cesàro averages of μ against `pattern` repeated with its own length as period.
pub fn periodic_correlation(
    table: &MobiusTable,
    pattern: &[i8],
    n: usize,
    schedule: &SampleSchedule,
) -> Result<CorrelationSeries> {
    table.check_range(n)?;
    let eta = SymbolSequence::periodic(pattern, n)?;
    let mu = SymbolSequence::new(table.values[..n].to_vec());
    correlate(&mu, &eta, schedule)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    /// Partial product over q_k..q_{n_partial} times the telescoping tail bound.
    pub lower_estimate: f64,
    /// 1 − 1/q_k.
    pub bound: f64,
    pub holds: bool,
}

/// Suffix products of (1 − 1/q_j²) over the first `n_partial` primes, for
/// evaluating [`tail_product_bound`] at many k.
#[derive(Debug, Clone)]
pub struct TailProducts {
    primes: Vec<u64>,
    /// suffix_log[i] = Σ_{j ≥ i} ln(1 − 1/q_j²) over the listed primes.
    suffix_log: Vec<f64>,
    /// ln of the telescoping bound for the primes beyond the list.
    tail_log: f64,
}

impl TailProducts {
    pub fn new(n_partial: usize) -> Result<Self> {
        Self::with_config(n_partial, &SieveConfig::default())
    }

    pub fn with_config(n_partial: usize, config: &SieveConfig) -> Result<Self> {
        if n_partial == 0 {
            return Err(invalid("n_partial must be at least 1"));
        }
        Ok(Self::from_primes(first_primes(n_partial, config)?))
    }

    /// All primes below `cutoff`.
    pub fn up_to(cutoff: u64) -> Result<Self> {
        let primes = primes_up_to(cutoff);
        if primes.is_empty() {
            return Err(invalid("cutoff admits no primes"));
        }
        Ok(Self::from_primes(primes))
    }

    fn from_primes(primes: Vec<u64>) -> Self {
        let mut suffix_log = vec![0.0; primes.len() + 1];
        for i in (0..primes.len()).rev() {
            let q = primes[i] as f64;
            suffix_log[i] = suffix_log[i + 1] + (-1.0 / (q * q)).ln_1p();
        }
        // ∏_{n=a}^{N} (1 − 1/n²) = (a−1)/a · (N+1)/N → (a−1)/a, taken from a = q_last + 1.
        let last = *primes.last().expect("nonempty") as f64;
        let tail_log = (last / (last + 1.0)).ln();
        TailProducts {
            primes,
            suffix_log,
            tail_log,
        }
    }

    pub fn n_partial(&self) -> usize {
        self.primes.len()
    }

    pub fn bound(&self, k: usize) -> Result<TailBound> {
        if k == 0 || k > self.primes.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.primes.len(),
            });
        }
        let lower_estimate = (self.suffix_log[k - 1] + self.tail_log).exp();
        let bound = 1.0 - 1.0 / self.primes[k - 1] as f64;
        Ok(TailBound {
            lower_estimate,
            bound,
            holds: lower_estimate >= bound - ROUNDING_SLACK,
        })
    }
}

/// Checks ∏_{j ≥ k}(1 − 1/q_j²) ≥ 1 − 1/q_k, with q_j the j-th prime,
/// using the first `n_partial` primes explicitly.
pub fn tail_product_bound(k: usize, n_partial: usize) -> Result<TailBound> {
    if k == 0 || n_partial < k {
        return Err(invalid("need 1 ≤ k ≤ n_partial"));
    }
    TailProducts::new(n_partial)?.bound(k)
}

/// The progression {k·step + offset : k ∈ ℕ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Progression {
    pub step: u64,
    pub offset: u64,
}

impl Progression {
    pub fn contains(&self, x: u128) -> bool {
        let offset = self.offset as u128;
        x >= offset && (x - offset).is_multiple_of(self.step as u128)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitDensity {
    pub empirical: Ratio<u64>,
    /// Σ_j 1/p'_j with p'_j = p_j / gcd(p_j, M).
    pub bound: f64,
}

/// Fraction of k ≤ n with kM + r in the union of the progressions, next to
/// the upper-density bound Σ 1/p'_j.
pub fn progression_hit_density(
    modulus: u64,
    offset: u64,
    progressions: &[Progression],
    n: u64,
) -> Result<HitDensity> {
    if modulus == 0 {
        return Err(invalid("M must be positive"));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if let Some(p) = progressions.iter().find(|p| p.step == 0) {
        return Err(invalid(format!("progression step must be positive: {p:?}")));
    }
    let bound = progressions
        .iter()
        .map(|p| {
            let reduced = p.step / p.step.gcd(&modulus);
            1.0 / reduced as f64
        })
        .sum();
    let hits = (1..=n)
        .filter(|&k| {
            let x = k as u128 * modulus as u128 + offset as u128;
            progressions.iter().any(|p| p.contains(x))
        })
        .count() as u64;
    Ok(HitDensity {
        empirical: Ratio::new(hits, n),
        bound,
    })
}

/// A hit-density experiment: kM + r tested against a family of progressions.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ProgressionFamily {
    pub modulus: u64,
    pub offset: u64,
    pub progressions: Vec<Progression>,
}

/// A reproducible random family: 3 to 12 progressions with steps
/// p_j ∈ [(j+3)², 2(j+3)²] (so p_j / j grows without bound), random offsets
/// below p_j, M ∈ [1, 60] and r ∈ [0, 2M).
pub fn seeded_progressions(seed: u64) -> ProgressionFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(3..=12u64);
    let progressions = (1..=count)
        .map(|j| {
            let s = (j + 3) * (j + 3);
            let step = s + rng.gen_range(0..=s);
            Progression {
                step,
                offset: rng.gen_range(0..step),
            }
        })
        .collect();
    let modulus = rng.gen_range(1..=60u64);
    ProgressionFamily {
        modulus,
        offset: rng.gen_range(0..2 * modulus),
        progressions,
    }
}

/// Largest period product accepted by [`intersection_density`].
pub const MAX_INDEPENDENCE_SCAN: u64 = 1 << 32;

/// Exact density of ∩_i {n ≡ r_i (mod p_i)}, scanned over one full period ∏ p_i.
pub fn intersection_density(periods: &[u64], residues: &[u64]) -> Result<Ratio<u64>> {
    if periods.is_empty() || periods.len() != residues.len() {
        return Err(invalid("need one residue per period and at least one period"));
    }
    if periods.contains(&0) {
        return Err(invalid("periods must be positive"));
    }
    for (i, &a) in periods.iter().enumerate() {
        for &b in &periods[i + 1..] {
            if a.gcd(&b) != 1 {
                return Err(Error::Hypothesis(format!(
                    "periods {a} and {b} are not relatively prime"
                )));
            }
        }
    }
    let product = periods
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .filter(|&p| p <= MAX_INDEPENDENCE_SCAN)
        .ok_or_else(|| invalid("period product too large to scan"))?;
    let count = (1..=product)
        .filter(|n| {
            periods
                .iter()
                .zip(residues)
                .all(|(&p, &r)| n % p == r % p)
        })
        .count() as u64;
    Ok(Ratio::new(count, product))
}

/// True iff the intersection density equals ∏ 1/p_i.
pub fn density_independence_check(periods: &[u64], residues: &[u64]) -> Result<bool> {
    let density = intersection_density(periods, residues)?;
    let product: Ratio<u64> = periods.iter().map(|&p| Ratio::new(1, p)).product();
    Ok(density == product)
}
