//! Empirical verification harness: segmented prime sieve, per-prime index
//! computation for r, progression filtering, and statistical comparison
//! against the predicted densities.

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::densities::{generic_density, ProblemSpec};
use crate::numtheory::{isqrt_u64, multiplicative_order, pow_mod, small_primes, Factorization};
use crate::{Error, Result};

/// Sieve parameters. Results are independent of `segment_size` and
/// `workers`; only the bound matters for the counts.
#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    pub bound: u64,
    pub segment_size: u64,
    pub workers: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            bound: 10_000_000,
            segment_size: 1 << 18,
            workers: 4,
        }
    }
}

impl SieveConfig {
    pub fn with_bound(bound: u64) -> Self {
        SieveConfig {
            bound,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.bound < 100 || self.bound > 1_000_000_000 {
            return Err(Error::OutOfRange("bound must be in 100..=10^9".into()));
        }
        if self.segment_size == 0 || self.segment_size % 4096 != 0 {
            return Err(Error::OutOfRange(
                "segment_size must be a positive multiple of 4096".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::OutOfRange("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// Sieve counts and the comparison against the predicted density.
#[derive(Debug, Clone)]
pub struct EmpiricalReport {
    pub spec: ProblemSpec,
    pub bound: u64,
    /// Primes ≤ bound minus the exclusions (q ≤ f and q | num·den of r).
    pub primes_considered: u64,
    pub excluded: u64,
    pub matching: u64,
    pub observed: f64,
    pub predicted: f64,
    pub deviation: f64,
    pub binomial_se: f64,
}

fn segment_ranges(config: &SieveConfig) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 2u64;
    while lo <= config.bound {
        let hi = (lo + config.segment_size).min(config.bound + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Primes in [lo, hi), given the base primes up to √hi.
fn primes_in_range(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    if lo <= 1 {
        for n in lo..2.min(hi) {
            composite[(n - lo) as usize] = true;
        }
    }
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut start = p * p.max(lo.div_ceil(p));
        if start < p * p {
            start = p * p;
        }
        let mut m = start;
        while m < hi {
            if m != p {
                composite[(m - lo) as usize] = true;
            }
            m += p;
        }
    }
    (lo..hi)
        .filter(|&n| !composite[(n - lo) as usize])
        .collect()
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(job)
}

/// Streams every prime ≤ bound exactly once to `per_segment`, ascending
/// within each segment. Segments are processed in parallel; any aggregate
/// built from commutative reductions is deterministic.
pub fn iterate_primes<F>(config: &SieveConfig, per_segment: F) -> Result<()>
where
    F: Fn(&[u64]) + Sync,
{
    config.validate()?;
    let base = small_primes(isqrt_u64(config.bound) as usize + 2);
    let ranges = segment_ranges(config);
    with_pool(config.workers, || {
        ranges.par_iter().for_each(|&(lo, hi)| {
            per_segment(&primes_in_range(lo, hi, &base));
        });
    });
    Ok(())
}

/// Number of primes ≤ bound.
pub fn prime_count(config: &SieveConfig) -> Result<u64> {
    config.validate()?;
    let base = small_primes(isqrt_u64(config.bound) as usize + 2);
    let ranges = segment_ranges(config);
    let count = with_pool(config.workers, || {
        ranges
            .par_iter()
            .map(|&(lo, hi)| primes_in_range(lo, hi, &base).len() as u64)
            .sum()
    });
    Ok(count)
}

/// Factoring backend for the q−1 values: a smallest-prime-factor table for
/// moderate bounds, trial division by the base primes beyond that.
enum Factorizer {
    Spf(Vec<u32>),
    Trial(Vec<u64>),
}

const SPF_TABLE_LIMIT: u64 = 30_000_000;

impl Factorizer {
    fn build(bound: u64) -> Factorizer {
        if bound <= SPF_TABLE_LIMIT {
            let n = bound as usize;
            let mut spf = vec![0u32; n + 1];
            for i in 2..=n {
                if spf[i] == 0 {
                    let mut j = i;
                    while j <= n {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
            Factorizer::Spf(spf)
        } else {
            Factorizer::Trial(small_primes(isqrt_u64(bound) as usize + 2))
        }
    }

    fn factor(&self, n: u64) -> Factorization {
        debug_assert!(n >= 1);
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        match self {
            Factorizer::Spf(spf) => {
                let mut m = n as usize;
                while m > 1 {
                    let p = spf[m] as u64;
                    let mut k = 0;
                    while m as u64 % p == 0 {
                        m /= p as usize;
                        k += 1;
                    }
                    pairs.push((p, k));
                }
            }
            Factorizer::Trial(primes) => {
                let mut m = n;
                for &p in primes {
                    if p * p > m {
                        break;
                    }
                    if m % p == 0 {
                        let mut k = 0;
                        while m % p == 0 {
                            m /= p;
                            k += 1;
                        }
                        pairs.push((p, k));
                    }
                }
                if m > 1 {
                    pairs.push((m, 1));
                }
            }
        }
        Factorization::from_pairs(pairs)
    }
}

/// The sign and magnitudes of r, reduced for per-prime modular arithmetic.
struct ReducedRational {
    num: u64,
    den: u64,
    negative: bool,
}

impl ReducedRational {
    fn of(spec: &ProblemSpec) -> Result<ReducedRational> {
        let r = spec.r();
        Ok(ReducedRational {
            num: r.numer().abs().to_u64().ok_or(Error::InputTooLarge)?,
            den: r.denom().abs().to_u64().ok_or(Error::InputTooLarge)?,
            negative: r.is_negative(),
        })
    }
}

/// Index of the subgroup of F_q^* generated by r: (q−1)/ord_q(r), or None
/// when q divides the numerator or denominator of r.
pub fn index_of(r_num: i64, r_den: u64, q: u64, q_minus_1: &Factorization) -> Option<u64> {
    let num = r_num.unsigned_abs();
    if num % q == 0 || r_den % q == 0 {
        return None;
    }
    let inv_den = pow_mod(r_den % q, q - 2, q);
    let mut x = ((num % q) as u128 * inv_den as u128 % q as u128) as u64;
    if r_num < 0 {
        x = (q - x) % q;
    }
    let ord = multiplicative_order(x, q, q_minus_1).ok()?;
    Some((q - 1) / ord)
}

/// Counts primes q ≤ bound with q ≡ a mod f (when given) and index of r
/// equal to t, and compares against the predicted density.
pub fn run_experiment(spec: &ProblemSpec, config: &SieveConfig) -> Result<EmpiricalReport> {
    config.validate()?;
    let rr = ReducedRational::of(spec)?;
    let (a, f) = spec.progression().unwrap_or((0, 1));
    let t = spec.index_t();
    let (predicted_density, _) = generic_density(spec)?;
    let predicted = predicted_density.to_f64();

    let base = small_primes(isqrt_u64(config.bound) as usize + 2);
    let factorizer = Factorizer::build(config.bound);
    let ranges = segment_ranges(config);
    let signed_num = if rr.negative {
        -(rr.num as i64)
    } else {
        rr.num as i64
    };

    let (considered, excluded, matching) = with_pool(config.workers, || {
        ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let mut considered = 0u64;
                let mut excluded = 0u64;
                let mut matching = 0u64;
                for q in primes_in_range(lo, hi, &base) {
                    if q <= f || rr.num % q == 0 || rr.den % q == 0 {
                        excluded += 1;
                        continue;
                    }
                    considered += 1;
                    if f > 1 && q % f != a {
                        continue;
                    }
                    let qm1 = factorizer.factor(q - 1);
                    debug_assert_eq!(qm1.value(), q - 1);
                    if index_of(signed_num, rr.den, q, &qm1) == Some(t) {
                        matching += 1;
                    }
                }
                (considered, excluded, matching)
            })
            .reduce(
                || (0, 0, 0),
                |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2),
            )
    });

    let observed = matching as f64 / considered as f64;
    let binomial_se = (predicted * (1.0 - predicted) / considered as f64).sqrt();
    Ok(EmpiricalReport {
        spec: spec.clone(),
        bound: config.bound,
        primes_considered: considered,
        excluded,
        matching,
        observed,
        predicted,
        deviation: observed - predicted,
        binomial_se,
    })
}
