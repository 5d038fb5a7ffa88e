//! Integer and rational primitives: factorization, multiplicative functions,
//! Kronecker symbols, quadratic field discriminants, multiplicative orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::{Error, Result};

/// Exact prime factorization of a positive integer, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Assembles a factorization from (prime, exponent) pairs.
    pub(crate) fn from_pairs(mut factors: Vec<(u64, u32)>) -> Self {
        factors.sort_unstable();
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(p, k)| k >= 1 && is_prime(p)));
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplicity of `p` in the factored number.
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, k)| k)
    }

    /// Reconstructs the factored number.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, k)| p.pow(k))
            .product::<u64>()
    }

    /// Product of the distinct primes (the squarefree kernel of the number).
    pub fn radical(&self) -> u64 {
        self.primes().product::<u64>().max(1)
    }
}

fn small_prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| small_primes(1 << 20))
}

/// Simple sieve of Eratosthenes; primes ≤ `bound` in increasing order.
pub fn small_primes(bound: usize) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for n in 2..=bound {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n * n;
            while m <= bound {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Integer square root: largest s with s² ≤ n.
pub fn isqrt_u64(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s > 0 && s.checked_mul(s).map_or(true, |sq| sq > n) {
        s -= 1;
    }
    while (s + 1).checked_mul(s + 1).is_some_and(|sq| sq <= n) {
        s += 1;
    }
    s
}

/// Deterministic Miller–Rabin. The witness set is valid for all
/// n < 3.3 × 10^24, far beyond the 64-bit range used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Exact prime factorization of `n ≥ 1`; `n = 1` yields the empty product.
///
/// Trial division by sieved primes up to 2^20, then deterministic
/// Miller–Rabin plus Pollard rho on any remaining cofactor.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    for &p in small_prime_table() {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            factors.push((p, k));
        }
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if is_prime(c) {
                match factors.iter_mut().find(|(p, _)| *p == c) {
                    Some((_, k)) => *k += 1,
                    None => factors.push((c, 1)),
                }
            } else {
                let d = pollard_rho(c);
                stack.push(d);
                stack.push(c / d);
            }
        }
    }
    factors.sort_unstable();
    Factorization { factors }
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.factors.iter().any(|&(_, k)| k > 1) {
        return 0;
    }
    if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, k)| (p - 1) * p.pow(k - 1))
        .product::<u64>()
        .max(1)
}

/// Kronecker symbol (d | n) with the standard conventions:
/// (d | 1) = 1, (d | 0) = 1 iff d = ±1, supplementary laws at 2 and −1.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    if d == 0 {
        return if n == 1 || n == -1 { 1 } else { 0 };
    }
    let mut acc = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            acc = -acc;
        }
    }
    let mut d = d;
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        // (d | 2) per d mod 8, applied `twos` times
        let dm8 = d.rem_euclid(8);
        if twos % 2 == 1 && (dm8 == 3 || dm8 == 5) {
            acc = -acc;
        }
    }
    // now n is odd and positive: Jacobi symbol (d | n)
    d = d.rem_euclid(n);
    while d != 0 {
        let twos = d.trailing_zeros();
        d >>= twos;
        let nm8 = n % 8;
        if twos % 2 == 1 && (nm8 == 3 || nm8 == 5) {
            acc = -acc;
        }
        if d % 4 == 3 && n % 4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut d, &mut n);
        d %= n;
    }
    if n == 1 {
        acc
    } else {
        0
    }
}

/// Discriminant of the quadratic field Q(√x) for non-zero rational `x`,
/// extended by square classes: 1 when `x` is a square, otherwise `s` if the
/// signed squarefree kernel `s` of `x` is 1 mod 4, else `4s`.
pub fn disc_sqrt(x: &BigRational) -> Result<BigInt> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let num = x.numer().abs().to_u64().ok_or(Error::InputTooLarge)?;
    let den = x.denom().abs().to_u64().ok_or(Error::InputTooLarge)?;
    let mut kernel = BigInt::from(1);
    for f in [factorize(num), factorize(den)] {
        for &(p, k) in f.factors() {
            if k % 2 == 1 {
                kernel *= BigInt::from(p);
            }
        }
    }
    if x.is_negative() {
        kernel = -kernel;
    }
    // kernel ≡ 1 mod 4 is its own discriminant, otherwise conductor 2
    let one = BigInt::from(1);
    if kernel == one {
        Ok(one)
    } else if (&kernel - 1i32).mod_floor(&BigInt::from(4)).is_zero() {
        Ok(kernel)
    } else {
        Ok(kernel * 4)
    }
}

/// Least k ≥ 1 with x^k ≡ 1 mod q, for prime q and x coprime to q.
/// Descends from q−1 through the supplied factorization of q−1.
pub fn multiplicative_order(x: u64, q: u64, q_minus_1: &Factorization) -> Result<u64> {
    let x = x % q;
    if x == 0 {
        return Err(Error::ZeroResidue);
    }
    debug_assert_eq!(q_minus_1.value(), q - 1);
    let mut ord = q - 1;
    for &(p, k) in q_minus_1.factors() {
        for _ in 0..k {
            if ord % p == 0 && pow_mod(x, ord / p, q) == 1 {
                ord /= p;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}
