//! Closed-form evaluation of the density theorems: plain primitive roots,
//! primes in arithmetic progressions, near-primitive roots of given index,
//! vanishing classification, the Artin constant, and the inclusion–exclusion
//! series used as an interval oracle.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::numtheory::{disc_sqrt, euler_phi, factorize, gcd_u64, kronecker, small_primes};
use crate::radical::{decompose, entanglement, split_discriminant, EntanglementData, RadicalDecomposition};
use crate::{big_rational, Error, Result};

/// An exact rational coefficient times the symbolic Artin constant
/// A = ∏_p (1 − 1/(p(p−1))). The primes in `excluded_tail_primes` have had
/// their tail factor removed from A (their local contribution is already
/// inside `coeff`), so the represented value is
/// `coeff · A / ∏_{p excluded} (1 − 1/(p(p−1)))` when `uses_artin_tail`,
/// and plain `coeff` otherwise.
#[derive(Debug, Clone)]
pub struct ExactDensity {
    coeff: BigRational,
    uses_artin_tail: bool,
    excluded_tail_primes: Vec<u64>,
}

impl ExactDensity {
    pub fn zero() -> Self {
        ExactDensity {
            coeff: BigRational::zero(),
            uses_artin_tail: false,
            excluded_tail_primes: Vec::new(),
        }
    }

    /// coeff × A, with the full tail.
    pub fn artin_multiple(coeff: BigRational) -> Self {
        assert!(!coeff.is_negative());
        if coeff.is_zero() {
            return Self::zero();
        }
        ExactDensity {
            coeff,
            uses_artin_tail: true,
            excluded_tail_primes: Vec::new(),
        }
    }

    /// coeff × A / ∏_{p ∈ excluded}(1 − 1/(p(p−1))).
    pub fn with_excluded(coeff: BigRational, mut excluded: Vec<u64>) -> Self {
        assert!(!coeff.is_negative());
        if coeff.is_zero() {
            return Self::zero();
        }
        excluded.sort_unstable();
        excluded.dedup();
        ExactDensity {
            coeff,
            uses_artin_tail: true,
            excluded_tail_primes: excluded,
        }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn uses_artin_tail(&self) -> bool {
        self.uses_artin_tail
    }

    pub fn excluded_tail_primes(&self) -> &[u64] {
        &self.excluded_tail_primes
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The exact rational c with value = c × A (c = coeff for zero or
    /// tail-free densities).
    pub fn as_artin_multiple(&self) -> BigRational {
        let mut c = self.coeff.clone();
        for &p in &self.excluded_tail_primes {
            c /= artin_tail_factor(p);
        }
        c
    }

    /// Same value with the exclusion set folded away.
    pub fn normalized(&self) -> Self {
        if self.is_zero() || !self.uses_artin_tail {
            return self.clone();
        }
        ExactDensity {
            coeff: self.as_artin_multiple(),
            uses_artin_tail: true,
            excluded_tail_primes: Vec::new(),
        }
    }

    /// Float rendering at the reporting edge.
    pub fn to_f64(&self) -> f64 {
        if !self.uses_artin_tail {
            return self.coeff.to_f64().unwrap_or(f64::NAN);
        }
        self.as_artin_multiple().to_f64().unwrap_or(f64::NAN) * artin_constant_f64()
    }

    /// Rigorous rational enclosure of the represented value.
    pub fn value_bounds(&self) -> (BigRational, BigRational) {
        if !self.uses_artin_tail {
            return (self.coeff.clone(), self.coeff.clone());
        }
        let (a_lo, a_hi) = cached_artin_bounds();
        let c = self.as_artin_multiple();
        (&c * a_lo, &c * a_hi)
    }
}

impl PartialEq for ExactDensity {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() == other.is_zero();
        }
        self.uses_artin_tail == other.uses_artin_tail
            && self.as_artin_multiple() == other.as_artin_multiple()
    }
}

impl Eq for ExactDensity {}

/// Which density problem is posed: plain Artin, progression, near-primitive
/// index, or the combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    r: BigRational,
    progression: Option<(u64, u64)>,
    index_t: u64,
}

impl ProblemSpec {
    pub fn new(r: BigRational, progression: Option<(i64, u64)>, index_t: u64) -> Result<Self> {
        decompose(&r)?;
        if index_t == 0 {
            return Err(Error::OutOfRange("index t must be >= 1".into()));
        }
        let progression = match progression {
            None => None,
            Some((_, 0)) => return Err(Error::OutOfRange("modulus f must be >= 1".into())),
            Some((_, 1)) => None,
            Some((a, f)) => {
                let a = a.rem_euclid(f as i64) as u64;
                if gcd_u64(a, f) != 1 {
                    return Err(Error::NotCoprime { a, f });
                }
                Some((a, f))
            }
        };
        Ok(ProblemSpec {
            r,
            progression,
            index_t,
        })
    }

    pub fn plain(r: BigRational) -> Result<Self> {
        Self::new(r, None, 1)
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    /// Normalized progression (a, f) with 0 ≤ a < f, present only for f ≥ 2.
    pub fn progression(&self) -> Option<(u64, u64)> {
        self.progression
    }

    pub fn index_t(&self) -> u64 {
        self.index_t
    }

    /// For combined problems the primes counted satisfy q ≡ 1 mod t, so the
    /// progression must refine that: t | f and a ≡ 1 mod t.
    pub fn combined_constraints_ok(&self) -> bool {
        match (self.index_t, self.progression) {
            (t, Some((a, f))) if t > 1 => f % t == 0 && a % t == 1 % t,
            _ => true,
        }
    }
}

/// Why a density is zero, when it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishCause {
    None,
    NaiveMeasureZero,
    EmptyLocalSet,
    Thm58a,
    Thm58b,
    Thm67a,
    Thm67b,
    Thm67c,
    Thm67d,
    Thm67e,
    OracleDetected,
}

impl VanishCause {
    pub fn as_str(&self) -> &'static str {
        match self {
            VanishCause::None => "none",
            VanishCause::NaiveMeasureZero => "naive-measure-zero",
            VanishCause::EmptyLocalSet => "empty-local-set",
            VanishCause::Thm58a => "thm-5.8-a",
            VanishCause::Thm58b => "thm-5.8-b",
            VanishCause::Thm67a => "thm-6.7-a",
            VanishCause::Thm67b => "thm-6.7-b",
            VanishCause::Thm67c => "thm-6.7-c",
            VanishCause::Thm67d => "thm-6.7-d",
            VanishCause::Thm67e => "thm-6.7-e",
            VanishCause::OracleDetected => "oracle-detected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VanishingVerdict {
    vanishes: bool,
    cause: VanishCause,
}

impl VanishingVerdict {
    pub fn none() -> Self {
        VanishingVerdict {
            vanishes: false,
            cause: VanishCause::None,
        }
    }

    pub fn vanishing(cause: VanishCause) -> Self {
        assert!(cause != VanishCause::None);
        VanishingVerdict {
            vanishes: true,
            cause,
        }
    }

    pub fn vanishes(&self) -> bool {
        self.vanishes
    }

    pub fn cause(&self) -> VanishCause {
        self.cause
    }
}

/// 1 − 1/(p(p−1)), the tail factor of the Artin constant at p.
pub fn artin_tail_factor(p: u64) -> BigRational {
    let pp = (p * p - p) as i64;
    big_rational(pp - 1, pp)
}

/// Ratio by which the local factor at p | h differs from the generic one:
/// (1 − 1/(p−1)) / (1 − 1/(p(p−1))) = p(p−2)/(p²−p−1).
fn h_adjust(p: u64) -> BigRational {
    big_rational((p * (p - 2)) as i64, (p * p - p - 1) as i64)
}

/// Degree of the splitting field of X^p − r: p−1 when p | h, p(p−1) else.
pub fn local_degree(p: u64, h: u64) -> u64 {
    if h % p == 0 {
        p - 1
    } else {
        p * (p - 1)
    }
}

fn ord2_u64(n: u64) -> u32 {
    n.trailing_zeros()
}

fn divides_abs(d: i64, n: u64) -> bool {
    n % d.unsigned_abs() == 0
}

// ---------------------------------------------------------------------------
// Artin's constant
// ---------------------------------------------------------------------------

/// Rigorous rational enclosure of A = ∏_p (1 − 1/(p(p−1))) using the primes
/// below `prime_bound`. The finite product over p < X overshoots A; the tail
/// satisfies ∏_{p>X}(1 − 1/(p(p−1))) ≥ 1 − ∑_{n>X} 1/(n(n−1)) = 1 − 1/X.
pub fn artin_bounds(prime_bound: u64) -> (BigRational, BigRational) {
    const SHIFT: u32 = 128;
    let mut lo = BigUint::one() << SHIFT;
    let mut hi = lo.clone();
    for p in small_primes(prime_bound as usize) {
        let den = BigUint::from(p * p - p);
        let num = BigUint::from(p * p - p - 1);
        lo = lo * &num / &den;
        hi = (hi * &num + (&den - 1u32)) / &den;
    }
    let scale: BigInt = BigInt::one() << SHIFT;
    let partial_lo = BigRational::new(BigInt::from(lo), scale.clone());
    let partial_hi = BigRational::new(BigInt::from(hi), scale);
    let tail_lo = BigRational::one() - big_rational(1, prime_bound as i64);
    (partial_lo * tail_lo, partial_hi)
}

fn cached_artin_bounds() -> &'static (BigRational, BigRational) {
    static BOUNDS: OnceLock<(BigRational, BigRational)> = OnceLock::new();
    BOUNDS.get_or_init(|| artin_bounds(100_000))
}

/// Float value of Artin's constant, for reporting only.
pub fn artin_constant_f64() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        let (lo, hi) = cached_artin_bounds();
        (lo.to_f64().unwrap() + hi.to_f64().unwrap()) / 2.0
    })
}

fn round_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let half = big_rational(1, 2);
    let n = (x * BigRational::from_integer(scale.clone()) + half)
        .floor()
        .to_integer();
    assert!(!n.is_negative() && n < scale);
    format!("0.{:0>width$}", n.to_string(), width = digits as usize)
}

/// Decimal expansion of Artin's constant, correct to `precision_digits`
/// digits after the point. Implemented for 1 ≤ digits ≤ 7; the enclosing
/// interval is tightened until both endpoints round identically.
pub fn artin_constant(precision_digits: u32) -> Result<String> {
    if !(1..=10).contains(&precision_digits) {
        return Err(Error::OutOfRange(
            "precision_digits must be between 1 and 10".into(),
        ));
    }
    if precision_digits > 7 {
        return Err(Error::OutOfRange(
            "precision beyond the implemented bound of 7 digits".into(),
        ));
    }
    let mut bound = 1000u64.max(2 * 10u64.pow(precision_digits));
    loop {
        let (lo, hi) = artin_bounds(bound);
        let s_lo = round_decimal(&lo, precision_digits);
        let s_hi = round_decimal(&hi, precision_digits);
        if s_lo == s_hi {
            return Ok(s_lo);
        }
        bound *= 4;
        if bound > 200_000_000 {
            return Err(Error::OutOfRange(
                "interval refinement did not converge".into(),
            ));
        }
    }
}

// ---------------------------------------------------------------------------
// Plain Artin densities
// ---------------------------------------------------------------------------

/// Naive measure of the plain Artin set, as a multiple of A:
/// ∏_{p|h} (1 − 1/(p−1))/(1 − 1/(p(p−1))). Zero exactly when r is a square.
fn plain_coeff(dec: &RadicalDecomposition) -> BigRational {
    let mut c = BigRational::one();
    for p in factorize(dec.h() as u64).primes() {
        c *= h_adjust(p);
    }
    c
}

/// Entanglement correction factor E(r): 1 when D = disc Q(√r) is even, else
/// 1 − ∏_{p|D} (−1/([F_p:Q]−1)).
pub fn artin_correction(r: &BigRational) -> Result<BigRational> {
    let dec = decompose(r)?;
    let ent = entanglement(&dec)?;
    Ok(artin_correction_inner(&dec, &ent))
}

fn artin_correction_inner(dec: &RadicalDecomposition, ent: &EntanglementData) -> BigRational {
    let d = ent.d_r();
    if d % 2 == 0 {
        return BigRational::one();
    }
    let h = dec.h() as u64;
    let mut prod = BigRational::one();
    for p in factorize(d.unsigned_abs()).primes() {
        prod *= big_rational(-1, (local_degree(p, h) - 1) as i64);
    }
    BigRational::one() - prod
}

/// Density of primes q for which r is a primitive root modulo q.
pub fn artin_density(r: &BigRational) -> Result<(ExactDensity, VanishingVerdict)> {
    let dec = decompose(r)?;
    if dec.h() % 2 == 0 {
        return Ok((
            ExactDensity::zero(),
            VanishingVerdict::vanishing(VanishCause::NaiveMeasureZero),
        ));
    }
    let ent = entanglement(&dec)?;
    let coeff = artin_correction_inner(&dec, &ent) * plain_coeff(&dec);
    debug_assert!(!coeff.is_zero());
    Ok((ExactDensity::artin_multiple(coeff), VanishingVerdict::none()))
}

// ---------------------------------------------------------------------------
// Primes in arithmetic progressions (a mod f)
// ---------------------------------------------------------------------------

fn normalize_progression(a: i64, f: u64) -> Result<(u64, u64)> {
    if f == 0 {
        return Err(Error::OutOfRange("modulus f must be >= 1".into()));
    }
    let a = a.rem_euclid(f as i64) as u64;
    if gcd_u64(a, f) != 1 {
        return Err(Error::NotCoprime { a, f });
    }
    Ok((a, f))
}

/// A(r, a mod f) of the naive-measure lemma, as a multiple of A.
fn ap_base_coeff(dec: &RadicalDecomposition, a: u64, f: u64) -> BigRational {
    let h = dec.h() as u64;
    let mut c = big_rational(1, euler_phi(f) as i64);
    let g = gcd_u64((a + f - 1) % f, f);
    for p in factorize(g).primes() {
        c *= big_rational((p - 1) as i64, p as i64);
    }
    for p in factorize(f).primes() {
        c /= artin_tail_factor(p);
    }
    for p in factorize(h).primes() {
        if f % p != 0 {
            c *= h_adjust(p);
        }
    }
    c
}

/// S is empty iff r is a p-th power for some p | gcd(a−1, f), or, in the
/// twisted case with 4 | f, when a ≡ 1 mod 4.
fn ap_is_empty(dec: &RadicalDecomposition, a: u64, f: u64) -> bool {
    let h = dec.h() as u64;
    let g = gcd_u64((a + f - 1) % f, f);
    if factorize(g).primes().any(|p| h % p == 0) {
        return true;
    }
    dec.twisted() && f % 4 == 0 && a % 4 == 1
}

/// Naive measure ν(S) for the progression problem; the boolean flags the
/// empty case. The measure doubles in the surviving twisted branch with 4 | f.
pub fn ap_naive_measure(r: &BigRational, a: i64, f: u64) -> Result<(ExactDensity, bool)> {
    let dec = decompose(r)?;
    let (a, f) = normalize_progression(a, f)?;
    if ap_is_empty(&dec, a, f) {
        return Ok((ExactDensity::zero(), true));
    }
    let mut coeff = ap_base_coeff(&dec, a, f);
    if dec.twisted() && f % 4 == 0 {
        coeff *= big_rational(2, 1);
    }
    if coeff.is_zero() {
        // r a square with f odd: the factor at p = 2 vanishes
        return Ok((ExactDensity::zero(), true));
    }
    Ok((ExactDensity::artin_multiple(coeff), false))
}

/// Correction factor E of the progression theorem.
pub fn ap_correction(r: &BigRational, a: i64, f: u64) -> Result<BigRational> {
    let dec = decompose(r)?;
    let ent = entanglement(&dec)?;
    let (a, f) = normalize_progression(a, f)?;
    Ok(ap_correction_inner(&dec, &ent, a, f))
}

fn ap_correction_inner(
    dec: &RadicalDecomposition,
    ent: &EntanglementData,
    a: u64,
    f: u64,
) -> BigRational {
    let d = ent.d_r();
    let h = dec.h() as u64;
    let e2: i64 = if d.unsigned_abs().trailing_zeros() <= ord2_u64(f) {
        -i64::from(kronecker(split_discriminant(d).1, a as i64))
    } else {
        0
    };
    let mut prod = BigRational::from_integer(BigInt::from(e2));
    for p in factorize(d.unsigned_abs()).primes().filter(|&p| p != 2) {
        if f % p == 0 {
            prod *= big_rational(kronecker(a as i64, p as i64) as i64, 1);
        } else {
            prod *= big_rational(-1, (local_degree(p, h) - 1) as i64);
        }
    }
    BigRational::one() + prod
}

/// The two vanishing mechanisms for the progression problem.
fn classify_ap_vanishing(
    dec: &RadicalDecomposition,
    ent: &EntanglementData,
    a: u64,
    f: u64,
) -> Option<VanishCause> {
    let d = ent.d_r();
    // (a): disc Q(√r) divides f and a splits in Q(√r)
    if divides_abs(d, f) && kronecker(d, a as i64) == 1 {
        return Some(VanishCause::Thm58a);
    }
    // (b): r a cube, disc Q(√r) | 3f but not f, and a inert in Q(√(−3r))
    if dec.h() % 3 == 0 && divides_abs(d, 3 * f) && !divides_abs(d, f) {
        let l = disc_sqrt(&(dec.r() * big_rational(-3, 1))).ok()?;
        let l = l.to_i64()?;
        if kronecker(l, a as i64) == -1 {
            return Some(VanishCause::Thm58b);
        }
    }
    None
}

/// Density of primes q ≡ a mod f for which r is a primitive root.
/// Precondition failures (square r, or an empty local set) yield the exact
/// answer 0 with an explanatory cause instead of an error.
pub fn ap_density(r: &BigRational, a: i64, f: u64) -> Result<(ExactDensity, VanishingVerdict)> {
    let dec = decompose(r)?;
    let (a, f) = normalize_progression(a, f)?;
    if dec.h() % 2 == 0 {
        return Ok((
            ExactDensity::zero(),
            VanishingVerdict::vanishing(VanishCause::NaiveMeasureZero),
        ));
    }
    if ap_is_empty(&dec, a, f) {
        return Ok((
            ExactDensity::zero(),
            VanishingVerdict::vanishing(VanishCause::EmptyLocalSet),
        ));
    }
    let ent = entanglement(&dec)?;
    let correction = ap_correction_inner(&dec, &ent, a, f);
    let coeff = &correction * ap_base_coeff(&dec, a, f);
    let classified = classify_ap_vanishing(&dec, &ent, a, f);
    debug_assert_eq!(
        coeff.is_zero(),
        classified.is_some(),
        "vanishing arithmetic and classifier disagree for r = {}, {} mod {}",
        dec.r(),
        a,
        f
    );
    if coeff.is_zero() {
        let cause = classified.unwrap_or(VanishCause::OracleDetected);
        return Ok((ExactDensity::zero(), VanishingVerdict::vanishing(cause)));
    }
    Ok((ExactDensity::artin_multiple(coeff), VanishingVerdict::none()))
}

// ---------------------------------------------------------------------------
// Near-primitive roots of index t
// ---------------------------------------------------------------------------

/// A(r, t) of the near-primitive naive-measure lemma, as a multiple of A.
fn near_base_coeff(dec: &RadicalDecomposition, t: u64) -> BigRational {
    let e = dec.e() as u64;
    let h = dec.h() as u64;
    let ord2_t = ord2_u64(t);
    let ord2_e = ord2_u64(e);
    let alpha2 = if dec.twisted() && ord2_t > 0 && ord2_t + 1 <= ord2_e {
        big_rational(1, 2)
    } else if dec.twisted() && ord2_t > 0 && ord2_t == ord2_e {
        big_rational(1, 3)
    } else {
        BigRational::one()
    };
    let mut c = alpha2 * big_rational(gcd_u64(t, e) as i64, (t * t) as i64);
    for (p, k) in factorize(t).factors().iter().copied() {
        if factorize(e).exponent_of(p) <= k {
            c *= big_rational((p + 1) as i64, p as i64);
        }
        c /= artin_tail_factor(p);
    }
    for p in factorize(h).primes() {
        if t % p != 0 {
            c *= h_adjust(p);
        }
    }
    c
}

/// Naive measure A(r, t) for near-primitive roots of index t.
pub fn near_naive_measure(r: &BigRational, t: u64) -> Result<ExactDensity> {
    if t == 0 {
        return Err(Error::OutOfRange("index t must be >= 1".into()));
    }
    let dec = decompose(r)?;
    let coeff = near_base_coeff(&dec, t);
    if coeff.is_zero() {
        return Ok(ExactDensity::zero());
    }
    Ok(ExactDensity::artin_multiple(coeff))
}

/// Correction factor E of the near-primitive-root theorem.
pub fn near_correction(r: &BigRational, t: u64) -> Result<BigRational> {
    let dec = decompose(r)?;
    let ent = entanglement(&dec)?;
    Ok(near_correction_inner(&dec, &ent, t))
}

fn near_correction_inner(
    dec: &RadicalDecomposition,
    ent: &EntanglementData,
    t: u64,
) -> BigRational {
    let e2 = ent.e2();
    let d2 = ent.d2();
    let t2 = 1u64 << ord2_u64(t);
    let h = dec.h() as u64;
    let s2 = if !dec.twisted() {
        (2 * e2).lcm(&d2)
    } else if (e2, d2) == (2, 8) {
        4
    } else {
        4 * e2
    };
    let local_e2 = if t2 % s2 == 0 {
        BigRational::one()
    } else if (2 * t2) % s2 != 0 {
        BigRational::zero()
    } else if s2 == 2 || (s2 == 4 && dec.twisted() && (e2, d2) == (2, 8)) {
        -BigRational::one()
    } else {
        big_rational(-1, 3)
    };
    let mut prod = local_e2;
    for &p in ent.odd_critical_primes() {
        if t % p != 0 {
            prod *= big_rational(-1, (local_degree(p, h) - 1) as i64);
        }
    }
    BigRational::one() + prod
}

/// All vanishing mechanisms of the near-primitive-root theorem that fire for
/// (r, t), each checked independently. Case (e) is restricted to
/// t ≡ 4 mod 8; under that restriction the five cases are mutually
/// exclusive, so the returned list has at most one entry.
pub fn near_vanishing_cases(r: &BigRational, t: u64) -> Result<Vec<VanishCause>> {
    let dec = decompose(r)?;
    Ok(near_cases_inner(&dec, t))
}

fn near_cases_inner(dec: &RadicalDecomposition, t: u64) -> Vec<VanishCause> {
    let disc_of = |x: &BigRational| {
        disc_sqrt(x)
            .ok()
            .and_then(|d| d.to_i64())
            .expect("discriminant fits i64 for admitted inputs")
    };
    let e = dec.e() as u64;
    let cube = dec.h() % 3 == 0;
    let mut cases = Vec::new();
    if t % 2 == 1 && divides_abs(disc_of(dec.r()), t) {
        cases.push(VanishCause::Thm67a);
    }
    if t % 4 == 2 && dec.twisted() {
        // r = −u² with u = r0^{e/2}
        let u = rational_power(dec.r0(), e / 2);
        if divides_abs(disc_of(&(u * big_rational(2, 1))), 2 * t) {
            cases.push(VanishCause::Thm67b);
        }
    }
    if cube && t % 3 != 0 {
        let d_m3r0 = disc_of(&(dec.r0() * big_rational(-3, 1)));
        if !dec.twisted() && divides_abs(d_m3r0, t) && ord2_u64(t) > ord2_u64(e) {
            cases.push(VanishCause::Thm67c);
        }
        if dec.twisted() && divides_abs(d_m3r0, t) && ord2_u64(t) > ord2_u64(e) + 1 {
            cases.push(VanishCause::Thm67d);
        }
        if dec.twisted() && t % 8 == 4 {
            let u = rational_power(dec.r0(), e / 2);
            let d = disc_of(&(u * big_rational(-3, 1)));
            if d.unsigned_abs() % 8 == 0 && divides_abs(d, 2 * t) {
                cases.push(VanishCause::Thm67e);
            }
        }
    }
    cases
}

fn classify_near_vanishing(dec: &RadicalDecomposition, t: u64) -> Option<VanishCause> {
    near_cases_inner(dec, t).first().copied()
}

fn rational_power(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Density of primes q for which r generates a subgroup of F_q^* of exact
/// index t.
pub fn near_density(r: &BigRational, t: u64) -> Result<(ExactDensity, VanishingVerdict)> {
    if t == 0 {
        return Err(Error::OutOfRange("index t must be >= 1".into()));
    }
    let dec = decompose(r)?;
    let ent = entanglement(&dec)?;
    let coeff = near_correction_inner(&dec, &ent, t) * near_base_coeff(&dec, t);
    let classified = classify_near_vanishing(&dec, t);
    debug_assert_eq!(
        coeff.is_zero(),
        classified.is_some(),
        "vanishing arithmetic and classifier disagree for r = {}, t = {}",
        dec.r(),
        t
    );
    if coeff.is_zero() {
        let cause = classified.unwrap_or(VanishCause::OracleDetected);
        return Ok((ExactDensity::zero(), VanishingVerdict::vanishing(cause)));
    }
    Ok((ExactDensity::artin_multiple(coeff), VanishingVerdict::none()))
}

// ---------------------------------------------------------------------------
// Inclusion–exclusion series (interval oracle)
// ---------------------------------------------------------------------------

/// Partial sum of ∑_{n squarefree} μ(n)/[F_n:Q] up to `cutoff`, returned as
/// a rigorous rational interval around the true density. The degree
/// [F_n:Q] is multiplicative from the local degrees, halved when
/// D = disc Q(√r) is odd and 2D divides n: √r is an n/2-th power of the
/// radical only for even n, and lies in Q(ζ_n) only for D | n. The tail is
/// bounded by |μ(n)/[F_n:Q]| ≤ 2·rad(h)/(n·φ(n)) and ∑_{n>x} 1/(n·φ(n)) ≤ 4/x.
pub fn inclusion_exclusion_density(
    r: &BigRational,
    cutoff: u64,
) -> Result<(BigRational, BigRational)> {
    let dec = decompose(r)?;
    if dec.h() % 2 == 0 {
        return Err(Error::OutOfRange(
            "inclusion-exclusion series requires non-square r".into(),
        ));
    }
    if cutoff < 1 || cutoff > 2_000_000 {
        return Err(Error::OutOfRange("cutoff must be in 1..=2_000_000".into()));
    }
    let ent = entanglement(&dec)?;
    let d = ent.d_r();
    let d_odd = d % 2 != 0;
    let d_abs = d.unsigned_abs();
    let h = dec.h() as u64;

    // smallest prime factor table for fast squarefree factorization
    let n = cutoff as usize;
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

    const SHIFT: u32 = 90;
    let scale: i128 = 1 << SHIFT;
    let mut lo: i128 = 0;
    let mut hi: i128 = 0;
    'term: for m in 1..=n {
        let mut rest = m;
        let mut deg: u64 = 1;
        let mut negate = false;
        while rest > 1 {
            let p = spf[rest] as usize;
            rest /= p;
            if rest % p == 0 {
                continue 'term; // not squarefree
            }
            deg *= local_degree(p as u64, h);
            negate = !negate;
        }
        if d_odd && m as u64 % (2 * d_abs) == 0 {
            deg /= 2;
        }
        let q = scale / deg as i128;
        let extra = i128::from(scale % deg as i128 != 0);
        if negate {
            lo -= q + extra;
            hi -= q;
        } else {
            lo += q;
            hi += q + extra;
        }
    }
    let tail = big_rational(8 * factorize(h).radical() as i64, cutoff as i64);
    let scale_big = BigInt::one() << SHIFT;
    let s_lo = BigRational::new(BigInt::from(lo), scale_big.clone());
    let s_hi = BigRational::new(BigInt::from(hi), scale_big);
    Ok((s_lo - &tail, s_hi + &tail))
}

// ---------------------------------------------------------------------------
// Generic engine route
// ---------------------------------------------------------------------------

/// Exact density for an arbitrary problem through the finite-level engine.
/// This is the only route for the combined near-primitive-root-in-progression
/// problem; on the domains of the closed-form theorems it agrees with them
/// exactly.
pub fn generic_density(spec: &ProblemSpec) -> Result<(ExactDensity, VanishingVerdict)> {
    if !spec.combined_constraints_ok() {
        return Ok((
            ExactDensity::zero(),
            VanishingVerdict::vanishing(VanishCause::EmptyLocalSet),
        ));
    }
    let report = crate::finite_model::delta_exact(spec, &crate::finite_model::EnumerationBudget::default())?;
    Ok((report.density, report.verdict))
}

/// Closed-form result where one of the theorems applies: plain, progression,
/// or near-index problems. None for the combined problem, which only the
/// engine handles.
pub fn closed_form_density(spec: &ProblemSpec) -> Result<Option<(ExactDensity, VanishingVerdict)>> {
    match (spec.progression(), spec.index_t()) {
        (None, 1) => artin_density(spec.r()).map(Some),
        (Some((a, f)), 1) => ap_density(spec.r(), a as i64, f).map(Some),
        (None, t) => near_density(spec.r(), t).map(Some),
        (Some(_), _) => Ok(None),
    }
}

/// Closed-form correction factor E on the same domain as
/// [`closed_form_density`].
pub fn closed_form_correction(spec: &ProblemSpec) -> Result<Option<BigRational>> {
    match (spec.progression(), spec.index_t()) {
        (None, 1) => artin_correction(spec.r()).map(Some),
        (Some((a, f)), 1) => ap_correction(spec.r(), a as i64, f).map(Some),
        (None, t) => near_correction(spec.r(), t).map(Some),
        (Some(_), _) => Ok(None),
    }
}
