//! Canonical radical decomposition r = ±r0^e and the quadratic data of the
//! entanglement field Q(√r0): discriminant, its 2-part, critical primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numtheory::{disc_sqrt, factorize};
use crate::{Error, Result};

/// The canonical writing r = ±r0^e, where ⟨r0, −1⟩ is the saturation of
/// ⟨r, −1⟩ in Q^*. In the twisted case −r is a rational square, r itself is
/// not an e-th power, and r = −r0^e with r0 > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalDecomposition {
    r: BigRational,
    r0: BigRational,
    e: u32,
    twisted: bool,
    h: u32,
}

impl RadicalDecomposition {
    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn r0(&self) -> &BigRational {
        &self.r0
    }

    /// Exponent in r = ±r0^e.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Whether −r is a rational square (so Q(√r) = Q(i)).
    pub fn twisted(&self) -> bool {
        self.twisted
    }

    /// Largest h for which r is an h-th power in Q^*.
    pub fn h(&self) -> u32 {
        self.h
    }

    /// 2-part of the exponent e.
    pub fn e2(&self) -> u64 {
        1u64 << self.e.trailing_zeros().min(31)
    }
}

/// Quadratic character data of the entanglement field K = Q(√r0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntanglementData {
    d: i64,
    d2: u64,
    odd_critical_primes: Vec<u64>,
    e2: u64,
    d_r: i64,
    two_part: i64,
}

impl EntanglementData {
    /// Discriminant of Q(√r0).
    pub fn d(&self) -> i64 {
        self.d
    }

    /// 2-part of |d|, one of 1, 4, 8.
    pub fn d2(&self) -> u64 {
        self.d2
    }

    /// Odd primes dividing d, sorted.
    pub fn odd_critical_primes(&self) -> &[u64] {
        &self.odd_critical_primes
    }

    /// 2-part of the exponent e.
    pub fn e2(&self) -> u64 {
        self.e2
    }

    /// Discriminant of Q(√r).
    pub fn d_r(&self) -> i64 {
        self.d_r
    }

    /// Discriminant of the conductor-dividing-8 component of the character
    /// (d | ·); one of 1, −4, 8, −8. The odd components are the Legendre
    /// symbols at the odd critical primes.
    pub fn two_part_disc(&self) -> i64 {
        self.two_part
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::InputTooLarge)
}

/// Splits a quadratic discriminant into its prime-power character pieces:
/// odd primes p | d contribute (−1)^((p−1)/2)·p, the rest has conductor
/// dividing 8.
pub(crate) fn split_discriminant(d: i64) -> (Vec<u64>, i64) {
    let odd: Vec<u64> = factorize(d.unsigned_abs())
        .primes()
        .filter(|&p| p != 2)
        .collect();
    let mut odd_part = 1i64;
    for &p in &odd {
        let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        odd_part *= p_star;
    }
    (odd, d / odd_part)
}

/// Canonical decomposition of r ∉ {0, ±1}.
pub fn decompose(r: &BigRational) -> Result<RadicalDecomposition> {
    if r.is_zero() || r.abs().is_one() {
        return Err(Error::ExcludedRational);
    }
    let num = r.numer().abs().to_u64().ok_or(Error::InputTooLarge)?;
    let den = r.denom().abs().to_u64().ok_or(Error::InputTooLarge)?;
    let negative = r.is_negative();

    // exponent gcd over all prime factors of numerator and denominator
    let fn_num = factorize(num);
    let fn_den = factorize(den);
    let mut g: u32 = 0;
    for f in [&fn_num, &fn_den] {
        for &(_, k) in f.factors() {
            g = g.gcd(&k);
        }
    }
    debug_assert!(g >= 1);

    // positive g-th root of |r|
    let root = |f: &crate::numtheory::Factorization| -> BigInt {
        f.factors()
            .iter()
            .map(|&(p, k)| BigInt::from(p).pow(k / g))
            .product()
    };
    let m0 = BigRational::new(root(&fn_num), root(&fn_den));

    let (r0, e, twisted) = if !negative {
        // r = m0^g with m0 > 0; saturated since the exponent gcd of m0 is 1
        (m0, g, false)
    } else if g % 2 == 1 {
        // odd exponent: the sign moves into the base
        (-m0, g, false)
    } else {
        // −r = m0^g is a square: twisted, r = −r0^e with r0 > 0
        (m0, g, true)
    };
    let h = if twisted { e >> e.trailing_zeros() } else { e };
    Ok(RadicalDecomposition {
        r: r.clone(),
        r0,
        e,
        twisted,
        h,
    })
}

/// Discriminant data for K = Q(√r0) and F_2 = Q(√r).
pub fn entanglement(dec: &RadicalDecomposition) -> Result<EntanglementData> {
    entanglement_for_base(dec, false)
}

/// Same data for the sign-twisted base −r0 (the other representative of the
/// entanglement field allowed by the decomposition). Densities must be
/// invariant under this choice; tests exercise that.
pub fn entanglement_for_base(dec: &RadicalDecomposition, negate_r0: bool) -> Result<EntanglementData> {
    let base = if negate_r0 { -dec.r0() } else { dec.r0().clone() };
    let d = to_i64(&disc_sqrt(&base)?)?;
    let d_r = to_i64(&disc_sqrt(dec.r())?)?;
    let d2 = 1u64 << d.unsigned_abs().trailing_zeros().min(63);
    let (odd_critical_primes, two_part) = split_discriminant(d);
    debug_assert!(matches!(d2, 1 | 4 | 8));
    debug_assert!(matches!(two_part, 1 | -4 | 8 | -8));
    Ok(EntanglementData {
        d,
        d2,
        odd_critical_primes,
        e2: dec.e2(),
        d_r,
        two_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn is_rational_square(x: &BigRational) -> bool {
        if x.is_negative() {
            return false;
        }
        x.numer().sqrt().pow(2u32) == *x.numer() && x.denom().sqrt().pow(2u32) == *x.denom()
    }

    /// Brute k-th root extraction in Q.
    fn kth_root(x: &BigRational, k: u32) -> Option<BigRational> {
        if x.is_negative() && k % 2 == 0 {
            return None;
        }
        let n = x.numer().abs().nth_root(k);
        let d = x.denom().abs().nth_root(k);
        let mut cand = BigRational::new(n, d);
        if x.is_negative() {
            cand = -cand;
        }
        if &cand.clone().pow(BigInt::from(k)) == x {
            Some(cand)
        } else {
            None
        }
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&rat(8, 1)).unwrap();
        assert_eq!((d.r0(), d.e(), d.twisted(), d.h()), (&rat(2, 1), 3, false, 3));

        let d = decompose(&rat(-4, 1)).unwrap();
        assert_eq!((d.r0(), d.e(), d.twisted(), d.h()), (&rat(2, 1), 2, true, 1));

        let d = decompose(&rat(-64, 1)).unwrap();
        assert_eq!((d.r0(), d.e(), d.twisted(), d.h()), (&rat(2, 1), 6, true, 3));

        let d = decompose(&rat(-8, 1)).unwrap();
        assert_eq!((d.r0(), d.e(), d.twisted(), d.h()), (&rat(-2, 1), 3, false, 3));

        let d = decompose(&rat(6, 5)).unwrap();
        assert_eq!((d.r0(), d.e(), d.twisted(), d.h()), (&rat(6, 5), 1, false, 1));

        let d = decompose(&rat(-9, 4)).unwrap();
        assert_eq!((d.r0(), d.e(), d.twisted(), d.h()), (&rat(3, 2), 2, true, 1));

        for bad in [rat(0, 1), rat(1, 1), rat(-1, 1)] {
            assert_eq!(decompose(&bad), Err(Error::ExcludedRational));
        }
    }

    #[test]
    fn decompose_round_trips_on_random_powers() {
        let mut rng = StdRng::seed_from_u64(0xdec0);
        for _ in 0..500 {
            let a = rng.gen_range(2..=50i64);
            let b = rng.gen_range(1..=50i64);
            let k = rng.gen_range(1..=6u32);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let base = rat(sign * a, b);
            if base.abs().is_one() {
                continue;
            }
            let r = base.clone().pow(BigInt::from(k));
            if r.is_one() || (-r.clone()).is_one() {
                continue;
            }
            let dec = decompose(&r).unwrap();

            // round trip: r = ±r0^e per the twisted flag
            let back = dec.r0().clone().pow(BigInt::from(dec.e()));
            if dec.twisted() {
                assert_eq!(-back, r);
            } else {
                assert_eq!(back, r);
            }

            // canonical sign
            if dec.e() % 2 == 0 {
                assert!(dec.r0().is_positive());
            }

            // twisted exactly when −r is a square
            assert_eq!(dec.twisted(), is_rational_square(&(-r.clone())));

            // saturation: neither r0 nor −r0 is a perfect power
            for kk in 2..=6u32 {
                assert!(kth_root(dec.r0(), kk).is_none());
                assert!(kth_root(&-dec.r0().clone(), kk).is_none());
            }

            // h is the largest k' ≤ 12 with r a k'-th power, and divides all
            for kp in 1..=12u32 {
                let has_root = kth_root(&r, kp).is_some();
                assert_eq!(has_root, dec.h() % kp == 0, "r = {r}, k' = {kp}");
            }
        }
    }

    #[test]
    fn entanglement_examples() {
        let e = entanglement(&decompose(&rat(5, 1)).unwrap()).unwrap();
        assert_eq!((e.d(), e.d2(), e.odd_critical_primes(), e.d_r()), (5, 1, &[5u64][..], 5));
        assert_eq!(e.two_part_disc(), 1);

        let e = entanglement(&decompose(&rat(2, 1)).unwrap()).unwrap();
        assert_eq!((e.d(), e.d2(), e.odd_critical_primes(), e.d_r()), (8, 8, &[][..], 8));
        assert_eq!(e.two_part_disc(), 8);

        // twisted case: K = Q(√2) differs from Q(√r) = Q(i)
        let e = entanglement(&decompose(&rat(-4, 1)).unwrap()).unwrap();
        assert_eq!((e.d(), e.d2(), e.odd_critical_primes(), e.d_r()), (8, 8, &[][..], -4));

        let e = entanglement(&decompose(&rat(-8, 1)).unwrap()).unwrap();
        assert_eq!((e.d(), e.d2(), e.d_r()), (-8, 8, -8));
        assert_eq!(e.two_part_disc(), -8);

        let e = entanglement(&decompose(&rat(6, 5)).unwrap()).unwrap();
        assert_eq!((e.d(), e.d2(), e.odd_critical_primes()), (120, 8, &[3u64, 5][..]));
    }

    #[test]
    fn negating_r0_preserves_odd_primes_and_d2_eq_8() {
        let mut rng = StdRng::seed_from_u64(0x7157);
        let mut samples = vec![rat(-4, 1), rat(-64, 1), rat(-9, 4), rat(-100, 1)];
        for _ in 0..60 {
            let a = rng.gen_range(2..=60i64);
            let b = rng.gen_range(1..=20i64);
            let k = 2 * rng.gen_range(1..=3u32);
            samples.push(-rat(a, b).pow(BigInt::from(k)));
        }
        for r in samples {
            if r.is_zero() || r.abs().is_one() {
                continue;
            }
            let dec = decompose(&r).unwrap();
            let plain = entanglement_for_base(&dec, false).unwrap();
            let negated = entanglement_for_base(&dec, true).unwrap();
            assert_eq!(plain.odd_critical_primes(), negated.odd_critical_primes(), "r = {r}");
            assert_eq!(plain.d2() == 8, negated.d2() == 8, "r = {r}");
        }
    }
}
