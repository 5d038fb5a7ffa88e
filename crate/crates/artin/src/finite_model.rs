//! Exact finite-level realization of the radical automorphism groups: the
//! affine quotients of μ̂ ⋊ Ẑ^*, the quadratic characters ψ_K and χ_K, the
//! per-prime condition sets, and brute-force evaluation of measures and
//! character averages. This module is the independent oracle for every
//! closed form in [`crate::densities`].
//!
//! An element (v, u) of the level-N group acts on radicals by
//! σ(r0^(1/N)) = ζ_N^v · r0^(1/N) and σ(ζ_N) = ζ_N^u, with the group law of
//! the affine group of Z/N. Roots of unity are tracked at resolution 2N so
//! that the twisted radical generator ζ_{2P}·r0^(e/P) has exact coordinates;
//! kernel membership then reduces to linear congruences.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::densities::{ExactDensity, ProblemSpec, VanishCause, VanishingVerdict};
use crate::numtheory::{euler_phi, factorize, gcd_u64, kronecker};
use crate::radical::{
    decompose, entanglement_for_base, EntanglementData, RadicalDecomposition,
};
use crate::{big_rational, Error, Result};

/// Cap on the total number of group elements any single call may visit.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    pub max_elements: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_elements: 1 << 26,
        }
    }
}

/// An element (v, u) of the affine group of Z/m: v is the radical twist,
/// u the cyclotomic action, gcd(u, m) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineElement {
    pub v: u64,
    pub u: u64,
}

impl AffineElement {
    pub fn identity() -> Self {
        AffineElement { v: 0, u: 1 }
    }
}

/// The affine group (Z/m) ⋊ (Z/m)^* with law
/// (v1, u1)·(v2, u2) = (v1 + u1·v2, u1·u2).
#[derive(Debug, Clone, Copy)]
pub struct AffineGroup {
    pub modulus: u64,
}

impl AffineGroup {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1);
        AffineGroup { modulus }
    }

    pub fn order(&self) -> u64 {
        self.modulus * euler_phi(self.modulus)
    }

    pub fn mul(&self, a: AffineElement, b: AffineElement) -> AffineElement {
        let m = self.modulus as u128;
        AffineElement {
            v: ((a.v as u128 + a.u as u128 * b.v as u128) % m) as u64,
            u: ((a.u as u128 * b.u as u128) % m) as u64,
        }
    }

    pub fn units(&self) -> Vec<u64> {
        (0..self.modulus)
            .filter(|&u| gcd_u64(u, self.modulus) == 1)
            .collect()
    }

    pub fn elements(&self) -> Vec<AffineElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for u in self.units() {
            for v in 0..self.modulus {
                out.push(AffineElement { v, u });
            }
        }
        out
    }
}

/// Per-prime condition: the index condition at p (near_index 1 is the plain
/// primitive-root condition) together with an optional congruence on the
/// cyclotomic component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSetSpec {
    /// t_p, the p-part of the requested index.
    pub near_index: u64,
    /// (a mod f_p, f_p) with f_p the p-part of the progression modulus.
    pub congruence: Option<(u64, u64)>,
}

#[derive(Debug, Clone, Copy)]
struct LevelPart {
    p: u64,
    n_p: u64,
    t_p: u64,
    f_p: u64,
    a_p: u64,
}

/// Finite quotient of the full radical automorphism group at level N,
/// together with the decomposition data that defines the kernel tests and
/// characters.
#[derive(Debug, Clone)]
pub struct LevelGroup {
    n: u64,
    dec: RadicalDecomposition,
    ent: EntanglementData,
    /// True when the model writes r = −base^e (the twisted case, or the
    /// sign-negated base with odd exponent).
    negative_form: bool,
    parts: Vec<LevelPart>,
}

fn p_part(n: u64, p: u64) -> u64 {
    let mut q = 1;
    let mut m = n;
    while m % p == 0 {
        q *= p;
        m /= p;
    }
    q
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Builds the level group for a problem. The level at each critical prime p
/// is lcm of the p-parts of 2, disc(K), f, and p·t_p·e_p, doubled at 2 when
/// the model uses the negative form. Sufficiency is certified at run time by
/// the stabilization check in [`delta_exact`], not assumed here.
pub fn build_level(spec: &ProblemSpec, budget: &EnumerationBudget) -> Result<LevelGroup> {
    build_level_with_base(spec, budget, false)
}

/// Same, with the entanglement field represented by −r0 instead of r0.
/// Densities are invariant under this choice; tests exercise that.
pub fn build_level_with_base(
    spec: &ProblemSpec,
    budget: &EnumerationBudget,
    negate_r0: bool,
) -> Result<LevelGroup> {
    let dec = decompose(spec.r())?;
    let ent = entanglement_for_base(&dec, negate_r0)?;
    let negative_form = dec.twisted() || (negate_r0 && dec.e() % 2 == 1);
    let (a, f) = spec.progression().unwrap_or((0, 1));
    let t = spec.index_t();
    let e = dec.e() as u64;
    let d_abs = ent.d().unsigned_abs();

    let mut critical: BTreeSet<u64> = BTreeSet::new();
    critical.insert(2);
    for n in [d_abs, e, f, t] {
        critical.extend(factorize(n).primes());
    }

    let mut parts = Vec::new();
    let mut needed = 0u64;
    for &p in &critical {
        let t_p = p_part(t, p);
        let f_p = p_part(f, p);
        let e_p = p_part(e, p);
        let d_p = p_part(d_abs, p);
        let mut n_p = lcm_u64(
            lcm_u64(p_part(2, p), d_p),
            lcm_u64(f_p, p * t_p * e_p),
        );
        if p == 2 && negative_form {
            n_p *= 2;
        }
        let a_p = a % f_p;
        needed = needed
            .saturating_add(AffineGroup::new(n_p).order())
            .saturating_add(AffineGroup::new(n_p * p).order());
        parts.push(LevelPart {
            p,
            n_p,
            t_p,
            f_p,
            a_p,
        });
    }
    if needed > budget.max_elements {
        return Err(Error::BudgetExceeded {
            needed,
            budget: budget.max_elements,
        });
    }
    let n = parts.iter().map(|part| part.n_p).product();
    Ok(LevelGroup {
        n,
        dec,
        ent,
        negative_form,
        parts,
    })
}

impl LevelGroup {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn decomposition(&self) -> &RadicalDecomposition {
        &self.dec
    }

    pub fn entanglement(&self) -> &EntanglementData {
        &self.ent
    }

    pub fn critical_primes(&self) -> Vec<u64> {
        self.parts.iter().map(|part| part.p).collect()
    }

    pub fn level_at(&self, p: u64) -> Option<u64> {
        self.parts.iter().find(|part| part.p == p).map(|part| part.n_p)
    }

    /// The condition set at p induced by the problem.
    pub fn local_set_for(&self, p: u64) -> LocalSetSpec {
        let part = self
            .parts
            .iter()
            .find(|part| part.p == p)
            .copied()
            .unwrap_or(LevelPart {
                p,
                n_p: p,
                t_p: 1,
                f_p: 1,
                a_p: 0,
            });
        LocalSetSpec {
            near_index: part.t_p,
            congruence: (part.f_p > 1).then_some((part.a_p, part.f_p)),
        }
    }

    /// Whether (v, u) taken modulo `modulus` acts trivially on the group of
    /// P-th roots of ⟨r⟩. The radical generator is base^(e/P) in the
    /// positive form and ζ_{2P}·base^(e/P) in the negative form.
    pub fn in_ker_phi_at(
        &self,
        elem: AffineElement,
        big_p: u64,
        modulus: u64,
    ) -> Result<bool> {
        in_ker_phi_raw(
            elem,
            big_p,
            modulus,
            self.dec.e() as u64,
            self.negative_form,
        )
    }

    /// Kernel membership at the group's own level.
    pub fn in_ker_phi(&self, elem: AffineElement, big_p: u64) -> Result<bool> {
        self.in_ker_phi_at(elem, big_p, self.n)
    }

    /// ψ_K: the action on base^(1/2), a closed form in the coordinates.
    pub fn psi_k(&self, elem: AffineElement) -> i32 {
        if elem.v % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// χ_K: the Kronecker symbol (d | u) of the entanglement field.
    pub fn chi_k(&self, elem: AffineElement) -> i32 {
        kronecker(self.ent.d(), elem.u as i64)
    }

    /// The p-power-conductor component of χ_K.
    pub fn chi_k_p(&self, elem: AffineElement, p: u64) -> i32 {
        if p == 2 {
            kronecker(self.ent.two_part_disc(), elem.u as i64)
        } else if self.ent.odd_critical_primes().contains(&p) {
            let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            kronecker(p_star, elem.u as i64)
        } else {
            1
        }
    }

    /// The character averaged in the correction factors: ψ_K·χ_{K,2} at 2,
    /// χ_{K,p} at odd p.
    pub fn chi_p(&self, elem: AffineElement, p: u64) -> i32 {
        if p == 2 {
            self.psi_k(elem) * self.chi_k_p(elem, 2)
        } else {
            self.chi_k_p(elem, p)
        }
    }

    /// Predicate of the Galois subgroup: the kernel of ψ_K·χ_K.
    pub fn galois_kernel_contains(&self, elem: AffineElement) -> bool {
        self.psi_k(elem) * self.chi_k(elem) == 1
    }

    /// (kernel size, group order) at the full level, by enumeration.
    pub fn galois_kernel_cardinality(&self, budget: &EnumerationBudget) -> Result<(u64, u64)> {
        let group = AffineGroup::new(self.n);
        let order = group.order();
        if order > budget.max_elements {
            return Err(Error::BudgetExceeded {
                needed: order,
                budget: budget.max_elements,
            });
        }
        let mut inside = 0u64;
        for u in group.units() {
            for v in 0..self.n {
                if self.galois_kernel_contains(AffineElement { v, u }) {
                    inside += 1;
                }
            }
        }
        Ok((inside, order))
    }

    /// Counting-measure fraction of the p-component satisfying the local
    /// condition, and the average of χ_p over that subset (None when empty).
    pub fn local_measure_and_average(
        &self,
        p: u64,
        set: &LocalSetSpec,
    ) -> Result<(BigRational, Option<BigRational>)> {
        let n_p = self
            .level_at(p)
            .ok_or(Error::LevelMismatch(p, self.n))?;
        let (total, count, chi_sum) = self.local_counts(n_p, p, set, 1)?;
        let nu = big_rational(count as i64, total as i64);
        let average = (count > 0).then(|| big_rational(chi_sum, count as i64));
        Ok((nu, average))
    }

    /// Raw counts over the affine group modulo `modulus`: (group order,
    /// elements in the set, sum of χ_p over the set). The element space is
    /// processed in `chunks` independent slices and combined by commutative
    /// sums, so the result is independent of the partitioning.
    pub fn local_counts(
        &self,
        modulus: u64,
        p: u64,
        set: &LocalSetSpec,
        chunks: usize,
    ) -> Result<(u64, u64, i64)> {
        let group = AffineGroup::new(modulus);
        let units = group.units();
        let t_p = set.near_index;
        let pt_p = p * t_p;
        let chunk_len = units.len().div_ceil(chunks.max(1));
        let mut count = 0u64;
        let mut chi_sum = 0i64;
        for slice in units.chunks(chunk_len.max(1)) {
            let mut slice_count = 0u64;
            let mut slice_chi = 0i64;
            for &u in slice {
                if let Some((a_p, f_p)) = set.congruence {
                    if u % f_p != a_p {
                        continue;
                    }
                }
                let chi_u = i64::from(self.chi_k_p(AffineElement { v: 0, u }, p));
                for v in 0..modulus {
                    let elem = AffineElement { v, u };
                    if self.in_ker_phi_at(elem, t_p, modulus)?
                        && !self.in_ker_phi_at(elem, pt_p, modulus)?
                    {
                        slice_count += 1;
                        slice_chi += if p == 2 {
                            chi_u * i64::from(self.psi_k(elem))
                        } else {
                            chi_u
                        };
                    }
                }
            }
            count += slice_count;
            chi_sum += slice_chi;
        }
        Ok((group.order(), count, chi_sum))
    }
}

fn in_ker_phi_raw(
    elem: AffineElement,
    big_p: u64,
    modulus: u64,
    e: u64,
    negative_form: bool,
) -> Result<bool> {
    if big_p == 0 || modulus % big_p != 0 {
        return Err(Error::LevelMismatch(big_p, modulus));
    }
    if big_p == 1 {
        return Ok(true);
    }
    if elem.u % big_p != 1 {
        return Ok(false);
    }
    if negative_form && big_p % 2 == 0 {
        let two_p = 2 * big_p;
        if modulus % two_p != 0 {
            return Err(Error::LevelMismatch(two_p, modulus));
        }
        let ve = ((elem.v as u128 * e as u128) % big_p as u128) as u64;
        Ok((elem.u - 1 + 2 * ve) % two_p == 0)
    } else {
        Ok((elem.v as u128 * e as u128) % big_p as u128 == 0)
    }
}

/// Order of the image group A(P): φ(P)·P/(P,e), except 2·φ(P) in the twisted
/// case with P > 1 a 2-power dividing e.
pub fn card_a_formula(big_p: u64, dec: &RadicalDecomposition) -> u64 {
    let e = dec.e() as u64;
    let phi = euler_phi(big_p);
    if dec.twisted() && big_p > 1 && big_p.is_power_of_two() && e % big_p == 0 {
        2 * phi
    } else {
        phi * (big_p / gcd_u64(big_p, e))
    }
}

/// The same order by brute enumeration: the level group modulo the kernel of
/// restriction to the P-th radicals.
pub fn card_a_enumerated(big_p: u64, dec: &RadicalDecomposition) -> Result<u64> {
    if big_p == 1 {
        return Ok(1);
    }
    let modulus = 2 * big_p;
    let group = AffineGroup::new(modulus);
    let e = dec.e() as u64;
    let mut kernel = 0u64;
    for u in group.units() {
        for v in 0..modulus {
            if in_ker_phi_raw(AffineElement { v, u }, big_p, modulus, e, dec.twisted())? {
                kernel += 1;
            }
        }
    }
    let order = group.order();
    debug_assert_eq!(order % kernel, 0);
    Ok(order / kernel)
}

/// Per-prime data produced by the engine.
#[derive(Debug, Clone)]
pub struct PrimeLocalData {
    pub p: u64,
    pub level: u64,
    pub nu: BigRational,
    pub e_p: Option<BigRational>,
}

/// Result of the exact engine evaluation.
#[derive(Debug, Clone)]
pub struct DeltaExactReport {
    pub density: ExactDensity,
    pub verdict: VanishingVerdict,
    /// 1 + ∏_p E_p over the critical primes; zero marker when some local set
    /// is empty.
    pub correction: BigRational,
    pub level: u64,
    pub per_prime: Vec<PrimeLocalData>,
}

/// Assembles δ = (1 + ∏_p E_p)·∏_p ν_p times the Artin tail over the
/// non-critical primes, certifying the level by recomputation at level
/// n_p·p for every critical prime.
pub fn delta_exact(spec: &ProblemSpec, budget: &EnumerationBudget) -> Result<DeltaExactReport> {
    delta_exact_with_base(spec, budget, false)
}

/// Engine evaluation with the sign-negated entanglement base; must produce
/// identical densities.
pub fn delta_exact_with_base(
    spec: &ProblemSpec,
    budget: &EnumerationBudget,
    negate_r0: bool,
) -> Result<DeltaExactReport> {
    let lg = build_level_with_base(spec, budget, negate_r0)?;
    let mut per_prime = Vec::new();
    let mut nu_prod = BigRational::one();
    let mut e_prod = BigRational::one();
    let mut any_empty = false;
    for part in &lg.parts {
        let set = lg.local_set_for(part.p);
        let (total, count, chi_sum) = lg.local_counts(part.n_p, part.p, &set, 1)?;
        let (total2, count2, chi_sum2) = lg.local_counts(part.n_p * part.p, part.p, &set, 1)?;
        let nu = big_rational(count as i64, total as i64);
        let nu2 = big_rational(count2 as i64, total2 as i64);
        let e_p = (count > 0).then(|| big_rational(chi_sum, count as i64));
        let e_p2 = (count2 > 0).then(|| big_rational(chi_sum2, count2 as i64));
        if nu != nu2 || e_p != e_p2 {
            return Err(Error::NotStabilized {
                p: part.p,
                level: part.n_p,
                next: part.n_p * part.p,
            });
        }
        if let Some(e) = &e_p {
            debug_assert!(e.abs() <= BigRational::one());
            e_prod *= e;
        } else {
            any_empty = true;
        }
        nu_prod *= &nu;
        per_prime.push(PrimeLocalData {
            p: part.p,
            level: part.n_p,
            nu,
            e_p,
        });
    }

    if any_empty {
        return Ok(DeltaExactReport {
            density: ExactDensity::zero(),
            verdict: VanishingVerdict::vanishing(VanishCause::EmptyLocalSet),
            correction: BigRational::zero(),
            level: lg.n,
            per_prime,
        });
    }
    let correction = BigRational::one() + e_prod;
    debug_assert!(!correction.is_negative());
    let coeff = &correction * nu_prod;
    let verdict = if coeff.is_zero() {
        VanishingVerdict::vanishing(VanishCause::OracleDetected)
    } else {
        VanishingVerdict::none()
    };
    let density = ExactDensity::with_excluded(coeff, lg.critical_primes());
    Ok(DeltaExactReport {
        density,
        verdict,
        correction,
        level: lg.n,
        per_prime,
    })
}

/// Direct count of #(G ∩ S)/#G over the full level group, with no use of
/// the character-sum formula. Returns the critical-prime part of the
/// density (the Artin tail is not a finite-level object).
pub fn delta_direct_count(spec: &ProblemSpec, budget: &EnumerationBudget) -> Result<BigRational> {
    let lg = build_level(spec, budget)?;
    let group = AffineGroup::new(lg.n);
    let order = group.order();
    if order > budget.max_elements {
        return Err(Error::BudgetExceeded {
            needed: order,
            budget: budget.max_elements,
        });
    }
    let mut kernel = 0u64;
    let mut inside = 0u64;
    for u in group.units() {
        for v in 0..lg.n {
            let elem = AffineElement { v, u };
            if !lg.galois_kernel_contains(elem) {
                continue;
            }
            kernel += 1;
            let mut good = true;
            for part in &lg.parts {
                let set = lg.local_set_for(part.p);
                if let Some((a_p, f_p)) = set.congruence {
                    if u % f_p != a_p {
                        good = false;
                        break;
                    }
                }
                if !(lg.in_ker_phi(elem, set.near_index)?
                    && !lg.in_ker_phi(elem, part.p * set.near_index)?)
                {
                    good = false;
                    break;
                }
            }
            if good {
                inside += 1;
            }
        }
    }
    Ok(big_rational(inside as i64, kernel as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        big_rational(n, d)
    }

    fn spec(r: (i64, i64), prog: Option<(i64, u64)>, t: u64) -> ProblemSpec {
        let r = BigRational::new(BigInt::from(r.0), BigInt::from(r.1));
        ProblemSpec::new(r, prog, t).unwrap()
    }

    #[test]
    fn affine_group_axioms_exhaustive_at_12() {
        let g = AffineGroup::new(12);
        let elems = g.elements();
        assert_eq!(elems.len() as u64, g.order());
        let id = AffineElement::identity();
        for &a in &elems {
            assert_eq!(g.mul(a, id), a);
            assert_eq!(g.mul(id, a), a);
            // inverse exists in the element list
            assert!(elems.iter().any(|&b| g.mul(a, b) == id && g.mul(b, a) == id));
        }
        for &a in &elems {
            for &b in &elems {
                let ab = g.mul(a, b);
                assert!(elems.contains(&ab));
                for &c in &elems {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn build_level_examples() {
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((5, 1), None, 1), &budget).unwrap();
        assert_eq!(lg.n(), 10);
        let lg = build_level(&spec((2, 1), None, 1), &budget).unwrap();
        assert_eq!(lg.n(), 8);
        let lg = build_level(&spec((-4, 1), None, 2), &budget).unwrap();
        assert_eq!(lg.n() % 16, 0);
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = EnumerationBudget { max_elements: 4 };
        assert!(matches!(
            build_level(&spec((5, 1), None, 1), &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn kernel_membership_examples() {
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((5, 1), None, 1), &budget).unwrap();
        let id = AffineElement::identity();
        for big_p in [1u64, 2, 5] {
            assert!(lg.in_ker_phi(id, big_p).unwrap());
        }
        let elem = AffineElement { v: 5, u: 1 };
        assert!(lg.in_ker_phi(elem, 5).unwrap());
        assert!(!lg.in_ker_phi(elem, 2).unwrap());
        assert!(lg.in_ker_phi(AffineElement { v: 4, u: 1 }, 2).unwrap());
        assert!(matches!(
            lg.in_ker_phi(elem, 3),
            Err(Error::LevelMismatch(3, 10))
        ));
    }

    #[test]
    fn psi_k_is_a_homomorphism_at_level_8() {
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((2, 1), None, 1), &budget).unwrap();
        assert_eq!(lg.n(), 8);
        let g = AffineGroup::new(8);
        for &a in &g.elements() {
            for &b in &g.elements() {
                assert_eq!(lg.psi_k(g.mul(a, b)), lg.psi_k(a) * lg.psi_k(b));
            }
        }
        assert_eq!(lg.psi_k(AffineElement { v: 0, u: 3 }), 1);
        assert_eq!(lg.psi_k(AffineElement { v: 1, u: 1 }), -1);
    }

    #[test]
    fn chi_k_decomposes_into_prime_components() {
        // level 40 for r = 5: components at 2 (trivial) and 5 (Legendre)
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((5, 1), Some((1, 8)), 1), &budget).unwrap();
        assert_eq!(lg.n(), 40);
        for elem in AffineGroup::new(40).elements() {
            let product: i32 = [2u64, 5].iter().map(|&p| lg.chi_k_p(elem, p)).product();
            assert_eq!(product, lg.chi_k(elem));
        }
        assert_eq!(lg.chi_k(AffineElement { v: 0, u: 1 }), 1);
        // 5 is a non-residue mod primes ≡ 2 mod 5: squares mod 5 are {1, 4}
        assert_eq!(lg.chi_k(AffineElement { v: 0, u: 7 }), -1);
    }

    #[test]
    fn card_a_formula_matches_enumeration() {
        for r in [(2i64, 1i64), (8, 1), (5, 1), (-4, 1), (-8, 1), (-64, 1), (27, 1)] {
            let dec = decompose(&rat(r.0, r.1)).unwrap();
            for big_p in [2u64, 4, 8, 3, 9, 5, 7] {
                assert_eq!(
                    card_a_formula(big_p, &dec),
                    card_a_enumerated(big_p, &dec).unwrap(),
                    "A({big_p}) for r = {}",
                    rat(r.0, r.1)
                );
            }
        }
        // the twisted exceptions quoted for r = −4
        let dec = decompose(&rat(-4, 1)).unwrap();
        assert_eq!(card_a_formula(2, &dec), 2);
        assert_eq!(card_a_formula(4, &dec), 4);
    }

    #[test]
    fn galois_kernel_has_index_two() {
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((5, 1), None, 1), &budget).unwrap();
        assert_eq!(lg.galois_kernel_cardinality(&budget).unwrap(), (20, 40));
        assert!(lg.galois_kernel_contains(AffineElement::identity()));
        let lg = build_level(&spec((2, 1), None, 1), &budget).unwrap();
        assert_eq!(lg.galois_kernel_cardinality(&budget).unwrap(), (16, 32));
    }

    #[test]
    fn local_measure_examples() {
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((5, 1), None, 1), &budget).unwrap();
        let pr = LocalSetSpec {
            near_index: 1,
            congruence: None,
        };
        let (nu, e) = lg.local_measure_and_average(5, &pr).unwrap();
        assert_eq!(nu, rat(19, 20));
        assert_eq!(e.unwrap(), rat(-1, 19));
        let (nu, e) = lg.local_measure_and_average(2, &pr).unwrap();
        assert_eq!(nu, rat(1, 2));
        assert_eq!(e.unwrap(), rat(-1, 1));

        let lg = build_level(&spec((2, 1), None, 1), &budget).unwrap();
        let (nu, e) = lg.local_measure_and_average(2, &pr).unwrap();
        assert_eq!(nu, rat(1, 2));
        assert_eq!(e.unwrap(), rat(0, 1));
    }

    #[test]
    fn delta_exact_examples() {
        let budget = EnumerationBudget::default();
        let report = delta_exact(&spec((5, 1), None, 1), &budget).unwrap();
        assert_eq!(report.density.as_artin_multiple(), rat(20, 19));
        assert!(!report.verdict.vanishes());

        let report = delta_exact(&spec((4, 1), None, 1), &budget).unwrap();
        assert!(report.density.is_zero());
        assert_eq!(report.verdict.cause(), VanishCause::EmptyLocalSet);

        let report = delta_exact(&spec((-4, 1), None, 2), &budget).unwrap();
        assert!(report.density.is_zero());
        assert_eq!(report.verdict.cause(), VanishCause::OracleDetected);
    }

    #[test]
    fn enumeration_is_partition_independent() {
        let budget = EnumerationBudget::default();
        let lg = build_level(&spec((-4, 1), Some((3, 4)), 1), &budget).unwrap();
        let set = lg.local_set_for(2);
        let n_2 = lg.level_at(2).unwrap();
        let reference = lg.local_counts(n_2, 2, &set, 1).unwrap();
        for chunks in [2usize, 3, 7, 64] {
            assert_eq!(lg.local_counts(n_2, 2, &set, chunks).unwrap(), reference);
        }
    }
}
