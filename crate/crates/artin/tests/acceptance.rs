//! Acceptance suite: end-to-end checks of the advertised guarantees, one
//! test per criterion, each printing a PASS line with its measurements.
//! Run with `cargo test -p artin --test acceptance -- --nocapture` to see
//! the lines for passing criteria too.

use artin::densities::{
    artin_constant, closed_form_density, inclusion_exclusion_density, ExactDensity, ProblemSpec,
    VanishCause,
};
use artin::finite_model::{
    build_level, card_a_enumerated, card_a_formula, delta_direct_count, delta_exact,
    delta_exact_with_base, EnumerationBudget, LocalSetSpec,
};
use artin::numtheory::gcd_u64;
use artin::radical::decompose;
use artin::sieve::{run_experiment, SieveConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use std::time::Instant;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn spec(r: &BigRational, prog: Option<(i64, u64)>, t: u64) -> ProblemSpec {
    ProblemSpec::new(r.clone(), prog, t).unwrap()
}

fn sweep_rationals() -> Vec<BigRational> {
    [
        (2i64, 1i64),
        (-2, 1),
        (3, 1),
        (-3, 1),
        (5, 1),
        (8, 1),
        (-8, 1),
        (27, 1),
        (-27, 1),
        (-4, 1),
        (-64, 1),
        (6, 5),
        (-9, 4),
    ]
    .iter()
    .map(|&(n, d)| rat(n, d))
    .collect()
}

#[test]
fn criterion_1_artin_constant() {
    let start = Instant::now();
    let printed = artin_constant(7).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(printed, "0.3739558");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 PASS: artin_constant(7) = {printed} in {elapsed:?}");
}

#[test]
fn criterion_2_closed_forms_equal_oracle_everywhere() {
    let start = Instant::now();
    let budget = EnumerationBudget::default();
    let mut cases = Vec::new();
    for r in sweep_rationals() {
        cases.push(spec(&r, None, 1));
        for f in 2..=24u64 {
            for a in (1..f).filter(|&a| gcd_u64(a, f) == 1) {
                cases.push(spec(&r, Some((a as i64, f)), 1));
            }
        }
        for t in 2..=12u64 {
            cases.push(spec(&r, None, t));
            for f in (2..=24u64).filter(|f| f % t == 0) {
                for a in (1..f).filter(|&a| gcd_u64(a, f) == 1 && a % t == 1 % t) {
                    cases.push(spec(&r, Some((a as i64, f)), t));
                }
            }
        }
    }
    let total = cases.len();
    cases.par_iter().for_each(|case| {
        let report = delta_exact(case, &budget).unwrap();
        if let Some((closed, verdict)) = closed_form_density(case).unwrap() {
            assert_eq!(closed, report.density, "mismatch for {case:?}");
            assert_eq!(verdict.vanishes(), closed.is_zero(), "verdict for {case:?}");
        }
        assert_eq!(report.verdict.vanishes(), report.density.is_zero());
        for local in &report.per_prime {
            if let Some(e_p) = &local.e_p {
                assert!(e_p.abs() <= BigRational::one());
            }
        }
    });
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 PASS: {total} problem instances, closed form == oracle exactly, in {elapsed:?}"
    );
}

#[test]
fn criterion_3_image_group_cardinalities() {
    let start = Instant::now();
    let mut checked = 0;
    for r in [(2i64, 1i64), (8, 1), (5, 1), (-4, 1), (-8, 1), (-64, 1), (27, 1)] {
        let dec = decompose(&rat(r.0, r.1)).unwrap();
        for big_p in [2u64, 4, 8, 3, 9, 5, 7] {
            assert_eq!(
                card_a_formula(big_p, &dec),
                card_a_enumerated(big_p, &dec).unwrap(),
                "order of A({big_p}) for r = {}",
                rat(r.0, r.1)
            );
            checked += 1;
        }
    }
    let twisted = decompose(&rat(-4, 1)).unwrap();
    assert_eq!(card_a_formula(2, &twisted), 2);
    assert_eq!(card_a_formula(4, &twisted), 4);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("ACCEPTANCE 3 PASS: {checked} cardinalities, formula == enumeration, in {elapsed:?}");
}

#[test]
fn criterion_4_hand_derived_values() {
    let start = Instant::now();
    let budget = EnumerationBudget::default();

    // each frozen value is asserted against the closed form AND re-derived
    // by the enumeration engine
    let expectations: Vec<(ProblemSpec, BigRational, Option<VanishCause>)> = vec![
        (spec(&rat(5, 1), None, 1), rat(20, 19), None),
        (spec(&rat(2, 1), Some((3, 4)), 1), rat(1, 2), None),
        (spec(&rat(2, 1), None, 2), rat(3, 4), None),
        (spec(&rat(-4, 1), None, 2), rat(0, 1), Some(VanishCause::Thm67b)),
        (spec(&rat(27, 1), Some((3, 4)), 1), rat(0, 1), Some(VanishCause::Thm58b)),
    ];
    for (case, frozen, cause) in &expectations {
        let (closed, verdict) = closed_form_density(case).unwrap().unwrap();
        assert_eq!(&closed.as_artin_multiple(), frozen, "{case:?}");
        match cause {
            Some(c) => assert_eq!(verdict.cause(), *c, "{case:?}"),
            None => assert!(!verdict.vanishes(), "{case:?}"),
        }
        let oracle = delta_exact(case, &budget).unwrap();
        assert_eq!(oracle.density.as_artin_multiple(), *frozen, "oracle for {case:?}");
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE 4 PASS: {} hand-derived values reproduced by both routes, in {elapsed:?}",
        expectations.len()
    );
}

#[test]
fn criterion_5_inclusion_exclusion_intervals() {
    let start = Instant::now();
    for r in [rat(2, 1), rat(3, 1), rat(5, 1), rat(6, 1), rat(-2, 1)] {
        let (lo, hi) = inclusion_exclusion_density(&r, 10_000).unwrap();
        let width = &hi - &lo;
        assert!(width < rat(1, 100), "width {width} for r = {r}");
        let (closed, _) = closed_form_density(&spec(&r, None, 1)).unwrap().unwrap();
        let (v_lo, v_hi) = closed.value_bounds();
        assert!(lo <= v_lo && v_hi <= hi, "interval misses the value for r = {r}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 5 PASS: series intervals at cutoff 10^4 enclose the closed forms, in {elapsed:?}"
    );
}

#[test]
fn criterion_6_structural_invariants() {
    let start = Instant::now();
    let budget = EnumerationBudget::default();

    // kernel of ψ_K·χ_K has index 2 at every constructed level
    let mut levels = 0;
    for r in sweep_rationals() {
        for case in [
            spec(&r, None, 1),
            spec(&r, None, 2),
            spec(&r, None, 3),
            spec(&r, Some((3, 4)), 1),
            spec(&r, Some((1, 3)), 1),
            spec(&r, Some((1, 8)), 2),
        ] {
            let lg = build_level(&case, &budget).unwrap();
            let (kernel, order) = lg.galois_kernel_cardinality(&budget).unwrap();
            assert_eq!(2 * kernel, order, "{case:?} at level {}", lg.n());
            levels += 1;
        }
    }

    // |E_p| ≤ 1 and sign-twist invariance of the densities and local data
    let mut twisted_pairs = 0;
    for r in sweep_rationals() {
        for case in [
            spec(&r, None, 1),
            spec(&r, None, 2),
            spec(&r, None, 4),
            spec(&r, Some((3, 4)), 1),
            spec(&r, Some((1, 3)), 3),
        ] {
            let plain = delta_exact_with_base(&case, &budget, false).unwrap();
            let negated = delta_exact_with_base(&case, &budget, true).unwrap();
            assert_eq!(plain.density, negated.density, "{case:?}");
            for a in &plain.per_prime {
                if let Some(e_p) = &a.e_p {
                    assert!(e_p.abs() <= BigRational::one());
                }
                let b = negated.per_prime.iter().find(|b| b.p == a.p).unwrap();
                assert_eq!((&a.nu, &a.e_p), (&b.nu, &b.e_p));
            }
            twisted_pairs += 1;
        }
    }

    // direct-count consistency for r = 2, the case with the character
    // concentrated at a single prime
    let case = spec(&rat(2, 1), None, 1);
    let report = delta_exact(&case, &budget).unwrap();
    let direct = delta_direct_count(&case, &budget).unwrap();
    assert_eq!(report.density.coeff(), &direct);
    assert_eq!(direct, rat(1, 2));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 6 PASS: index-2 kernel at {levels} levels, |E_p| <= 1 and twist invariance over {twisted_pairs} cases, direct-count identity, in {elapsed:?}"
    );
}

#[test]
fn criterion_7_sieve_statistics() {
    let start = Instant::now();
    let config = SieveConfig {
        bound: 10_000_000,
        segment_size: 1 << 18,
        workers: 4,
    };
    let statistical: Vec<ProblemSpec> = vec![
        spec(&rat(2, 1), None, 1),
        spec(&rat(5, 1), None, 1),
        spec(&rat(2, 1), Some((3, 4)), 1),
        spec(&rat(2, 1), None, 2),
    ];
    let mut lines = Vec::new();
    for case in &statistical {
        let report = run_experiment(case, &config).unwrap();
        assert!(
            report.deviation.abs() < 0.005,
            "deviation {:.6} for {case:?}",
            report.deviation
        );
        lines.push(format!(
            "observed {:.6} vs predicted {:.6} (dev {:+.6})",
            report.observed, report.predicted, report.deviation
        ));
    }

    let zero_config = SieveConfig {
        bound: 1_000_000,
        segment_size: 1 << 18,
        workers: 4,
    };
    for case in [
        spec(&rat(5, 1), Some((1, 5)), 1),
        spec(&rat(5, 1), None, 5),
    ] {
        let report = run_experiment(&case, &zero_config).unwrap();
        assert_eq!(report.matching, 0, "{case:?}");
        assert_eq!(report.predicted, 0.0, "{case:?}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 7 PASS: 4 statistical checks at 10^7 ({}), 2 exact-zero checks at 10^6, in {elapsed:?}",
        lines.join("; ")
    );
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();

    // sieve reports identical across worker counts and segment sizes
    let case = spec(&rat(2, 1), None, 2);
    let mut reports = Vec::new();
    for (workers, segment_size) in [(1usize, 1u64 << 14), (4, 1 << 14), (1, 1 << 18), (4, 1 << 18)]
    {
        let config = SieveConfig {
            bound: 1_000_000,
            segment_size,
            workers,
        };
        reports.push(run_experiment(&case, &config).unwrap());
    }
    for r in &reports[1..] {
        assert_eq!(r.primes_considered, reports[0].primes_considered);
        assert_eq!(r.matching, reports[0].matching);
        assert_eq!(r.excluded, reports[0].excluded);
        assert_eq!(r.observed, reports[0].observed);
    }

    // oracle counts identical across enumeration partitionings
    let budget = EnumerationBudget::default();
    for case in [
        spec(&rat(2, 1), None, 1),
        spec(&rat(-4, 1), None, 2),
        spec(&rat(5, 1), Some((1, 4)), 2),
        spec(&rat(6, 5), Some((5, 8)), 1),
    ] {
        let lg = build_level(&case, &budget).unwrap();
        for p in lg.critical_primes() {
            let set = lg.local_set_for(p);
            let level = lg.level_at(p).unwrap();
            let reference = lg.local_counts(level, p, &set, 1).unwrap();
            for chunks in [2usize, 3, 5, 16] {
                assert_eq!(lg.local_counts(level, p, &set, chunks).unwrap(), reference);
            }
        }
        let _: LocalSetSpec = lg.local_set_for(2);
    }

    let elapsed = start.elapsed();
    println!("ACCEPTANCE 8 PASS: sieve and oracle results are partition- and worker-independent, in {elapsed:?}");
}
