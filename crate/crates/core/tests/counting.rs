mod common;

use common::{family, Oracle};
use kempner_gadic::counting::{
    count_members_level, monte_carlo_tail, monte_carlo_tail_split, tail_probability,
    violation_distribution, LevelCounts,
};
use kempner_gadic::Lambda;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

struct Case {
    seq: &'static str,
    forbidden: &'static str,
    oracle: fn(usize, u64) -> bool,
}

const CASES: [Case; 5] = [
    Case { seq: "constant:10", forbidden: "uniform:{9}", oracle: |_, c| c == 9 },
    Case { seq: "constant:2", forbidden: "uniform:{1}", oracle: |_, c| c == 1 },
    Case { seq: "periodic:2,3", forbidden: "uniform:{0}", oracle: |_, c| c == 0 },
    Case {
        seq: "explicit:2,3,4,5;then=constant:6",
        forbidden: "per-position:0={1};2={0,3};default={1}",
        oracle: |i, c| match i {
            0 => c == 1,
            2 => c == 0 || c == 3,
            _ => c == 1,
        },
    },
    Case {
        seq: "periodic:3,5,7",
        forbidden: "per-position:1={0,4};default={0,2}",
        oracle: |i, c| if i == 1 { c == 0 || c == 4 } else { c == 0 || c == 2 },
    },
];

const LAMBDAS: [(u64, u64); 5] = [(0, 1), (1, 10), (1, 4), (1, 3), (1, 1)];

#[test]
fn dp_matches_brute_force() {
    for case in &CASES {
        for (p, q) in LAMBDAS {
            let fam = family(case.seq, case.forbidden, &format!("{p}/{q}"));
            let oracle = Oracle {
                radices: common::radices(case.seq, 40),
                forbidden: Box::new(case.oracle),
                p,
                q,
            };
            for m in 1.. {
                if common::base(&oracle.radices, m) > 300_000 {
                    break;
                }
                let c = count_members_level(&fam, m).unwrap();
                let (im, jm) = oracle.counts(m);
                assert_eq!(c.members_in_im, BigUint::from(im), "{} {p}/{q} m={m}", case.seq);
                assert_eq!(c.members_in_jm, BigUint::from(jm), "{} {p}/{q} m={m}", case.seq);
            }
        }
    }
}

#[test]
fn incremental_counts_match_single_level() {
    let fam = family("periodic:3,5,7", "per-position:1={0,4};default={0,2}", "1/4");
    for (m, c) in LevelCounts::new(&fam).take(40).enumerate() {
        let c = c.unwrap();
        assert_eq!(c.m, m + 1);
        assert_eq!(c, count_members_level(&fam, m + 1).unwrap());
    }
}

#[test]
fn distribution_normalized() {
    for case in &CASES {
        let fam = family(case.seq, case.forbidden, "1/4");
        for m in 1..=64 {
            let dist = violation_distribution(&fam, m).unwrap();
            let sum: BigUint = dist.counts().iter().sum();
            assert_eq!(&sum, dist.total());
            assert_eq!(sum, fam.seq().base(m).unwrap());
            assert!(dist.cdf(m).is_one());
            let full = fam.with_lambda(Lambda::one());
            let c = count_members_level(&full, m).unwrap();
            assert_eq!(c.members_in_jm, c.g_m);
            assert_eq!(c.members_in_im, c.level_size());
        }
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn binomial_special_case() {
    // Constant radix d with |U| = u: counts are C(m, j) (d-u)^(m-j) u^j.
    for (d, forbidden, u) in [(10u64, "uniform:{9}", 1u64), (7, "uniform:{0,1,2}", 3), (2, "uniform:{0}", 1)] {
        let fam = family(&format!("constant:{d}"), forbidden, "0");
        for m in [1usize, 5, 17, 40] {
            let dist = violation_distribution(&fam, m).unwrap();
            for j in 0..=m {
                let expected = binomial(m as u64, j as u64)
                    * BigUint::from(d - u).pow((m - j) as u32)
                    * BigUint::from(u).pow(j as u32);
                assert_eq!(dist.counts()[j], expected, "d={d} m={m} j={j}");
            }
            let mean = BigRational::new((m as u64 * u).into(), d.into());
            assert_eq!(dist.mean(), mean);
        }
    }
}

#[test]
fn decimal_no_nine_counts() {
    let fam = family("constant:10", "uniform:{9}", "0");
    for m in 1..=30u32 {
        let c = count_members_level(&fam, m as usize).unwrap();
        assert_eq!(c.members_in_jm, BigUint::from(9u32).pow(m));
        assert_eq!(c.members_in_im, BigUint::from(8u32) * BigUint::from(9u32).pow(m - 1));
    }
}

#[test]
fn monte_carlo_within_five_standard_errors() {
    let fam = family("periodic:3,5,7", "per-position:1={0,4};default={0,2}", "1/3");
    let m = 18;
    let exact = tail_probability(&fam, m).unwrap().to_f64().unwrap();
    let samples = 4_000;
    let se = (exact * (1.0 - exact) / samples as f64).sqrt();
    for seed in 0..100 {
        let est = monte_carlo_tail(&fam, m, samples, seed).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 5.0 * se,
            "seed {seed}: {} vs {exact}",
            est.estimate
        );
    }
}

#[test]
fn monte_carlo_independent_of_workers() {
    let fam = family("constant:10", "uniform:{9}", "1/20");
    let one = monte_carlo_tail_split(&fam, 30, 20_001, 42, 8, 1).unwrap();
    for workers in [2, 3, 8, 16] {
        assert_eq!(monte_carlo_tail_split(&fam, 30, 20_001, 42, 8, workers).unwrap(), one);
    }
    assert_ne!(monte_carlo_tail_split(&fam, 30, 20_001, 43, 8, 1).unwrap().hits, one.hits);
}

#[test]
fn empty_tail_below_mean() {
    // λ = 0 on a family with forbidden digits everywhere: only all-good strings.
    let fam = family("constant:2", "uniform:{1}", "0");
    let p = tail_probability(&fam, 10).unwrap();
    assert_eq!(p, BigRational::new(1.into(), 1024.into()));
    assert!(!p.is_zero());
}
