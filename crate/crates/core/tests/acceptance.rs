//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use common::{family, Oracle};
use kempner_gadic::bounds::{
    abscissa_bound, chernoff_gap, chernoff_lower_tail_interval, criterion_check,
    level_count_bound_interval, violation_mean, Verdict,
};
use kempner_gadic::counting::{
    count_members_level, monte_carlo_tail_split, tail_probability, violation_distribution,
};
use kempner_gadic::interval::Interval;
use kempner_gadic::summation::{partial_sum_with_budget, sum_enclosure_with_budget};
use kempner_gadic::{ForbiddenSpec, GadicSequence, IndexRule, IndexedFamily, Lambda};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn codec_round_trip() -> Check {
    let start = Instant::now();
    let names = ["constant:2", "constant:10", "periodic:2,3", "explicit:2,3,4,5;then=constant:6"];
    for name in names {
        let seq: GadicSequence = name.parse().map_err(|e| format!("{e}"))?;
        let radices = common::radices(name, 64);
        for n in 0..=1_000_000u64 {
            let dv = seq.encode_u64(n).map_err(|e| format!("{name} n={n}: {e}"))?;
            let back = seq.decode(&dv).map_err(|e| format!("{name} n={n}: {e}"))?;
            ensure(back == BigUint::from(n), || format!("{name}: decode(encode({n})) = {back}"))?;
            ensure(dv.digits() == common::digits(n, &radices).as_slice(), || {
                format!("{name}: digits of {n} differ from divmod oracle")
            })?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("4 sequences x 1000001 integers in {:.2}s", t.as_secs_f64()))
}

fn counting_oracle() -> Check {
    struct Case {
        seq: &'static str,
        forbidden: &'static str,
        oracle: fn(usize, u64) -> bool,
    }
    let cases = [
        Case { seq: "constant:10", forbidden: "uniform:{9}", oracle: |_, c| c == 9 },
        Case {
            seq: "constant:10",
            forbidden: "per-position:0={0,5};3={1,2,3};default={9}",
            oracle: |i, c| match i {
                0 => c == 0 || c == 5,
                3 => (1..=3).contains(&c),
                _ => c == 9,
            },
        },
        Case { seq: "periodic:2,3", forbidden: "uniform:{0}", oracle: |_, c| c == 0 },
        Case {
            seq: "explicit:2,3,4,5;then=constant:6",
            forbidden: "per-position:0={1};2={0,3};default={1}",
            oracle: |i, c| if i == 2 { c == 0 || c == 3 } else { c == 1 },
        },
    ];
    let mut levels = 0;
    for case in &cases {
        for (p, q) in [(0u64, 1u64), (1, 10), (1, 4), (1, 1)] {
            let fam = family(case.seq, case.forbidden, &format!("{p}/{q}"));
            let oracle = Oracle {
                radices: common::radices(case.seq, 40),
                forbidden: Box::new(case.oracle),
                p,
                q,
            };
            for m in 1.. {
                if common::base(&oracle.radices, m) > 1_000_000 {
                    break;
                }
                let c = count_members_level(&fam, m).map_err(|e| e.to_string())?;
                let (im, jm) = oracle.counts(m);
                ensure(c.members_in_im == BigUint::from(im) && c.members_in_jm == BigUint::from(jm), || {
                    format!(
                        "{} {} lambda={p}/{q} m={m}: DP ({}, {}) vs brute force ({im}, {jm})",
                        case.seq, case.forbidden, c.members_in_im, c.members_in_jm
                    )
                })?;
                levels += 1;
            }
        }
    }
    Ok(format!("{levels} (family, lambda, level) cases equal"))
}

fn level_bound() -> Check {
    let fams = [
        family("constant:10", "uniform:{9}", "0"),
        family("constant:10", "uniform:{9}", "1/20"),
        family("periodic:2,3", "uniform:{0}", "1/5"),
        family("explicit:2,3,4,5;then=constant:6", "per-position:2={0,3};default={1}", "1/12"),
    ];
    let mut tightest = f64::INFINITY;
    for fam in &fams {
        for m in 1..=24 {
            let exact = count_members_level(fam, m).map_err(|e| e.to_string())?.members_in_im;
            let bound = level_count_bound_interval(fam, m).map_err(|e| e.to_string())?;
            let count = Interval::from_biguint(&exact);
            ensure(count.hi < bound.lo, || {
                format!("{} lambda={} m={m}: {exact} vs bound {}", fam.seq(), fam.lambda(), bound.lo)
            })?;
            tightest = tightest.min(bound.lo / count.hi);
        }
    }
    Ok(format!("{} families, m <= 24; smallest bound/count ratio {tightest:.4}", fams.len()))
}

fn chernoff_dominance() -> Check {
    let fams = [
        family("constant:10", "uniform:{9}", "0"),
        family("constant:2", "uniform:{1}", "0"),
        family("periodic:2,3", "uniform:{0}", "0"),
        family("periodic:3,5,7", "per-position:1={0,4};default={0,2}", "0"),
        family("explicit:2,3,4,5;then=constant:6", "uniform:{1}", "0"),
    ];
    let mut checked = 0;
    for fam in &fams {
        for m in 1..=24 {
            let dist = violation_distribution(fam, m).map_err(|e| e.to_string())?;
            let mu = violation_mean(fam, m).map_err(|e| e.to_string())?;
            for tenths in 1..=9i64 {
                let delta = BigRational::new(tenths.into(), 10.into());
                let cut = ((BigRational::one() - &delta) * &mu).floor().to_integer();
                let tail = dist.cdf(cut.to_usize().expect("small"));
                let bound = chernoff_lower_tail_interval(&mu, &delta).map_err(|e| e.to_string())?;
                ensure(Interval::from_big_rational(&tail).hi < bound.lo, || {
                    format!("{} m={m} delta={delta}: tail {tail} vs {}", fam.seq(), bound.lo)
                })?;
                checked += 1;
            }
        }
    }
    for i in 1..=99 {
        let delta = i as f64 / 100.0;
        let h = chernoff_gap(delta);
        let independent = (1.0 - delta) * (1.0 - delta).ln() + delta - delta * delta / 2.0;
        ensure(h > 1e-15, || format!("h({delta}) = {h}"))?;
        ensure((h - independent).abs() <= 1e-15, || format!("h({delta}): {h} vs {independent}"))?;
    }
    Ok(format!("{checked} exact tails below the bound; h > 0 on 99 points"))
}

fn abscissa_formula() -> Check {
    let a = abscissa_bound(10, Lambda::zero()).map_err(|e| e.to_string())?;
    let independent = 1.0 - 1.0 / (20.0 * std::f64::consts::LN_10);
    ensure((a - independent).abs() < 1e-12, || format!("{a} vs {independent}"))?;
    let fam = family("constant:10", "uniform:{9}", "0");
    let c = count_members_level(&fam, 50).map_err(|e| e.to_string())?;
    let growth = c.members_in_jm.to_f64().expect("finite").ln() / c.g_m.to_f64().expect("finite").ln();
    ensure(c.members_in_jm == BigUint::from(9u32).pow(50), || "9^50 count".into())?;
    ensure(a >= growth, || format!("bound {a} below growth exponent {growth}"))?;
    Ok(format!("abscissa_bound(10, 0) = {a:.12}; growth exponent at m = 50 is {growth:.6}"))
}

fn enclosure_soundness() -> Check {
    let start = Instant::now();
    let budget = 10_000_000;
    let fam = family("constant:10", "uniform:{9}", "0");
    let e4 = sum_enclosure_with_budget(&fam, 1.0, 4, 404, budget).map_err(|e| e.to_string())?;
    let e7 = sum_enclosure_with_budget(&fam, 1.0, 7, 407, budget).map_err(|e| e.to_string())?;
    let p7 = partial_sum_with_budget(&fam, 1.0, 7, budget).map_err(|e| e.to_string())?;
    ensure(e4.lower <= p7.bounds.lo && p7.bounds.hi <= e4.upper, || {
        format!("[{}, {}] does not contain partial sum {:?}", e4.lower, e4.upper, p7.bounds)
    })?;
    ensure(e7.width() < e4.width(), || format!("width {} at M=7 vs {} at M=4", e7.width(), e4.width()))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!(
        "M=4: [{:.6}, {:.6}] contains partial sum {:.6} at M=7; width {:.4} -> {:.4}; {:.2}s",
        e4.lower,
        e4.upper,
        p7.estimate,
        e4.width(),
        e7.width(),
        t.as_secs_f64()
    ))
}

fn monte_carlo_agreement() -> Check {
    let families = [
        ("constant:10", "uniform:{9}"),
        ("constant:2", "uniform:{1}"),
        ("periodic:2,3", "uniform:{0}"),
        ("periodic:3,5,7", "per-position:1={0,4};default={0,2}"),
        ("explicit:2,3,4,5;then=constant:6", "uniform:{1}"),
    ];
    let settings = [(8, "0"), (16, "1/10"), (24, "1/4"), (30, "1/3")];
    let samples = 100_000;
    let mut worst: f64 = 0.0;
    let mut triples = 0;
    for (i, (seq, forbidden)) in families.iter().enumerate() {
        for (j, (m, lambda)) in settings.iter().enumerate() {
            let fam = family(seq, forbidden, lambda);
            let seed = 1000 + (4 * i + j) as u64;
            let est = monte_carlo_tail_split(&fam, *m, samples, seed, 4, 1).map_err(|e| e.to_string())?;
            let again = monte_carlo_tail_split(&fam, *m, samples, seed, 4, 4).map_err(|e| e.to_string())?;
            ensure(est == again, || format!("{seq} m={m}: not reproducible"))?;
            let p = tail_probability(&fam, *m).map_err(|e| e.to_string())?.to_f64().expect("finite");
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            let z = if se == 0.0 {
                ensure(est.estimate == p, || format!("{seq} m={m}: degenerate mismatch"))?;
                0.0
            } else {
                (est.estimate - p).abs() / se
            };
            ensure(z <= 5.0, || format!("{seq} m={m} lambda={lambda}: {} vs {p} ({z:.2} SE)", est.estimate))?;
            worst = worst.max(z);
            triples += 1;
        }
    }
    Ok(format!("{triples} triples, {samples} samples each; largest deviation {worst:.2} SE"))
}

fn criterion_checker() -> Check {
    let (k_min, k_max) = (2_000_000, 10_000_000);
    let spec = ForbiddenSpec::uniform("constant:10".parse().expect("valid"), [9]).map_err(|e| e.to_string())?;
    let all = IndexedFamily::new(spec.clone(), IndexRule::All);
    let conv = criterion_check(&all, 10, 0.5, k_min, k_max).map_err(|e| e.to_string())?;
    ensure(conv.verdict == Verdict::Converges, || format!("I = all gave {}", conv.verdict))?;
    let finite = IndexedFamily::new(spec, "finite:0,1,2".parse().map_err(|e| format!("{e}"))?);
    let div = criterion_check(&finite, 10, 0.5, k_min, k_max).map_err(|e| e.to_string())?;
    ensure(div.verdict == Verdict::Diverges, || format!("I = {{0,1,2}} gave {}", div.verdict))?;
    Ok(format!(
        "k in [{k_min}, {k_max}]: all -> converges [{}]; {{0,1,2}} -> diverges [{}]",
        conv.witness, div.witness
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("codec round-trip", codec_round_trip),
        ("counting oracle equivalence", counting_oracle),
        ("level count bound", level_bound),
        ("Chernoff dominance", chernoff_dominance),
        ("abscissa formula", abscissa_formula),
        ("enclosure soundness", enclosure_soundness),
        ("Monte-Carlo agreement", monte_carlo_agreement),
        ("criterion checker", criterion_checker),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
