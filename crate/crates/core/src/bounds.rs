//! Closed-form bounds: Markov, the Chernoff lower tail, the per-level count
//! bound, the abscissa bound for the Dirichlet series, and the convergence
//! and divergence thresholds for index-restricted digit sets.
//!
//! Logarithms are natural throughout. In the index-set thresholds the base
//! cancels: `ln k / ln(d/(d-1))` equals `log_b k / log_b(d/(d-1))` for any base `b`.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::digit_sets::{IndexedFamily, Lambda, LambdaFamily};
use crate::error::{Error, Result};
use crate::interval::{Accumulator, Interval};

/// `E(X)/b`, an upper bound on `Pr(X >= b)` for nonnegative `X`.
pub fn markov_bound(expectation: f64, b: f64) -> Result<f64> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::Domain(format!("Markov threshold b = {b} must be positive")));
    }
    if expectation.is_nan() || expectation < 0.0 {
        return Err(Error::Domain(format!(
            "expectation {expectation} of a nonnegative variable must be nonnegative"
        )));
    }
    Ok(expectation / b)
}

/// Mean `μ` of a sum of independent Bernoulli variables and the relative
/// deviation `δ ∈ (0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffParams {
    mu: f64,
    delta: f64,
    p: Option<Vec<f64>>,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("delta = {delta} is outside (0, 1)")))
    }
}

impl ChernoffParams {
    pub fn new(mu: f64, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::Domain(format!("mu = {mu} must be finite and nonnegative")));
        }
        Ok(ChernoffParams { mu, delta, p: None })
    }

    /// From the Bernoulli means `p_i`; `μ = Σ p_i`.
    pub fn from_means(p: Vec<f64>, delta: f64) -> Result<Self> {
        if let Some(bad) = p.iter().find(|&&pi| !(0.0..=1.0).contains(&pi)) {
            return Err(Error::Domain(format!("Bernoulli mean {bad} is outside [0, 1]")));
        }
        let mut acc = Accumulator::default();
        p.iter().for_each(|&pi| acc.add(pi));
        let mut params = Self::new(acc.estimate(), delta)?;
        params.p = Some(p);
        Ok(params)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn means(&self) -> Option<&[f64]> {
        self.p.as_deref()
    }
}

/// `e^{-μ δ² / 2}`, which strictly dominates `Pr(X <= (1 - δ) μ)`.
pub fn chernoff_lower_tail(params: &ChernoffParams) -> Result<f64> {
    let ChernoffParams { mu, delta, .. } = *params;
    Ok((-mu * delta * delta / 2.0).exp())
}

/// Outward-rounded enclosure of `e^{-μ δ²/2}` for exact (rational) `μ` and `δ`.
pub fn chernoff_lower_tail_interval(mu: &BigRational, delta: &BigRational) -> Result<Interval> {
    if !(delta > &BigRational::zero() && delta < &BigRational::one()) {
        return Err(Error::Domain(format!("delta = {delta} is outside (0, 1)")));
    }
    let exponent = mu * delta * delta / BigRational::from_integer(2.into());
    Ok((-Interval::from_big_rational(&exponent)).exp())
}

/// `h(δ) = (1-δ) ln(1-δ) + δ - δ²/2`, positive on `(0, 1)`.
pub fn chernoff_gap(delta: f64) -> f64 {
    (1.0 - delta) * (-delta).ln_1p() + delta - delta * delta / 2.0
}

/// `e^{-s} - 1 + s(1-δ)` at its minimiser `s = -ln(1-δ)`, i.e. `-δ - (1-δ) ln(1-δ)`.
pub fn chernoff_optimal_exponent(delta: f64) -> f64 {
    -delta - (1.0 - delta) * (-delta).ln_1p()
}

/// `(1 - λd)² / (2d)` as an exact rational.
fn level_rate(d: u64, lambda: Lambda) -> BigRational {
    let (p, q) = (lambda.numer() as u128, lambda.denom() as u128);
    let gap = q - p * d as u128;
    BigRational::new(
        BigUint::from(gap * gap).into(),
        (BigUint::from(2 * d as u128) * BigUint::from(q * q)).into(),
    )
}

/// Enclosure of the decay rate `(1 - λd)² / (2d)` for an in-regime family.
pub fn level_rate_interval(fam: &LambdaFamily) -> Result<Interval> {
    let d = fam.regime_bound()?;
    Ok(Interval::from_big_rational(&level_rate(d, fam.lambda())))
}

/// Enclosure of `e^{-(1-λd)² m/(2d)} · g_m`, evaluated as
/// `exp(ln g_m - rate·m)` so that it stays finite well past `g_m > f64::MAX`.
pub fn level_count_bound_interval(fam: &LambdaFamily, m: usize) -> Result<Interval> {
    let rate = level_rate_interval(fam)?;
    let g_m = fam.seq().base(m)?;
    let ln_g = Interval::ln_biguint(&g_m);
    Ok((ln_g - rate.scale(m as f64)).exp())
}

/// Upper-rounded `e^{-(1-λd)² m/(2d)} · g_m`, never below the exact bound.
pub fn level_count_bound(fam: &LambdaFamily, m: usize) -> Result<f64> {
    Ok(level_count_bound_interval(fam, m)?.hi)
}

fn check_abscissa_args(d: u64, lambda: Lambda) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("quotient bound d = {d} must be at least 2")));
    }
    if !lambda.below_reciprocal(d) {
        return Err(Error::outside_regime(format!(
            "lambda = {lambda} is not below 1/d = 1/{d}"
        )));
    }
    Ok(())
}

/// `1 - (1-λd)² / (2d ln d)`, an upper bound on the abscissa of convergence.
pub fn abscissa_bound(d: u64, lambda: Lambda) -> Result<f64> {
    check_abscissa_args(d, lambda)?;
    let gap = (lambda.denom() - lambda.numer() * d) as f64 / lambda.denom() as f64;
    let d = d as f64;
    Ok(1.0 - gap * gap / (2.0 * d * d.ln()))
}

/// The open interval of `σ` with `1 < d^{1-σ} < e^{(1-λd)²/(2d)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaWindow {
    pub lower: f64,
    pub upper: f64,
}

impl SigmaWindow {
    pub fn contains(&self, sigma: f64) -> bool {
        self.lower < sigma && sigma < self.upper
    }

    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }
}

pub fn sigma_window(d: u64, lambda: Lambda) -> Result<SigmaWindow> {
    Ok(SigmaWindow {
        lower: abscissa_bound(d, lambda)?,
        upper: 1.0,
    })
}

/// `Σ_{i<m} |U_i| / d_i`, the mean of the violation count on `J_m`.
pub fn violation_mean(fam: &LambdaFamily, m: usize) -> Result<BigRational> {
    let mut mu = BigRational::zero();
    for i in 0..m {
        let (good, bad) = fam.forbidden().split_at(i)?;
        mu += BigRational::new(bad.into(), (good + bad).into());
    }
    Ok(mu)
}

/// `d*_m` with `1/d*_m = (1/m) Σ_{i<m} |U_i|/d_i`; exact.
pub fn d_star(fam: &LambdaFamily, m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::Domain("d*_m is defined for m >= 1".into()));
    }
    let mu = violation_mean(fam, m)?;
    Ok(BigRational::from_integer(m.into()) / mu)
}

/// `δ = 1 - λ d*_m`, in `(0, 1]` whenever `λ d*_m < 1`.
pub fn delta(fam: &LambdaFamily, m: usize) -> Result<BigRational> {
    let ds = d_star(fam, m)?;
    let delta = BigRational::one() - fam.lambda().to_big_rational() * ds;
    if delta <= BigRational::zero() {
        return Err(Error::outside_regime(format!(
            "lambda * d*_{m} >= 1 for lambda = {}",
            fam.lambda()
        )));
    }
    Ok(delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converges => "converges",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    /// `I(k) >= (1+δ) ln k / ln(d/(d-1))`
    Convergence,
    /// `I(k) <= (1-δ) ln k / ln d`
    Divergence,
}

/// One inequality instantiated at one `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub inequality: Inequality,
    pub k: u64,
    pub count: u64,
    /// Enclosure of the right-hand side.
    pub threshold_lo: f64,
    pub threshold_hi: f64,
    pub holds: bool,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, rhs) = match self.inequality {
            Inequality::Convergence => (">=", "(1+delta) ln k / ln(d/(d-1))"),
            Inequality::Divergence => ("<=", "(1-delta) ln k / ln d"),
        };
        write!(
            f,
            "I({k}) = {c} {op} {rhs} = {t:.6} : {res}",
            k = self.k,
            c = self.count,
            t = (self.threshold_lo + self.threshold_hi) / 2.0,
            res = if self.holds { "holds" } else { "fails" }
        )
    }
}

/// Verdict over a finite range of `k`; says nothing about `k` past the range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub verdict: Verdict,
    pub d: u64,
    pub delta_used: f64,
    pub k_min: u64,
    pub k_max: u64,
    /// The inequality behind the verdict at the largest tested `k` (the
    /// convergence inequality when inconclusive).
    pub witness: Witness,
    /// Same inequality at the smallest tested `k`.
    pub witness_at_min: Witness,
    /// First `k` where the convergence inequality fails, if any.
    pub convergence_fails_at: Option<u64>,
    /// First `k` where the divergence inequality fails, if any.
    pub divergence_fails_at: Option<u64>,
}

fn ln_point(x: u64) -> Interval {
    Interval::from_u64(x).ln()
}

/// `(1+δ) ln k / ln(d/(d-1))`.
pub fn convergence_threshold(k: u64, d: u64, delta: f64) -> Interval {
    let ln_ratio = ln_point(d) - ln_point(d - 1);
    (Interval::point(1.0) + Interval::point(delta)) * ln_point(k) / ln_ratio
}

/// `(1-δ) ln k / ln d`.
pub fn divergence_threshold(k: u64, d: u64, delta: f64) -> Interval {
    (Interval::point(1.0) - Interval::point(delta)) * ln_point(k) / ln_point(d)
}

fn witness(inequality: Inequality, k: u64, count: u64, d: u64, delta: f64) -> Witness {
    let t = match inequality {
        Inequality::Convergence => convergence_threshold(k, d, delta),
        Inequality::Divergence => divergence_threshold(k, d, delta),
    };
    // Only certified comparisons count as holding.
    let holds = match inequality {
        Inequality::Convergence => count as f64 >= t.hi,
        Inequality::Divergence => (count as f64) <= t.lo,
    };
    Witness {
        inequality,
        k,
        count,
        threshold_lo: t.lo,
        threshold_hi: t.hi,
        holds,
    }
}

/// Tests both threshold inequalities at every `k` in `[k_min, k_max]`.
pub fn criterion_check(
    fam: &IndexedFamily,
    d: u64,
    delta: f64,
    k_min: u64,
    k_max: u64,
) -> Result<CriterionVerdict> {
    check_delta(delta)?;
    if d < 2 {
        return Err(Error::Domain(format!("quotient bound d = {d} must be at least 2")));
    }
    match fam.seq().bound_d() {
        None => {
            return Err(Error::outside_regime(
                "the sequence declares no uniform quotient bound",
            ))
        }
        Some(bound) if bound > d => {
            return Err(Error::Domain(format!(
                "d = {d} does not dominate the quotient bound {bound}"
            )))
        }
        Some(_) => {}
    }
    if k_min == 0 || k_min > k_max {
        return Err(Error::Domain(format!(
            "k range [{k_min}, {k_max}] must be nonempty and start at k >= 1"
        )));
    }

    let index = fam.index();
    let mut count = index.count_up_to(k_min);
    let mut conv_fail = None;
    let mut div_fail = None;
    for k in k_min..=k_max {
        if k > k_min && index.contains(k as usize) {
            count += 1;
        }
        if conv_fail.is_none() && !witness(Inequality::Convergence, k, count, d, delta).holds {
            conv_fail = Some(k);
        }
        if div_fail.is_none() && !witness(Inequality::Divergence, k, count, d, delta).holds {
            div_fail = Some(k);
        }
        if conv_fail.is_some() && div_fail.is_some() {
            break;
        }
    }

    let (verdict, inequality) = match (conv_fail, div_fail) {
        (None, _) => (Verdict::Converges, Inequality::Convergence),
        (Some(_), None) => (Verdict::Diverges, Inequality::Divergence),
        _ => (Verdict::Inconclusive, Inequality::Convergence),
    };
    let count_max = index.count_up_to(k_max);
    let count_min = index.count_up_to(k_min);
    Ok(CriterionVerdict {
        verdict,
        d,
        delta_used: delta,
        k_min,
        k_max,
        witness: witness(inequality, k_max, count_max, d, delta),
        witness_at_min: witness(inequality, k_min, count_min, d, delta),
        convergence_fails_at: conv_fail,
        divergence_fails_at: div_fail,
    })
}
