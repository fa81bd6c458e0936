//! Partial sums of `Σ_{a ∈ A} a^{-σ}` and certified enclosures of the full sum.
//!
//! The tail past the enumerated levels is bounded in two stages. Levels
//! `M+1 ..= M'` use exact member counts: every `a` of level `m` satisfies
//! `a >= g_{m-1}`, so that level contributes at most `|A ∩ I_m| / g_{m-1}^σ`.
//! Levels past `M'` use the geometric bound `d^σ r^m` with
//! `r = d^{1-σ} e^{-(1-λd)²/(2d)}`, which sums to `d^σ r^{M'+1} / (1 - r)`.

use num_traits::Zero;
use serde::Serialize;

use crate::bounds::level_rate_interval;
use crate::counting::LevelCounts;
use crate::digit_sets::{LambdaFamily, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSum};

pub const DEFAULT_TAIL_DEPTH: usize = 200;

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("sigma = {sigma} must be positive and finite")))
    }
}

fn term(a: u64, sigma: f64) -> Interval {
    let a = Interval::from_u64(a);
    if sigma == 1.0 {
        Interval::point(1.0) / a
    } else {
        a.powf(-sigma)
    }
}

/// Enclosure and compensated estimate of `Σ a^{-σ}` over members `a < g_M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub estimate: f64,
    pub bounds: Interval,
}

/// Levels are summed on separate threads and reduced in level order, so the
/// result does not depend on scheduling.
pub fn partial_sum_with_budget(
    fam: &LambdaFamily,
    sigma: f64,
    levels: usize,
    budget: u64,
) -> Result<PartialSum> {
    check_sigma(sigma)?;
    if levels == 0 {
        return Ok(PartialSum {
            estimate: 0.0,
            bounds: Interval::point(0.0),
        });
    }
    // Fails fast on the largest level before any work starts.
    let mut iters = Vec::with_capacity(levels);
    for m in (1..=levels).rev() {
        iters.push(fam.enumerate_members_with_budget(m, budget)?);
    }
    iters.reverse();

    let per_level: Vec<IntervalSum> = std::thread::scope(|scope| {
        let handles: Vec<_> = iters
            .into_iter()
            .map(|members| {
                scope.spawn(move || {
                    let mut acc = IntervalSum::default();
                    for a in members {
                        acc.add(term(a, sigma));
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("summation worker panicked"))
            .collect()
    });

    let mut total = IntervalSum::default();
    let mut estimate = crate::interval::Accumulator::default();
    for level in &per_level {
        total.add(level.bounds());
        estimate.add(level.estimate());
    }
    let b = total.bounds();
    Ok(PartialSum {
        estimate: estimate.estimate(),
        bounds: Interval::new(b.lo.max(0.0), b.hi),
    })
}

/// `Σ a^{-σ}` over members below `g_M`, with the default enumeration budget.
pub fn partial_sum(fam: &LambdaFamily, sigma: f64, levels: usize) -> Result<f64> {
    Ok(partial_sum_with_budget(fam, sigma, levels, DEFAULT_ENUMERATION_BUDGET)?.estimate)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumEnclosure {
    pub sigma: f64,
    /// `M`: levels summed term by term.
    pub levels_exact: usize,
    /// `M'`: levels whose exact counts bound the tail.
    pub levels_counted: usize,
    /// Certified lower bound (the partial sum, rounded down).
    pub lower: f64,
    /// Certified upper bound: partial sum + counted tail + geometric tail, rounded up.
    pub upper: f64,
    pub partial_sum: f64,
    /// Upper bound on `Σ_{m=M+1}^{M'} |A ∩ I_m| / g_{m-1}^σ`.
    pub counted_tail: f64,
    /// Upper bound on `d^σ r^{M'+1} / (1 - r)`.
    pub analytic_tail: f64,
    /// Upper bound on the geometric ratio `r`.
    pub tail_ratio: f64,
}

impl SumEnclosure {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Enclosure of `ln r = (1-σ) ln d - (1-λd)²/(2d)`.
fn ln_ratio(fam: &LambdaFamily, sigma: f64) -> Result<(Interval, Interval)> {
    let d = fam.regime_bound()?;
    let ln_d = Interval::from_u64(d).ln();
    let rate = level_rate_interval(fam)?;
    let one_minus_sigma = Interval::point(1.0) - Interval::point(sigma);
    Ok((one_minus_sigma * ln_d - rate, ln_d))
}

/// The geometric ratio `r = d^{1-σ} e^{-(1-λd)²/(2d)}`; `r < 1` exactly when σ
/// exceeds the abscissa bound.
pub fn tail_ratio(fam: &LambdaFamily, sigma: f64) -> Result<Interval> {
    check_sigma(sigma)?;
    Ok(ln_ratio(fam, sigma)?.0.exp())
}

pub fn sum_enclosure_with_budget(
    fam: &LambdaFamily,
    sigma: f64,
    levels: usize,
    counted_levels: usize,
    budget: u64,
) -> Result<SumEnclosure> {
    check_sigma(sigma)?;
    if counted_levels < levels {
        return Err(Error::Domain(format!(
            "counted levels M' = {counted_levels} must be at least M = {levels}"
        )));
    }
    let (ln_r, ln_d) = ln_ratio(fam, sigma)?;
    let r = ln_r.exp();
    if r.hi >= 1.0 {
        return Err(Error::outside_regime(format!(
            "sigma = {sigma} gives tail ratio r = {:.9} >= 1; sigma must exceed the abscissa bound",
            r.mid()
        )));
    }

    let partial = partial_sum_with_budget(fam, sigma, levels, budget)?;

    let mut counted = IntervalSum::default();
    for count in LevelCounts::new(fam).take(counted_levels).skip(levels) {
        let count = count?;
        if count.members_in_im.is_zero() {
            continue;
        }
        let ln_count = Interval::ln_biguint(&count.members_in_im);
        let ln_g = Interval::ln_biguint(&count.g_prev);
        counted.add((ln_count - ln_g.scale(sigma)).exp());
    }
    let counted_tail = counted.bounds().hi.max(0.0);

    let steps = Interval::point((counted_levels + 1) as f64);
    let numerator = (ln_d.scale(sigma) + ln_r * steps).exp();
    let analytic = numerator / (Interval::point(1.0) - r);

    let upper = Interval::point(partial.bounds.hi)
        + Interval::point(counted_tail)
        + Interval::point(analytic.hi);
    Ok(SumEnclosure {
        sigma,
        levels_exact: levels,
        levels_counted: counted_levels,
        lower: partial.bounds.lo,
        upper: upper.hi,
        partial_sum: partial.estimate,
        counted_tail,
        analytic_tail: analytic.hi,
        tail_ratio: r.hi,
    })
}

pub fn sum_enclosure(
    fam: &LambdaFamily,
    sigma: f64,
    levels: usize,
    counted_levels: usize,
) -> Result<SumEnclosure> {
    sum_enclosure_with_budget(fam, sigma, levels, counted_levels, DEFAULT_ENUMERATION_BUDGET)
}

/// One enclosure per `M` (ascending) with `M' = M + tail_depth`. Errors are
/// reported per row.
pub fn convergence_table(
    fam: &LambdaFamily,
    sigma: f64,
    levels: &[usize],
    tail_depth: usize,
    budget: u64,
) -> Vec<(usize, Result<SumEnclosure>)> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    levels
        .into_iter()
        .map(|m| {
            (
                m,
                sum_enclosure_with_budget(fam, sigma, m, m + tail_depth, budget),
            )
        })
        .collect()
}
