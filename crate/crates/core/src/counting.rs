//! Exact distribution of the violation count over `J_m = [0, g_m - 1]`.
//!
//! Under the uniform measure on `J_m` the digits are independent and uniform,
//! so the number of integers with exactly `j` forbidden digits is the
//! coefficient of `x^j` in `Π_i ((d_i - |U_i|) + |U_i| x)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digit_sets::LambdaFamily;
use crate::error::{Error, Result};

/// Multiply `poly` in place by `good + bad·x`.
fn mul_linear(poly: &mut Vec<BigUint>, good: u64, bad: u64) {
    poly.push(BigUint::zero());
    for j in (0..poly.len()).rev() {
        let carried = if j > 0 { &poly[j - 1] * bad } else { BigUint::zero() };
        poly[j] = &poly[j] * good + carried;
    }
}

/// `Σ_{j <= t} poly[j]`, with `t = -1` meaning the empty sum.
fn prefix_sum(poly: &[BigUint], t: Option<usize>) -> BigUint {
    match t {
        None => BigUint::zero(),
        Some(t) => poly.iter().take(t + 1).sum(),
    }
}

/// `counts[j]` = number of `n ∈ J_m` with exactly `j` forbidden digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationDistribution {
    m: usize,
    counts: Vec<BigUint>,
    total: BigUint,
}

impl ViolationDistribution {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `g_m`.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Number of `n ∈ J_m` with `X(n) <= j`.
    pub fn at_most(&self, j: usize) -> BigUint {
        prefix_sum(&self.counts, Some(j))
    }

    /// Number of `n ∈ J_m` with `X(n) >= j`.
    pub fn at_least(&self, j: usize) -> BigUint {
        self.counts.iter().skip(j).sum()
    }

    /// `Pr(X <= j)`, exact.
    pub fn cdf(&self, j: usize) -> BigRational {
        BigRational::new(self.at_most(j).into(), self.total.clone().into())
    }

    /// `Pr(X >= j)`, exact.
    pub fn upper_tail(&self, j: usize) -> BigRational {
        BigRational::new(self.at_least(j).into(), self.total.clone().into())
    }

    /// `E X = Σ |U_i| / d_i`, exact.
    pub fn mean(&self) -> BigRational {
        let weighted: BigUint = self
            .counts
            .iter()
            .enumerate()
            .map(|(j, c)| c * j)
            .sum();
        BigRational::new(weighted.into(), self.total.clone().into())
    }
}

pub fn violation_distribution(fam: &LambdaFamily, m: usize) -> Result<ViolationDistribution> {
    if m == 0 {
        return Err(Error::Domain("the distribution is defined for m >= 1".into()));
    }
    let forb = fam.forbidden();
    let mut counts = vec![BigUint::one()];
    let mut total = BigUint::one();
    for i in 0..m {
        let (good, bad) = forb.split_at(i)?;
        mul_linear(&mut counts, good, bad);
        total *= good + bad;
    }
    Ok(ViolationDistribution { m, counts, total })
}

/// Member counts at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCount {
    pub m: usize,
    /// `g_{m-1}`.
    pub g_prev: BigUint,
    /// `g_m`.
    pub g_m: BigUint,
    /// `|A ∩ I_m|`: members of level exactly `m`.
    pub members_in_im: BigUint,
    /// `|{n ∈ J_m : X(n) <= λ m}|`, the quantity `Pr(X <= λ m)·g_m`.
    pub members_in_jm: BigUint,
}

impl LevelCount {
    /// `|I_m| = g_m - g_{m-1}`.
    pub fn level_size(&self) -> BigUint {
        &self.g_m - &self.g_prev
    }

    /// `Pr(X <= λ m)`, exact.
    pub fn tail_probability(&self) -> BigRational {
        BigRational::new(self.members_in_jm.clone().into(), self.g_m.clone().into())
    }
}

/// Incremental per-level counts for `m = 1, 2, ...`; O(m) big-integer
/// operations per level.
pub struct LevelCounts<'a> {
    fam: &'a LambdaFamily,
    /// Distribution over positions `0..m-1` of the next level `m`.
    prefix: Vec<BigUint>,
    g_prev: BigUint,
    m: usize,
}

impl<'a> LevelCounts<'a> {
    pub fn new(fam: &'a LambdaFamily) -> Self {
        LevelCounts {
            fam,
            prefix: vec![BigUint::one()],
            g_prev: BigUint::one(),
            m: 1,
        }
    }

    fn step(&mut self) -> Result<LevelCount> {
        let m = self.m;
        let top = m - 1;
        let forb = self.fam.forbidden();
        let (good, bad) = forb.split_at(top)?;
        let (top_good, top_bad) = forb.top_split_at(top)?;
        // Coefficients of prefix·(a + b x) up to x^t are a·S_t + b·S_{t-1}.
        let t = self.fam.lambda().floor_times(m);
        let s_t = prefix_sum(&self.prefix, Some(t));
        let s_prev = prefix_sum(&self.prefix, t.checked_sub(1));
        let members_in_jm = &s_t * good + &s_prev * bad;
        let members_in_im = &s_t * top_good + &s_prev * top_bad;
        let g_m = &self.g_prev * (good + bad);
        let count = LevelCount {
            m,
            g_prev: self.g_prev.clone(),
            g_m: g_m.clone(),
            members_in_im,
            members_in_jm,
        };
        mul_linear(&mut self.prefix, good, bad);
        self.g_prev = g_m;
        self.m += 1;
        Ok(count)
    }
}

impl Iterator for LevelCounts<'_> {
    type Item = Result<LevelCount>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}

pub fn count_members_level(fam: &LambdaFamily, m: usize) -> Result<LevelCount> {
    if m == 0 {
        return Err(Error::Domain("levels start at m = 1".into()));
    }
    LevelCounts::new(fam)
        .nth(m - 1)
        .expect("level iterator is unbounded")
}

/// `Pr(X <= λ m)` under the uniform measure on `J_m`.
pub fn tail_probability(fam: &LambdaFamily, m: usize) -> Result<BigRational> {
    Ok(count_members_level(fam, m)?.tail_probability())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / n)` at the empirical `p`.
    pub std_error: f64,
}

impl MonteCarloEstimate {
    fn from_hits(samples: u64, hits: u64) -> Self {
        let p = hits as f64 / samples as f64;
        MonteCarloEstimate {
            samples,
            hits,
            estimate: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        }
    }
}

/// Per-position lookup of forbidden digits, shared by the sampling workers.
struct Sampler {
    radices: Vec<u64>,
    forbidden: Vec<Vec<bool>>,
    threshold: usize,
}

impl Sampler {
    fn new(fam: &LambdaFamily, m: usize) -> Result<Self> {
        let radices = fam.seq().quotients(m)?;
        let forbidden = radices
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut row = vec![false; d as usize];
                for &c in fam.forbidden().at(i) {
                    row[c as usize] = true;
                }
                row
            })
            .collect();
        Ok(Sampler {
            radices,
            forbidden,
            threshold: fam.lambda().floor_times(m),
        })
    }

    fn hits(&self, samples: u64, seed: u64, stream: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut hits = 0;
        for _ in 0..samples {
            let x = self
                .radices
                .iter()
                .zip(&self.forbidden)
                .filter(|(&d, row)| row[rng.gen_range(0..d) as usize])
                .count();
            hits += (x <= self.threshold) as u64;
        }
        hits
    }
}

/// Empirical `Pr(X <= λ m)` from uniformly drawn digit strings.
pub fn monte_carlo_tail(
    fam: &LambdaFamily,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    monte_carlo_tail_split(fam, m, samples, seed, 1, 1)
}

/// Splits the budget into `splits` chunks; chunk `j` draws from ChaCha stream
/// `j` of `seed`. The result depends on `(seed, samples, splits)` only, not on
/// how many `workers` run the chunks.
pub fn monte_carlo_tail_split(
    fam: &LambdaFamily,
    m: usize,
    samples: u64,
    seed: u64,
    splits: u64,
    workers: usize,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    if m == 0 {
        return Err(Error::Domain("levels start at m = 1".into()));
    }
    let splits = splits.clamp(1, samples);
    let workers = workers.max(1);
    let sampler = Sampler::new(fam, m)?;
    let chunk = |j: u64| samples / splits + u64::from(j < samples % splits);

    let hits: u64 = if workers == 1 {
        (0..splits).map(|j| sampler.hits(chunk(j), seed, j)).sum()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let sampler = &sampler;
                    scope.spawn(move || {
                        (w..splits)
                            .step_by(workers)
                            .map(|j| sampler.hits(chunk(j), seed, j))
                            .sum::<u64>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling worker panicked"))
                .sum()
        })
    };
    Ok(MonteCarloEstimate::from_hits(samples, hits))
}
