//! Independent oracles: plain divmod digit scans, no library codec.
#![allow(dead_code)]

use kempner_gadic::{ForbiddenRule, ForbiddenSpec, GadicSequence, Lambda, LambdaFamily};

/// First `len` quotients listed by hand for the test sequences.
pub fn radices(name: &str, len: usize) -> Vec<u64> {
    match name {
        "constant:2" => vec![2; len],
        "constant:10" => vec![10; len],
        "periodic:2,3" => (0..len).map(|i| if i % 2 == 0 { 2 } else { 3 }).collect(),
        "explicit:2,3,4,5;then=constant:6" => (0..len).map(|i| [2, 3, 4, 5, 6][i.min(4)]).collect(),
        "periodic:3,5,7" => (0..len).map(|i| [3, 5, 7][i % 3]).collect(),
        other => panic!("no oracle radices for {other}"),
    }
}

/// Least-significant-first digits of `n` by repeated division.
pub fn digits(mut n: u64, radices: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for &d in radices {
        if n == 0 {
            break;
        }
        out.push(n % d);
        n /= d;
    }
    assert_eq!(n, 0, "radix list too short");
    out
}

pub fn value(digits: &[u64], radices: &[u64]) -> u64 {
    let mut g = 1u128;
    let mut n = 0u128;
    for (&c, &d) in digits.iter().zip(radices) {
        n += c as u128 * g;
        g *= d as u128;
    }
    n.try_into().expect("fits in u64")
}

/// `g_m` as a product of the listed radices.
pub fn base(radices: &[u64], m: usize) -> u64 {
    radices[..m].iter().product()
}

pub fn family(seq: &str, forbidden: &str, lambda: &str) -> LambdaFamily {
    let seq: GadicSequence = seq.parse().unwrap();
    let rule: ForbiddenRule = forbidden.parse().unwrap();
    let lambda: Lambda = lambda.parse().unwrap();
    LambdaFamily::new(ForbiddenSpec::new(seq, rule).unwrap(), lambda)
}

/// Brute-force member test at the integer's own level.
pub struct Oracle {
    pub radices: Vec<u64>,
    pub forbidden: Box<dyn Fn(usize, u64) -> bool>,
    pub p: u64,
    pub q: u64,
}

impl Oracle {
    pub fn violations(&self, n: u64) -> usize {
        digits(n, &self.radices)
            .iter()
            .enumerate()
            .filter(|&(i, &c)| (self.forbidden)(i, c))
            .count()
    }

    /// Violation count over all `m` positions, counting padded zeros.
    pub fn violations_padded(&self, n: u64, m: usize) -> usize {
        let mut ds = digits(n, &self.radices);
        ds.resize(m, 0);
        ds.iter()
            .enumerate()
            .filter(|&(i, &c)| (self.forbidden)(i, c))
            .count()
    }

    pub fn level(&self, n: u64) -> usize {
        digits(n, &self.radices).len()
    }

    pub fn is_member(&self, n: u64) -> bool {
        n > 0 && (self.violations(n) as u64) * self.q <= self.p * self.level(n) as u64
    }

    /// Members of `I_m` and of `J_m` (padded to `m` digits), by scanning.
    pub fn counts(&self, m: usize) -> (u64, u64) {
        let lo = base(&self.radices, m - 1);
        let hi = base(&self.radices, m);
        let mut im = 0;
        let mut jm = 0;
        for n in 0..hi {
            let x = self.violations_padded(n, m) as u64;
            if x * self.q <= self.p * m as u64 {
                jm += 1;
                if n >= lo {
                    im += 1;
                }
            }
        }
        (im, jm)
    }
}

pub fn uniform_oracle(radices: Vec<u64>, bad: &'static [u64], p: u64, q: u64) -> Oracle {
    Oracle {
        radices,
        forbidden: Box::new(move |_, c| bad.contains(&c)),
        p,
        q,
    }
}
