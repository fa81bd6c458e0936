//! Mixed-radix (𝒢-adic) numeration.
//!
//! A sequence of quotients `d_0, d_1, ...` (each at least 2) determines the
//! bases `g_0 = 1`, `g_{k+1} = g_k * d_k`. Every natural number `n` then has a
//! unique expansion `n = Σ c_i g_i` with `0 <= c_i < d_i` and a nonzero leading
//! digit. Digits are stored least-significant first, so `c_0` multiplies `g_0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::grammar::Cursor;

/// How quotients continue after the explicit prefix of an `explicit` sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Continuation {
    Constant(u64),
    Periodic(Vec<u64>),
    /// `d = start + step * j` for the j-th position after the prefix.
    /// Unbounded when `step > 0`.
    Linear { start: u64, step: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientRule {
    Constant(u64),
    Periodic(Vec<u64>),
    Explicit {
        prefix: Vec<u64>,
        then: Option<Continuation>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadicSequence {
    rule: QuotientRule,
    bound_d: Option<u64>,
}

fn check_quotients(values: &[u64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Structural("quotient list is empty".into()));
    }
    if let Some(bad) = values.iter().find(|&&d| d < 2) {
        return Err(Error::Structural(format!(
            "quotient {bad} is below 2; every quotient must be at least 2"
        )));
    }
    Ok(())
}

impl GadicSequence {
    pub fn constant(d: u64) -> Result<Self> {
        check_quotients(&[d])?;
        Ok(GadicSequence {
            rule: QuotientRule::Constant(d),
            bound_d: Some(d),
        })
    }

    pub fn periodic(cycle: Vec<u64>) -> Result<Self> {
        check_quotients(&cycle)?;
        let bound = cycle.iter().copied().max();
        Ok(GadicSequence {
            rule: QuotientRule::Periodic(cycle),
            bound_d: bound,
        })
    }

    /// A finite sequence: positions past the prefix are undefined.
    pub fn explicit(prefix: Vec<u64>) -> Result<Self> {
        check_quotients(&prefix)?;
        let bound = prefix.iter().copied().max();
        Ok(GadicSequence {
            rule: QuotientRule::Explicit { prefix, then: None },
            bound_d: bound,
        })
    }

    pub fn explicit_then(prefix: Vec<u64>, then: Continuation) -> Result<Self> {
        if !prefix.is_empty() {
            check_quotients(&prefix)?;
        }
        let tail_max = match &then {
            Continuation::Constant(d) => {
                check_quotients(&[*d])?;
                Some(*d)
            }
            Continuation::Periodic(cycle) => {
                check_quotients(cycle)?;
                cycle.iter().copied().max()
            }
            Continuation::Linear { start, step } => {
                check_quotients(&[*start])?;
                (*step == 0).then_some(*start)
            }
        };
        let bound = tail_max.map(|t| prefix.iter().copied().fold(t, u64::max));
        Ok(GadicSequence {
            rule: QuotientRule::Explicit {
                prefix,
                then: Some(then),
            },
            bound_d: bound,
        })
    }

    /// Declares a uniform quotient bound. It must dominate every quotient the
    /// rule can produce; a looser bound than the derived maximum is allowed.
    pub fn with_bound(mut self, d: u64) -> Result<Self> {
        match self.bound_d {
            Some(max) if d >= max => {
                self.bound_d = Some(d);
                Ok(self)
            }
            Some(max) => Err(Error::Structural(format!(
                "declared bound {d} is below the largest quotient {max}"
            ))),
            None => Err(Error::Structural(
                "cannot declare a bound for a sequence with unbounded quotients".into(),
            )),
        }
    }

    pub fn rule(&self) -> &QuotientRule {
        &self.rule
    }

    /// Uniform bound `d >= d_i` for all i, when the quotients are bounded.
    pub fn bound_d(&self) -> Option<u64> {
        self.bound_d
    }

    /// Number of defined positions, or `None` for an infinite sequence.
    pub fn finite_len(&self) -> Option<usize> {
        match &self.rule {
            QuotientRule::Explicit { prefix, then: None } => Some(prefix.len()),
            _ => None,
        }
    }

    pub fn quotient(&self, i: usize) -> Result<u64> {
        match &self.rule {
            QuotientRule::Constant(d) => Ok(*d),
            QuotientRule::Periodic(cycle) => Ok(cycle[i % cycle.len()]),
            QuotientRule::Explicit { prefix, then } => {
                if let Some(&d) = prefix.get(i) {
                    return Ok(d);
                }
                let j = i - prefix.len();
                match then {
                    None => Err(Error::Structural(format!(
                        "quotient d_{i} is undefined: the explicit sequence has only {} quotients",
                        prefix.len()
                    ))),
                    Some(Continuation::Constant(d)) => Ok(*d),
                    Some(Continuation::Periodic(cycle)) => Ok(cycle[j % cycle.len()]),
                    Some(Continuation::Linear { start, step }) => (*step)
                        .checked_mul(j as u64)
                        .and_then(|x| x.checked_add(*start))
                        .ok_or_else(|| {
                            Error::Structural(format!("quotient d_{i} overflows 64 bits"))
                        }),
                }
            }
        }
    }

    /// `d_0 .. d_{m-1}`.
    pub fn quotients(&self, m: usize) -> Result<Vec<u64>> {
        (0..m).map(|i| self.quotient(i)).collect()
    }

    /// Quotient values that occur at infinitely many positions, plus every
    /// prefix value. Digit-set validity is monotone in `d`, so checking these
    /// covers every position.
    pub(crate) fn representative_quotients(&self) -> Vec<(Option<usize>, u64)> {
        match &self.rule {
            QuotientRule::Constant(d) => vec![(None, *d)],
            QuotientRule::Periodic(cycle) => cycle.iter().map(|&d| (None, d)).collect(),
            QuotientRule::Explicit { prefix, then } => {
                let mut out: Vec<_> = prefix
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| (Some(i), d))
                    .collect();
                match then {
                    None => {}
                    Some(Continuation::Constant(d)) => out.push((None, *d)),
                    Some(Continuation::Periodic(cycle)) => {
                        out.extend(cycle.iter().map(|&d| (None, d)))
                    }
                    Some(Continuation::Linear { start, .. }) => out.push((None, *start)),
                }
                out
            }
        }
    }

    /// `[g_0, ..., g_k]`, exact.
    pub fn bases(&self, k: usize) -> Result<Vec<BigUint>> {
        let mut out = Vec::with_capacity(k + 1);
        let mut g = BigUint::one();
        out.push(g.clone());
        for i in 0..k {
            g *= self.quotient(i)?;
            out.push(g.clone());
        }
        Ok(out)
    }

    /// `g_m = d_0 * ... * d_{m-1}`.
    pub fn base(&self, m: usize) -> Result<BigUint> {
        let mut g = BigUint::one();
        for i in 0..m {
            g *= self.quotient(i)?;
        }
        Ok(g)
    }

    pub fn encode(&self, n: &BigUint) -> Result<DigitVector> {
        let mut digits = Vec::new();
        let mut radices = Vec::new();
        let mut rest = n.clone();
        while !rest.is_zero() {
            let d = self.quotient(digits.len()).map_err(|_| {
                Error::Structural(format!(
                    "{n} is not representable: it exceeds g_m of the finite sequence"
                ))
            })?;
            let (q, r) = rest.div_rem(&BigUint::from(d));
            digits.push(r.to_u64().expect("remainder below a u64 quotient"));
            radices.push(d);
            rest = q;
        }
        Ok(DigitVector { digits, radices })
    }

    pub fn encode_u64(&self, n: u64) -> Result<DigitVector> {
        let mut digits = Vec::new();
        let mut radices = Vec::new();
        let mut rest = n;
        while rest != 0 {
            let d = self.quotient(digits.len()).map_err(|_| {
                Error::Structural(format!(
                    "{n} is not representable: it exceeds g_m of the finite sequence"
                ))
            })?;
            digits.push(rest % d);
            radices.push(d);
            rest /= d;
        }
        Ok(DigitVector { digits, radices })
    }

    pub fn decode(&self, dv: &DigitVector) -> Result<BigUint> {
        for (i, &radix) in dv.radices.iter().enumerate() {
            let d = self.quotient(i)?;
            if d != radix {
                return Err(Error::Structural(format!(
                    "radix mismatch at position {i}: digit vector has {radix}, sequence has {d}"
                )));
            }
        }
        let mut n = BigUint::zero();
        for (&c, &d) in dv.digits.iter().zip(&dv.radices).rev() {
            n = n * d + c;
        }
        Ok(n)
    }

    /// The unique `m >= 1` with `g_{m-1} <= n <= g_m - 1`.
    pub fn level_of(&self, n: &BigUint) -> Result<usize> {
        if n.is_zero() {
            return Err(Error::Domain(
                "levels are defined for positive integers only".into(),
            ));
        }
        let mut g = BigUint::one();
        let mut m = 0;
        while &g <= n {
            g *= self.quotient(m)?;
            m += 1;
        }
        Ok(m)
    }

    pub fn level_of_u64(&self, n: u64) -> Result<usize> {
        self.level_of(&BigUint::from(n))
    }
}

/// Digits `c_0 .. c_{m-1}` with their per-position radices, canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    digits: Vec<u64>,
    radices: Vec<u64>,
}

impl DigitVector {
    pub fn new(digits: Vec<u64>, radices: Vec<u64>) -> Result<Self> {
        if digits.len() != radices.len() {
            return Err(Error::Structural(format!(
                "{} digits but {} radices",
                digits.len(),
                radices.len()
            )));
        }
        for (i, (&c, &d)) in digits.iter().zip(&radices).enumerate() {
            if d < 2 {
                return Err(Error::Structural(format!("radix {d} at position {i} is below 2")));
            }
            if c >= d {
                return Err(Error::Structural(format!(
                    "digit {c} at position {i} is out of range for radix {d}"
                )));
            }
        }
        if digits.last() == Some(&0) {
            return Err(Error::Structural(
                "leading (most significant) digit is zero; representation is not canonical".into(),
            ));
        }
        Ok(DigitVector { digits, radices })
    }

    /// Pairs `digits` with the sequence's leading quotients.
    pub fn for_sequence(seq: &GadicSequence, digits: Vec<u64>) -> Result<Self> {
        let radices = seq.quotients(digits.len())?;
        Self::new(digits, radices)
    }

    pub fn empty() -> Self {
        DigitVector {
            digits: Vec::new(),
            radices: Vec::new(),
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// The level `m`; zero for `n = 0`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, values: &[u64]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for GadicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            QuotientRule::Constant(d) => write!(f, "constant:{d}"),
            QuotientRule::Periodic(cycle) => {
                f.write_str("periodic:")?;
                write_list(f, cycle)
            }
            QuotientRule::Explicit { prefix, then } => {
                f.write_str("explicit:")?;
                write_list(f, prefix)?;
                match then {
                    None => Ok(()),
                    Some(Continuation::Constant(d)) => write!(f, ";then=constant:{d}"),
                    Some(Continuation::Periodic(cycle)) => {
                        f.write_str(";then=periodic:")?;
                        write_list(f, cycle)
                    }
                    Some(Continuation::Linear { start, step }) => {
                        write!(f, ";then=linear:{start},{step}")
                    }
                }
            }
        }
    }
}

fn quotient_list(cur: &mut Cursor<'_>) -> std::result::Result<Vec<u64>, ParseError> {
    let start = cur.pos();
    let list = cur.u64_list()?;
    if list.iter().any(|&d| d < 2) {
        return Err(cur.error_at(start, "every quotient must be at least 2"));
    }
    Ok(list)
}

/// Grammar: `constant:<d>`, `periodic:<d0>,<d1>,...`, `explicit:<d0>,<d1>,...`
/// optionally followed by `;then=constant:<d>`, `;then=periodic:<...>` or
/// `;then=linear:<start>,<step>`.
impl FromStr for GadicSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut cur = Cursor::new(s);
        let kw_pos = cur.pos();
        let kind = cur.keyword();
        cur.expect(":")?;
        let seq = match kind {
            "constant" => {
                let d = quotient_list(&mut cur)?;
                if d.len() != 1 {
                    return Err(cur.error_at(kw_pos, "constant takes exactly one quotient"));
                }
                GadicSequence::constant(d[0])
            }
            "periodic" => GadicSequence::periodic(quotient_list(&mut cur)?),
            "explicit" => {
                let prefix = quotient_list(&mut cur)?;
                if cur.eat(";then=") {
                    let then_pos = cur.pos();
                    let then = match cur.keyword() {
                        "constant" => {
                            cur.expect(":")?;
                            let pos = cur.pos();
                            let d = cur.u64()?;
                            if d < 2 {
                                return Err(cur.error_at(pos, "every quotient must be at least 2"));
                            }
                            Continuation::Constant(d)
                        }
                        "periodic" => {
                            cur.expect(":")?;
                            Continuation::Periodic(quotient_list(&mut cur)?)
                        }
                        "linear" => {
                            cur.expect(":")?;
                            let pos = cur.pos();
                            let start = cur.u64()?;
                            if start < 2 {
                                return Err(cur.error_at(pos, "every quotient must be at least 2"));
                            }
                            cur.expect(",")?;
                            let step = cur.u64()?;
                            Continuation::Linear { start, step }
                        }
                        _ => {
                            return Err(cur.error_at(
                                then_pos,
                                "expected continuation 'constant', 'periodic' or 'linear'",
                            ))
                        }
                    };
                    GadicSequence::explicit_then(prefix, then)
                } else {
                    GadicSequence::explicit(prefix)
                }
            }
            _ => {
                return Err(cur.error_at(
                    kw_pos,
                    "expected sequence kind 'constant', 'periodic' or 'explicit'",
                ))
            }
        };
        cur.finish()?;
        seq.map_err(|e| cur.error_at(kw_pos, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn bases_examples() {
        let dec = GadicSequence::constant(10).unwrap();
        assert_eq!(dec.bases(3).unwrap(), vec![big(1), big(10), big(100), big(1000)]);
        let p23 = GadicSequence::periodic(vec![2, 3]).unwrap();
        assert_eq!(
            p23.bases(4).unwrap(),
            vec![big(1), big(2), big(6), big(12), big(36)]
        );
        assert_eq!(GadicSequence::constant(2).unwrap().bases(0).unwrap(), vec![big(1)]);
    }

    #[test]
    fn encode_decode_examples() {
        let dec = GadicSequence::constant(10).unwrap();
        let p23 = GadicSequence::periodic(vec![2, 3]).unwrap();
        assert_eq!(dec.encode(&big(409)).unwrap().digits(), &[9, 0, 4]);
        let dv = p23.encode(&big(11)).unwrap();
        assert_eq!(dv.digits(), &[1, 2, 1]);
        assert_eq!(dv.radices(), &[2, 3, 2]);
        assert!(GadicSequence::constant(2).unwrap().encode(&big(0)).unwrap().is_empty());

        let dv = DigitVector::for_sequence(&dec, vec![9, 0, 4]).unwrap();
        assert_eq!(dec.decode(&dv).unwrap(), big(409));
        let dv = DigitVector::for_sequence(&p23, vec![1, 2, 1]).unwrap();
        assert_eq!(p23.decode(&dv).unwrap(), big(11));
        let seven = GadicSequence::constant(7).unwrap();
        assert_eq!(seven.decode(&DigitVector::empty()).unwrap(), big(0));
    }

    #[test]
    fn decode_rejects_radix_mismatch() {
        let dec = GadicSequence::constant(10).unwrap();
        let dv = DigitVector::new(vec![1, 1], vec![2, 3]).unwrap();
        assert!(matches!(dec.decode(&dv), Err(Error::Structural(_))));
    }

    #[test]
    fn digit_vector_invariants() {
        assert!(DigitVector::new(vec![1, 0], vec![10, 10]).is_err());
        assert!(DigitVector::new(vec![10], vec![10]).is_err());
        assert!(DigitVector::new(vec![1], vec![10, 10]).is_err());
    }

    #[test]
    fn level_examples() {
        let dec = GadicSequence::constant(10).unwrap();
        assert_eq!(dec.level_of(&big(409)).unwrap(), 3);
        let p23 = GadicSequence::periodic(vec![2, 3]).unwrap();
        assert_eq!(p23.level_of(&big(11)).unwrap(), 3);
        assert_eq!(GadicSequence::constant(2).unwrap().level_of(&big(1)).unwrap(), 1);
        assert!(matches!(dec.level_of(&big(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn finite_explicit_refuses_to_guess() {
        let seq = GadicSequence::explicit(vec![2, 3]).unwrap();
        assert_eq!(seq.finite_len(), Some(2));
        assert!(seq.quotient(2).is_err());
        assert!(seq.bases(3).is_err());
        assert_eq!(seq.encode(&big(5)).unwrap().digits(), &[1, 2]);
        assert!(seq.encode(&big(6)).is_err());
    }

    #[test]
    fn continuation_and_bounds() {
        let capped = GadicSequence::explicit_then(vec![2, 3, 4, 5], Continuation::Constant(6)).unwrap();
        assert_eq!(capped.quotients(7).unwrap(), vec![2, 3, 4, 5, 6, 6, 6]);
        assert_eq!(capped.bound_d(), Some(6));
        let growing =
            GadicSequence::explicit_then(vec![2], Continuation::Linear { start: 3, step: 1 }).unwrap();
        assert_eq!(growing.quotients(4).unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(growing.bound_d(), None);
        assert!(growing.clone().with_bound(100).is_err());
        assert_eq!(capped.clone().with_bound(8).unwrap().bound_d(), Some(8));
        assert!(capped.with_bound(5).is_err());
        assert!(GadicSequence::constant(1).is_err());
        assert!(GadicSequence::periodic(vec![2, 0]).is_err());
    }

    #[test]
    fn parse_and_format() {
        for text in [
            "constant:10",
            "periodic:2,3",
            "explicit:2,3,4,5;then=constant:6",
            "explicit:2,7",
            "explicit:2;then=linear:3,1",
            "explicit:4;then=periodic:2,3",
        ] {
            let seq: GadicSequence = text.parse().unwrap();
            assert_eq!(seq.to_string(), text);
        }
        let err = "constant:x".parse::<GadicSequence>().unwrap_err();
        assert_eq!(err.position, 9);
        let err = "periodic:2,1".parse::<GadicSequence>().unwrap_err();
        assert_eq!(err.position, 9);
        let err = "zigzag:2".parse::<GadicSequence>().unwrap_err();
        assert_eq!(err.position, 0);
        let err = "constant:10 ".parse::<GadicSequence>().unwrap_err();
        assert_eq!(err.position, 11);
    }
}
