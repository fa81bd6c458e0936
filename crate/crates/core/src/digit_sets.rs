//! Forbidden-digit families and membership in missing-digit sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::gadic::{DigitVector, GadicSequence};
use crate::grammar::Cursor;

/// Refuse exhaustive scans over more than this many integers unless told otherwise.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForbiddenRule {
    Uniform(BTreeSet<u64>),
    PerPosition {
        positions: BTreeMap<usize, BTreeSet<u64>>,
        default: BTreeSet<u64>,
    },
}

impl ForbiddenRule {
    pub fn uniform(digits: impl IntoIterator<Item = u64>) -> Self {
        ForbiddenRule::Uniform(digits.into_iter().collect())
    }

    pub fn at(&self, i: usize) -> &BTreeSet<u64> {
        match self {
            ForbiddenRule::Uniform(set) => set,
            ForbiddenRule::PerPosition { positions, default } => {
                positions.get(&i).unwrap_or(default)
            }
        }
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &BTreeSet<u64>) -> fmt::Result {
    f.write_str("{")?;
    for (i, v) in set.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("}")
}

impl fmt::Display for ForbiddenRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForbiddenRule::Uniform(set) => {
                f.write_str("uniform:")?;
                write_set(f, set)
            }
            ForbiddenRule::PerPosition { positions, default } => {
                f.write_str("per-position:")?;
                for (i, set) in positions {
                    write!(f, "{i}=")?;
                    write_set(f, set)?;
                    f.write_str(";")?;
                }
                f.write_str("default=")?;
                write_set(f, default)
            }
        }
    }
}

fn parse_set(cur: &mut Cursor<'_>) -> std::result::Result<BTreeSet<u64>, ParseError> {
    cur.expect("{")?;
    let mut set = BTreeSet::new();
    if cur.eat("}") {
        return Ok(set);
    }
    loop {
        let pos = cur.pos();
        if !set.insert(cur.u64()?) {
            return Err(cur.error_at(pos, "duplicate digit"));
        }
        if cur.eat("}") {
            return Ok(set);
        }
        cur.expect(",")?;
    }
}

/// Grammar: `uniform:{9}` or `per-position:0={9};1={0,5};default={9}`.
impl FromStr for ForbiddenRule {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut cur = Cursor::new(s);
        let kind = cur.keyword();
        cur.expect(":")?;
        let rule = match kind {
            "uniform" => ForbiddenRule::Uniform(parse_set(&mut cur)?),
            "per-position" => {
                let mut positions = BTreeMap::new();
                loop {
                    if cur.eat("default=") {
                        let default = parse_set(&mut cur)?;
                        break ForbiddenRule::PerPosition { positions, default };
                    }
                    let pos = cur.pos();
                    let i = cur.usize()?;
                    cur.expect("=")?;
                    if positions.insert(i, parse_set(&mut cur)?).is_some() {
                        return Err(cur.error_at(pos, "position listed twice"));
                    }
                    cur.expect(";")?;
                }
            }
            _ => return Err(cur.error_at(0, "expected 'uniform' or 'per-position'")),
        };
        cur.finish()?;
        Ok(rule)
    }
}

/// The family 𝒰 = (U_i) validated against a sequence: every resolved `U_i`
/// is a nonempty proper subset of `[0, d_i - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSpec {
    rule: ForbiddenRule,
    seq: GadicSequence,
}

fn check_set(set: &BTreeSet<u64>, d: u64, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Structural(format!("{what}: forbidden set is empty")));
    }
    if let Some(&c) = set.iter().next_back().filter(|&&c| c >= d) {
        return Err(Error::Structural(format!(
            "{what}: digit {c} is outside [0, {}]",
            d - 1
        )));
    }
    if set.len() as u64 >= d {
        return Err(Error::Structural(format!(
            "{what}: forbidding every digit of [0, {}] leaves no admissible digit",
            d - 1
        )));
    }
    Ok(())
}

impl ForbiddenSpec {
    pub fn new(seq: GadicSequence, rule: ForbiddenRule) -> Result<Self> {
        // Validity only gets easier as d grows, so the representative
        // quotients cover every position.
        let mapped = |i: usize| match &rule {
            ForbiddenRule::PerPosition { positions, .. } => positions.contains_key(&i),
            ForbiddenRule::Uniform(_) => false,
        };
        for (pos, d) in seq.representative_quotients() {
            match pos {
                Some(i) if mapped(i) => {}
                Some(i) => check_set(rule.at(i), d, &format!("position {i}"))?,
                None => check_set(rule.at(usize::MAX), d, "default")?,
            }
        }
        if let ForbiddenRule::PerPosition { positions, .. } = &rule {
            for (&i, set) in positions {
                let d = seq.quotient(i)?;
                check_set(set, d, &format!("position {i}"))?;
            }
        }
        Ok(ForbiddenSpec { rule, seq })
    }

    pub fn uniform(seq: GadicSequence, digits: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(seq, ForbiddenRule::uniform(digits))
    }

    pub fn rule(&self) -> &ForbiddenRule {
        &self.rule
    }

    pub fn seq(&self) -> &GadicSequence {
        &self.seq
    }

    pub fn at(&self, i: usize) -> &BTreeSet<u64> {
        self.rule.at(i)
    }

    pub fn is_forbidden(&self, i: usize, digit: u64) -> bool {
        self.rule.at(i).contains(&digit)
    }

    /// `(d_i - |U_i|, |U_i|)`: admissible and forbidden digit counts at position i.
    pub fn split_at(&self, i: usize) -> Result<(u64, u64)> {
        let d = self.seq.quotient(i)?;
        let bad = self.at(i).len() as u64;
        Ok((d - bad, bad))
    }

    /// Same split for a leading digit, which ranges over `[1, d_i - 1]`.
    pub fn top_split_at(&self, i: usize) -> Result<(u64, u64)> {
        let d = self.seq.quotient(i)?;
        let bad = self.at(i).iter().filter(|&&c| c != 0).count() as u64;
        Ok((d - 1 - bad, bad))
    }

    /// Number of forbidden digits in a representation.
    pub fn violations(&self, dv: &DigitVector) -> usize {
        dv.digits()
            .iter()
            .enumerate()
            .filter(|&(i, &c)| self.is_forbidden(i, c))
            .count()
    }
}

/// A rational `λ ∈ [0, 1]`. Comparisons against `λ·m` are done in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lambda(Ratio<u64>);

impl Lambda {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Domain("lambda has a zero denominator".into()));
        }
        if numer > denom {
            return Err(Error::Domain(format!("lambda = {numer}/{denom} exceeds 1")));
        }
        Ok(Lambda(Ratio::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Lambda(Ratio::new(0, 1))
    }

    pub fn one() -> Self {
        Lambda(Ratio::new(1, 1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new(self.numer().into(), self.denom().into())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `⌊λ m⌋`.
    pub fn floor_times(&self, m: usize) -> usize {
        (self.numer() as u128 * m as u128 / self.denom() as u128) as usize
    }

    /// `x <= λ m`, non-strict.
    pub fn admits(&self, x: usize, m: usize) -> bool {
        x as u128 * self.denom() as u128 <= self.numer() as u128 * m as u128
    }

    /// `λ d < 1`.
    pub fn below_reciprocal(&self, d: u64) -> bool {
        (self.numer() as u128) * (d as u128) < self.denom() as u128
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// `p/q` (or a bare integer). Decimal notation is rejected.
impl FromStr for Lambda {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut cur = Cursor::new(s);
        let numer = cur.u64()?;
        let denom = if cur.eat("/") {
            cur.u64()?
        } else if cur.peek() == Some('.') {
            return Err(cur.error("lambda must be a rational p/q, not a decimal"));
        } else {
            1
        };
        cur.finish()?;
        Lambda::new(numer, denom).map_err(|e| cur.error_at(0, e.to_string()))
    }
}

/// The λ-restricted set: positive `n` of level `m` with at most `λ m` forbidden digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaFamily {
    forb: ForbiddenSpec,
    lambda: Lambda,
}

impl LambdaFamily {
    pub fn new(forb: ForbiddenSpec, lambda: Lambda) -> Self {
        LambdaFamily { forb, lambda }
    }

    pub fn seq(&self) -> &GadicSequence {
        self.forb.seq()
    }

    pub fn forbidden(&self) -> &ForbiddenSpec {
        &self.forb
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: Lambda) -> Self {
        LambdaFamily {
            forb: self.forb.clone(),
            lambda,
        }
    }

    /// Quotients bounded by some `d` and `λ < 1/d`.
    pub fn in_regime(&self) -> bool {
        self.seq()
            .bound_d()
            .is_some_and(|d| self.lambda.below_reciprocal(d))
    }

    /// The quotient bound `d`, or a regime error when the bound machinery does not apply.
    pub fn regime_bound(&self) -> Result<u64> {
        let d = self.seq().bound_d().ok_or_else(|| {
            Error::outside_regime("the sequence declares no uniform quotient bound")
        })?;
        if !self.lambda.below_reciprocal(d) {
            return Err(Error::outside_regime(format!(
                "lambda = {} is not below 1/d = 1/{d}",
                self.lambda
            )));
        }
        Ok(d)
    }

    pub fn violation_count(&self, n: &BigUint) -> Result<usize> {
        if n.is_zero() {
            return Err(Error::Domain("violation counts are defined for n >= 1".into()));
        }
        Ok(self.forb.violations(&self.seq().encode(n)?))
    }

    pub fn is_member(&self, n: &BigUint) -> Result<bool> {
        if n.is_zero() {
            return Err(Error::Domain("membership is defined for n >= 1".into()));
        }
        let dv = self.seq().encode(n)?;
        Ok(self.lambda.admits(self.forb.violations(&dv), dv.len()))
    }

    pub fn is_member_u64(&self, n: u64) -> Result<bool> {
        self.is_member(&BigUint::from(n))
    }

    /// Members of level `m` in increasing order, by exhaustive scan of `[g_{m-1}, g_m - 1]`.
    pub fn enumerate_members(&self, m: usize) -> Result<LevelMembers> {
        self.enumerate_members_with_budget(m, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn enumerate_members_with_budget(&self, m: usize, budget: u64) -> Result<LevelMembers> {
        if m == 0 {
            return Err(Error::Domain("levels start at m = 1".into()));
        }
        let g_m = self.seq().base(m)?;
        if g_m > BigUint::from(budget) {
            return Err(Error::Budget { g_m, budget });
        }
        LevelMembers::new(self, m)
    }
}

/// Odometer over the digit strings of one level.
pub struct LevelMembers {
    radices: Vec<u64>,
    forbidden: Vec<Vec<bool>>,
    digits: Vec<u64>,
    value: u64,
    violations: usize,
    lambda: Lambda,
    done: bool,
}

impl LevelMembers {
    fn new(fam: &LambdaFamily, m: usize) -> Result<Self> {
        let radices = fam.seq().quotients(m)?;
        let forbidden: Vec<Vec<bool>> = radices
            .iter()
            .enumerate()
            .map(|(i, &d)| (0..d).map(|c| fam.forb.is_forbidden(i, c)).collect())
            .collect();
        let mut digits = vec![0; m];
        digits[m - 1] = 1;
        let value = fam.seq().base(m - 1)?.to_u64().expect("within budget");
        let violations = digits
            .iter()
            .enumerate()
            .filter(|&(i, &c)| forbidden[i][c as usize])
            .count();
        Ok(LevelMembers {
            radices,
            forbidden,
            digits,
            value,
            violations,
            lambda: fam.lambda,
            done: false,
        })
    }

    fn advance(&mut self) {
        self.value += 1;
        for i in 0..self.digits.len() {
            let old = self.digits[i] as usize;
            let new = old + 1;
            let wraps = new as u64 == self.radices[i];
            let new = if wraps { 0 } else { new };
            self.violations -= self.forbidden[i][old] as usize;
            self.violations += self.forbidden[i][new] as usize;
            self.digits[i] = new as u64;
            if !wraps {
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for LevelMembers {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let m = self.digits.len();
        while !self.done {
            let (value, x) = (self.value, self.violations);
            self.advance();
            if self.lambda.admits(x, m) {
                return Some(value);
            }
        }
        None
    }
}

/// How the index set `I` of an indexed family is given.
#[derive(Clone)]
pub enum IndexRule {
    Finite(BTreeSet<usize>),
    /// `{first, first + step, first + 2 step, ...}`, `step >= 1`.
    Arithmetic { first: usize, step: usize },
    All,
    /// Membership predicate `i ∈ I`; `I(k)` is counted by scanning `0..=k`.
    Function(Arc<dyn Fn(usize) -> bool + Send + Sync>),
}

impl fmt::Debug for IndexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexRule::Function(_) => f.write_str("Function(..)"),
            other => write!(f, "{other}"),
        }
    }
}

impl IndexRule {
    pub fn contains(&self, i: usize) -> bool {
        match self {
            IndexRule::Finite(set) => set.contains(&i),
            IndexRule::Arithmetic { first, step } => i >= *first && (i - first).is_multiple_of(*step),
            IndexRule::All => true,
            IndexRule::Function(f) => f(i),
        }
    }

    /// `I(k)`: the number of `i ∈ I` with `i <= k`.
    pub fn count_up_to(&self, k: u64) -> u64 {
        match self {
            IndexRule::Finite(set) => set.iter().take_while(|&&i| i as u64 <= k).count() as u64,
            IndexRule::Arithmetic { first, step } => {
                let first = *first as u64;
                if k < first {
                    0
                } else {
                    (k - first) / *step as u64 + 1
                }
            }
            IndexRule::All => k + 1,
            IndexRule::Function(f) => (0..=k).filter(|&i| f(i as usize)).count() as u64,
        }
    }

    /// True when I has an element `>= from`; `None` when that cannot be decided.
    fn reaches(&self, from: usize) -> Option<bool> {
        match self {
            IndexRule::Finite(set) => Some(set.range(from..).next().is_some()),
            IndexRule::Arithmetic { .. } | IndexRule::All => Some(true),
            IndexRule::Function(_) => None,
        }
    }
}

impl fmt::Display for IndexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexRule::Finite(set) => {
                f.write_str("finite:")?;
                for (n, i) in set.iter().enumerate() {
                    if n > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}")?;
                }
                Ok(())
            }
            IndexRule::Arithmetic { first, step } => write!(f, "arith:first={first},step={step}"),
            IndexRule::All => f.write_str("all"),
            IndexRule::Function(_) => f.write_str("function"),
        }
    }
}

/// Grammar: `finite:0,2,4`, `arith:first=0,step=2`, `all`.
impl FromStr for IndexRule {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut cur = Cursor::new(s);
        let rule = match cur.keyword() {
            "all" => IndexRule::All,
            "finite" => {
                cur.expect(":")?;
                let mut set = BTreeSet::new();
                loop {
                    let pos = cur.pos();
                    if !set.insert(cur.usize()?) {
                        return Err(cur.error_at(pos, "duplicate index"));
                    }
                    if !cur.eat(",") {
                        break;
                    }
                }
                IndexRule::Finite(set)
            }
            "arith" => {
                cur.expect(":first=")?;
                let first = cur.usize()?;
                cur.expect(",step=")?;
                let pos = cur.pos();
                let step = cur.usize()?;
                if step == 0 {
                    return Err(cur.error_at(pos, "step must be at least 1"));
                }
                IndexRule::Arithmetic { first, step }
            }
            _ => return Err(cur.error_at(0, "expected 'finite', 'arith' or 'all'")),
        };
        cur.finish()?;
        Ok(rule)
    }
}

/// Positive `n` whose digits avoid `U_i` at every index `i ∈ I`.
#[derive(Debug, Clone)]
pub struct IndexedFamily {
    forb: ForbiddenSpec,
    index: IndexRule,
    strict: bool,
}

impl IndexedFamily {
    pub fn new(forb: ForbiddenSpec, index: IndexRule) -> Self {
        IndexedFamily {
            forb,
            index,
            strict: false,
        }
    }

    /// Also apply the condition to the implicit zero digits above the leading digit.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn seq(&self) -> &GadicSequence {
        self.forb.seq()
    }

    pub fn forbidden(&self) -> &ForbiddenSpec {
        &self.forb
    }

    pub fn index(&self) -> &IndexRule {
        &self.index
    }

    pub fn is_member(&self, n: &BigUint) -> Result<bool> {
        if n.is_zero() {
            return Err(Error::Domain("membership is defined for n >= 1".into()));
        }
        let dv = self.seq().encode(n)?;
        let m = dv.len();
        let shown_ok = dv
            .digits()
            .iter()
            .enumerate()
            .all(|(i, &c)| !(self.index.contains(i) && self.forb.is_forbidden(i, c)));
        if !shown_ok || !self.strict {
            return Ok(shown_ok);
        }
        Ok(!self.zero_forbidden_beyond(m)?)
    }

    pub fn is_member_u64(&self, n: u64) -> Result<bool> {
        self.is_member(&BigUint::from(n))
    }

    /// Whether some `i ∈ I`, `i >= m`, has `0 ∈ U_i`.
    fn zero_forbidden_beyond(&self, m: usize) -> Result<bool> {
        let limit = self.seq().finite_len();
        let in_range = |i: usize| i >= m && limit.is_none_or(|len| i < len);
        match (&self.index, self.forb.rule()) {
            (IndexRule::Finite(set), _) => Ok(set
                .range(m..)
                .any(|&i| in_range(i) && self.forb.is_forbidden(i, 0))),
            (index, rule) => {
                if let Some(len) = limit {
                    return Ok((m..len).any(|i| index.contains(i) && self.forb.is_forbidden(i, 0)));
                }
                let reaches = index.reaches(m).ok_or_else(|| {
                    Error::Structural(
                        "strict membership cannot be decided for a predicate index set".into(),
                    )
                })?;
                match rule {
                    ForbiddenRule::Uniform(set) => Ok(reaches && set.contains(&0)),
                    ForbiddenRule::PerPosition { positions, default } => {
                        let listed = positions
                            .range(m..)
                            .any(|(&i, set)| index.contains(i) && set.contains(&0));
                        // Infinitely many indices fall back to the default set.
                        Ok(listed || (reaches && default.contains(&0)))
                    }
                }
            }
        }
    }
}
