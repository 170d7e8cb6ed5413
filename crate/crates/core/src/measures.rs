//! Distributions on `Z_p` as exact rational functions of clopen balls.
//!
//! All ball values are [`Rational`]s; conversion into `Q_p` only happens in
//! [`riemann_integrate`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bernoulli::integral_bernoulli_poly;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::rational::{self, fmt_rational, Rational};

/// Default cap on the number of balls an exhaustive scan may visit.
pub const DEFAULT_BALL_BUDGET: u64 = 1_000_000;

pub(crate) fn checked_pow(p: u64, level: u32) -> Result<u64> {
    p.checked_pow(level)
        .ok_or(Error::LevelOverflow { p, level })
}

/// The ball `rep + p^level Z_p` with `0 <= rep < p^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClopenBall {
    pub level: u32,
    pub rep: u64,
}

impl ClopenBall {
    /// Reduces `rep` into `[0, p^level)`.
    pub fn new(p: u64, rep: i64, level: u32) -> Result<Self> {
        let size = checked_pow(p, level)?;
        let rep = rep.rem_euclid(size as i64) as u64;
        Ok(ClopenBall { level, rep })
    }

    /// Parses the CLI form `A:N`.
    pub fn parse(text: &str, p: u64) -> Result<Self> {
        let (a, n) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidBall(format!("{text:?}: expected REP:LEVEL")))?;
        let rep: i64 = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidBall(format!("bad representative {a:?}")))?;
        let level: u32 = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidBall(format!("bad level {n:?}")))?;
        Self::new(p, rep, level)
    }

    /// The `p` balls `rep + b p^level + p^(level+1) Z_p`.
    pub fn children(&self, p: u64) -> Result<impl Iterator<Item = ClopenBall>> {
        let step = checked_pow(p, self.level)?;
        checked_pow(p, self.level + 1)?;
        let (rep, level) = (self.rep, self.level);
        Ok((0..p).map(move |b| ClopenBall {
            level: level + 1,
            rep: rep + b * step,
        }))
    }
}

impl fmt::Display for ClopenBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.rep, self.level)
    }
}

/// Anything that assigns a rational to each clopen ball of `Z_p`.
pub trait Distribution {
    fn prime(&self) -> u64;
    fn value(&self, ball: &ClopenBall) -> Result<Rational>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Haar,
    Bernoulli { k: usize },
    Regularized { k: usize, c: i64 },
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallMeasure {
    p: u64,
    kind: MeasureKind,
}

impl BallMeasure {
    pub fn new(p: u64, kind: MeasureKind) -> Result<Self> {
        if !rational::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        match kind {
            MeasureKind::Regularized { c, .. } if c == 1 || c.rem_euclid(p as i64) == 0 => {
                return Err(Error::InvalidC(c))
            }
            MeasureKind::Alternating if p == 2 => return Err(Error::EvenPrime(p)),
            _ => {}
        }
        Ok(BallMeasure { p, kind })
    }

    pub fn haar(p: u64) -> Result<Self> {
        Self::new(p, MeasureKind::Haar)
    }

    pub fn bernoulli(p: u64, k: usize) -> Result<Self> {
        Self::new(p, MeasureKind::Bernoulli { k })
    }

    pub fn regularized(p: u64, k: usize, c: i64) -> Result<Self> {
        Self::new(p, MeasureKind::Regularized { k, c })
    }

    pub fn alternating(p: u64) -> Result<Self> {
        Self::new(p, MeasureKind::Alternating)
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }
}

impl Distribution for BallMeasure {
    fn prime(&self) -> u64 {
        self.p
    }

    fn value(&self, ball: &ClopenBall) -> Result<Rational> {
        match self.kind {
            MeasureKind::Haar => bernoulli_distribution_value(self.p, 0, ball),
            MeasureKind::Bernoulli { k } => bernoulli_distribution_value(self.p, k, ball),
            MeasureKind::Regularized { k, c } => regularized_value(self.p, k, c, ball),
            MeasureKind::Alternating => alternating_value(self.p, ball),
        }
    }
}

impl fmt::Display for BallMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MeasureKind::Haar => write!(f, "Haar (p={})", self.p),
            MeasureKind::Bernoulli { k } => write!(f, "E_{k} (p={})", self.p),
            MeasureKind::Regularized { k, c } => write!(f, "E_{{{k},{c}}} (p={})", self.p),
            MeasureKind::Alternating => write!(f, "alternating (p={})", self.p),
        }
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    /// `haar`, `alternating`, `bernoulli:K` or `regularized:K:C`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            position: 0,
            message: format!("unknown measure {s:?}"),
        };
        let mut it = s.split(':');
        let kind = match it.next().unwrap_or_default() {
            "haar" => MeasureKind::Haar,
            "alternating" | "mu" => MeasureKind::Alternating,
            "bernoulli" | "E" => MeasureKind::Bernoulli {
                k: it.next().and_then(|k| k.parse().ok()).ok_or_else(bad)?,
            },
            "regularized" | "Ec" => {
                let k = it.next().and_then(|k| k.parse().ok()).ok_or_else(bad)?;
                let c = it.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
                MeasureKind::Regularized { k, c }
            }
            _ => return Err(bad()),
        };
        if it.next().is_some() {
            return Err(bad());
        }
        Ok(kind)
    }
}

/// `{x}_{p^n}`: the representative of `x` in `[0, p^n)`.
pub fn scaled_representative(x: &Rational, p: u64, n: u32) -> Result<u64> {
    let m = BigInt::from(checked_pow(p, n)?);
    rational::reduce_mod(x, &m)
        .map(|r| r.to_u64().expect("reduced below p^n"))
        .ok_or_else(|| {
            Error::Domain(format!(
                "{} has denominator divisible by {p}",
                fmt_rational(x)
            ))
        })
}

/// `E_k(a + p^n Z_p) = p^(n(k-1)) B_k(a / p^n)`.
pub fn bernoulli_distribution_value(p: u64, k: usize, ball: &ClopenBall) -> Result<Rational> {
    if k == 1 {
        let pn = checked_pow(p, ball.level)? as i128;
        return Ok(Rational::new(
            BigInt::from(2 * ball.rep as i128 - pn),
            BigInt::from(2 * pn),
        ));
    }
    let pn = BigInt::from(checked_pow(p, ball.level)?);
    Ok(integral_bernoulli_poly(k).scaled_value(&BigInt::from(ball.rep), &pn))
}

fn inverse_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (a as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// `E_{k,c}(ball) = E_k(ball) - c^k E_k({a/c}_{p^n} + p^n Z_p)`.
pub fn regularized_value(p: u64, k: usize, c: i64, ball: &ClopenBall) -> Result<Rational> {
    if c == 1 || c.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidC(c));
    }
    let pn = checked_pow(p, ball.level)?;
    let c_mod = c.rem_euclid(pn as i64) as u64;
    let c_inv = inverse_mod_u64(c_mod, pn).ok_or(Error::InvalidC(c))?;
    let pulled = ClopenBall {
        level: ball.level,
        rep: (ball.rep as u128 * c_inv as u128 % pn as u128) as u64,
    };
    if k == 1 {
        // (a - c r)/p^n is an integer q and the value is q + (c - 1)/2
        let q = (ball.rep as i128 - c as i128 * pulled.rep as i128) / pn as i128;
        return Ok(Rational::new(
            BigInt::from(2 * q + c as i128 - 1),
            BigInt::from(2),
        ));
    }
    let poly = integral_bernoulli_poly(k);
    let pn_big = BigInt::from(pn);
    let own = poly.scaled_value(&BigInt::from(ball.rep), &pn_big);
    let back = poly.scaled_value(&BigInt::from(pulled.rep), &pn_big);
    Ok(own - back * Rational::from_integer(BigInt::from(c).pow(k as u32)))
}

/// `μ(a + p^n Z_p) = (-1)^a` for the canonical representative `a`.
pub fn alternating_value(p: u64, ball: &ClopenBall) -> Result<Rational> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenPrime(p));
    }
    Ok(rational::int(if ball.rep.is_multiple_of(2) { 1 } else { -1 }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub ball: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of an exhaustive check; failures keep the first few witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: u64,
    pub failures: Vec<Failure>,
}

const MAX_WITNESSES: usize = 10;

impl CheckReport {
    fn new() -> Self {
        CheckReport {
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ball: &ClopenBall, lhs: &Rational, rhs: &Rational) {
        self.checked += 1;
        if lhs != rhs && self.failures.len() < MAX_WITNESSES {
            self.failures.push(Failure {
                ball: ball.to_string(),
                lhs: fmt_rational(lhs),
                rhs: fmt_rational(rhs),
            });
        }
    }
}

fn balls_up_to(p: u64, first_level: u32, last_level: u32, budget: u64) -> Result<u64> {
    let mut total: u64 = 0;
    for n in first_level..=last_level {
        total = total.saturating_add(checked_pow(p, n)?);
    }
    if total > budget {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
            best_precision: None,
        });
    }
    Ok(total)
}

/// Checks `value(ball) = Σ value(children)` for every ball of level `< max_level`.
pub fn distribution_additivity_check<D: Distribution + ?Sized>(
    m: &D,
    max_level: u32,
    budget: u64,
) -> Result<CheckReport> {
    let p = m.prime();
    if max_level == 0 {
        return Err(Error::Domain(
            "additivity check needs max_level >= 1".into(),
        ));
    }
    balls_up_to(p, 0, max_level, budget)?;
    let mut report = CheckReport::new();
    for n in 0..max_level {
        for a in 0..checked_pow(p, n)? {
            let ball = ClopenBall { level: n, rep: a };
            let parent = m.value(&ball)?;
            let mut sum = Rational::zero();
            for child in ball.children(p)? {
                sum += m.value(&child)?;
            }
            report.record(&ball, &parent, &sum);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelBound {
    pub level: u32,
    /// `log_p max |value|_p`; `None` when every value at this level is zero.
    pub max_abs_exponent: Option<i64>,
    pub witness: Option<String>,
}

/// Per-level maximum of `|value|_p` over all balls of levels `1..=max_level`.
pub fn boundedness_scan<D: Distribution + ?Sized>(
    m: &D,
    max_level: u32,
    budget: u64,
) -> Result<Vec<LevelBound>> {
    let p = m.prime();
    balls_up_to(p, 1, max_level, budget)?;
    let mut out = Vec::with_capacity(max_level as usize);
    for n in 1..=max_level {
        let mut best: Option<(i64, ClopenBall)> = None;
        for a in 0..checked_pow(p, n)? {
            let ball = ClopenBall { level: n, rep: a };
            if let Some(v) = rational::valuation(&m.value(&ball)?, p) {
                if best.is_none_or(|(b, _)| -v > b) {
                    best = Some((-v, ball));
                }
            }
        }
        out.push(LevelBound {
            level: n,
            max_abs_exponent: best.map(|(e, _)| e),
            witness: best.map(|(_, b)| b.to_string()),
        });
    }
    Ok(out)
}

/// Compares `E_{1,c}` against half the alternating measure on every ball of
/// levels `1..=max_level`. With `c = 2` this is the identity `E_{1,2} = μ/2`.
pub fn regularization_identity_check(
    p: u64,
    c: i64,
    max_level: u32,
    budget: u64,
) -> Result<CheckReport> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenPrime(p));
    }
    balls_up_to(p, 1, max_level, budget)?;
    let half = rational::rat(1, 2);
    let mut report = CheckReport::new();
    for n in 1..=max_level {
        for a in 0..checked_pow(p, n)? {
            let ball = ClopenBall { level: n, rep: a };
            let lhs = regularized_value(p, 1, c, &ball)?;
            let rhs = alternating_value(p, &ball)? * &half;
            report.record(&ball, &lhs, &rhs);
        }
    }
    Ok(report)
}

/// `E_{1,2} = μ/2` on all balls of levels `1..=max_level`.
pub fn theorem1_check(p: u64, max_level: u32) -> Result<CheckReport> {
    regularization_identity_check(p, 2, max_level, DEFAULT_BALL_BUDGET)
}

/// Level-`n` Riemann sum `Σ_a f(a) m(a + p^n Z_p)`, over all residues or units only.
pub fn riemann_integrate<D, F>(
    f: F,
    m: &D,
    ctx: &PadicContext,
    n: u32,
    units_only: bool,
) -> Result<PadicNumber>
where
    D: Distribution + ?Sized,
    F: Fn(u64) -> Result<PadicNumber>,
{
    let p = m.prime();
    if p != ctx.p() {
        return Err(Error::ContextMismatch);
    }
    if n == 0 {
        return Err(Error::Domain("Riemann sums need level n >= 1".into()));
    }
    let mut acc = PadicNumber::zero(ctx, i64::MAX / 4);
    for a in 0..checked_pow(p, n)? {
        if units_only && a % p == 0 {
            continue;
        }
        let w = m.value(&ClopenBall { level: n, rep: a })?;
        if w.is_zero() {
            continue;
        }
        let term = f(a)?.mul(&PadicNumber::exact_rational(&w, ctx))?;
        acc = acc.add(&term)?;
    }
    if acc.abs_prec() > ctx.work_prec() as i64 && acc.is_zero() {
        acc = PadicNumber::zero(ctx, ctx.work_prec() as i64);
    }
    Ok(acc)
}

/// `1` as an integrand, for volume computations.
pub fn constant_one(ctx: &PadicContext) -> impl Fn(u64) -> Result<PadicNumber> + '_ {
    move |_| Ok(PadicNumber::one(ctx))
}
