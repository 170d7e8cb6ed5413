//! Fixed-precision arithmetic in `Z_p` and `Q_p` for odd primes.
//!
//! A [`PadicNumber`] is `p^v * u` with `u` a unit known modulo `p^(abs_prec - v)`.
//! Relative precision never exceeds the context's working precision `W`, and
//! every operation propagates a guaranteed absolute precision: the value is
//! only claimed modulo `p^abs_prec`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

struct ContextInner {
    p: u64,
    work_prec: u32,
    p_big: BigUint,
    modulus: BigUint,
    // index r in 1..p holds omega(r) mod p^W; index 0 is unused
    teichmuller: OnceLock<Vec<BigUint>>,
}

/// Prime and working precision shared by a family of p-adic values.
#[derive(Clone)]
pub struct PadicContext {
    inner: Arc<ContextInner>,
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.work_prec == other.inner.work_prec)
    }
}

impl Eq for PadicContext {}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicContext(p={}, W={})", self.p(), self.work_prec())
    }
}

impl PadicContext {
    /// Rejects `p = 2`, composite `p` and `W = 0`.
    pub fn new(p: u64, work_prec: u32) -> Result<Self> {
        if p < 3 || !rational::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if work_prec == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        let p_big = BigUint::from(p);
        let modulus = p_big.pow(work_prec);
        Ok(PadicContext {
            inner: Arc::new(ContextInner {
                p,
                work_prec,
                p_big,
                modulus,
                teichmuller: OnceLock::new(),
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn work_prec(&self) -> u32 {
        self.inner.work_prec
    }

    pub fn prime(&self) -> &BigUint {
        &self.inner.p_big
    }

    /// `p^W`.
    pub fn modulus(&self) -> &BigUint {
        &self.inner.modulus
    }

    pub fn p_pow(&self, e: u32) -> BigUint {
        self.inner.p_big.pow(e)
    }

    /// The `p - 1` Teichmüller representatives modulo `p^W`, indexed by residue.
    ///
    /// Built once per context by iterating `x <- x^p` from `r` until it stops
    /// moving; each step fixes one more digit, so at most `W` steps are needed.
    pub fn teichmuller_table(&self) -> &[BigUint] {
        self.inner.teichmuller.get_or_init(|| {
            let p = &self.inner.p_big;
            let m = &self.inner.modulus;
            let mut table = vec![BigUint::zero(); self.inner.p as usize];
            for (r, slot) in table.iter_mut().enumerate().skip(1) {
                let mut x = BigUint::from(r as u64);
                for _ in 0..=self.inner.work_prec {
                    let next = x.modpow(p, m);
                    if next == x {
                        break;
                    }
                    x = next;
                }
                *slot = x;
            }
            table
        })
    }
}

/// An element of `Q_p` known to a guaranteed absolute precision.
#[derive(Clone)]
pub struct PadicNumber {
    ctx: PadicContext,
    // for zero this equals abs_prec and carries no meaning
    valuation: i64,
    // zero iff the value is zero to precision
    unit: BigUint,
    abs_prec: i64,
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx
            && self.abs_prec == other.abs_prec
            && self.unit == other.unit
            && (self.is_zero() || self.valuation == other.valuation)
    }
}

impl Eq for PadicNumber {}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicNumber({})", self.render())
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

fn floor_log(n: u64, p: u64) -> i64 {
    let mut k = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        k += 1;
    }
    k
}

impl PadicNumber {
    pub fn zero(ctx: &PadicContext, abs_prec: i64) -> Self {
        PadicNumber {
            ctx: ctx.clone(),
            valuation: abs_prec,
            unit: BigUint::zero(),
            abs_prec,
        }
    }

    /// One at full working precision.
    pub fn one(ctx: &PadicContext) -> Self {
        Self::from_residue(ctx, &BigUint::one(), ctx.work_prec() as i64)
    }

    /// Builds `p^v * value` known modulo `p^abs_prec`, capping relative precision at `W`.
    pub(crate) fn normalize(ctx: &PadicContext, v: i64, value: BigInt, abs_prec: i64) -> Self {
        if value.is_zero() || abs_prec <= v {
            return Self::zero(ctx, abs_prec);
        }
        let t = rational::int_valuation(&value, ctx.p()) as i64;
        let v = v + t;
        if v >= abs_prec {
            return Self::zero(ctx, abs_prec);
        }
        let stripped = value / to_bigint(&ctx.p_pow(t as u32));
        let rel = (abs_prec - v).min(ctx.work_prec() as i64);
        let unit = rational::to_biguint_mod(&stripped, &ctx.p_pow(rel as u32));
        PadicNumber {
            ctx: ctx.clone(),
            valuation: v,
            unit,
            abs_prec: v + rel,
        }
    }

    /// Integer residue known modulo `p^abs_prec`.
    pub fn from_residue(ctx: &PadicContext, residue: &BigUint, abs_prec: i64) -> Self {
        Self::normalize(ctx, 0, to_bigint(residue), abs_prec)
    }

    pub fn from_i64(ctx: &PadicContext, n: i64) -> Self {
        Self::exact_rational(&rational::int(n), ctx)
    }

    /// Returns `x` with `x ≡ q (mod p^abs_prec)` and `v(x) = v_p(q)`.
    pub fn from_rational(q: &Rational, ctx: &PadicContext, abs_prec: i64) -> Self {
        let Some(v) = rational::valuation(q, ctx.p()) else {
            return Self::zero(ctx, abs_prec);
        };
        let p = ctx.prime();
        let num = q.numer() / to_bigint(&p.pow(rational::int_valuation(q.numer(), ctx.p()) as u32));
        let den = q.denom() / to_bigint(&p.pow(rational::int_valuation(q.denom(), ctx.p()) as u32));
        let rel = (abs_prec - v).min(ctx.work_prec() as i64);
        if rel <= 0 {
            return Self::zero(ctx, abs_prec);
        }
        let m = to_bigint(&ctx.p_pow(rel as u32));
        let unit = rational::reduce_mod(&Rational::new(num, den), &m)
            .expect("denominator is prime to p after stripping");
        Self::normalize(ctx, v, unit, v + rel)
    }

    /// A rational embedded with the full `W` digits of relative precision.
    pub fn exact_rational(q: &Rational, ctx: &PadicContext) -> Self {
        match rational::valuation(q, ctx.p()) {
            Some(v) => Self::from_rational(q, ctx, v + ctx.work_prec() as i64),
            None => Self::zero(ctx, i64::MAX / 4),
        }
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// `None` for a value that is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.valuation)
        }
    }

    /// The valuation, or the absolute precision for an apparent zero.
    pub fn valuation_bound(&self) -> i64 {
        if self.is_zero() {
            self.abs_prec
        } else {
            self.valuation
        }
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }

    pub fn rel_prec(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.abs_prec - self.valuation
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }

    /// Drops precision to at most `abs_prec`.
    pub fn with_abs_prec(&self, abs_prec: i64) -> Self {
        if abs_prec >= self.abs_prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(&self.ctx, abs_prec);
        }
        Self::normalize(&self.ctx, self.valuation, to_bigint(&self.unit), abs_prec)
    }

    /// Moves the value into another context over the same prime.
    pub fn in_context(&self, ctx: &PadicContext) -> Result<Self> {
        if ctx.p() != self.p() {
            return Err(Error::ContextMismatch);
        }
        if self.is_zero() {
            return Ok(Self::zero(ctx, self.abs_prec));
        }
        Ok(Self::normalize(
            ctx,
            self.valuation,
            to_bigint(&self.unit),
            self.abs_prec,
        ))
    }

    /// Little-endian base-p digits of the unit part (`abs_prec - v` of them).
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rel_prec().max(0) as usize);
        let mut u = self.unit.clone();
        let p = self.ctx.prime();
        for _ in 0..self.rel_prec() {
            let (q, r) = u.div_rem(p);
            out.push(r.to_u64().expect("digit below p"));
            u = q;
        }
        out
    }

    /// `p^v * unit` as an integer residue, for values with `v >= 0`.
    pub fn integer_residue(&self) -> Option<BigUint> {
        if self.is_zero() {
            return Some(BigUint::zero());
        }
        if self.valuation < 0 {
            return None;
        }
        Some(self.ctx.p_pow(self.valuation as u32) * &self.unit)
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn informative(&self) -> Result<()> {
        if self.is_zero() && self.abs_prec <= 0 {
            Err(Error::PrecisionExhausted(format!(
                "operand is only known modulo p^{}",
                self.abs_prec
            )))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        self.informative()?;
        other.informative()?;
        let abs = self.abs_prec.min(other.abs_prec);
        if self.is_zero() {
            return Ok(other.with_abs_prec(abs));
        }
        if other.is_zero() {
            return Ok(self.with_abs_prec(abs));
        }
        let v = self.valuation.min(other.valuation);
        let lift = |x: &Self| to_bigint(&(self.ctx.p_pow((x.valuation - v) as u32) * &x.unit));
        Ok(Self::normalize(&self.ctx, v, lift(self) + lift(other), abs))
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::normalize(
            &self.ctx,
            self.valuation,
            -to_bigint(&self.unit),
            self.abs_prec,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        self.informative()?;
        other.informative()?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ok(Self::zero(&self.ctx, self.abs_prec + other.abs_prec)),
            (true, false) => Ok(Self::zero(&self.ctx, self.abs_prec + other.valuation)),
            (false, true) => Ok(Self::zero(&self.ctx, other.abs_prec + self.valuation)),
            (false, false) => {
                let v = self.valuation + other.valuation;
                let abs = (self.valuation + other.abs_prec).min(other.valuation + self.abs_prec);
                Ok(Self::normalize(
                    &self.ctx,
                    v,
                    to_bigint(&(&self.unit * &other.unit)),
                    abs,
                ))
            }
        }
    }

    /// Inverse with `abs_prec = abs_prec(x) - 2 v(x)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rel = self.rel_prec();
        let m = to_bigint(&self.ctx.p_pow(rel as u32));
        let inv =
            rational::mod_inverse(&to_bigint(&self.unit), &m).expect("unit part is prime to p");
        Ok(Self::normalize(
            &self.ctx,
            -self.valuation,
            inv,
            rel - self.valuation,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Repeated-squaring integer power.
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ctx);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// True when `self - other` has valuation at least `m` (to the known precision).
    pub fn agrees_with(&self, other: &Self, m: i64) -> Result<bool> {
        Ok(self.sub(other)?.valuation_bound() >= m)
    }

    /// `d0 + d1*p + d2*p^2 + … + O(p^abs_prec)`, zero digits omitted.
    pub fn render(&self) -> String {
        let p = self.p();
        let big_o = format!("O({}^{})", p, self.abs_prec);
        if self.is_zero() {
            return big_o;
        }
        let mut parts: Vec<String> = self
            .digits()
            .into_iter()
            .enumerate()
            .filter(|(_, d)| *d != 0)
            .map(|(i, d)| match self.valuation + i as i64 {
                0 => format!("{d}"),
                1 => format!("{d}*{p}"),
                e => format!("{d}*{p}^{e}"),
            })
            .collect();
        parts.push(big_o);
        parts.join(" + ")
    }

    /// Left inverse of [`render`](Self::render).
    pub fn parse(text: &str, ctx: &PadicContext) -> Result<Self> {
        let p = ctx.p();
        let err = |position: usize, message: String| Error::Parse { position, message };
        let parse_exp = |s: &str, at: usize| -> Result<i64> {
            s.trim()
                .parse::<i64>()
                .map_err(|_| err(at, format!("bad exponent {s:?}")))
        };
        let parse_base = |s: &str, at: usize| -> Result<()> {
            match s.trim().parse::<u64>() {
                Ok(b) if b == p => Ok(()),
                _ => Err(err(at, format!("expected base {p}, found {:?}", s.trim()))),
            }
        };

        let mut tokens = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if ch == '+' {
                tokens.push((start, &text[start..i]));
                start = i + 1;
            }
        }
        tokens.push((start, &text[start..]));

        let (last_at, last) = tokens.pop().expect("split yields at least one token");
        let last_t = last.trim();
        let lead = last.len() - last.trim_start().len();
        let inner = last_t
            .strip_prefix("O(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| err(last_at + lead, "expected O(p^N) as the final term".into()))?;
        let abs_prec = match inner.split_once('^') {
            Some((b, e)) => {
                parse_base(b, last_at + lead + 2)?;
                parse_exp(e, last_at + lead + 3 + b.len())?
            }
            None => {
                parse_base(inner, last_at + lead + 2)?;
                1
            }
        };

        let mut terms: Vec<(i64, u64)> = Vec::new();
        for (at, tok) in tokens {
            let t = tok.trim();
            let at = at + (tok.len() - tok.trim_start().len());
            if t.is_empty() {
                return Err(err(at, "empty term".into()));
            }
            let (digit_s, exp) = match t.split_once('*') {
                None => (t, 0),
                Some((d, rest)) => match rest.split_once('^') {
                    None => {
                        parse_base(rest, at + d.len() + 1)?;
                        (d, 1)
                    }
                    Some((b, e)) => {
                        parse_base(b, at + d.len() + 1)?;
                        (d, parse_exp(e, at + d.len() + 2 + b.len())?)
                    }
                },
            };
            let digit: u64 = digit_s
                .trim()
                .parse()
                .map_err(|_| err(at, format!("bad digit {:?}", digit_s.trim())))?;
            if digit >= p {
                return Err(err(at, format!("digit {digit} out of range for p={p}")));
            }
            if let Some(&(prev, _)) = terms.last() {
                if exp <= prev {
                    return Err(err(at, "exponents must increase".into()));
                }
            }
            if exp >= abs_prec {
                return Err(err(at, format!("term p^{exp} is beyond O(p^{abs_prec})")));
            }
            terms.push((exp, digit));
        }

        let nonzero: Vec<_> = terms.into_iter().filter(|&(_, d)| d != 0).collect();
        let Some(&(v, _)) = nonzero.first() else {
            return Ok(Self::zero(ctx, abs_prec));
        };
        let mut value = BigInt::zero();
        for (e, d) in nonzero {
            value += BigInt::from(d) * to_bigint(&ctx.p_pow((e - v) as u32));
        }
        if abs_prec - v > ctx.work_prec() as i64 {
            return Err(err(
                0,
                "more digits than the working precision holds".into(),
            ));
        }
        Ok(Self::normalize(ctx, v, value, abs_prec))
    }

    pub fn to_json(&self) -> PadicJson {
        PadicJson {
            p: self.p(),
            valuation: self.valuation_bound(),
            digits: self.digits(),
            abs_prec: self.abs_prec,
        }
    }

    pub fn from_json(json: &PadicJson, ctx: &PadicContext) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            position: 0,
            message: m.to_string(),
        };
        if json.p != ctx.p() {
            return Err(bad("prime does not match the context"));
        }
        if json.digits.is_empty() {
            return Ok(Self::zero(ctx, json.abs_prec));
        }
        if json.digits.iter().any(|&d| d >= ctx.p()) {
            return Err(bad("digit out of range"));
        }
        if json.digits[0] == 0 {
            return Err(bad("leading digit of a nonzero value must be nonzero"));
        }
        if json.valuation + json.digits.len() as i64 != json.abs_prec {
            return Err(bad("abs_prec must equal valuation + number of digits"));
        }
        if json.digits.len() > ctx.work_prec() as usize {
            return Err(bad("more digits than the working precision holds"));
        }
        let mut unit = BigUint::zero();
        for &d in json.digits.iter().rev() {
            unit = unit * ctx.prime() + BigUint::from(d);
        }
        Ok(Self::normalize(
            ctx,
            json.valuation,
            to_bigint(&unit),
            json.abs_prec,
        ))
    }
}

/// JSON form of a p-adic value; a zero has no digits and `valuation = abs_prec`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicJson {
    pub p: u64,
    pub valuation: i64,
    pub digits: Vec<u64>,
    pub abs_prec: i64,
}

/// The Teichmüller representative `ω(a)`, the (p-1)-th root of unity congruent to `a` mod p.
pub fn teichmuller(a: &BigInt, ctx: &PadicContext, abs_prec: i64) -> Result<PadicNumber> {
    let r = a
        .mod_floor(&BigInt::from(ctx.p()))
        .to_u64()
        .expect("residue below p");
    if r == 0 {
        return Err(Error::NonUnit(format!("{a} is divisible by {}", ctx.p())));
    }
    let table = ctx.teichmuller_table();
    Ok(PadicNumber::from_residue(
        ctx,
        &table[r as usize],
        abs_prec.min(ctx.work_prec() as i64),
    ))
}

/// `⟨a⟩ = a / ω(a)`, the principal-unit part of a unit.
pub fn angle_part(a: &PadicNumber) -> Result<PadicNumber> {
    if !a.is_unit() {
        return Err(Error::NonUnit(format!("{a} is not a unit")));
    }
    let ctx = a.ctx();
    let p = BigUint::from(ctx.p());
    let r = (a.unit() % &p).to_u64().expect("residue below p");
    // ω(a)^{-1} = ω(a^{-1})
    let r_inv = BigUint::from(r).modpow(&BigUint::from(ctx.p() - 2), &p);
    let w_inv = teichmuller(&to_bigint(&r_inv), ctx, ctx.work_prec() as i64)?;
    a.mul(&w_inv)
}

fn principal_part(u: &PadicNumber) -> Result<PadicNumber> {
    let one_mod_p = u.is_unit() && (u.unit() % BigUint::from(u.p())).is_one();
    if !one_mod_p {
        return Err(Error::Domain(format!("{u} is not congruent to 1 mod p")));
    }
    u.sub(&PadicNumber::one(u.ctx()))
}

/// `log(1 + x) = Σ (-1)^(n+1) x^n / n` for `u = 1 + x ∈ 1 + pZ_p`.
pub fn log_unit(u: &PadicNumber) -> Result<PadicNumber> {
    let x = principal_part(u)?;
    if x.is_zero() {
        return Ok(x);
    }
    let ctx = u.ctx();
    let target = u.abs_prec();
    let vx = x.valuation;
    let mut sum = PadicNumber::zero(ctx, i64::MAX / 4);
    let mut power = x.clone();
    let mut n: u64 = 1;
    // terms with n*v(x) - floor(log_p n) >= target cannot reach the result
    while (n as i64) * vx - floor_log(n, ctx.p()) < target {
        let coeff = PadicNumber::exact_rational(
            &rational::rat(if n % 2 == 1 { 1 } else { -1 }, n as i64),
            ctx,
        );
        sum = sum.add(&power.mul(&coeff)?)?;
        power = power.mul(&x)?;
        n += 1;
    }
    Ok(sum.with_abs_prec(target))
}

/// `exp(x) = Σ x^n / n!` for `v(x) >= 1`.
pub fn exp_small(x: &PadicNumber) -> Result<PadicNumber> {
    x.informative()?;
    let ctx = x.ctx();
    let target = x.abs_prec();
    if x.is_zero() {
        return Ok(PadicNumber::one(ctx).with_abs_prec(target));
    }
    if x.valuation < 1 {
        return Err(Error::Domain(format!(
            "exp needs valuation >= 1, got {}",
            x.valuation
        )));
    }
    let p = ctx.p() as i64;
    let vx = x.valuation;
    let mut sum = PadicNumber::one(ctx);
    let mut term = PadicNumber::one(ctx);
    let mut n: i64 = 1;
    // v(x^n/n!) >= n v(x) - (n-1)/(p-1), increasing in n
    while (n * vx - target) * (p - 1) < n - 1 {
        let inv_n = PadicNumber::exact_rational(&rational::rat(1, n), ctx);
        term = term.mul(x)?.mul(&inv_n)?;
        sum = sum.add(&term)?;
        n += 1;
    }
    Ok(sum.with_abs_prec(target))
}

/// `u^s = exp(s log u)` for `u ∈ 1 + pZ_p` and `s ∈ Z_p`.
pub fn pow_padic(u: &PadicNumber, s: &PadicNumber) -> Result<PadicNumber> {
    if let Some(v) = s.valuation() {
        if v < 0 {
            return Err(Error::Domain(format!("exponent {s} is not in Z_p")));
        }
    }
    let log = log_unit(u)?;
    exp_small(&s.mul(&log)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ctx(p: u64, w: u32) -> PadicContext {
        PadicContext::new(p, w).unwrap()
    }

    #[test]
    fn rejects_bad_contexts() {
        assert_eq!(PadicContext::new(2, 5).unwrap_err(), Error::InvalidPrime(2));
        assert_eq!(PadicContext::new(9, 5).unwrap_err(), Error::InvalidPrime(9));
        assert_eq!(
            PadicContext::new(5, 0).unwrap_err(),
            Error::InvalidPrecision(0)
        );
    }

    #[test]
    fn half_has_the_expected_expansion() {
        let c = ctx(5, 8);
        let half = PadicNumber::from_rational(&rat(1, 2), &c, 3);
        assert_eq!(half.valuation(), Some(0));
        assert_eq!(half.unit(), &BigUint::from(63u32));
        // (p+1)/2, (p-1)/2, (p-1)/2, ...
        assert_eq!(half.digits(), vec![3, 2, 2]);
    }

    #[test]
    fn from_rational_valuations() {
        let c = ctx(5, 8);
        let ten = PadicNumber::from_rational(&int(10), &c, 3);
        assert_eq!(ten.valuation(), Some(1));
        assert_eq!(ten.unit(), &BigUint::from(2u32));
        assert!(PadicNumber::from_rational(&int(0), &c, 7).is_zero());
        let fifth = PadicNumber::from_rational(&rat(3, 25), &c, 2);
        assert_eq!(fifth.valuation(), Some(-2));
        assert_eq!(fifth.rel_prec(), 4);
    }

    #[test]
    fn ring_identities() {
        let c = ctx(7, 6);
        let half = PadicNumber::exact_rational(&rat(1, 2), &c);
        assert_eq!(half.add(&half).unwrap(), PadicNumber::one(&c));
        let x = PadicNumber::exact_rational(&rat(-22, 9), &c);
        assert!(x.add(&x.neg()).unwrap().is_zero());
        assert!(x
            .mul(&x.inv().unwrap())
            .unwrap()
            .agrees_with(&PadicNumber::one(&c), 6)
            .unwrap());
    }

    #[test]
    fn precision_bookkeeping() {
        let c = ctx(5, 10);
        let a = PadicNumber::from_rational(&int(50), &c, 6); // v=2
        let b = PadicNumber::from_rational(&int(3), &c, 4); // v=0
        assert_eq!(a.add(&b).unwrap().abs_prec(), 4);
        assert_eq!(a.mul(&b).unwrap().abs_prec(), 2 + 4);
        let inv = a.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        assert_eq!(inv.abs_prec(), 6 - 4);
        assert_eq!(
            PadicNumber::zero(&c, 3).inv().unwrap_err(),
            Error::DivisionByZero
        );
        let dead = PadicNumber::zero(&c, 0);
        assert!(matches!(dead.add(&b), Err(Error::PrecisionExhausted(_))));
        let other = ctx(5, 9);
        assert_eq!(
            b.add(&PadicNumber::one(&other)).unwrap_err(),
            Error::ContextMismatch
        );
    }

    #[test]
    fn teichmuller_values() {
        let c = ctx(5, 2);
        assert_eq!(
            teichmuller(&BigInt::from(1), &c, 2).unwrap(),
            PadicNumber::one(&c)
        );
        let w2 = teichmuller(&BigInt::from(2), &c, 2).unwrap();
        assert_eq!(w2.unit(), &BigUint::from(7u32));
        let minus_one = PadicNumber::from_i64(&c, -1);
        assert_eq!(teichmuller(&BigInt::from(4), &c, 2).unwrap(), minus_one);
        assert!(matches!(
            teichmuller(&BigInt::from(10), &c, 2),
            Err(Error::NonUnit(_))
        ));
        // depends only on a mod p
        assert_eq!(teichmuller(&BigInt::from(-3), &c, 2).unwrap(), w2);
    }

    #[test]
    fn angle_of_two_mod_25() {
        let c = ctx(5, 2);
        let two = PadicNumber::from_i64(&c, 2);
        let a = angle_part(&two).unwrap();
        assert_eq!(a.unit(), &BigUint::from(11u32));
        assert_eq!(
            angle_part(&PadicNumber::one(&c)).unwrap(),
            PadicNumber::one(&c)
        );
        assert!(matches!(
            angle_part(&PadicNumber::from_i64(&c, 5)),
            Err(Error::NonUnit(_))
        ));
    }

    #[test]
    fn log_and_exp_basics() {
        let c = ctx(5, 8);
        assert!(log_unit(&PadicNumber::one(&c)).unwrap().is_zero());
        let l = log_unit(&PadicNumber::from_i64(&c, 6)).unwrap();
        assert_eq!(l.valuation(), Some(1));
        assert!(matches!(
            log_unit(&PadicNumber::from_i64(&c, 2)),
            Err(Error::Domain(_))
        ));
        assert_eq!(
            exp_small(&PadicNumber::zero(&c, 8)).unwrap(),
            PadicNumber::one(&c)
        );
        assert!(matches!(
            exp_small(&PadicNumber::from_i64(&c, 3)),
            Err(Error::Domain(_))
        ));
        let x = PadicNumber::from_i64(&c, 15);
        let prod = exp_small(&x)
            .unwrap()
            .mul(&exp_small(&x.neg()).unwrap())
            .unwrap();
        assert!(prod.agrees_with(&PadicNumber::one(&c), 8).unwrap());
    }

    #[test]
    fn log_series_against_rational_partial_sums() {
        // log(1+p) computed with exact rationals, summed far past the truncation point
        let p = 7u64;
        let c = ctx(p, 6);
        let mut exact = Rational::from_integer(BigInt::zero());
        let x = int(p as i64);
        for n in 1..40i64 {
            let term = x.pow(n as i32) / int(n);
            exact = if n % 2 == 1 {
                exact + term
            } else {
                exact - term
            };
        }
        let expected = PadicNumber::from_rational(&exact, &c, 6);
        let got = log_unit(&PadicNumber::from_i64(&c, 1 + p as i64)).unwrap();
        assert!(got.agrees_with(&expected, 6).unwrap());
        assert_eq!(got.abs_prec(), 6);
    }

    #[test]
    fn integer_powers_match_series_powers() {
        let c = ctx(5, 8);
        let u = PadicNumber::exact_rational(&rat(31, 6), &c);
        let three = PadicNumber::from_i64(&c, 3);
        let cube = u.mul(&u).unwrap().mul(&u).unwrap();
        assert!(pow_padic(&u, &three)
            .unwrap()
            .agrees_with(&cube, 8)
            .unwrap());
        let zero = PadicNumber::zero(&c, 8);
        assert_eq!(pow_padic(&u, &zero).unwrap(), PadicNumber::one(&c));
        let two = angle_part(&PadicNumber::from_i64(&c, 2)).unwrap();
        let back = pow_padic(&two, &PadicNumber::from_i64(&c, -1))
            .unwrap()
            .mul(&two)
            .unwrap();
        assert!(back.agrees_with(&PadicNumber::one(&c), 8).unwrap());
    }

    #[test]
    fn render_examples() {
        let c = ctx(5, 8);
        let third = PadicNumber::from_rational(&rat(1, 3), &c, 4);
        assert_eq!(third.unit(), &BigUint::from(417u32));
        assert_eq!(third.render(), "2 + 3*5 + 1*5^2 + 3*5^3 + O(5^4)");
        assert_eq!(PadicNumber::zero(&c, 4).render(), "O(5^4)");
        let x = PadicNumber::from_rational(&rat(7, 25), &c, 1);
        assert_eq!(x.render(), "2*5^-2 + 1*5^-1 + O(5^1)");
        assert_eq!(PadicNumber::parse(&x.render(), &c).unwrap(), x);
        assert_eq!(PadicNumber::parse(&third.render(), &c).unwrap(), third);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let c = ctx(5, 8);
        let e = PadicNumber::parse("2 + 7*5 + O(5^4)", &c).unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                position: 4,
                message: "digit 7 out of range for p=5".into()
            }
        );
        assert!(matches!(
            PadicNumber::parse("2 + 3*5", &c),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            PadicNumber::parse("1*5^2 + 2*5 + O(5^4)", &c),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            PadicNumber::parse("2 + O(7^4)", &c),
            Err(Error::Parse { .. })
        ));
        assert_eq!(
            PadicNumber::parse("O(5^3)", &c).unwrap(),
            PadicNumber::zero(&c, 3)
        );
    }

    #[test]
    fn json_form() {
        let c = ctx(5, 8);
        let x = PadicNumber::from_rational(&rat(10, 3), &c, 4);
        let j = x.to_json();
        assert_eq!(j.valuation, 1);
        assert_eq!(j.digits.len(), 3);
        let text = serde_json::to_string(&j).unwrap();
        let back: PadicJson = serde_json::from_str(&text).unwrap();
        assert_eq!(PadicNumber::from_json(&back, &c).unwrap(), x);
        let z = PadicNumber::zero(&c, 4).to_json();
        assert!(z.digits.is_empty());
        assert!(PadicNumber::from_json(&z, &c).unwrap().is_zero());
    }
}
