//! Branches of the p-adic zeta function as limits of alternating Dirichlet sums.
//!
//! Branch `i` (with `0 <= i < p-1`) is `ζ_{p,i}(s) = L_p(s, ω^(1-i))`:
//!
//! ```text
//! ζ_{p,i}(s) = -1/(1 - ω(2)^(1-i) ⟨2⟩^(1-s)) · lim_n Σ_{a<=p^n, p∤a} (-1)^a/2 · ω(a)^(-i) ⟨a⟩^(-s)
//! ```
//!
//! The weights `(-1)^a/2` are the values of the regularized Bernoulli
//! measure `E_{1,2}` on the balls `a + p^n Z_p`. Level-`n` partial sums
//! satisfy `v_p(S_(n+1) - S_n) >= n`.
//!
//! The summation kernel evaluates the integrand as `a^e · ω(a)^(-i-e)` with
//! `e ≡ -s (mod p^(W-1))`, which equals `ω(a)^(-i) ⟨a⟩^(-s)` modulo `p^W`
//! because `⟨a⟩^(p^(W-1)) ≡ 1 (mod p^W)`. The exp/log route is kept in
//! [`Integrand::eval_series`] and is used to cross-check the kernel.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::{bernoulli_number, generalized_bernoulli};
use crate::error::{Error, Result};
use crate::measures::{checked_pow, riemann_integrate, BallMeasure};
use crate::padic::{angle_part, log_unit, pow_padic, teichmuller, PadicContext, PadicNumber};
use crate::rational::{self, Rational};

/// Extra digits of working precision on top of the requested precision.
pub const GUARD_DIGITS: u32 = 4;

pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

// chunk size is fixed so the partition never depends on the thread count
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumOptions {
    pub jobs: usize,
    pub budget: u64,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            jobs: 1,
            budget: DEFAULT_TERM_BUDGET,
        }
    }
}

/// Ball weights `w(a)` such that the measure of `a + p^n Z_p` is `w(a)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    /// `E_{1,2} = μ/2`: `w(a) = (-1)^a`.
    Alternating,
    /// `E_{1,c}`: `w(a) = 2(a - c{a/c})/p^n + c - 1`.
    Regularized { c: i64 },
}

trait ResidueRing: Sync {
    type El: Clone + Send + Sync;
    type Exp: Sync;

    fn zero(&self) -> Self::El;
    fn lift_i128(&self, x: i128) -> Self::El;
    fn lift_big(&self, x: &BigUint) -> Self::El;
    fn to_big(&self, x: &Self::El) -> BigUint;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn exponent(&self, e: &BigUint) -> Self::Exp;
    fn pow(&self, base: u64, e: &Self::Exp) -> Self::El;
}

/// Residues modulo `m < 2^63` with 128-bit products.
struct SmallRing {
    m: u64,
}

impl ResidueRing for SmallRing {
    type El = u64;
    type Exp = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn lift_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.m as i128) as u64
    }
    fn lift_big(&self, x: &BigUint) -> u64 {
        (x % self.m).to_u64().expect("reduced below modulus")
    }
    fn to_big(&self, x: &u64) -> BigUint {
        BigUint::from(*x)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.m as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn exponent(&self, e: &BigUint) -> u64 {
        e.to_u64()
            .expect("exponent below p^(W-1) fits the small ring")
    }
    fn pow(&self, base: u64, e: &u64) -> u64 {
        let mut acc = 1 % self.m;
        let mut b = base % self.m;
        let mut e = *e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }
}

struct BigRing {
    m: BigUint,
}

impl ResidueRing for BigRing {
    type El = BigUint;
    type Exp = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn lift_i128(&self, x: i128) -> BigUint {
        rational::to_biguint_mod(&BigInt::from(x), &self.m)
    }
    fn lift_big(&self, x: &BigUint) -> BigUint {
        x % &self.m
    }
    fn to_big(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.m
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.m
    }
    fn exponent(&self, e: &BigUint) -> BigUint {
        e.clone()
    }
    fn pow(&self, base: u64, e: &BigUint) -> BigUint {
        BigUint::from(base).modpow(e, &self.m)
    }
}

/// `a ↦ ω(a)^(-i) ⟨a⟩^(-s)` on units, modulo `p^W`.
#[derive(Debug, Clone)]
pub struct Integrand {
    ctx: PadicContext,
    branch: u64,
    neg_s: PadicNumber,
    // e ≡ -s mod p^(W-1), as a nonnegative integer
    exponent: BigUint,
    // per residue r: ω(r)^((-i-e) mod (p-1)) mod p^W
    omega_factor: Vec<BigUint>,
    prec: i64,
}

impl Integrand {
    pub fn new(ctx: &PadicContext, branch: u64, s: &PadicNumber) -> Result<Self> {
        let p = ctx.p();
        if s.valuation().is_some_and(|v| v < 0) {
            return Err(Error::Domain(format!("s = {s} is not in Z_p")));
        }
        let s = s.in_context(ctx)?;
        let neg_s = s.neg();
        let w = ctx.work_prec();
        let exponent = neg_s.integer_residue().expect("v >= 0") % ctx.p_pow(w - 1);
        // ⟨a⟩^(p^m) ≡ 1 mod p^(m+1): an exponent known mod p^A gives A+1 digits
        let prec = (w as i64).min(neg_s.abs_prec().saturating_add(1));
        let order = p - 1;
        let e_mod = (&exponent % BigUint::from(order))
            .to_u64()
            .expect("below p-1");
        let twist = (2 * order - branch % order - e_mod) % order;
        let table = ctx.teichmuller_table();
        let omega_factor = (0..p as usize)
            .map(|r| {
                if r == 0 {
                    BigUint::zero()
                } else {
                    table[r].modpow(&BigUint::from(twist), ctx.modulus())
                }
            })
            .collect();
        Ok(Integrand {
            ctx: ctx.clone(),
            branch: branch % order,
            neg_s,
            exponent,
            omega_factor,
            prec,
        })
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    /// Digits guaranteed for each integrand value.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Kernel route: `a^e ω(a)^(-i-e)`.
    pub fn eval(&self, a: u64) -> Result<PadicNumber> {
        let p = self.ctx.p();
        if a.is_multiple_of(p) {
            return Err(Error::NonUnit(format!("{a} is divisible by {p}")));
        }
        let m = self.ctx.modulus();
        let v =
            BigUint::from(a).modpow(&self.exponent, m) * &self.omega_factor[(a % p) as usize] % m;
        Ok(PadicNumber::from_residue(&self.ctx, &v, self.prec))
    }

    /// Series route: `ω(a)^(-i) · exp(-s · log⟨a⟩)`.
    pub fn eval_series(&self, a: u64) -> Result<PadicNumber> {
        let ctx = &self.ctx;
        let order = ctx.p() as i64 - 1;
        let a_p = PadicNumber::from_i64(ctx, a as i64);
        let w = teichmuller(&BigInt::from(a), ctx, ctx.work_prec() as i64)?
            .pow_int((order - self.branch as i64) % order)?;
        w.mul(&pow_padic(&angle_part(&a_p)?, &self.neg_s)?)
    }
}

struct SumPlan<'a, R: ResidueRing> {
    ring: R,
    p: u64,
    level_size: u64,
    exponent: R::Exp,
    omega: Vec<R::El>,
    weights: Weights,
    c_inv: u64,
    _integrand: &'a Integrand,
}

impl<R: ResidueRing> SumPlan<'_, R> {
    fn weight(&self, a: u64) -> i128 {
        match self.weights {
            Weights::Alternating => {
                if a.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
            Weights::Regularized { c } => {
                let pn = self.level_size as u128;
                let r = (a as u128 % pn) * self.c_inv as u128 % pn;
                let diff = a as i128 - c as i128 * r as i128;
                2 * (diff / pn as i128) + c as i128 - 1
            }
        }
    }

    fn range_sum(&self, lo: u64, hi: u64) -> R::El {
        let ring = &self.ring;
        let mut acc = ring.zero();
        for a in lo..hi {
            if a % self.p == 0 {
                continue;
            }
            let w = self.weight(a);
            if w == 0 {
                continue;
            }
            let term = ring.mul(
                &ring.pow(a, &self.exponent),
                &self.omega[(a % self.p) as usize],
            );
            acc = ring.add(&acc, &ring.mul(&ring.lift_i128(w), &term));
        }
        acc
    }

    fn total(&self, jobs: usize) -> R::El {
        let n_terms = self.level_size;
        let chunks = n_terms.div_ceil(CHUNK);
        let chunk_sum = |k: u64| {
            let lo = 1 + k * CHUNK;
            let hi = (lo + CHUNK).min(n_terms + 1);
            self.range_sum(lo, hi)
        };
        let ring = &self.ring;
        if jobs <= 1 || chunks <= 1 {
            return (0..chunks).fold(ring.zero(), |acc, k| ring.add(&acc, &chunk_sum(k)));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(chunk_sum)
                .reduce(|| ring.zero(), |a, b| ring.add(&a, &b))
        })
    }
}

fn run_kernel<R: ResidueRing>(
    ring: R,
    integrand: &Integrand,
    n: u32,
    weights: Weights,
    jobs: usize,
) -> Result<BigUint> {
    let p = integrand.ctx.p();
    let level_size = checked_pow(p, n)?;
    let c_inv = match weights {
        Weights::Alternating => 0,
        Weights::Regularized { c } => {
            let m = BigInt::from(level_size);
            rational::mod_inverse(&BigInt::from(c), &m)
                .ok_or(Error::InvalidC(c))?
                .to_u64()
                .expect("below p^n")
        }
    };
    let plan = SumPlan {
        exponent: ring.exponent(&integrand.exponent),
        omega: integrand
            .omega_factor
            .iter()
            .map(|x| ring.lift_big(x))
            .collect(),
        ring,
        p,
        level_size,
        weights,
        c_inv,
        _integrand: integrand,
    };
    let total = plan.total(jobs);
    Ok(plan.ring.to_big(&total))
}

/// Level-`n` sum `Σ_{a<=p^n, p∤a} w(a)/2 · f(a)` at the integrand's full precision.
pub fn kernel_sum(
    integrand: &Integrand,
    n: u32,
    weights: Weights,
    opts: &SumOptions,
) -> Result<PadicNumber> {
    let ctx = integrand.ctx();
    let p = ctx.p();
    if n == 0 {
        return Err(Error::Domain("partial sums need level n >= 1".into()));
    }
    let needed = checked_pow(p, n)?;
    if needed > opts.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.budget,
            best_precision: None,
        });
    }
    if let Weights::Regularized { c } = weights {
        if c == 1 || c.rem_euclid(p as i64) == 0 {
            return Err(Error::InvalidC(c));
        }
    }
    let m = ctx.modulus();
    let raw = match m.to_u64() {
        Some(small) if small < (1u64 << 63) => {
            run_kernel(SmallRing { m: small }, integrand, n, weights, opts.jobs)?
        }
        _ => run_kernel(BigRing { m: m.clone() }, integrand, n, weights, opts.jobs)?,
    };
    let half = (m + BigUint::one()) >> 1;
    Ok(PadicNumber::from_residue(
        ctx,
        &(raw * half % m),
        integrand.precision(),
    ))
}

pub fn primitive_root(p: u64) -> u64 {
    let order = p - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            factors.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let pb = BigUint::from(p);
    (2..p)
        .find(|&g| {
            factors.iter().all(|&q| {
                !BigUint::from(g)
                    .modpow(&BigUint::from(order / q), &pb)
                    .is_one()
            })
        })
        .unwrap_or(1)
}

/// `1 - ω(c)^j ⟨c⟩^(1-s)` for `χ = ω^j`.
pub fn regularizer_denominator(
    ctx: &PadicContext,
    twist: i64,
    c: i64,
    s: &PadicNumber,
) -> Result<PadicNumber> {
    let p = ctx.p();
    if c == 1 || c.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidC(c));
    }
    let order = p as i64 - 1;
    let c_p = PadicNumber::from_i64(ctx, c);
    let chi_c = teichmuller(&BigInt::from(c), ctx, ctx.work_prec() as i64)?
        .pow_int(twist.rem_euclid(order))?;
    let one = PadicNumber::one(ctx);
    let one_minus_s = one.sub(&s.in_context(ctx)?)?;
    let t = pow_padic(&angle_part(&c_p)?, &one_minus_s)?;
    one.sub(&chi_c.mul(&t)?)
}

/// `-1 / (1 - χ(c)⟨c⟩^(1-s))`, or `PoleAtOne` when the denominator vanishes.
pub fn regularizer_prefactor(
    ctx: &PadicContext,
    twist: i64,
    c: i64,
    s: &PadicNumber,
) -> Result<PadicNumber> {
    let d = regularizer_denominator(ctx, twist, c, s)?;
    if d.is_zero() {
        let order = ctx.p() as i64 - 1;
        return Err(Error::PoleAtOne {
            branch: (1 - twist).rem_euclid(order) as u64,
        });
    }
    Ok(d.inv()?.neg())
}

/// Outcome of a branch evaluation.
#[derive(Debug, Clone)]
pub struct LSeriesResult {
    pub value: PadicNumber,
    pub level_used: u32,
    /// `v_p(S_(n+1) - S_n)` for `n = 1, 2, …`; an exact zero reports its precision.
    pub increments: Vec<i64>,
    /// The `c` of the regularization used (2 unless that one degenerates).
    pub regularizer: i64,
}

#[derive(Debug, Clone)]
pub struct BranchSpec {
    ctx: PadicContext,
    branch: u64,
    s: PadicNumber,
    s_exact: Option<Rational>,
    target: i64,
}

fn validate_branch(p: u64, branch: u64) -> Result<()> {
    if branch >= p - 1 {
        return Err(Error::InvalidBranch { branch, p });
    }
    Ok(())
}

fn embed_s(s: &Rational, ctx: &PadicContext) -> Result<PadicNumber> {
    let x = PadicNumber::exact_rational(s, ctx);
    if x.valuation().is_some_and(|v| v < 0) {
        return Err(Error::Domain(format!(
            "s = {} has a denominator divisible by {}",
            rational::fmt_rational(s),
            ctx.p()
        )));
    }
    Ok(x)
}

impl BranchSpec {
    /// Branch `i` of the zeta function at a rational `s ∈ Z_p`, targeting `prec` digits.
    pub fn new(p: u64, branch: u64, s: &Rational, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        let ctx = PadicContext::new(p, prec + GUARD_DIGITS)?;
        validate_branch(p, branch)?;
        Ok(BranchSpec {
            s: embed_s(s, &ctx)?,
            ctx,
            branch,
            s_exact: Some(s.clone()),
            target: prec as i64,
        })
    }

    /// Same, for a p-adic `s` given in its own context.
    pub fn with_padic_s(branch: u64, s: &PadicNumber, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        let p = s.p();
        validate_branch(p, branch)?;
        if s.valuation().is_some_and(|v| v < 0) {
            return Err(Error::Domain(format!("s = {s} is not in Z_p")));
        }
        let ctx = PadicContext::new(p, prec + GUARD_DIGITS)?;
        Ok(BranchSpec {
            s: s.in_context(&ctx)?,
            ctx,
            branch,
            s_exact: None,
            target: prec as i64,
        })
    }

    fn with_work_prec(&self, w: u32) -> Result<Self> {
        if w == self.ctx.work_prec() {
            return Ok(self.clone());
        }
        let ctx = PadicContext::new(self.ctx.p(), w)?;
        let s = match &self.s_exact {
            Some(q) => embed_s(q, &ctx)?,
            None => self.s.in_context(&ctx)?,
        };
        Ok(BranchSpec {
            ctx,
            s,
            ..self.clone()
        })
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn branch(&self) -> u64 {
        self.branch
    }

    pub fn s(&self) -> &PadicNumber {
        &self.s
    }

    /// The character `χ = ω^(1-i)` as a power of `ω`, in `[0, p-1)`.
    pub fn character_twist(&self) -> i64 {
        (1 - self.branch as i64).rem_euclid(self.p() as i64 - 1)
    }

    pub fn is_trivial_character(&self) -> bool {
        self.character_twist() == 0
    }

    pub fn integrand(&self) -> Result<Integrand> {
        Integrand::new(&self.ctx, self.branch, &self.s)
    }

    /// `S_n` at the full working precision.
    pub fn raw_partial_sum(&self, n: u32, opts: &SumOptions) -> Result<PadicNumber> {
        kernel_sum(&self.integrand()?, n, Weights::Alternating, opts)
    }

    /// `S_n = Σ_{a<=p^n, p∤a} (-1)^a/2 · ω(a)^(-i) ⟨a⟩^(-s)` to the target precision.
    pub fn partial_sum(&self, n: u32, opts: &SumOptions) -> Result<PadicNumber> {
        Ok(self.raw_partial_sum(n, opts)?.with_abs_prec(self.target))
    }

    pub fn prefactor_denominator(&self) -> Result<PadicNumber> {
        regularizer_denominator(&self.ctx, self.character_twist(), 2, &self.s)
    }

    /// `-1 / (1 - ω(2)^(1-i) ⟨2⟩^(1-s))`.
    pub fn euler_prefactor(&self) -> Result<PadicNumber> {
        regularizer_prefactor(&self.ctx, self.character_twist(), 2, &self.s)
    }

    fn choose_regularizer(&self) -> Result<(i64, i64)> {
        let d2 = self.prefactor_denominator()?;
        if let Some(v) = d2.valuation() {
            return Ok((2, v));
        }
        if self.is_trivial_character() {
            return Err(Error::PoleAtOne {
                branch: self.branch,
            });
        }
        // χ(2) = 1 with χ nontrivial: the c = 2 formula degenerates to 0/0 at
        // s = 1, while χ(g) != 1 for a primitive root g
        let g = primitive_root(self.p()) as i64;
        let d = regularizer_denominator(&self.ctx, self.character_twist(), g, &self.s)?;
        match d.valuation() {
            Some(v) => Ok((g, v)),
            None => Err(Error::PoleAtOne {
                branch: self.branch,
            }),
        }
    }

    /// `ζ_{p,i}(s)`: prefactor times the partial sums, at a fixed level or
    /// adaptively (stop once consecutive sums agree to the target).
    pub fn lp_value(&self, level: Option<u32>, opts: &SumOptions) -> Result<LSeriesResult> {
        let (c, vd) = self.choose_regularizer()?;
        let vd = vd.max(0);
        let work = self.with_work_prec(self.ctx.work_prec() + 2 * vd as u32)?;
        let pref = regularizer_prefactor(&work.ctx, work.character_twist(), c, &work.s)?;
        let weights = if c == 2 {
            Weights::Alternating
        } else {
            Weights::Regularized { c }
        };
        let integrand = work.integrand()?;
        let sum_at = |n: u32| kernel_sum(&integrand, n, weights, opts);
        let target_sum = self.target + vd;
        let mut increments = Vec::new();

        let (sum, claimed, level_used) = match level {
            Some(n) => {
                if n == 0 {
                    return Err(Error::Domain("level must be >= 1".into()));
                }
                let mut prev = sum_at(1)?;
                for k in 2..=n {
                    let cur = sum_at(k)?;
                    increments.push(cur.sub(&prev)?.valuation_bound());
                    prev = cur;
                }
                // the tail beyond level n has valuation >= n
                let claimed = prev.abs_prec().min(n as i64);
                (prev, claimed, n)
            }
            None => {
                let mut prev = sum_at(1)?;
                let mut n = 1u32;
                loop {
                    let needed = checked_pow(self.p(), n + 1)?;
                    if needed > opts.budget {
                        let best = increments.last().copied().unwrap_or(1);
                        return Err(Error::BudgetExceeded {
                            needed,
                            budget: opts.budget,
                            best_precision: Some((best - vd).min(self.target)),
                        });
                    }
                    let cur = sum_at(n + 1)?;
                    let inc = cur.sub(&prev)?.valuation_bound();
                    increments.push(inc);
                    n += 1;
                    if inc >= target_sum {
                        let claimed = cur.abs_prec().min(inc);
                        break (cur, claimed, n);
                    }
                    prev = cur;
                }
            }
        };
        let value = pref
            .mul(&sum.with_abs_prec(claimed))?
            .with_abs_prec(self.target)
            .in_context(&self.ctx)?;
        Ok(LSeriesResult {
            value,
            level_used,
            increments,
            regularizer: c,
        })
    }

    /// `v_p(S_(n+1) - S_n)` for `n = 1..n_max-1`.
    pub fn convergence_profile(&self, n_max: u32, opts: &SumOptions) -> Result<Vec<i64>> {
        if n_max < 2 {
            return Err(Error::Domain("profile needs n_max >= 2".into()));
        }
        let integrand = self.integrand()?;
        let mut prev = kernel_sum(&integrand, 1, Weights::Alternating, opts)?;
        let mut out = Vec::with_capacity(n_max as usize - 1);
        for n in 2..=n_max {
            let cur = kernel_sum(&integrand, n, Weights::Alternating, opts)?;
            out.push(cur.sub(&prev)?.valuation_bound());
            prev = cur;
        }
        Ok(out)
    }
}

/// Level-`n` partial sum of branch `i` at `s`.
pub fn partial_sum(
    p: u64,
    branch: u64,
    s: &Rational,
    n: u32,
    prec: u32,
    opts: &SumOptions,
) -> Result<PadicNumber> {
    BranchSpec::new(p, branch, s, prec)?.partial_sum(n, opts)
}

pub fn euler_prefactor(p: u64, branch: u64, s: &Rational, prec: u32) -> Result<PadicNumber> {
    BranchSpec::new(p, branch, s, prec)?
        .euler_prefactor()
        .map(|x| x.with_abs_prec(prec as i64))
}

/// `ζ_{p,i}(s) = L_p(s, ω^(1-i))`.
pub fn lp_value(
    p: u64,
    branch: u64,
    s: &Rational,
    prec: u32,
    level: Option<u32>,
    opts: &SumOptions,
) -> Result<LSeriesResult> {
    BranchSpec::new(p, branch, s, prec)?.lp_value(level, opts)
}

pub use lp_value as zeta_branch;

/// `-(1 - χω^(-k)(p) p^(k-1)) B_{k,χω^(-k)} / k` for `χ = ω^(1-i)`.
pub fn interpolation_rhs(p: u64, k: usize, branch: u64, prec: u32) -> Result<PadicNumber> {
    if k == 0 {
        return Err(Error::Domain("interpolation needs k >= 1".into()));
    }
    validate_branch(p, branch)?;
    let order = p as i64 - 1;
    let twist = (1 - branch as i64 - k as i64).rem_euclid(order);
    let k_pad = rational::int_valuation(&BigInt::from(k), p) as u32;
    let ctx = PadicContext::new(p, prec + GUARD_DIGITS + k_pad + 1)?;
    let abs = prec as i64;
    if twist == 0 {
        let b = if k == 1 {
            rational::rat(1, 2)
        } else {
            bernoulli_number(k)
        };
        let euler = rational::int(1) - Rational::from_integer(BigInt::from(p)).pow(k as i32 - 1);
        let q = -(euler * b) / rational::int(k as i64);
        return Ok(PadicNumber::from_rational(&q, &ctx, abs));
    }
    let b = generalized_bernoulli(k, twist, &ctx, ctx.work_prec() as i64 - 1)?;
    let scale = PadicNumber::exact_rational(&rational::rat(-1, k as i64), &ctx);
    Ok(b.mul(&scale)?.with_abs_prec(abs))
}

/// The trivial-twist right-hand side as an exact rational, when it applies.
pub fn interpolation_rhs_rational(p: u64, k: usize, branch: u64) -> Option<Rational> {
    let order = p as i64 - 1;
    if k == 0 || (1 - branch as i64 - k as i64).rem_euclid(order) != 0 {
        return None;
    }
    let b = if k == 1 {
        rational::rat(1, 2)
    } else {
        bernoulli_number(k)
    };
    let euler = rational::int(1) - Rational::from_integer(BigInt::from(p)).pow(k as i32 - 1);
    Some(-(euler * b) / rational::int(k as i64))
}

#[derive(Debug, Clone, Serialize)]
pub struct InterpolationReport {
    pub p: u64,
    pub branch: u64,
    pub k: usize,
    pub level: u32,
    pub lhs: String,
    pub rhs: String,
    pub achieved: i64,
    pub required: i64,
    pub passed: bool,
}

/// Compares the series at `s = 1 - k` (level `n`) with the interpolation formula.
pub fn verify_interpolation(
    p: u64,
    branch: u64,
    k: usize,
    n: u32,
    prec: u32,
    opts: &SumOptions,
) -> Result<InterpolationReport> {
    verify_interpolation_with_prefactor(p, branch, branch, k, n, prec, opts)
}

/// As [`verify_interpolation`], but with the prefactor taken from `prefactor_branch`.
pub fn verify_interpolation_with_prefactor(
    p: u64,
    branch: u64,
    prefactor_branch: u64,
    k: usize,
    n: u32,
    prec: u32,
    opts: &SumOptions,
) -> Result<InterpolationReport> {
    let s = rational::int(1 - k as i64);
    let spec = BranchSpec::new(p, branch, &s, prec)?;
    let lhs = if prefactor_branch == branch {
        spec.lp_value(Some(n), opts)?.value
    } else {
        let other = BranchSpec::new(p, prefactor_branch, &s, prec)?;
        let sum = spec.raw_partial_sum(n, opts)?.with_abs_prec(n as i64);
        other
            .euler_prefactor()?
            .mul(&sum)?
            .with_abs_prec(prec as i64)
    };
    let rhs = interpolation_rhs(p, k, branch, prec)?.in_context(lhs.ctx())?;
    let achieved = lhs.sub(&rhs)?.valuation_bound();
    let required = (prec as i64).min(n as i64 - 1);
    Ok(InterpolationReport {
        p,
        branch,
        k,
        level: n,
        lhs: lhs.render(),
        rhs: rhs.render(),
        achieved,
        required,
        passed: achieved >= required,
    })
}

#[derive(Debug, Clone)]
pub struct MellinResult {
    pub prefactor: PadicNumber,
    pub integral: PadicNumber,
    pub value: PadicNumber,
}

/// `L_p(s, ω^j)` as `-1/(1-χ(c)⟨c⟩^(1-s)) ∫_{Z_p^*} χω^(-1)(a) ⟨a⟩^(-s) dE_{1,c}`,
/// the integral taken as the level-`n` Riemann sum over exact ball values.
pub fn mellin_lp(
    p: u64,
    twist: i64,
    s: &Rational,
    c: i64,
    n: u32,
    prec: u32,
) -> Result<MellinResult> {
    let order = p as i64 - 1;
    let branch = (1 - twist).rem_euclid(order) as u64;
    let spec = BranchSpec::new(p, branch, s, prec)?;
    let d = regularizer_denominator(spec.ctx(), twist, c, spec.s())?;
    let vd = d.valuation().ok_or(Error::PoleAtOne { branch })?.max(0);
    let work = spec.with_work_prec(spec.ctx().work_prec() + 2 * vd as u32)?;
    let ctx = work.ctx().clone();
    let prefactor = regularizer_prefactor(&ctx, twist, c, work.s())?;
    let integrand = work.integrand()?;
    let measure = BallMeasure::regularized(p, 1, c)?;
    let integral = riemann_integrate(|a| integrand.eval(a), &measure, &ctx, n, true)?;
    let value = prefactor
        .mul(&integral.with_abs_prec(n as i64))?
        .with_abs_prec(prec as i64);
    Ok(MellinResult {
        prefactor,
        integral,
        value,
    })
}

pub fn convergence_profile(
    p: u64,
    branch: u64,
    s: &Rational,
    n_max: u32,
    prec: u32,
    opts: &SumOptions,
) -> Result<Vec<i64>> {
    BranchSpec::new(p, branch, s, prec)?.convergence_profile(n_max, opts)
}

/// `(n, v_p(S_n))` for `n = 1..=n_max`.
pub fn vanishing_profile(
    p: u64,
    branch: u64,
    s: &Rational,
    n_max: u32,
    prec: u32,
    opts: &SumOptions,
) -> Result<Vec<(u32, i64)>> {
    let spec = BranchSpec::new(p, branch, s, prec)?;
    (1..=n_max)
        .map(|n| Ok((n, spec.raw_partial_sum(n, opts)?.valuation_bound())))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CComparison {
    pub c: i64,
    pub value: String,
    /// `v_p` of the difference to the `c = 2` value.
    pub agreement: i64,
}

/// Evaluates `mellin_lp` for each `c` and measures agreement with `c = 2`.
pub fn c_independence(
    p: u64,
    branch: u64,
    s: &Rational,
    cs: &[i64],
    n: u32,
    prec: u32,
) -> Result<Vec<CComparison>> {
    let twist = (1 - branch as i64).rem_euclid(p as i64 - 1);
    let base = mellin_lp(p, twist, s, 2, n, prec)?.value;
    cs.iter()
        .map(|&c| {
            let v = mellin_lp(p, twist, s, c, n, prec)?
                .value
                .in_context(base.ctx())?;
            Ok(CComparison {
                c,
                value: v.render(),
                agreement: v.sub(&base)?.valuation_bound(),
            })
        })
        .collect()
}

/// Estimate of `Res_{s=1}` on a branch whose prefactor has a pole at `s = 1`:
/// `R_n = -I_n / log⟨2⟩` with `I_n` the level-`n` sum at `s = 1`.
pub fn residue_estimate_branch(p: u64, branch: u64, n: u32, prec: u32) -> Result<PadicNumber> {
    let spec = BranchSpec::new(p, branch, &rational::int(1), prec)?;
    if !spec.is_trivial_character() || !spec.prefactor_denominator()?.is_zero() {
        return Err(Error::NotAPole { branch });
    }
    let work = spec.with_work_prec(spec.ctx().work_prec() + 2)?;
    let ctx = work.ctx();
    let sum = work
        .raw_partial_sum(n, &SumOptions::default())?
        .with_abs_prec(n as i64);
    let log2 = log_unit(&angle_part(&PadicNumber::from_i64(ctx, 2))?)?;
    Ok(sum.div(&log2)?.neg().with_abs_prec(prec as i64))
}

/// Residue estimate on the trivial-character branch `i = 1`.
pub fn residue_estimate(p: u64, n: u32, prec: u32) -> Result<PadicNumber> {
    residue_estimate_branch(p, 1, n, prec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DenominatorStatus {
    Unit,
    NonUnit { valuation: i64 },
    Pole,
}

/// Classifies the `c = 2` prefactor denominator of `branch` at `s`.
pub fn denominator_status(
    p: u64,
    branch: u64,
    s: &Rational,
    prec: u32,
) -> Result<DenominatorStatus> {
    let spec = BranchSpec::new(p, branch, s, prec)?;
    match spec.euler_prefactor() {
        Err(Error::PoleAtOne { .. }) => Ok(DenominatorStatus::Pole),
        Err(e) => Err(e),
        Ok(_) => {
            let d = spec.prefactor_denominator()?;
            Ok(match d.valuation() {
                Some(0) => DenominatorStatus::Unit,
                Some(v) => DenominatorStatus::NonUnit { valuation: v },
                None => DenominatorStatus::Pole,
            })
        }
    }
}

/// Digits of `x` as a residue, for tests and the CLI.
pub fn residue_of(x: &PadicNumber) -> Option<BigUint> {
    x.integer_residue()
        .map(|r| r % x.ctx().p_pow(x.abs_prec().max(0) as u32))
}
