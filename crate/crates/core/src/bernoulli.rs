//! Bernoulli numbers and polynomials over the rationals, and generalized
//! Bernoulli numbers `B_{k,ω^j}` for powers of the Teichmüller character.
//!
//! Conventions: `B_1 = -1/2`, so `B_1(x) = x - 1/2`. For the trivial
//! character the generalized number is `B_k` except `B_{1,1} = +1/2`.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::padic::{teichmuller, PadicContext, PadicNumber};
use crate::rational::{self, Rational};

static BERNOULLI_MEMO: Mutex<Vec<Rational>> = Mutex::new(Vec::new());
static POLY_MEMO: Mutex<Vec<Arc<IntegralBernoulliPoly>>> = Mutex::new(Vec::new());

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_k` from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`, memoized.
pub fn bernoulli_number(k: usize) -> Rational {
    let mut memo = BERNOULLI_MEMO.lock().unwrap_or_else(|e| e.into_inner());
    while memo.len() <= k {
        let m = memo.len();
        let b = if m == 0 {
            Rational::one()
        } else {
            let s: Rational = (0..m)
                .map(|j| Rational::from_integer(binomial(m as u64 + 1, j as u64)) * &memo[j])
                .sum();
            -s / rational::int(m as i64 + 1)
        };
        memo.push(b);
    }
    memo[k].clone()
}

/// `B_k(x) = Σ_j C(k, j) B_j x^(k-j)`.
pub fn bernoulli_poly(k: usize, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut xpow = Rational::one();
    // walk j downward so x^(k-j) grows by one factor each step
    for j in (0..=k).rev() {
        acc += Rational::from_integer(binomial(k as u64, j as u64)) * bernoulli_number(j) * &xpow;
        xpow *= x;
    }
    acc
}

/// `B_k(x) = (Σ_j c_j x^(k-j)) / D` with integers `c_j = D·C(k,j)·B_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralBernoulliPoly {
    pub coeffs: Vec<BigInt>,
    pub denom: BigInt,
}

impl IntegralBernoulliPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `N^(k-1) B_k(a/N)`, exactly.
    pub fn scaled_value(&self, a: &BigInt, n: &BigInt) -> Rational {
        let mut acc = BigInt::zero();
        let mut n_pow = BigInt::one();
        for c in &self.coeffs {
            acc = acc * a + c * &n_pow;
            n_pow *= n;
        }
        Rational::new(acc, &self.denom * n)
    }
}

/// Memoized [`IntegralBernoulliPoly`] of degree `k`.
pub fn integral_bernoulli_poly(k: usize) -> Arc<IntegralBernoulliPoly> {
    let mut memo = POLY_MEMO.lock().unwrap_or_else(|e| e.into_inner());
    while memo.len() <= k {
        let m = memo.len();
        let bs: Vec<Rational> = (0..=m).map(bernoulli_number).collect();
        let denom = bs.iter().fold(BigInt::one(), |d, b| d.lcm(b.denom()));
        let coeffs = bs
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let scaled = b * Rational::from_integer(&denom * binomial(m as u64, j as u64));
                scaled.to_integer()
            })
            .collect();
        memo.push(Arc::new(IntegralBernoulliPoly { coeffs, denom }));
    }
    Arc::clone(&memo[k])
}

/// `B_{k,ω^j}` in `Q_p`, known to `abs_prec` digits when the context allows.
///
/// A twist `j ≡ 0 (mod p-1)` means the trivial character of conductor 1;
/// any other twist has conductor `p` and
/// `B_{k,χ} = p^(k-1) Σ_{a=1}^{p-1} ω(a)^j B_k(a/p)`.
pub fn generalized_bernoulli(
    k: usize,
    twist: i64,
    ctx: &PadicContext,
    abs_prec: i64,
) -> Result<PadicNumber> {
    let p = ctx.p();
    let order = p as i64 - 1;
    let j = twist.rem_euclid(order);
    if j == 0 {
        let b = if k == 1 {
            rational::rat(1, 2)
        } else {
            bernoulli_number(k)
        };
        return Ok(PadicNumber::from_rational(&b, ctx, abs_prec));
    }
    let scale = Rational::from_integer(BigInt::from(p)).pow(k as i32 - 1);
    let mut sum = PadicNumber::zero(ctx, i64::MAX / 4);
    for a in 1..p {
        let w = teichmuller(&BigInt::from(a), ctx, ctx.work_prec() as i64)?.pow_int(j)?;
        let b = &scale * bernoulli_poly(k, &rational::rat(a as i64, p as i64));
        sum = sum.add(&w.mul(&PadicNumber::exact_rational(&b, ctx))?)?;
    }
    Ok(sum.with_abs_prec(abs_prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num_bigint::BigUint;

    #[test]
    fn first_values() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), int(0));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(bernoulli_poly(1, &rat(3, 5)), rat(1, 10));
        assert_eq!(bernoulli_poly(2, &rat(1, 2)), rat(-1, 12));
        for k in 0..=20 {
            assert_eq!(bernoulli_poly(k, &int(0)), bernoulli_number(k));
        }
    }

    #[test]
    fn integral_form_matches_polynomial() {
        for k in 0..=8usize {
            let poly = integral_bernoulli_poly(k);
            assert_eq!(poly.degree(), k);
            for (a, n) in [(0i64, 1i64), (3, 5), (17, 25), (-4, 7), (100, 343)] {
                let x = rat(a, n);
                let expected = rat(n, 1).pow(k as i32 - 1) * bernoulli_poly(k, &x);
                assert_eq!(
                    poly.scaled_value(&BigInt::from(a), &BigInt::from(n)),
                    expected
                );
            }
        }
    }

    #[test]
    fn difference_equation() {
        for k in 1..=10usize {
            for x in [rat(3, 7), rat(-5, 2), int(4), rat(11, 13)] {
                let lhs = bernoulli_poly(k, &(&x + int(1))) - bernoulli_poly(k, &x);
                let rhs = int(k as i64) * x.pow(k as i32 - 1);
                assert_eq!(lhs, rhs, "k={k}");
            }
        }
    }

    #[test]
    fn b1_omega_at_five() {
        let ctx = PadicContext::new(5, 3).unwrap();
        let b = generalized_bernoulli(1, 1, &ctx, 2).unwrap();
        // (1/5) Σ a ω(a) with ω = 1, 57, 68, 124 mod 125
        let direct = PadicNumber::from_rational(&rat(1 + 2 * 57 + 3 * 68 + 4 * 124, 5), &ctx, 2);
        assert_eq!(b, direct);
        assert_eq!(b.unit(), &BigUint::from(13u32));
    }

    #[test]
    fn trivial_twist_conventions() {
        let ctx = PadicContext::new(7, 6).unwrap();
        let b2 = generalized_bernoulli(2, 0, &ctx, 5).unwrap();
        assert_eq!(b2, PadicNumber::from_rational(&rat(1, 6), &ctx, 5));
        let b1 = generalized_bernoulli(1, 6, &ctx, 5).unwrap();
        assert_eq!(b1, PadicNumber::from_rational(&rat(1, 2), &ctx, 5));
    }

    #[test]
    fn parity_vanishing() {
        for p in [5u64, 7] {
            let ctx = PadicContext::new(p, 8).unwrap();
            for k in 1..=6usize {
                for j in 1..(p as i64 - 1) {
                    let b = generalized_bernoulli(k, j, &ctx, 5).unwrap();
                    if (k as i64 + j) % 2 == 1 {
                        assert!(b.is_zero(), "p={p} k={k} j={j}: {b}");
                    }
                }
            }
        }
    }
}
