//! Exact rationals and the small amount of integer number theory shared by
//! the other modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical arbitrary-precision fraction (positive denominator, reduced).
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` form; integers are printed without a denominator.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n`, `-n`, `a/b` or `-a/b`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let err = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    let (num_s, den_s) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| err(0, "expected an integer numerator"))?;
    let den: BigInt = match den_s {
        Some(d) => d
            .parse()
            .map_err(|_| err(num_s.len() + 1, "expected an integer denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err(num_s.len() + 1, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    if let Some(mut m) = n.magnitude().to_u64() {
        let mut v = 0;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        return v;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// p-adic valuation of a rational, `None` for zero.
pub fn valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduces a rational with denominator prime to `m` into `[0, m)`.
pub fn reduce_mod(q: &Rational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

pub fn to_biguint_mod(x: &BigInt, m: &BigUint) -> BigUint {
    let mi = BigInt::from_biguint(Sign::Plus, m.clone());
    x.mod_floor(&mi)
        .to_biguint()
        .expect("nonnegative after mod_floor")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Absolute value `|q|_p` as an exact rational (0 for 0).
pub fn padic_abs(q: &Rational, p: u64) -> Rational {
    match valuation(q, p) {
        None => Rational::zero(),
        Some(v) => {
            let pp = Rational::from_integer(BigInt::from(p));
            if v >= 0 {
                pp.pow(-(v as i32))
            } else {
                pp.pow((-v) as i32)
            }
        }
    }
}
