//! Binary fixed-point reals and complex numbers.
//!
//! A value is a `BigInt` mantissa scaled by `2^prec`. All transcendental
//! constants (π, cos, sin) are computed with extra guard bits and then
//! rounded down to the requested precision.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const GUARD_BITS: u32 = 32;

/// Complex number `(re + i·im) / 2^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComplex {
    pub re: BigInt,
    pub im: BigInt,
    pub prec: u32,
}

impl FixedComplex {
    pub fn zero(prec: u32) -> Self {
        Self { re: BigInt::zero(), im: BigInt::zero(), prec }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self { re: rational_to_fixed(q, prec), im: BigInt::zero(), prec }
    }

    /// Rescales to `prec` bits, truncating toward negative infinity when
    /// precision is lost.
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec == self.prec {
            return self.clone();
        }
        let (re, im) = if prec > self.prec {
            let s = prec - self.prec;
            (&self.re << s, &self.im << s)
        } else {
            let s = self.prec - prec;
            (&self.re >> s, &self.im >> s)
        };
        Self { re, im, prec }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let (a, b) = (self.with_prec(p), rhs.with_prec(p));
        Self { re: a.re + b.re, im: a.im + b.im, prec: p }
    }

    pub fn neg(&self) -> Self {
        Self { re: -&self.re, im: -&self.im, prec: self.prec }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let (a, b) = (self.with_prec(p), rhs.with_prec(p));
        let re = (&a.re * &b.re - &a.im * &b.im) >> p;
        let im = (&a.re * &b.im + &a.im * &b.re) >> p;
        Self { re, im, prec: p }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im, prec: self.prec }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let re = (&self.re * q.numer()).div_floor(q.denom());
        let im = (&self.im * q.numer()).div_floor(q.denom());
        Self { re, im, prec: self.prec }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(fixed_to_f64(&self.re, self.prec), fixed_to_f64(&self.im, self.prec))
    }

    /// Largest of |re|, |im| as an `f64`.
    pub fn max_abs(&self) -> f64 {
        fixed_to_f64(&self.re.abs(), self.prec).max(fixed_to_f64(&self.im.abs(), self.prec))
    }
}

pub fn rational_to_fixed(q: &BigRational, prec: u32) -> BigInt {
    (q.numer() << prec).div_floor(q.denom())
}

pub fn fixed_to_f64(x: &BigInt, prec: u32) -> f64 {
    // Drop excess bits first so the conversion never sees huge integers.
    if prec > 60 {
        let shifted: BigInt = x >> (prec - 60);
        shifted.to_f64().unwrap_or(f64::NAN) / 2f64.powi(60)
    } else {
        x.to_f64().unwrap_or(f64::NAN) / 2f64.powi(prec as i32)
    }
}

/// Decimal rendering with `digits` fractional digits (truncated).
pub fn fixed_to_decimal(x: &BigInt, prec: u32, digits: usize) -> String {
    let neg = x.is_negative();
    let ten_pow = BigInt::from(10u32).pow(digits as u32);
    let scaled: BigInt = (x.abs() * ten_pow.clone()) >> prec;
    let (int_part, frac) = scaled.div_rem(&ten_pow);
    let frac = frac.to_string();
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits.saturating_sub(frac.len())))
}

/// arctan(1/x) at `prec` bits, for integer x > 1.
fn atan_inv(x: u32, prec: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power: BigInt = (BigInt::one() << prec) / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// π at `prec` bits (Machin's formula).
pub fn pi(prec: u32) -> BigInt {
    let work = prec + GUARD_BITS;
    let v = atan_inv(5, work) * 16 - atan_inv(239, work) * 4;
    v >> GUARD_BITS
}

/// cos and sin of `theta` (fixed point at `prec` bits, |theta| ≲ 4).
fn cos_sin(theta: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << prec;
    let mut term = one.clone();
    let mut cos = one;
    let mut sin = BigInt::zero();
    let mut k = 1u32;
    loop {
        // term_k = theta^k / k!
        term = ((&term * theta) >> prec) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
    }
    (cos, sin)
}

type CisCache = RwLock<HashMap<(u32, u32, u32), Arc<FixedComplex>>>;

fn cis_cache() -> &'static CisCache {
    static CACHE: OnceLock<CisCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// exp(2πi·k/order) at `prec` bits.
pub fn root_of_unity(order: u32, k: i64, prec: u32) -> FixedComplex {
    assert!(order >= 1, "root of unity order must be positive");
    let k = k.rem_euclid(order as i64) as u32;
    let key = (order, k, prec);
    if let Some(v) = cis_cache().read().expect("cis cache poisoned").get(&key) {
        return (**v).clone();
    }
    let work = prec + GUARD_BITS;
    // angle in (-π, π]
    let signed_k = if 2 * k > order { k as i64 - order as i64 } else { k as i64 };
    let theta = (pi(work) * 2 * BigInt::from(signed_k)) / BigInt::from(order);
    let (c, s) = cos_sin(&theta, work);
    let value = FixedComplex { re: c >> GUARD_BITS, im: s >> GUARD_BITS, prec };
    cis_cache()
        .write()
        .expect("cis cache poisoned")
        .insert(key, Arc::new(value.clone()));
    value
}

/// √m at `prec` bits.
pub fn sqrt_int(m: u32, prec: u32) -> BigInt {
    (BigInt::from(m) << (2 * prec)).sqrt()
}
