//! Exact arithmetic in cyclotomic fields Q(ζ_M).
//!
//! An element is stored as `(c_0 + c_1 ζ + … + c_{φ(M)-1} ζ^{φ(M)-1}) / den`
//! with integer numerators and a single positive denominator. The
//! representation is the unique remainder modulo Φ_M, so equality with
//! zero is a coefficient test.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fixed::{self, FixedComplex};
use crate::error::Error;

type PolyCache = RwLock<HashMap<u32, Arc<[BigInt]>>>;

fn poly_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The M-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Computed as `(x^M − 1) / Π_{d | M, d < M} Φ_d` by exact division and
/// cached; cached entries are never modified.
pub fn cyclotomic_polynomial(order: u32) -> Arc<[BigInt]> {
    assert!(order >= 1, "cyclotomic polynomial order must be positive");
    if let Some(p) = poly_cache().read().expect("poly cache poisoned").get(&order) {
        return Arc::clone(p);
    }
    let mut quotient: Vec<BigInt> = vec![BigInt::zero(); order as usize + 1];
    quotient[0] = -BigInt::one();
    quotient[order as usize] = BigInt::one();
    for d in 1..order {
        if order % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            quotient = divide_monic(&quotient, &divisor);
        }
    }
    let poly: Arc<[BigInt]> = quotient.into();
    poly_cache()
        .write()
        .expect("poly cache poisoned")
        .entry(order)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

/// Exact quotient of `num` by a monic `den`; panics if the division leaves
/// a remainder.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * dj;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "non-exact cyclotomic division");
    q
}

/// Euler's totient, read off as deg Φ_M.
pub fn totient(order: u32) -> usize {
    cyclotomic_polynomial(order).len() - 1
}

/// Reduces an integer polynomial modulo Φ_M, folding x^M = 1 first.
fn reduce(mut raw: Vec<BigInt>, order: u32) -> Vec<BigInt> {
    let m = order as usize;
    if raw.len() > m {
        for i in m..raw.len() {
            let c = std::mem::take(&mut raw[i]);
            raw[i % m] += c;
        }
        raw.truncate(m);
    }
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    for i in (deg..raw.len()).rev() {
        let c = std::mem::take(&mut raw[i]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            raw[i - deg + j] -= &c * pj;
        }
    }
    raw.resize(deg, BigInt::zero());
    raw
}

/// Exact element of Q(ζ_M).
#[derive(Clone)]
pub struct CycloScalar {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloScalar {
    fn from_parts(order: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(num.len(), totient(order));
        let mut s = Self { order, num, den };
        s.normalize();
        s
    }

    fn from_raw(order: u32, raw: Vec<BigInt>, den: BigInt) -> Self {
        Self::from_parts(order, reduce(raw, order), den)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        } else if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn zero() -> Self {
        Self { order: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(k: i64) -> Self {
        Self { order: 1, num: vec![BigInt::from(k)], den: BigInt::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_parts(1, vec![q.numer().clone()], q.denom().clone())
    }

    /// ζ_M^{k mod M}.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        assert!(order >= 1, "root of unity order must be positive");
        let e = k.rem_euclid(order as i64) as usize;
        let mut raw = vec![BigInt::zero(); order as usize];
        raw[e] = BigInt::one();
        Self::from_raw(order, raw, BigInt::one())
    }

    /// Builds `Σ coeffs[i] ζ_M^i`; `coeffs` may be longer than φ(M).
    pub fn from_coefficients(order: u32, coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let raw = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::from_raw(order, raw, den)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Rational coefficients on the power basis 1, ζ, …, ζ^{φ(M)-1}.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Re-expresses the value in Q(ζ_L) for a multiple L of the order.
    pub fn lift(&self, order: u32) -> Self {
        assert!(order % self.order == 0, "lift target must be a multiple of the order");
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut raw = vec![BigInt::zero(); order as usize];
        for (i, c) in self.num.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Self::from_raw(order, raw, self.den.clone())
    }

    fn common(&self, rhs: &Self) -> (Self, Self) {
        let l = self.order.lcm(&rhs.order);
        (self.lift(l), rhs.lift(l))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (a, b) = self.common(rhs);
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        Self::from_parts(a.order, num, &a.den * &b.den)
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.order == 1 {
            return rhs.scale(&self.num[0], &self.den);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.num[0], &rhs.den);
        }
        let (a, b) = self.common(rhs);
        let mut raw = vec![BigInt::zero(); a.num.len() + b.num.len() - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Self::from_raw(a.order, raw, &a.den * &b.den)
    }

    fn scale(&self, num: &BigInt, den: &BigInt) -> Self {
        Self::from_parts(
            self.order,
            self.num.iter().map(|c| c * num).collect(),
            &self.den * den,
        )
    }

    /// Complex conjugation, ζ ↦ ζ^{M−1}.
    pub fn conjugate(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        let m = self.order as usize;
        let mut raw = vec![BigInt::zero(); m];
        for (i, c) in self.num.iter().enumerate() {
            raw[(m - i) % m] = c.clone();
        }
        Self::from_raw(self.order, raw, self.den.clone())
    }

    /// Evaluates at ζ_M = exp(2πi/M) with `precision` bits (≥ 53).
    pub fn embed_numeric(&self, precision: u32) -> FixedComplex {
        let prec = precision.max(53);
        let mut acc = FixedComplex::zero(prec);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = fixed::root_of_unity(self.order, i as i64, prec);
            acc = acc.add(&z.scale_rational(&BigRational::from_integer(c.clone())));
        }
        acc.scale_rational(&BigRational::new(BigInt::one(), self.den.clone()))
    }

    /// Expression-language rendering: `3/2`, `-1`, or
    /// `(1/2 + zeta(8,1) - 3*zeta(8,3))`.
    pub fn render(&self) -> String {
        if let Some(q) = self.as_rational() {
            return render_rational(&q);
        }
        let mut out = String::from("(");
        let mut first = true;
        for (i, q) in self.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let negative = q.is_negative();
            let mag = q.abs();
            if first {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            first = false;
            if i == 0 {
                out.push_str(&render_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&render_rational(&mag));
                    out.push('*');
                }
                out.push_str(&format!("zeta({},{})", self.order, i));
            }
        }
        out.push(')');
        out
    }
}

pub(crate) fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `√m` as an exact cyclotomic element together with the order of the
/// field it was built in.
///
/// Writing m = s²·f with f squarefree, √f is assembled from √2 = ζ_8 + ζ_8⁻¹
/// and the quadratic Gauss sums g_p = Σ (a/p) ζ_p^a, which equal √p for
/// p ≡ 1 (mod 4) and i√p for p ≡ 3 (mod 4). The result lives in Q(ζ_f′)
/// with f′ = f when f ≡ 1 (mod 4) and f′ = 4f otherwise (order 1 for
/// perfect squares).
pub fn radical(m: u32) -> (u32, CycloScalar) {
    assert!(m >= 1, "radical of a non-positive integer");
    let (square_root_part, squarefree) = split_square(m);
    let mut value = CycloScalar::from_integer(square_root_part as i64);
    let mut residue_three = 0u32;
    for p in prime_factors(squarefree) {
        let factor = if p == 2 {
            CycloScalar::root_of_unity(8, 1).add(&CycloScalar::root_of_unity(8, 7))
        } else {
            if p % 4 == 3 {
                residue_three += 1;
            }
            gauss_sum(p)
        };
        value = value.mul(&factor);
    }
    // Each p ≡ 3 (mod 4) contributed an extra factor i; divide by i^r.
    let inv_i_power = match residue_three % 4 {
        0 => CycloScalar::one(),
        1 => CycloScalar::root_of_unity(4, 3),
        2 => CycloScalar::from_integer(-1),
        _ => CycloScalar::root_of_unity(4, 1),
    };
    value = value.mul(&inv_i_power);
    let conductor = if squarefree == 1 {
        1
    } else if squarefree % 4 == 1 {
        squarefree
    } else {
        4 * squarefree
    };
    debug_assert_eq!(value.order(), conductor);
    (conductor, value)
}

/// Σ_{a=1}^{p−1} (a/p) ζ_p^a for an odd prime p.
pub fn gauss_sum(p: u32) -> CycloScalar {
    let coeffs: Vec<BigRational> = (0..p)
        .map(|a| BigRational::from_integer(legendre(a, p).into()))
        .collect();
    CycloScalar::from_coefficients(p, &coeffs)
}

fn legendre(a: u32, p: u32) -> i64 {
    if a % p == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// m = s²·f with f squarefree; returns (s, f).
fn split_square(m: u32) -> (u32, u32) {
    let mut s = 1;
    let mut f = 1;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    f *= rest;
    (s, f)
}

fn prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ScalarWire {
    #[serde(rename = "M")]
    order: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycloScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarWire {
            order: self.order,
            coeffs: self
                .coeffs()
                .iter()
                .map(|q| [q.numer().to_string(), q.denom().to_string()])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = ScalarWire::deserialize(deserializer)?;
        CycloScalar::try_from_wire(wire.order, &wire.coeffs).map_err(serde::de::Error::custom)
    }
}

impl CycloScalar {
    fn try_from_wire(order: u32, coeffs: &[[String; 2]]) -> Result<Self, Error> {
        if order == 0 {
            return Err(Error::MalformedScalar("order must be positive".into()));
        }
        if coeffs.len() != totient(order) {
            return Err(Error::MalformedScalar(format!(
                "expected {} coefficients for M = {order}, got {}",
                totient(order),
                coeffs.len()
            )));
        }
        let mut qs = Vec::with_capacity(coeffs.len());
        for [n, d] in coeffs {
            let n: BigInt = n
                .parse()
                .map_err(|_| Error::MalformedScalar(format!("bad numerator {n:?}")))?;
            let d: BigInt = d
                .parse()
                .map_err(|_| Error::MalformedScalar(format!("bad denominator {d:?}")))?;
            if !d.is_positive() {
                return Err(Error::MalformedScalar("denominator must be positive".into()));
            }
            qs.push(BigRational::new(n, d));
        }
        Ok(Self::from_coefficients(order, &qs))
    }
}
