//! Coefficient domains.
//!
//! Every algebraic object in the crate is generic over a [`Scalar`]. Two
//! backends exist: [`Exact`] (cyclotomic fields, the source of truth) and
//! [`Numeric`] (fixed-point complex numbers with a zero tolerance, used
//! only to cross-check verdicts).

pub mod cyclo;
pub mod fixed;
pub mod numeric;

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use cyclo::{cyclotomic_polynomial, gauss_sum, radical, totient, CycloScalar};
pub use fixed::FixedComplex;
pub use numeric::{Numeric, NumericScalar};

/// Field operations needed by the algebra layer.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Complex conjugation.
    fn conj(&self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Rational value, when the backend can certify one.
    fn as_rational(&self) -> Option<BigRational>;
    fn to_complex(&self) -> Complex64;
    /// Coefficient text used by the element formatter.
    fn render(&self) -> String;
    fn to_json(&self) -> serde_json::Value;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Numeric,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Exact => "exact",
            BackendKind::Numeric => "numeric",
        })
    }
}

/// Constructors for the constants the constructions need.
pub trait Backend: Clone + Send + Sync + 'static {
    type Scalar: Scalar;

    fn kind(&self) -> BackendKind;
    fn rational(&self, q: &BigRational) -> Self::Scalar;
    /// ζ_order^k.
    fn root_of_unity(&self, order: u32, k: i64) -> Self::Scalar;
    /// Positive square root of `m`.
    fn sqrt(&self, m: u32) -> Self::Scalar;

    fn integer(&self, k: i64) -> Self::Scalar {
        self.rational(&BigRational::from_integer(k.into()))
    }

    fn one(&self) -> Self::Scalar {
        self.integer(1)
    }

    /// 1/√m, computed as √m / m.
    fn inv_sqrt(&self, m: u32) -> Self::Scalar {
        self.sqrt(m)
            .mul(&self.rational(&BigRational::new(1.into(), m.into())))
    }
}

/// Exact cyclotomic backend.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Scalar for CycloScalar {
    fn is_zero(&self) -> bool {
        CycloScalar::is_zero(self)
    }

    fn is_one(&self) -> bool {
        CycloScalar::as_rational(self).is_some_and(|q| q == BigRational::from_integer(1.into()))
    }

    fn add(&self, rhs: &Self) -> Self {
        CycloScalar::add(self, rhs)
    }

    fn neg(&self) -> Self {
        CycloScalar::neg(self)
    }

    fn mul(&self, rhs: &Self) -> Self {
        CycloScalar::mul(self, rhs)
    }

    fn conj(&self) -> Self {
        self.conjugate()
    }

    fn as_rational(&self) -> Option<BigRational> {
        CycloScalar::as_rational(self)
    }

    fn to_complex(&self) -> Complex64 {
        self.embed_numeric(64).to_complex64()
    }

    fn render(&self) -> String {
        CycloScalar::render(self)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scalar serialization is infallible")
    }
}

impl Backend for Exact {
    type Scalar = CycloScalar;

    fn kind(&self) -> BackendKind {
        BackendKind::Exact
    }

    fn rational(&self, q: &BigRational) -> CycloScalar {
        CycloScalar::from_rational(q)
    }

    fn root_of_unity(&self, order: u32, k: i64) -> CycloScalar {
        CycloScalar::root_of_unity(order, k)
    }

    fn sqrt(&self, m: u32) -> CycloScalar {
        radical(m).1
    }
}
