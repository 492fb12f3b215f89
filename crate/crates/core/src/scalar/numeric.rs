//! Fixed-point complex backend used to cross-check exact verdicts.

use num_complex::Complex64;
use num_rational::BigRational;

use super::fixed::{self, FixedComplex};
use super::{Backend, BackendKind, Scalar};

pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Complex number at a fixed binary precision; equality with zero is
/// decided up to `tolerance` in each component.
#[derive(Clone, Debug)]
pub struct NumericScalar {
    value: FixedComplex,
    tolerance: f64,
}

impl NumericScalar {
    pub fn value(&self) -> &FixedComplex {
        &self.value
    }

    fn wrap(&self, value: FixedComplex) -> Self {
        Self { value, tolerance: self.tolerance }
    }
}

impl Scalar for NumericScalar {
    fn is_zero(&self) -> bool {
        self.value.max_abs() <= self.tolerance
    }

    fn is_one(&self) -> bool {
        let one = FixedComplex::from_rational(&BigRational::from_integer(1.into()), self.value.prec);
        self.value.add(&one.neg()).max_abs() <= self.tolerance
    }

    fn add(&self, rhs: &Self) -> Self {
        self.wrap(self.value.add(&rhs.value))
    }

    fn neg(&self) -> Self {
        self.wrap(self.value.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.wrap(self.value.mul(&rhs.value))
    }

    fn conj(&self) -> Self {
        self.wrap(self.value.conj())
    }

    fn as_rational(&self) -> Option<BigRational> {
        None
    }

    fn to_complex(&self) -> Complex64 {
        self.value.to_complex64()
    }

    fn render(&self) -> String {
        let re = fixed::fixed_to_decimal(&self.value.re, self.value.prec, 12);
        let im = fixed::fixed_to_decimal(&self.value.im, self.value.prec, 12);
        let im = if im.starts_with('-') { im } else { format!("+{im}") };
        format!("({re}{im}i)")
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "re": fixed::fixed_to_decimal(&self.value.re, self.value.prec, 30),
            "im": fixed::fixed_to_decimal(&self.value.im, self.value.prec, 30),
        })
    }
}

/// Numeric backend: `precision` bits, zero tolerance `tolerance`.
#[derive(Clone, Copy, Debug)]
pub struct Numeric {
    pub precision: u32,
    pub tolerance: f64,
}

impl Default for Numeric {
    fn default() -> Self {
        Self { precision: DEFAULT_PRECISION, tolerance: DEFAULT_TOLERANCE }
    }
}

impl Numeric {
    pub fn new(precision: u32, tolerance: f64) -> Self {
        Self { precision: precision.max(53), tolerance }
    }

    fn wrap(&self, value: FixedComplex) -> NumericScalar {
        NumericScalar { value, tolerance: self.tolerance }
    }
}

impl Backend for Numeric {
    type Scalar = NumericScalar;

    fn kind(&self) -> BackendKind {
        BackendKind::Numeric
    }

    fn rational(&self, q: &BigRational) -> NumericScalar {
        self.wrap(FixedComplex::from_rational(q, self.precision))
    }

    fn root_of_unity(&self, order: u32, k: i64) -> NumericScalar {
        self.wrap(fixed::root_of_unity(order, k, self.precision))
    }

    fn sqrt(&self, m: u32) -> NumericScalar {
        let re = fixed::sqrt_int(m, self.precision);
        self.wrap(FixedComplex { re, im: 0.into(), prec: self.precision })
    }
}
