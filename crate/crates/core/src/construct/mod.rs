//! Concrete models: the matrix picture of the cyclic fixed-point algebra,
//! the exchange automorphism on O_{2n}, and the rank-two no-go witness.

pub mod cyclic;
pub mod exchange;
pub mod nogo;

pub use cyclic::{check_cyclic_compatible, CyclicModel, MAX_MODEL_RANK};
pub use exchange::{check_parity_compatible, ExchangeModel, Normalization};
pub use nogo::{nogo_equations, NogoQuadruple, NogoWitness, NOGO_EQUATION_COUNT};

use crate::algebra::Element;
use crate::error::Result;
use crate::matrix::OpMatrix;
use crate::scalar::Backend;

/// Verdicts of x_i* x_j = δ_ij (row-major) followed by Σ x_i x_i* = 1.
pub fn cuntz_verdicts<B: Backend>(b: &B, family: &[Element<B::Scalar>]) -> Result<Vec<bool>> {
    let rank = family[0].rank();
    let one = Element::one(b, rank);
    let zero = Element::zero(rank);
    let mut out = Vec::with_capacity(family.len() * family.len() + 1);
    for (i, x) in family.iter().enumerate() {
        let xa = x.adjoint();
        for (j, y) in family.iter().enumerate() {
            out.push(xa.checked_mul(y)?.equals(if i == j { &one } else { &zero })?);
        }
    }
    let mut sum = Element::zero(rank);
    for x in family {
        sum = sum.checked_add(&x.checked_mul(&x.adjoint())?)?;
    }
    out.push(sum.equals(&one)?);
    Ok(out)
}

/// Matrix version of [`cuntz_verdicts`].
pub fn cuntz_matrix_verdicts<B: Backend>(b: &B, family: &[OpMatrix<B::Scalar>]) -> Result<Vec<bool>> {
    let (size, rank) = (family[0].size(), family[0].rank());
    let id = OpMatrix::identity(b, size, rank);
    let zero = OpMatrix::zeros(size, rank);
    let mut out = Vec::with_capacity(family.len() * family.len() + 1);
    for (i, x) in family.iter().enumerate() {
        let xa = x.adjoint();
        for (j, y) in family.iter().enumerate() {
            out.push(xa.checked_mul(y)?.equals(if i == j { &id } else { &zero })?);
        }
    }
    let mut sum = OpMatrix::zeros(size, rank);
    for x in family {
        sum = sum.checked_add(&x.checked_mul(&x.adjoint())?)?;
    }
    out.push(sum.equals(&id)?);
    Ok(out)
}

/// ((i − 1) mod n) + 1 for an arbitrary integer i.
pub(crate) fn wrap(i: i64, n: usize) -> usize {
    ((i - 1).rem_euclid(n as i64) + 1) as usize
}

/// i ≡ j (mod n).
pub(crate) fn congruent(i: i64, j: i64, n: usize) -> bool {
    (i - j).rem_euclid(n as i64) == 0
}
