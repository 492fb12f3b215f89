//! Square matrices over O_n, the model of M_k(C) ⊗ O_n.
//!
//! Coordinates passed to and returned from the public API are 1-based,
//! matching the way the constructions index their matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{Element, Rank};
use crate::error::{Error, Result};
use crate::morphism::Endo;
use crate::scalar::{Backend, Scalar};

#[derive(Clone)]
pub struct OpMatrix<S> {
    size: usize,
    rank: Rank,
    entries: Vec<Element<S>>,
}

/// Verdict of a matrix predicate, with the first failing entry (1-based,
/// row-major) when it does not hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatVerdict {
    pub holds: bool,
    pub first_failure: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatPredicate {
    Isometry,
    Unitary,
    SelfAdjoint,
}

impl<S: Scalar> OpMatrix<S> {
    pub fn zeros(size: usize, rank: Rank) -> Self {
        assert!(size >= 1, "matrix size must be positive");
        Self { size, rank, entries: vec![Element::zero(rank); size * size] }
    }

    pub fn identity<B: Backend<Scalar = S>>(b: &B, size: usize, rank: Rank) -> Self {
        Self::from_fn(size, rank, |h, k| {
            if h == k {
                Element::one(b, rank)
            } else {
                Element::zero(rank)
            }
        })
    }

    /// Builds the matrix entry by entry; `f` receives 1-based (row, column).
    pub fn from_fn(size: usize, rank: Rank, mut f: impl FnMut(usize, usize) -> Element<S>) -> Self {
        assert!(size >= 1, "matrix size must be positive");
        let mut entries = Vec::with_capacity(size * size);
        for h in 1..=size {
            for k in 1..=size {
                let e = f(h, k);
                assert_eq!(e.rank(), rank, "entry rank differs from matrix rank");
                entries.push(e);
            }
        }
        Self { size, rank, entries }
    }

    pub fn diagonal(rank: Rank, diag: Vec<Element<S>>) -> Self {
        let size = diag.len();
        let mut m = Self::zeros(size, rank);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * size + i] = d;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    /// Entry (h, k), 1-based.
    pub fn get(&self, h: usize, k: usize) -> &Element<S> {
        &self.entries[(h - 1) * self.size + (k - 1)]
    }

    pub fn set(&mut self, h: usize, k: usize, value: Element<S>) {
        assert_eq!(value.rank(), self.rank);
        self.entries[(h - 1) * self.size + (k - 1)] = value;
    }

    pub fn row(&self, h: usize) -> Vec<Element<S>> {
        (1..=self.size).map(|k| self.get(h, k).clone()).collect()
    }

    fn compatible(&self, rhs: &Self) -> Result<()> {
        if self.size != rhs.size {
            return Err(Error::DimensionMismatch { left: self.size, right: rhs.size });
        }
        if self.rank != rhs.rank {
            return Err(Error::RankMismatch { left: self.rank.get(), right: rhs.rank.get() });
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(Self { size: self.size, rank: self.rank, entries })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.negate())
    }

    pub fn negate(&self) -> Self {
        self.map_entries(|e| e.negate())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        let n = self.size;
        let mut out = Self::zeros(n, self.rank);
        for h in 0..n {
            for p in 0..n {
                let a = &self.entries[h * n + p];
                if a.is_empty() {
                    continue;
                }
                for k in 0..n {
                    let b = &rhs.entries[p * n + k];
                    if b.is_empty() {
                        continue;
                    }
                    let prod = a * b;
                    let slot = &mut out.entries[h * n + k];
                    *slot = &*slot + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_entries(|e| e.scale(c))
    }

    /// Transpose with entrywise adjoint.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.size, self.rank, |h, k| self.get(k, h).adjoint())
    }

    pub fn map_entries(&self, mut f: impl FnMut(&Element<S>) -> Element<S>) -> Self {
        Self {
            size: self.size,
            rank: self.rank,
            entries: self.entries.iter().map(&mut f).collect(),
        }
    }

    pub fn pow<B: Backend<Scalar = S>>(&self, b: &B, k: usize) -> Self {
        let mut acc = Self::identity(b, self.size, self.rank);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// First (row-major, 1-based) coordinate where the matrices differ.
    pub fn first_mismatch(&self, rhs: &Self) -> Result<Option<(usize, usize)>> {
        self.compatible(rhs)?;
        for (i, (a, b)) in self.entries.iter().zip(&rhs.entries).enumerate() {
            if !a.equals(b)? {
                return Ok(Some((i / self.size + 1, i % self.size + 1)));
            }
        }
        Ok(None)
    }

    pub fn equals(&self, rhs: &Self) -> Result<bool> {
        Ok(self.first_mismatch(rhs)?.is_none())
    }

    pub fn is_zero(&self) -> Result<bool> {
        for e in &self.entries {
            if !e.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn predicate<B: Backend<Scalar = S>>(&self, b: &B, kind: MatPredicate) -> Result<MatVerdict> {
        let id = Self::identity(b, self.size, self.rank);
        let verdict = |found: Option<(usize, usize)>| MatVerdict { holds: found.is_none(), first_failure: found };
        match kind {
            MatPredicate::SelfAdjoint => Ok(verdict(self.first_mismatch(&self.adjoint())?)),
            MatPredicate::Isometry => Ok(verdict((&self.adjoint() * self).first_mismatch(&id)?)),
            MatPredicate::Unitary => {
                let first = (&self.adjoint() * self).first_mismatch(&id)?;
                if first.is_some() {
                    return Ok(verdict(first));
                }
                Ok(verdict((self * &self.adjoint()).first_mismatch(&id)?))
            }
        }
    }

    /// Ad(U)(A) = U A U*.
    pub fn conjugate_by(&self, unitary: &Self) -> Result<Self> {
        unitary.checked_mul(self)?.checked_mul(&unitary.adjoint())
    }

    /// Applies an endomorphism of O_n to every entry.
    pub fn apply_endo(&self, e: &Endo<S>) -> Result<Self> {
        if e.rank() != self.rank {
            return Err(Error::RankMismatch { left: e.rank().get(), right: self.rank.get() });
        }
        let entries = self.entries.iter().map(|x| e.apply(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { size: self.size, rank: self.rank, entries })
    }

    /// `{"k": …, "n": …, "entries": [[Element-JSON, …], …]}`, row-major.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<serde_json::Value>> = (1..=self.size)
            .map(|h| (1..=self.size).map(|k| self.get(h, k).to_json()).collect())
            .collect();
        serde_json::json!({ "k": self.size, "n": self.rank.get(), "entries": rows })
    }
}

/// Ad(U)(A) = U A U*.
pub fn ad_unitary<S: Scalar>(unitary: &OpMatrix<S>, a: &OpMatrix<S>) -> Result<OpMatrix<S>> {
    a.conjugate_by(unitary)
}

impl<S: Scalar> fmt::Debug for OpMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OpMatrix(k={}, n={})[", self.size, self.rank)?;
        for h in 1..=self.size {
            let row: Vec<String> = (1..=self.size).map(|k| self.get(h, k).format()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a, S: Scalar> Add<&'a OpMatrix<S>> for &'a OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn add(self, rhs: &OpMatrix<S>) -> OpMatrix<S> {
        self.checked_add(rhs).expect("matrix addition")
    }
}

impl<'a, S: Scalar> Sub<&'a OpMatrix<S>> for &'a OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn sub(self, rhs: &OpMatrix<S>) -> OpMatrix<S> {
        self.checked_sub(rhs).expect("matrix subtraction")
    }
}

impl<'a, S: Scalar> Mul<&'a OpMatrix<S>> for &'a OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn mul(self, rhs: &OpMatrix<S>) -> OpMatrix<S> {
        self.checked_mul(rhs).expect("matrix multiplication")
    }
}

impl<S: Scalar> Neg for &OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn neg(self) -> OpMatrix<S> {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::{named_endo, EndoKind};
    use crate::scalar::{CycloScalar, Exact};

    fn rank(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn all_generators(n: usize) -> OpMatrix<CycloScalar> {
        OpMatrix::from_fn(n, rank(n), |_, k| Element::generator(&Exact, rank(n), k as i64))
    }

    #[test]
    fn identity_is_neutral_and_adjoint_involutive() {
        let a = all_generators(3);
        let id = OpMatrix::identity(&Exact, 3, rank(3));
        assert!((&id * &a).equals(&a).unwrap());
        assert!(a.adjoint().adjoint().equals(&a).unwrap());
    }

    #[test]
    fn unnormalized_all_generator_matrix_is_not_an_isometry() {
        let v = all_generators(3);
        let verdict = v.predicate(&Exact, MatPredicate::Isometry).unwrap();
        assert!(!verdict.holds);
        assert_eq!(verdict.first_failure, Some((1, 1)));
        // V*V = n·I
        let three = OpMatrix::identity(&Exact, 3, rank(3)).scale(&CycloScalar::from_integer(3));
        assert!((&v.adjoint() * &v).equals(&three).unwrap());
    }

    #[test]
    fn phase_diagonal_is_unitary() {
        let n = 4;
        let z = OpMatrix::diagonal(
            rank(n),
            (0..n).map(|k| Element::scalar(rank(n), CycloScalar::root_of_unity(n as u32, k as i64))).collect(),
        );
        assert!(z.predicate(&Exact, MatPredicate::Unitary).unwrap().holds);
        assert!(ad_unitary(&OpMatrix::identity(&Exact, n, rank(n)), &z).unwrap().equals(&z).unwrap());
    }

    #[test]
    fn dimension_and_rank_errors() {
        let a = all_generators(2);
        let b = all_generators(3);
        assert!(matches!(a.checked_mul(&b), Err(Error::DimensionMismatch { .. })));
        let c = OpMatrix::<CycloScalar>::zeros(2, rank(3));
        assert!(matches!(a.checked_add(&c), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn entrywise_endomorphisms() {
        let n = rank(2);
        let lc = named_endo(&Exact, EndoKind::Cyclic, 2).unwrap();
        let ones = OpMatrix::from_fn(2, n, |_, _| Element::one(&Exact, n));
        assert!(ones.apply_endo(&lc).unwrap().equals(&ones).unwrap());
        let s1 = OpMatrix::diagonal(n, vec![Element::generator(&Exact, n, 1), Element::generator(&Exact, n, 2)]);
        let shifted = OpMatrix::diagonal(n, vec![Element::generator(&Exact, n, 2), Element::generator(&Exact, n, 1)]);
        assert!(s1.apply_endo(&lc).unwrap().equals(&shifted).unwrap());
        let id = named_endo(&Exact, EndoKind::Cyclic, 2).unwrap().power(&Exact, 2).unwrap();
        assert!(s1.apply_endo(&id).unwrap().equals(&s1).unwrap());
    }
}
