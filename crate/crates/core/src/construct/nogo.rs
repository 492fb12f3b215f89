//! Rank-two witness that no unitary V in M_2(O_2) with V T_2 = T_1 and
//! Ad(Z_2)(V) = V* has full spectrum, together with the system of
//! entrywise equations a candidate V = [[a, b], [c, d]] must satisfy.

use serde_json::json;

use super::CyclicModel;
use crate::algebra::{Element, Rank};
use crate::error::{Error, Result};
use crate::matrix::{MatPredicate, OpMatrix};
use crate::report::{CheckRecord, Status};
use crate::scalar::Backend;

pub const NOGO_EQUATION_COUNT: usize = 17;

#[derive(Clone)]
pub struct NogoWitness<B: Backend> {
    backend: B,
    rank: Rank,
    /// S_1S_1* − S_2S_2*.
    pub f: Element<B::Scalar>,
    /// [[0, −F], [F, 0]].
    pub v: OpMatrix<B::Scalar>,
    /// diag(1, −1).
    pub z2: OpMatrix<B::Scalar>,
    /// 2^{-1/2} [[S_1, S_2], [S_1, S_2]].
    pub t1: OpMatrix<B::Scalar>,
    /// 2^{-1/2} [[S_1, −S_2], [−S_1, S_2]].
    pub t2: OpMatrix<B::Scalar>,
}

/// Entries of a candidate V = [[a, b], [c, d]].
#[derive(Clone)]
pub struct NogoQuadruple<S> {
    pub a: Element<S>,
    pub b: Element<S>,
    pub c: Element<S>,
    pub d: Element<S>,
}

impl<B: Backend> NogoWitness<B> {
    pub fn new(b: &B) -> Self {
        let rank = Rank::new(2).expect("rank two");
        let s1 = Element::generator(b, rank, 1);
        let s2 = Element::generator(b, rank, 2);
        let f = &Element::range_projection(b, rank, 1) - &Element::range_projection(b, rank, 2);
        let zero = Element::zero(rank);
        let one = Element::one(b, rank);
        let mat = |e: [[Element<B::Scalar>; 2]; 2]| OpMatrix::from_fn(2, rank, |h, k| e[h - 1][k - 1].clone());
        let r2 = b.inv_sqrt(2);
        Self {
            v: mat([[zero.clone(), f.negate()], [f.clone(), zero.clone()]]),
            z2: mat([[one.clone(), zero.clone()], [zero, one.negate()]]),
            t1: mat([[s1.clone(), s2.clone()], [s1.clone(), s2.clone()]]).scale(&r2),
            t2: mat([[s1.clone(), s2.negate()], [s1.negate(), s2]]).scale(&r2),
            f,
            backend: b.clone(),
            rank,
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    /// The candidate (0, −F, F, 0).
    pub fn candidate(&self) -> NogoQuadruple<B::Scalar> {
        let zero = Element::zero(self.rank);
        NogoQuadruple { a: zero.clone(), b: self.f.negate(), c: self.f.clone(), d: zero }
    }

    /// V = I, a negative control.
    pub fn identity_control(&self) -> NogoQuadruple<B::Scalar> {
        let one = Element::one(&self.backend, self.rank);
        let zero = Element::zero(self.rank);
        NogoQuadruple { a: one.clone(), b: zero.clone(), c: zero, d: one }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": 2,
            "F": self.f.to_json(),
            "V": self.v.to_json(),
            "Z": self.z2.to_json(),
            "T": [self.t1.to_json(), self.t2.to_json()],
        })
    }

    pub fn checks(&self) -> Vec<CheckRecord> {
        let b = &self.backend;
        let id = OpMatrix::identity(b, 2, self.rank);
        let mut out = Vec::new();
        out.push(CheckRecord::evaluate("F_selfadjoint_unitary", "F* = F and F*F = FF* = 1", |v| {
            v.push(self.f.is_selfadjoint()?);
            v.push(self.f.is_unitary(b)?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("F_acts_on_ranges", "F S_1 = S_1 and F S_2 = -S_2", |v| {
            let s1 = Element::generator(b, self.rank, 1);
            let s2 = Element::generator(b, self.rank, 2);
            v.push((&self.f * &s1).equals(&s1)?);
            v.push((&self.f * &s2).equals(&s2.negate())?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("V_unitary", "V*V = VV* = I", |v| {
            v.push(self.v.predicate(b, MatPredicate::Unitary)?.holds);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("V_T2_equals_T1", "V T_2 = T_1", |v| {
            v.push(self.v.checked_mul(&self.t2)?.equals(&self.t1)?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("AdZ2_V_equals_V_adjoint", "Z_2 V Z_2* = V*", |v| {
            v.push(self.v.conjugate_by(&self.z2)?.equals(&self.v.adjoint())?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("AdZ2_T1_equals_T2", "Z_2 T_1 Z_2* = T_2", |v| {
            v.push(self.t1.conjugate_by(&self.z2)?.equals(&self.t2)?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate(
            "V_squared_is_minus_identity",
            "V^2 + I = 0, so the spectrum of V lies in {i, -i}",
            |v| {
                v.push(self.v.checked_mul(&self.v)?.checked_add(&id)?.is_zero()?);
                Ok(())
            },
        ));
        out.push(CheckRecord::evaluate(
            "T_pair_matches_rank_two_model",
            "T_1 and T_2 here are the rank-two model's T_2 and T_1",
            |v| {
                let model = CyclicModel::new(b, 2)?;
                v.push(self.t1.equals(&model.t[1])?);
                v.push(self.t2.equals(&model.t[0])?);
                Ok(())
            },
        ));
        out.push(self.equations_record(
            "candidate_equations",
            "candidate (0, -F, F, 0)",
            &self.candidate(),
            &[(0, true), (1, true), (2, true), (3, true), (8, true), (9, true), (10, true), (11, true)],
        ));
        out.push(self.equations_record(
            "control_identity_equations",
            "control V = I",
            &self.identity_control(),
            &[(0, true), (1, false)],
        ));
        out
    }

    /// Emits the full verdict vector; the status covers only `asserted`.
    fn equations_record(
        &self,
        id: &str,
        label: &str,
        q: &NogoQuadruple<B::Scalar>,
        asserted: &[(usize, bool)],
    ) -> CheckRecord {
        match nogo_equations(&self.backend, q) {
            Ok(verdicts) => {
                let ok = asserted.iter().all(|&(i, want)| verdicts[i] == want);
                let held: Vec<usize> = (0..verdicts.len()).filter(|&i| verdicts[i]).map(|i| i + 1).collect();
                let mut rec = CheckRecord::new(
                    id,
                    if ok { Status::Pass } else { Status::Fail },
                    format!("{label}: equations holding (1-based) {held:?}"),
                )
                .with_witness(json!({ "verdicts": verdicts }));
                rec.verdicts = verdicts;
                rec
            }
            Err(e) => CheckRecord::new(id, Status::Fail, format!("{label}: error: {e}")),
        }
    }
}

/// Verdicts of the system, in order:
///
/// ```text
///  1  aS1 − bS1 = S1              10  b* = −c
///  2  −aS2 + bS2 = S2             11  c* = −b
///  3  cS1 − dS1 = S1              12  d* = d
///  4  −cS2 + dS2 = S2             13  a + b = −c − d
///  5  aS1 + bS1 = S1a − S2c       14  c² + d² = 1
///  6  aS2 + bS2 = S1b − S2d       15  dc + cd = 0
///  7  cS1 + dS1 = −S1a + S2c      16  (d + F)² + d² − 1 = 0
///  8  cS2 + dS2 = −S1b + S2d      17  d(d + F) + (d + F)d = 0
///  9  a* = a
/// ```
pub fn nogo_equations<B: Backend>(b: &B, q: &NogoQuadruple<B::Scalar>) -> Result<Vec<bool>> {
    let rank = Rank::new(2)?;
    for e in [&q.a, &q.b, &q.c, &q.d] {
        if e.rank() != rank {
            return Err(Error::RankMismatch { left: 2, right: e.rank().get() });
        }
    }
    let (a, bb, c, d) = (&q.a, &q.b, &q.c, &q.d);
    let s1 = Element::generator(b, rank, 1);
    let s2 = Element::generator(b, rank, 2);
    let one = Element::one(b, rank);
    let zero = Element::zero(rank);
    let f = &Element::range_projection(b, rank, 1) - &Element::range_projection(b, rank, 2);
    let dpf = d + &f;

    let pairs: [(Element<B::Scalar>, Element<B::Scalar>); NOGO_EQUATION_COUNT] = [
        (&(a * &s1) - &(bb * &s1), s1.clone()),
        (&(bb * &s2) - &(a * &s2), s2.clone()),
        (&(c * &s1) - &(d * &s1), s1.clone()),
        (&(d * &s2) - &(c * &s2), s2.clone()),
        (&(a * &s1) + &(bb * &s1), &(&s1 * a) - &(&s2 * c)),
        (&(a * &s2) + &(bb * &s2), &(&s1 * bb) - &(&s2 * d)),
        (&(c * &s1) + &(d * &s1), &(&s2 * c) - &(&s1 * a)),
        (&(c * &s2) + &(d * &s2), &(&s2 * d) - &(&s1 * bb)),
        (a.adjoint(), a.clone()),
        (bb.adjoint(), c.negate()),
        (c.adjoint(), bb.negate()),
        (d.adjoint(), d.clone()),
        (a + bb, (c + d).negate()),
        (&(c * c) + &(d * d), one.clone()),
        (&(d * c) + &(c * d), zero.clone()),
        (&(&(&dpf * &dpf) + &(d * d)) - &one, zero.clone()),
        (&(d * &dpf) + &(&dpf * d), zero),
    ];
    pairs.iter().map(|(l, r)| l.equals(r)).collect()
}
