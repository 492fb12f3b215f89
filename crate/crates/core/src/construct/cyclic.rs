//! Matrix model of the fixed-point algebra of the cyclic automorphism.
//!
//! O_n is represented in M_n(O_n) by S_k ↦ T_k with
//! (T_l)_{h,k} = n^{-1/2} ζ^{l(h−k)} S_k, that is T_l = n^{-1/2} Z^l V Z^{-l}
//! where Z = diag(ζ^{k−1}) and every row of V is (S_1, …, S_n). The image
//! is the set of matrices with A_{h+1,k+1} = λ_C(A_{h,k}).
//!
//! Identities whose index sign has two readings are checked both ways: the
//! `_as_printed` checks use the reversed sign and hold only when n ≤ 2.

use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use super::{congruent, cuntz_matrix_verdicts, cuntz_verdicts, wrap};
use crate::algebra::{Element, Rank, Word};
use crate::error::{Error, Result};
use crate::matrix::{MatPredicate, MatVerdict, OpMatrix};
use crate::morphism::{cyclic_unitary, named_endo, Endo, EndoKind};
use crate::random::{self, ElementSpec, Sampling};
use crate::report::CheckRecord;
use crate::scalar::{Backend, Scalar};

pub const MAX_MODEL_RANK: usize = 12;

#[derive(Clone)]
pub struct CyclicModel<B: Backend> {
    backend: B,
    rank: Rank,
    lambda: Endo<B::Scalar>,
    inv_sqrt_n: B::Scalar,
    /// v = Σ_k ζ^k S_k S_k*.
    pub v: Element<B::Scalar>,
    pub z: OpMatrix<B::Scalar>,
    pub vmat: OpMatrix<B::Scalar>,
    /// `t[l − 1]` is T_l.
    pub t: Vec<OpMatrix<B::Scalar>>,
    t_adj: Vec<OpMatrix<B::Scalar>>,
    /// w_{p,q} = δ_{p−q+1,0} mod n.
    pub w: OpMatrix<B::Scalar>,
    w_pows: Vec<OpMatrix<B::Scalar>>,
    /// `s[l − 1]` is diag(λ_C^{h−1}(S_l)).
    pub s: Vec<OpMatrix<B::Scalar>>,
    /// n^{-1/2} Σ_k S_k.
    pub big_t: Element<B::Scalar>,
    /// `r[l]` is Ad(v^l)(bigT), l = 0..n−1.
    pub r: Vec<Element<B::Scalar>>,
}

impl<B: Backend> CyclicModel<B> {
    pub fn new(b: &B, n: usize) -> Result<Self> {
        let rank = Rank::new(n)?;
        if n > MAX_MODEL_RANK {
            return Err(Error::InvalidArgument(format!("model rank {n} exceeds {MAX_MODEL_RANK}")));
        }
        let lambda = named_endo(b, EndoKind::Cyclic, n)?;
        let inv_sqrt_n = b.inv_sqrt(n as u32);
        let scalar = |c: B::Scalar| Element::scalar(rank, c);

        let z = OpMatrix::diagonal(rank, (1..=n).map(|k| scalar(b.root_of_unity(n as u32, k as i64 - 1))).collect());
        let z_adj = z.adjoint();
        let vmat = OpMatrix::from_fn(n, rank, |_, k| Element::generator(b, rank, k as i64));

        let mut t = Vec::with_capacity(n);
        let (mut zl, mut zl_adj) = (z.clone(), z_adj.clone());
        for _ in 1..=n {
            t.push((&(&zl * &vmat) * &zl_adj).scale(&inv_sqrt_n));
            zl = &zl * &z;
            zl_adj = &zl_adj * &z_adj;
        }
        let t_adj = t.iter().map(OpMatrix::adjoint).collect();

        let w = OpMatrix::from_fn(n, rank, |p, q| {
            if congruent(p as i64 - q as i64 + 1, 0, n) {
                Element::one(b, rank)
            } else {
                Element::zero(rank)
            }
        });
        let mut w_pows = vec![OpMatrix::identity(b, n, rank)];
        for j in 1..n {
            w_pows.push(&w_pows[j - 1] * &w);
        }

        let s = (1..=n)
            .map(|l| diag_orbit(&lambda, &Element::generator(b, rank, l as i64)))
            .collect::<Result<Vec<_>>>()?;

        let mut big_t = Element::zero(rank);
        for k in 1..=n {
            big_t = &big_t + &Element::generator(b, rank, k as i64);
        }
        let big_t = big_t.scale(&inv_sqrt_n);

        let v = cyclic_unitary(b, rank);
        let v_adj = v.adjoint();
        let mut r = Vec::with_capacity(n);
        let (mut vl, mut vl_adj) = (Element::one(b, rank), Element::one(b, rank));
        for _ in 0..n {
            r.push(&(&vl * &big_t) * &vl_adj);
            vl = &vl * &v;
            vl_adj = &vl_adj * &v_adj;
        }

        Ok(Self { backend: b.clone(), rank, lambda, inv_sqrt_n, v, z, vmat, t, t_adj, w, w_pows, s, big_t, r })
    }

    pub fn n(&self) -> usize {
        self.rank.get()
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn lambda_c(&self) -> &Endo<B::Scalar> {
        &self.lambda
    }

    /// T_l, index taken mod n.
    pub fn t_of(&self, l: i64) -> &OpMatrix<B::Scalar> {
        &self.t[wrap(l, self.n()) - 1]
    }

    /// s_l, index taken mod n.
    pub fn s_of(&self, l: i64) -> &OpMatrix<B::Scalar> {
        &self.s[wrap(l, self.n()) - 1]
    }

    /// w^j for any integer j.
    pub fn w_pow(&self, j: i64) -> &OpMatrix<B::Scalar> {
        &self.w_pows[j.rem_euclid(self.n() as i64) as usize]
    }

    /// n^{-1/2} ζ^{l(h−k)} S_k.
    pub fn entry_formula(&self, l: i64, h: usize, k: usize) -> Element<B::Scalar> {
        let phase = self.backend.root_of_unity(self.n() as u32, l * (h as i64 - k as i64));
        Element::generator(&self.backend, self.rank, k as i64).scale(&phase.mul(&self.inv_sqrt_n))
    }

    /// The representation S_k ↦ T_k.
    pub fn alpha(&self, x: &Element<B::Scalar>) -> Result<OpMatrix<B::Scalar>> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.n(), right: x.rank().get() });
        }
        // With u_c = Σ_j ζ^{c(j−1)} S_j and P_c = Σ_j ζ^{c(j−1)} S_jS_j*, a word
        // a_1…a_p maps to n^{-p/2} Z^{a_1} (x V) Z^{-a_p} with x = Π u_{a_{i+1}−a_i}.
        // Hence for nonempty α, β the (h, k) entry of T_α T_β* is
        // ζ^{a_1(h−1) − b_1(k−1)} n^{-(|α|+|β|)/2} x_α P_{b_q − a_p} x_β*.
        let n = self.n();
        let b = &self.backend;
        let zeta = |e: i64| b.root_of_unity(n as u32, e);
        let u: Vec<Element<B::Scalar>> = (0..n as i64)
            .map(|c| self.phase_sum(|j| Element::generator(b, self.rank, j), c))
            .collect();
        let p: Vec<Element<B::Scalar>> = (0..n as i64)
            .map(|c| self.phase_sum(|j| Element::range_projection(b, self.rank, j), c))
            .collect();
        let chain = |w: &[u8]| -> Result<Element<B::Scalar>> {
            let mut x = Element::one(b, self.rank);
            for pair in w.windows(2) {
                x = x.checked_mul(&u[(pair[1] as i64 - pair[0] as i64).rem_euclid(n as i64) as usize])?;
            }
            Ok(x)
        };
        let mut inv_pows = vec![b.one()];
        let mut words: HashMap<Vec<u8>, OpMatrix<B::Scalar>> = HashMap::new();
        let mut groups: BTreeMap<(usize, usize), Element<B::Scalar>> = BTreeMap::new();
        let mut out = OpMatrix::zeros(n, self.rank);
        for (m, c) in x.terms() {
            let (al, be) = (m.alpha.letters(), m.beta.letters());
            if al.is_empty() || be.is_empty() {
                let term = match (al.is_empty(), be.is_empty()) {
                    (true, true) => OpMatrix::identity(b, n, self.rank),
                    (false, true) => self.word_image(&mut words, &m.alpha)?,
                    _ => self.word_image(&mut words, &m.beta)?.adjoint(),
                };
                out = out.checked_add(&term.scale(c))?;
                continue;
            }
            let len = al.len() + be.len();
            while inv_pows.len() <= len {
                let next = inv_pows[inv_pows.len() - 1].mul(&self.inv_sqrt_n);
                inv_pows.push(next);
            }
            let mid = &p[(be[be.len() - 1] as i64 - al[al.len() - 1] as i64).rem_euclid(n as i64) as usize];
            let e = chain(al)?.checked_mul(mid)?.checked_mul(&chain(be)?.adjoint())?;
            let e = e.scale(&c.mul(&inv_pows[len]));
            let slot = groups.entry((al[0] as usize % n, be[0] as usize % n)).or_insert_with(|| Element::zero(self.rank));
            *slot = slot.checked_add(&e)?;
        }
        // Σ_{a,b} ζ^{a(h−1)} ζ^{−b(k−1)} E_{a,b}, summed over a first.
        let mut by_row: BTreeMap<(usize, usize), Element<B::Scalar>> = BTreeMap::new();
        for ((a1, b1), e) in &groups {
            for h in 1..=n {
                let slot = by_row.entry((h, *b1)).or_insert_with(|| Element::zero(self.rank));
                *slot = slot.checked_add(&e.scale(&zeta(*a1 as i64 * (h as i64 - 1))))?;
            }
        }
        let mut entries = vec![Element::zero(self.rank); n * n];
        for ((h, b1), g) in &by_row {
            for k in 1..=n {
                let slot = &mut entries[(h - 1) * n + (k - 1)];
                *slot = slot.checked_add(&g.scale(&zeta(-(*b1 as i64) * (k as i64 - 1))))?;
            }
        }
        out = out.checked_add(&OpMatrix::from_fn(n, self.rank, |h, k| std::mem::replace(&mut entries[(h - 1) * n + (k - 1)], Element::zero(self.rank))))?;
        Ok(out)
    }

    fn phase_sum(&self, f: impl Fn(i64) -> Element<B::Scalar>, c: i64) -> Element<B::Scalar> {
        let mut acc = Element::zero(self.rank);
        for j in 1..=self.n() as i64 {
            acc = &acc + &f(j).scale(&self.backend.root_of_unity(self.n() as u32, c * (j - 1)));
        }
        acc
    }

    /// T_α for a word α, memoized on its prefixes.
    fn word_image(&self, cache: &mut HashMap<Vec<u8>, OpMatrix<B::Scalar>>, word: &Word) -> Result<OpMatrix<B::Scalar>> {
        let letters = word.letters();
        let mut known = letters.len();
        while known > 0 && !cache.contains_key(&letters[..known]) {
            known -= 1;
        }
        let mut acc = match cache.get(&letters[..known]) {
            Some(m) => m.clone(),
            None => OpMatrix::identity(&self.backend, self.n(), self.rank),
        };
        for i in known..letters.len() {
            acc = acc.checked_mul(&self.t[letters[i] as usize - 1])?;
            cache.insert(letters[..=i].to_vec(), acc.clone());
        }
        Ok(acc)
    }

    /// Ad(Z)(A) = Z A Z*.
    pub fn ad_z(&self, a: &OpMatrix<B::Scalar>) -> Result<OpMatrix<B::Scalar>> {
        a.conjugate_by(&self.z)
    }

    pub fn check_compatible(&self, a: &OpMatrix<B::Scalar>) -> Result<MatVerdict> {
        check_cyclic_compatible(&self.lambda, a)
    }

    /// Σ_{l=0}^{n−1} D_{l+1} w^l with D_l = diag(λ_C^{h−1}(row_l)).
    pub fn reconstruct_from_first_row(&self, row: &[Element<B::Scalar>]) -> Result<OpMatrix<B::Scalar>> {
        if row.len() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: row.len() });
        }
        let mut out = OpMatrix::zeros(self.n(), self.rank);
        for (l, a) in row.iter().enumerate() {
            let d = diag_orbit(&self.lambda, a)?;
            out = out.checked_add(&d.checked_mul(self.w_pow(l as i64))?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n(),
            "v": self.v.to_json(),
            "Z": self.z.to_json(),
            "V": self.vmat.to_json(),
            "T": self.t.iter().map(OpMatrix::to_json).collect::<Vec<_>>(),
            "w": self.w.to_json(),
            "s": self.s.iter().map(OpMatrix::to_json).collect::<Vec<_>>(),
            "bigT": self.big_t.to_json(),
            "R": self.r.iter().map(Element::to_json).collect::<Vec<_>>(),
        })
    }

    fn realize_row(&self, row: &[ElementSpec]) -> Vec<Element<B::Scalar>> {
        row.iter().map(|e| e.realize(&self.backend)).collect()
    }

    /// Identities of the matrix model: entry formula, isometries, the
    /// permutation w and its powers, α(bigT), conjugation of the s_l.
    pub fn model_checks(&self, sampling: &Sampling) -> Vec<CheckRecord> {
        let n = self.n();
        let ni = n as i64;
        let b = &self.backend;
        let id = OpMatrix::identity(b, n, self.rank);
        let one = &Element::one(b, self.rank);
        let zero = &Element::zero(self.rank);
        let mut out = Vec::new();

        out.push(CheckRecord::evaluate("T_entry_formula", "(T_l)_{h,k} = n^-1/2 zeta^{l(h-k)} S_k for all l, h, k", |v| {
            for l in 1..=n {
                for h in 1..=n {
                    for k in 1..=n {
                        v.push(self.t[l - 1].get(h, k).equals(&self.entry_formula(l as i64, h, k))?);
                    }
                }
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("T_isometries", "T_l* T_l = I", |v| {
            for t in &self.t {
                v.push(t.predicate(b, MatPredicate::Isometry)?.holds);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("T_ranges_sum_to_identity", "sum_l T_l T_l* = I", |v| {
            let mut sum = OpMatrix::zeros(n, self.rank);
            for (t, ta) in self.t.iter().zip(&self.t_adj) {
                sum = sum.checked_add(&t.checked_mul(ta)?)?;
            }
            v.push(sum.equals(&id)?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("T_cyclic_compatible", "every T_l satisfies A_{h+1,k+1} = lambda_C(A_{h,k})", |v| {
            for t in &self.t {
                v.push(self.check_compatible(t)?.holds);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("s_isometries", "s_l* s_l = I", |v| {
            for s in &self.s {
                v.push(s.predicate(b, MatPredicate::Isometry)?.holds);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("w_unitary", "w* w = w w* = I", |v| {
            v.push(self.w.predicate(b, MatPredicate::Unitary)?.holds);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("alpha_v_equals_w", "alpha(v) = w with w_{p,q} = delta_{p-q+1,0}", |v| {
            v.push(self.alpha(&self.v)?.equals(&self.w)?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("alpha_bigT_equals_s1", "alpha(bigT) = s_1", |v| {
            v.push(self.alpha(&self.big_t)?.equals(&self.s[0])?);
            Ok(())
        }));

        let w_power_pattern = |sign: i64| {
            move |v: &mut Vec<bool>| -> Result<()> {
                for j in 1..=ni {
                    let pattern = OpMatrix::from_fn(n, self.rank, |h, k| {
                        if congruent(k as i64 - h as i64, sign * j, n) {
                            one.clone()
                        } else {
                            zero.clone()
                        }
                    });
                    v.push(self.w_pow(j).equals(&pattern)?);
                }
                Ok(())
            }
        };
        out.push(CheckRecord::evaluate("w_powers", "(w^j)_{h,k} = delta_{k-h,j}, j = 1..n", w_power_pattern(1)));
        out.push(CheckRecord::evaluate(
            "w_powers_as_printed",
            "(w^j)_{h,k} = delta_{k-h,-j}, j = 1..n",
            w_power_pattern(-1),
        ));

        let conjugated_s = |shift: i64| {
            move |v: &mut Vec<bool>| -> Result<()> {
                let wa = self.w.adjoint();
                for l in 1..=ni {
                    let lhs = self.w.checked_mul(self.s_of(l))?.checked_mul(&wa)?;
                    v.push(lhs.equals(self.s_of(l + shift))?);
                }
                Ok(())
            }
        };
        out.push(CheckRecord::evaluate("w_s_w_adjoint", "w s_l w* = s_{l+1}, index mod n", conjugated_s(1)));
        out.push(CheckRecord::evaluate(
            "w_s_w_adjoint_as_printed",
            "w s_l w* = s_{l-1}, with w s_1 w* = s_n",
            conjugated_s(-1),
        ));

        let shifted_entries = |sign: i64| {
            move |v: &mut Vec<bool>| -> Result<()> {
                for j in 1..=ni {
                    for l in 1..=ni {
                        let lhs = self.w_pow(j).checked_mul(self.s_of(l))?;
                        let expected = OpMatrix::from_fn(n, self.rank, |h, k| {
                            if congruent(k as i64 - h as i64, sign * j, n) {
                                Element::generator(b, self.rank, k as i64 + l - 1)
                            } else {
                                zero.clone()
                            }
                        });
                        v.push(lhs.equals(&expected)?);
                    }
                }
                Ok(())
            }
        };
        out.push(CheckRecord::evaluate(
            "w_power_s_entries",
            "(w^j s_l)_{h,k} = S_{k+l-1} delta_{k-h,j}",
            shifted_entries(1),
        ));
        out.push(CheckRecord::evaluate(
            "w_power_s_entries_as_printed",
            "(w^j s_l)_{h,k} = S_{k+l-1} delta_{k-h,-j}",
            shifted_entries(-1),
        ));

        out.push(CheckRecord::evaluate(
            "products_cyclic_compatible",
            "T_a T_b, T_a T_b*, T_a* T_b are cyclic-compatible",
            |v| {
                for a in 0..n {
                    for c in 0..n {
                        for prod in [
                            self.t[a].checked_mul(&self.t[c])?,
                            self.t[a].checked_mul(&self.t_adj[c])?,
                            self.t_adj[a].checked_mul(&self.t[c])?,
                        ] {
                            v.push(self.check_compatible(&prod)?.holds);
                        }
                    }
                }
                Ok(())
            },
        ));
        out.push(CheckRecord::evaluate(
            "AdZ_fixes_orbit_diagonals",
            "diag(lambda_C^{h-1}(x)) is fixed by Ad(Z) on random x",
            |v| {
                let mut rng = sampling.rng(11);
                for _ in 0..sampling.samples {
                    let x = random::element(&mut rng, self.rank, 3, 2).realize(b);
                    let d = diag_orbit(&self.lambda, &x)?;
                    v.push(self.ad_z(&d)?.equals(&d)?);
                }
                Ok(())
            },
        ));
        out.push(CheckRecord::evaluate("AdZ_moves_T1", "Ad(Z)(T_1) differs from T_1", |v| {
            v.push(!self.ad_z(&self.t[0])?.equals(&self.t[0])?);
            Ok(())
        }));
        out
    }

    /// Reconstruction from first rows and rejection of perturbed matrices.
    pub fn membership_checks(&self, sampling: &Sampling) -> Vec<CheckRecord> {
        let n = self.n();
        let b = &self.backend;
        let mut out = Vec::new();

        out.push(CheckRecord::evaluate(
            "reconstruction_known_members",
            "first rows of I, w, T_l, s_l reconstruct the matrix",
            |v| {
                let mut known = vec![OpMatrix::identity(b, n, self.rank), self.w.clone()];
                known.extend(self.t.iter().cloned());
                known.extend(self.s.iter().cloned());
                for a in &known {
                    v.push(self.reconstruct_from_first_row(&a.row(1))?.equals(a)?);
                }
                Ok(())
            },
        ));
        out.push(CheckRecord::evaluate(
            "reconstruction_random_rows",
            "random first rows reconstruct to compatible matrices with that first row",
            |v| {
                let mut rng = sampling.rng(21);
                for _ in 0..sampling.samples {
                    let row = self.realize_row(&random::row(&mut rng, self.rank, n, 3, 2));
                    let a = self.reconstruct_from_first_row(&row)?;
                    v.push(self.check_compatible(&a)?.holds);
                    let mut same = true;
                    for (k, x) in row.iter().enumerate() {
                        same &= a.get(1, k + 1).equals(x)?;
                    }
                    v.push(same);
                }
                Ok(())
            },
        ));
        let mut witness = None;
        let mut rec = CheckRecord::evaluate(
            "noncompatible_rejected",
            "perturbed matrices are rejected at the first broken relation",
            |v| {
                let mut rng = sampling.rng(22);
                for _ in 0..sampling.samples {
                    let row = self.realize_row(&random::row(&mut rng, self.rank, n, 3, 2));
                    let mut a = self.reconstruct_from_first_row(&row)?;
                    let (h0, k0) = (random::index(&mut rng, n) + 1, random::index(&mut rng, n) + 1);
                    let d = loop {
                        let d = random::element(&mut rng, self.rank, 2, 2).realize(b);
                        if !d.is_zero()? {
                            break d;
                        }
                    };
                    a.set(h0, k0, a.get(h0, k0).checked_add(&d)?);
                    // The relations at (h0, k0) and (h0 − 1, k0 − 1) both break.
                    let prev = (wrap(h0 as i64 - 1, n), wrap(k0 as i64 - 1, n));
                    let expected = std::cmp::min((h0, k0), prev);
                    let verdict = self.check_compatible(&a)?;
                    let ok = !verdict.holds && verdict.first_failure == Some(expected);
                    if !ok && witness.is_none() {
                        witness = Some(json!({
                            "perturbed": [h0, k0],
                            "expected": [expected.0, expected.1],
                            "reported": verdict.first_failure.map(|(h, k)| vec![h, k]),
                        }));
                    }
                    v.push(ok);
                }
                Ok(())
            },
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        out.push(rec);
        out
    }

    /// The generators R_l of the fixed-point algebra and their images.
    pub fn fixed_generator_checks(&self, sampling: &Sampling) -> Vec<CheckRecord> {
        let n = self.n() as i64;
        let b = &self.backend;
        let mut out = Vec::new();
        out.push(CheckRecord::evaluate("R_fixed_by_lambda_C", "lambda_C(R_l) = R_l", |v| {
            for r in &self.r {
                v.push(self.lambda.is_fixed(r)?);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("R_cuntz_relations", "R_i* R_j = delta_ij and sum_l R_l R_l* = 1", |v| {
            v.extend(cuntz_verdicts(b, &self.r)?);
            Ok(())
        }));
        let alpha_r = |target: fn(i64, i64) -> i64| {
            move |v: &mut Vec<bool>| -> Result<()> {
                for (l, r) in self.r.iter().enumerate() {
                    v.push(self.alpha(r)?.equals(self.s_of(target(l as i64, n)))?);
                }
                Ok(())
            }
        };
        out.push(CheckRecord::evaluate("alpha_R", "alpha(R_l) = s_{1+l}", alpha_r(|l, _| 1 + l)));
        out.push(CheckRecord::evaluate("alpha_R_as_printed", "alpha(R_l) = s_{1-l+n}", alpha_r(|l, n| 1 - l + n)));
        out.push(CheckRecord::evaluate(
            "alpha_intertwines_lambda_C",
            "alpha(lambda_C(x)) = Ad(Z)(alpha(x)) on random x",
            |v| {
                let mut rng = sampling.rng(31);
                for _ in 0..sampling.samples {
                    let x = random::element(&mut rng, self.rank, 3, 2).realize(b);
                    let lhs = self.alpha(&self.lambda.apply(&x)?)?;
                    v.push(lhs.equals(&self.ad_z(&self.alpha(&x)?)?)?);
                }
                Ok(())
            },
        ));
        out
    }

    /// Cuntz relations of the T_l inside M_n(O_n).
    pub fn t_cuntz_verdicts(&self) -> Result<Vec<bool>> {
        cuntz_matrix_verdicts(&self.backend, &self.t)
    }
}

/// diag(x, λ(x), …, λ^{n−1}(x)).
pub fn diag_orbit<S: Scalar>(lambda: &Endo<S>, x: &Element<S>) -> Result<OpMatrix<S>> {
    let n = lambda.rank().get();
    let mut diag = Vec::with_capacity(n);
    let mut cur = x.clone();
    for h in 0..n {
        if h > 0 {
            cur = lambda.apply(&cur)?;
        }
        diag.push(cur.clone());
    }
    Ok(OpMatrix::diagonal(lambda.rank(), diag))
}

/// λ_C(A_{h,k}) = A_{h+1,k+1} for all h, k (indices mod n); reports the
/// first (h, k) in row-major order where the relation fails.
pub fn check_cyclic_compatible<S: Scalar>(lambda_c: &Endo<S>, a: &OpMatrix<S>) -> Result<MatVerdict> {
    let n = lambda_c.rank().get();
    if a.size() != n {
        return Err(Error::DimensionMismatch { left: n, right: a.size() });
    }
    if a.rank() != lambda_c.rank() {
        return Err(Error::RankMismatch { left: n, right: a.rank().get() });
    }
    for h in 1..=n {
        for k in 1..=n {
            let next = a.get(wrap(h as i64 + 1, n), wrap(k as i64 + 1, n));
            if !lambda_c.apply(a.get(h, k))?.equals(next)? {
                return Ok(MatVerdict { holds: false, first_failure: Some((h, k)) });
            }
        }
    }
    Ok(MatVerdict { holds: true, first_failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::scalar::{CycloScalar, Exact};

    fn model(n: usize) -> CyclicModel<Exact> {
        CyclicModel::new(&Exact, n).unwrap()
    }

    // Oracle: multiply the T matrices letter by letter.
    fn alpha_by_products(m: &CyclicModel<Exact>, x: &Element<CycloScalar>) -> OpMatrix<CycloScalar> {
        let mut out = OpMatrix::zeros(m.n(), m.rank());
        for (mono, c) in x.terms() {
            let mut acc = OpMatrix::identity(&Exact, m.n(), m.rank());
            for &l in mono.alpha.letters() {
                acc = &acc * &m.t[l as usize - 1];
            }
            for &l in mono.beta.letters().iter().rev() {
                acc = &acc * &m.t[l as usize - 1].adjoint();
            }
            out = &out + &acc.scale(c);
        }
        out
    }

    #[test]
    fn alpha_matches_letterwise_products() {
        for n in 2..=4 {
            let m = model(n);
            let mut rng = random::stream(7, n as u64);
            for _ in 0..6 {
                let x = random::element(&mut rng, m.rank(), 4, 3).realize(&Exact);
                assert!(m.alpha(&x).unwrap().equals(&alpha_by_products(&m, &x)).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn w_is_the_expected_three_cycle() {
        let m = model(3);
        let ones: Vec<(usize, usize)> = (1..=3)
            .flat_map(|h| (1..=3).map(move |k| (h, k)))
            .filter(|&(h, k)| !m.w.get(h, k).is_empty())
            .collect();
        assert_eq!(ones, [(1, 2), (2, 3), (3, 1)]);
        assert!(m.alpha(&m.v).unwrap().equals(&m.w).unwrap());
    }

    #[test]
    fn rank_two_generators() {
        let m = model(2);
        let s1 = Element::generator(&Exact, m.rank(), 1);
        let s2 = Element::generator(&Exact, m.rank(), 2);
        let r2 = Exact.inv_sqrt(2);
        assert!(m.r[0].equals(&(&s1 + &s2).scale(&r2)).unwrap());
        let r1 = (&(&m.v * &(&s1 + &s2)) * &m.v.adjoint()).scale(&r2);
        assert!(m.r[1].equals(&r1).unwrap());
    }

    #[test]
    fn rank_two_t_matrices_are_the_sign_patterns() {
        // T_1 carries the alternating signs, T_2 = V/√2.
        let m = model(2);
        let r2 = Exact.inv_sqrt(2);
        let g = |i| Element::generator(&Exact, m.rank(), i);
        let plus = OpMatrix::from_fn(2, m.rank(), |_, k| g(k as i64).scale(&r2));
        let signed = OpMatrix::from_fn(2, m.rank(), |h, k| {
            let e = g(k as i64).scale(&r2);
            if h == k {
                e
            } else {
                e.negate()
            }
        });
        assert!(m.t[0].equals(&signed).unwrap());
        assert!(m.t[1].equals(&plus).unwrap());
    }

    #[test]
    fn compatibility_examples() {
        let m = model(3);
        let mut single = OpMatrix::zeros(3, m.rank());
        single.set(1, 1, Element::generator(&Exact, m.rank(), 1));
        let verdict = m.check_compatible(&single).unwrap();
        assert!(!verdict.holds);
        assert_eq!(verdict.first_failure, Some((1, 1)));
        assert!(m.check_compatible(&(&m.w * &m.s[1])).unwrap().holds);
        let bad = OpMatrix::<CycloScalar>::zeros(2, m.rank());
        assert!(matches!(m.check_compatible(&bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reconstruction_examples() {
        let m = model(4);
        let one = Element::one(&Exact, m.rank());
        let zero = Element::zero(m.rank());
        let id_row = vec![one.clone(), zero.clone(), zero.clone(), zero.clone()];
        assert!(m.reconstruct_from_first_row(&id_row).unwrap().equals(&OpMatrix::identity(&Exact, 4, m.rank())).unwrap());
        let w_row = vec![zero.clone(), one, zero.clone(), zero];
        assert!(m.reconstruct_from_first_row(&w_row).unwrap().equals(&m.w).unwrap());
        assert!(m.reconstruct_from_first_row(&m.t[0].row(1)).unwrap().equals(&m.t[0]).unwrap());
        assert!(m.reconstruct_from_first_row(&m.t[0].row(1)[..3]).is_err());
    }

    #[test]
    fn mutated_generator_is_not_fixed() {
        let mut m = model(2);
        m.r[0] = Element::generator(&Exact, m.rank(), 1);
        let checks = m.fixed_generator_checks(&Sampling { seed: 1, samples: 2 });
        let fixed = checks.iter().find(|c| c.id == "R_fixed_by_lambda_C").unwrap();
        assert_eq!(fixed.status, Status::Fail);
    }

    #[test]
    fn rank_two_everything_passes() {
        let m = model(2);
        let sampling = Sampling { seed: 5, samples: 5 };
        for c in m
            .model_checks(&sampling)
            .into_iter()
            .chain(m.membership_checks(&sampling))
            .chain(m.fixed_generator_checks(&sampling))
        {
            assert_eq!(c.status, Status::Pass, "{}: {}", c.id, c.detail);
        }
    }

    #[test]
    fn t_family_satisfies_cuntz_relations() {
        for n in 2..=4 {
            assert!(model(n).t_cuntz_verdicts().unwrap().into_iter().all(|v| v));
        }
    }
}
