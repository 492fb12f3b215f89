//! Exchange automorphism λ_E on O_{2n} in the matrix picture of M_{2n}(O_{2n}).

use serde_json::json;

use super::cyclic::check_cyclic_compatible;
use super::{congruent, cuntz_matrix_verdicts, cuntz_verdicts, CyclicModel};
use crate::algebra::{Element, Monomial, Rank, Word};
use crate::error::{Error, Result};
use crate::matrix::{MatVerdict, OpMatrix};
use crate::morphism::{named_endo, Endo, EndoKind};
use crate::random::{self, ElementSpec, Sampling};
use crate::report::CheckRecord;
use crate::scalar::{Backend, Scalar};

/// Which normalization of the y family a run covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    Scaled,
    Unscaled,
    #[default]
    Both,
}

impl Normalization {
    pub fn covers_scaled(self) -> bool {
        self != Normalization::Unscaled
    }

    pub fn covers_unscaled(self) -> bool {
        self != Normalization::Scaled
    }
}

#[derive(Clone)]
pub struct ExchangeModel<B: Backend> {
    half: usize,
    /// Cyclic model of rank 2n; supplies Z, T, w, s and bigT.
    pub cyclic: CyclicModel<B>,
    lambda_e: Endo<B::Scalar>,
    /// S_k ↦ S_{σ(k)} with TT_k = T_{σ(k)}.
    relabel: Endo<B::Scalar>,
    z_half: OpMatrix<B::Scalar>,
    /// `tt[k − 1]` is TT_k.
    pub tt: Vec<OpMatrix<B::Scalar>>,
    pub tilde_v: Element<B::Scalar>,
    /// `y_unscaled[j][l]` = Ad(ṽ^l)(ṽ^{2j} bigT).
    pub y_unscaled: Vec<Vec<Element<B::Scalar>>>,
    pub y_scaled: Vec<Vec<Element<B::Scalar>>>,
    /// `s_tilde_unscaled[j][l]` = w^{2j} s_{l+1}.
    pub s_tilde_unscaled: Vec<Vec<OpMatrix<B::Scalar>>>,
    pub s_tilde_scaled: Vec<Vec<OpMatrix<B::Scalar>>>,
}

impl<B: Backend> ExchangeModel<B> {
    /// Model on O_{2n}; `half` is n.
    pub fn new(b: &B, half: usize) -> Result<Self> {
        if half == 0 {
            return Err(Error::InvalidArgument("exchange model needs n >= 1".into()));
        }
        let m = 2 * half;
        let cyclic = CyclicModel::new(b, m)?;
        let rank = cyclic.rank();
        let lambda_e = named_endo(b, EndoKind::Exchange, m)?;

        let sigma = |k: usize| if k <= half { k } else { 3 * half - k + 1 };
        let relabel = Endo::new(
            b,
            rank,
            (1..=m).map(|k| Element::generator(b, rank, sigma(k) as i64)).collect(),
            true,
        )?;
        let tt = (1..=m).map(|k| cyclic.t[sigma(k) - 1].clone()).collect();

        let z_half = cyclic.z.pow(b, half);

        let proj = |k: usize, c: B::Scalar| {
            let w = Word::new(vec![k as u8]);
            (Monomial::new(w.clone(), w), c)
        };
        let tilde_v = Element::from_terms(
            rank,
            (1..=half).flat_map(|k| {
                [
                    proj(k, b.root_of_unity(m as u32, k as i64)),
                    proj(m - k + 1, b.root_of_unity(m as u32, (k + half) as i64)),
                ]
            }),
        );

        let scale = b.inv_sqrt(m as u32);
        let tv_adj = tilde_v.adjoint();
        let mut y_unscaled = Vec::with_capacity(half);
        let mut tv_2j = Element::one(b, rank);
        for _ in 0..half {
            let base = &tv_2j * &cyclic.big_t;
            let mut row = Vec::with_capacity(m);
            let (mut vl, mut vl_adj) = (Element::one(b, rank), Element::one(b, rank));
            for _ in 0..m {
                row.push(&(&vl * &base) * &vl_adj);
                vl = &vl * &tilde_v;
                vl_adj = &vl_adj * &tv_adj;
            }
            y_unscaled.push(row);
            tv_2j = &(&tv_2j * &tilde_v) * &tilde_v;
        }
        let y_scaled = y_unscaled.iter().map(|row| row.iter().map(|y| y.scale(&scale)).collect()).collect();

        let s_tilde_unscaled: Vec<Vec<OpMatrix<B::Scalar>>> = (0..half as i64)
            .map(|j| (0..m as i64).map(|l| cyclic.w_pow(2 * j) * cyclic.s_of(l + 1)).collect())
            .collect();
        let s_tilde_scaled =
            s_tilde_unscaled.iter().map(|row| row.iter().map(|s| s.scale(&scale)).collect()).collect();

        Ok(Self {
            half,
            cyclic,
            lambda_e,
            relabel,
            z_half,
            tt,
            tilde_v,
            y_unscaled,
            y_scaled,
            s_tilde_unscaled,
            s_tilde_scaled,
        })
    }

    /// Ambient rank 2n.
    pub fn m(&self) -> usize {
        2 * self.half
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn rank(&self) -> Rank {
        self.cyclic.rank()
    }

    pub fn lambda_e(&self) -> &Endo<B::Scalar> {
        &self.lambda_e
    }

    /// ρ = Ad(Z^n).
    pub fn rho(&self, a: &OpMatrix<B::Scalar>) -> Result<OpMatrix<B::Scalar>> {
        a.conjugate_by(&self.z_half)
    }

    /// β: S_k ↦ TT_k.
    pub fn beta(&self, x: &Element<B::Scalar>) -> Result<OpMatrix<B::Scalar>> {
        self.cyclic.alpha(&self.relabel.apply(x)?)
    }

    pub fn check_parity(&self, a: &OpMatrix<B::Scalar>) -> Result<MatVerdict> {
        check_parity_compatible(self.cyclic.lambda_c(), a)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mats = |rows: &Vec<Vec<OpMatrix<B::Scalar>>>| -> Vec<Vec<serde_json::Value>> {
            rows.iter().map(|r| r.iter().map(OpMatrix::to_json).collect()).collect()
        };
        let elems = |rows: &Vec<Vec<Element<B::Scalar>>>| -> Vec<Vec<serde_json::Value>> {
            rows.iter().map(|r| r.iter().map(Element::to_json).collect()).collect()
        };
        json!({
            "n": self.m(),
            "Z": self.cyclic.z.to_json(),
            "T": self.tt.iter().map(OpMatrix::to_json).collect::<Vec<_>>(),
            "w": self.cyclic.w.to_json(),
            "bigT": self.cyclic.big_t.to_json(),
            "tilde_v": self.tilde_v.to_json(),
            "y": { "unscaled": elems(&self.y_unscaled), "scaled": elems(&self.y_scaled) },
            "s_tilde": { "unscaled": mats(&self.s_tilde_unscaled), "scaled": mats(&self.s_tilde_scaled) },
        })
    }

    pub fn checks(&self, sampling: &Sampling, normalization: Normalization) -> Vec<CheckRecord> {
        let m = self.m();
        let half = self.half as i64;
        let rank = self.rank();
        let b = self.cyclic.backend();
        let cyc = &self.cyclic;
        let zero = &Element::zero(rank);
        let mut out = Vec::new();

        out.push(CheckRecord::evaluate("rho_squared_is_identity", "rho(rho(A)) = A on random matrices", |v| {
            let mut rng = sampling.rng(41);
            for _ in 0..sampling.samples {
                let a = random::matrix(b, &mut rng, rank, m);
                v.push(self.rho(&self.rho(&a)?)?.equals(&a)?);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("rho_entry_sign_law", "rho(A)_{h,k} = (-1)^{h-k} A_{h,k} on random matrices", |v| {
            let mut rng = sampling.rng(42);
            for _ in 0..sampling.samples {
                let a = random::matrix(b, &mut rng, rank, m);
                let signed = OpMatrix::from_fn(m, rank, |h, k| {
                    if (h + k) % 2 == 0 {
                        a.get(h, k).clone()
                    } else {
                        a.get(h, k).negate()
                    }
                });
                v.push(self.rho(&a)?.equals(&signed)?);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("TT_relabeling", "rho(TT_k) = TT_{2n-k+1} = T_{k+n}, k = 1..n", |v| {
            for k in 1..=self.half {
                let image = self.rho(&self.tt[k - 1])?;
                v.push(image.equals(&self.tt[m - k])?);
                v.push(image.equals(&cyc.t[k + self.half - 1])?);
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("beta_tilde_v_equals_w", "beta(tilde_v) = w", |v| {
            v.push(self.beta(&self.tilde_v)?.equals(&cyc.w)?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("lambda_E_negates_tilde_v", "lambda_E(tilde_v) = -tilde_v", |v| {
            v.push(self.lambda_e.apply(&self.tilde_v)?.equals(&self.tilde_v.negate())?);
            Ok(())
        }));
        out.push(CheckRecord::evaluate("beta_bigT_equals_s1", "beta(bigT) = s_1", |v| {
            v.push(self.beta(&cyc.big_t)?.equals(&cyc.s[0])?);
            Ok(())
        }));

        let entry_law = |sign: i64| {
            move |v: &mut Vec<bool>| -> Result<()> {
                for j in 0..half {
                    for l in 0..m as i64 {
                        let expected = OpMatrix::from_fn(m, rank, |h, k| {
                            if congruent(k as i64 - h as i64, sign * 2 * j, m) {
                                Element::generator(b, rank, k as i64 + l)
                            } else {
                                zero.clone()
                            }
                        });
                        v.push(self.s_tilde_unscaled[j as usize][l as usize].equals(&expected)?);
                    }
                }
                Ok(())
            }
        };
        out.push(CheckRecord::evaluate(
            "s_tilde_entry_law",
            "(w^{2j} s_{l+1})_{h,k} = S_{k+l} delta_{k-h,2j}",
            entry_law(1),
        ));
        out.push(CheckRecord::evaluate(
            "s_tilde_entry_law_as_printed",
            "(w^{2j} s_{l+1})_{h,k} = S_{k+l} delta_{k-h,-2j}",
            entry_law(-1),
        ));
        out.push(CheckRecord::evaluate("s_tilde_parity_compatible", "every w^{2j} s_{l+1} is parity-compatible", |v| {
            for row in &self.s_tilde_unscaled {
                for s in row {
                    v.push(self.check_parity(s)?.holds);
                }
            }
            Ok(())
        }));
        out.push(CheckRecord::evaluate("w_not_parity_compatible", "w has entries on an odd diagonal", |v| {
            v.push(!self.check_parity(&cyc.w)?.holds);
            Ok(())
        }));
        out.push(CheckRecord::evaluate(
            "parity_law_random",
            "for random cyclic-compatible A, rho(A) = A iff A is parity-compatible",
            |v| {
                let mut rng = sampling.rng(43);
                for i in 0..sampling.samples {
                    let mut row: Vec<ElementSpec> = random::row(&mut rng, rank, m, 2, 2);
                    if i % 2 == 0 {
                        for (k, e) in row.iter_mut().enumerate() {
                            if k % 2 == 1 {
                                *e = ElementSpec::zero(rank);
                            }
                        }
                    }
                    let row: Vec<_> = row.iter().map(|e| e.realize(b)).collect();
                    let a = cyc.reconstruct_from_first_row(&row)?;
                    v.push(self.rho(&a)?.equals(&a)? == self.check_parity(&a)?.holds);
                }
                Ok(())
            },
        ));

        if normalization.covers_unscaled() {
            out.push(CheckRecord::evaluate("beta_y_unscaled", "beta(y_l^j) = w^{2j} s_{l+1}", |v| {
                for (j, row) in self.y_unscaled.iter().enumerate() {
                    for (l, y) in row.iter().enumerate() {
                        v.push(self.beta(y)?.equals(&self.s_tilde_unscaled[j][l])?);
                    }
                }
                Ok(())
            }));
            out.push(CheckRecord::evaluate("y_unscaled_fixed_by_lambda_E", "lambda_E(y_l^j) = y_l^j", |v| {
                for y in self.y_unscaled.iter().flatten() {
                    v.push(self.lambda_e.is_fixed(y)?);
                }
                Ok(())
            }));
            out.push(CheckRecord::evaluate(
                "y_unscaled_cuntz_relations",
                "for each j, {y_l^j}_l satisfies the relations of O_2n",
                |v| {
                    for row in &self.y_unscaled {
                        v.extend(cuntz_verdicts(b, row)?);
                    }
                    Ok(())
                },
            ));
            out.push(CheckRecord::evaluate(
                "s_tilde_unscaled_cuntz_relations",
                "for each j, {w^{2j} s_{l+1}}_l satisfies the relations of O_2n in M_2n(O_2n)",
                |v| {
                    for row in &self.s_tilde_unscaled {
                        v.extend(cuntz_matrix_verdicts(b, row)?);
                    }
                    Ok(())
                },
            ));
        }
        if normalization.covers_scaled() {
            out.push(CheckRecord::evaluate("beta_y_scaled", "beta((2n)^-1/2 y_l^j) = (2n)^-1/2 w^{2j} s_{l+1}", |v| {
                for (j, row) in self.y_scaled.iter().enumerate() {
                    for (l, y) in row.iter().enumerate() {
                        v.push(self.beta(y)?.equals(&self.s_tilde_scaled[j][l])?);
                    }
                }
                Ok(())
            }));
            out.push(CheckRecord::evaluate("y_scaled_fixed_by_lambda_E", "lambda_E fixes every scaled y_l^j", |v| {
                for y in self.y_scaled.iter().flatten() {
                    v.push(self.lambda_e.is_fixed(y)?);
                }
                Ok(())
            }));
            let verdicts = self
                .y_scaled
                .iter()
                .map(|row| cuntz_verdicts(b, row))
                .collect::<Result<Vec<_>>>()
                .map(|v| v.concat());
            out.push(match verdicts {
                Ok(v) => CheckRecord::finding(
                    "y_scaled_cuntz_relations_finding",
                    "scaled family {(2n)^-1/2 y_l^j}_l against the relations of O_2n",
                    false,
                    v,
                ),
                Err(e) => CheckRecord::new("y_scaled_cuntz_relations_finding", crate::report::Status::Fail, e.to_string()),
            });
        }

        if m == 2 {
            out.push(CheckRecord::evaluate(
                "rank_two_matches_flip_flop",
                "lambda_E = flip-flop = lambda_C and tilde_v = v at rank 2",
                |v| {
                    let ff = named_endo(b, EndoKind::FlipFlop, 2)?;
                    v.push(self.lambda_e.equals(&ff)?);
                    v.push(cyc.lambda_c().equals(&ff)?);
                    v.push(self.tilde_v.equals(&cyc.v)?);
                    for (tt, t) in self.tt.iter().zip(&cyc.t) {
                        v.push(tt.equals(t)?);
                    }
                    Ok(())
                },
            ));
        }
        out
    }
}

/// A_{h,k} = 0 whenever h − k is odd, and A is cyclic-compatible. Reports the
/// first offending (h, k) in row-major order, parity before compatibility.
pub fn check_parity_compatible<S: Scalar>(lambda_c: &Endo<S>, a: &OpMatrix<S>) -> Result<MatVerdict> {
    let size = a.size();
    if size % 2 != 0 {
        return Err(Error::InvalidArgument(format!("parity check needs even size, got {size}")));
    }
    for h in 1..=size {
        for k in 1..=size {
            if (h + k) % 2 == 1 && !a.get(h, k).is_zero()? {
                return Ok(MatVerdict { holds: false, first_failure: Some((h, k)) });
            }
        }
    }
    check_cyclic_compatible(lambda_c, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::scalar::Exact;

    #[test]
    fn rank_four_checks() {
        let model = ExchangeModel::new(&Exact, 2).unwrap();
        let checks = model.checks(&Sampling { seed: 3, samples: 4 }, Normalization::Both);
        for c in &checks {
            assert_eq!(c.status, Status::Pass, "{}: {}", c.id, c.detail);
        }
        assert!(checks.iter().any(|c| c.id == "y_scaled_cuntz_relations_finding"));
    }

    #[test]
    fn parity_examples() {
        let model = ExchangeModel::new(&Exact, 2).unwrap();
        let zero = OpMatrix::zeros(4, model.rank());
        assert!(model.check_parity(&zero).unwrap().holds);
        let w = model.check_parity(&model.cyclic.w).unwrap();
        assert_eq!(w.first_failure, Some((1, 2)));
        let odd = OpMatrix::zeros(3, Rank::new(3).unwrap());
        let l3 = named_endo(&Exact, EndoKind::Cyclic, 3).unwrap();
        assert!(check_parity_compatible(&l3, &odd).is_err());
    }

    #[test]
    fn rank_two_degenerates() {
        let model = ExchangeModel::new(&Exact, 1).unwrap();
        let checks = model.checks(&Sampling { seed: 3, samples: 3 }, Normalization::Unscaled);
        let c = checks.iter().find(|c| c.id == "rank_two_matches_flip_flop").unwrap();
        assert_eq!(c.status, Status::Pass);
        assert!(!checks.iter().any(|c| c.id.starts_with("y_scaled")));
    }
}
