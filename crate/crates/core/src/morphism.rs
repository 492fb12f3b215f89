//! Endomorphisms of O_n given by the images of the generators, and the
//! Z_n action generated by the cyclic automorphism.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{Element, Monomial, Rank, Word};
use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndoKind {
    Cyclic,
    Exchange,
    FlipFlop,
}

impl EndoKind {
    pub fn name(self) -> &'static str {
        match self {
            EndoKind::Cyclic => "cyclic",
            EndoKind::Exchange => "exchange",
            EndoKind::FlipFlop => "flipflop",
        }
    }
}

/// λ with λ(S_i) = images[i−1].
#[derive(Clone)]
pub struct Endo<S> {
    rank: Rank,
    images: Vec<Element<S>>,
    /// Set when every image is a bare generator; `apply` then relabels letters.
    permutation: Option<Vec<u8>>,
}

impl<S: Scalar> Endo<S> {
    /// Validates the Cuntz relations of the images unless `validate` is false.
    pub fn new<B: Backend<Scalar = S>>(b: &B, rank: Rank, images: Vec<Element<S>>, validate: bool) -> Result<Self> {
        if images.len() != rank.get() {
            return Err(Error::InvalidEndomorphism(format!(
                "expected {} images, got {}",
                rank.get(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|x| x.rank() != rank) {
            return Err(Error::RankMismatch { left: rank.get(), right: bad.rank().get() });
        }
        let permutation = detect_permutation(&images);
        let e = Self { rank, images, permutation };
        if validate {
            e.validate(b)?;
        }
        Ok(e)
    }

    fn validate<B: Backend<Scalar = S>>(&self, b: &B) -> Result<()> {
        let one = Element::one(b, self.rank);
        let zero = Element::zero(self.rank);
        for (i, x) in self.images.iter().enumerate() {
            for (j, y) in self.images.iter().enumerate() {
                let expected = if i == j { &one } else { &zero };
                if !(&x.adjoint() * y).equals(expected)? {
                    return Err(Error::InvalidEndomorphism(format!(
                        "image {}* times image {} is not {}",
                        i + 1,
                        j + 1,
                        if i == j { "1" } else { "0" }
                    )));
                }
            }
        }
        let mut sum = Element::zero(self.rank);
        for x in &self.images {
            sum = &sum + &(x * &x.adjoint());
        }
        if !sum.equals(&one)? {
            return Err(Error::InvalidEndomorphism("range projections do not sum to 1".into()));
        }
        Ok(())
    }

    /// λ_u(S_i) = u·S_i.
    pub fn from_unitary<B: Backend<Scalar = S>>(b: &B, u: &Element<S>) -> Result<Self> {
        if !u.is_unitary(b)? {
            return Err(Error::NotUnitary);
        }
        let rank = u.rank();
        let images = (1..=rank.get() as i64).map(|i| u * &Element::generator(b, rank, i)).collect();
        Self::new(b, rank, images, false)
    }

    pub fn identity<B: Backend<Scalar = S>>(b: &B, rank: Rank) -> Self {
        let images = (1..=rank.get() as i64).map(|i| Element::generator(b, rank, i)).collect();
        Self::new(b, rank, images, false).expect("identity is a valid endomorphism")
    }

    /// u = Σ_i λ(S_i) S_i*.
    pub fn unitary<B: Backend<Scalar = S>>(&self, b: &B) -> Element<S> {
        let mut u = Element::zero(self.rank);
        for (i, x) in self.images.iter().enumerate() {
            u = &u + &(x * &Element::generator(b, self.rank, i as i64 + 1).adjoint());
        }
        u
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn images(&self) -> &[Element<S>] {
        &self.images
    }

    /// Unital *-homomorphic extension of the generator images.
    pub fn apply(&self, x: &Element<S>) -> Result<Element<S>> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.rank.get(), right: x.rank().get() });
        }
        if let Some(perm) = &self.permutation {
            let relabel = |w: &Word| Word::new(w.letters().iter().map(|&l| perm[l as usize - 1]).collect());
            return Ok(Element::from_terms(
                self.rank,
                x.terms().map(|(m, c)| (Monomial::new(relabel(&m.alpha), relabel(&m.beta)), c.clone())),
            ));
        }
        let adjoints: Vec<Element<S>> = self.images.iter().map(Element::adjoint).collect();
        let mut out = Element::zero(self.rank);
        for (m, c) in x.terms() {
            let mut acc = Element::scalar(self.rank, c.clone());
            for &l in m.alpha.letters() {
                acc = &acc * &self.images[l as usize - 1];
            }
            // S_β* = S_{β_k}* ⋯ S_{β_1}*
            for &l in m.beta.letters().iter().rev() {
                acc = &acc * &adjoints[l as usize - 1];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank.get(), right: other.rank.get() });
        }
        let images = other.images.iter().map(|x| self.apply(x)).collect::<Result<Vec<_>>>()?;
        let permutation = detect_permutation(&images);
        Ok(Self { rank: self.rank, images, permutation })
    }

    pub fn power<B: Backend<Scalar = S>>(&self, b: &B, k: usize) -> Result<Self> {
        let mut acc = Self::identity(b, self.rank);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank.get(), right: other.rank.get() });
        }
        for (x, y) in self.images.iter().zip(&other.images) {
            if !x.equals(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_fixed(&self, x: &Element<S>) -> Result<bool> {
        self.apply(x)?.equals(x)
    }

    /// `{"n": …, "images": [Element-JSON, …]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.rank.get(),
            "images": self.images.iter().map(Element::to_json).collect::<Vec<_>>(),
        })
    }
}

impl<S: Scalar> fmt::Debug for Endo<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.images.iter().map(Element::format).collect();
        write!(f, "Endo(n={}; {})", self.rank, images.join(", "))
    }
}

fn detect_permutation<S: Scalar>(images: &[Element<S>]) -> Option<Vec<u8>> {
    let perm: Vec<u8> = images
        .iter()
        .map(|x| {
            let mut terms = x.terms();
            let (m, c) = terms.next()?;
            if terms.next().is_some() || !c.is_one() || !m.beta.is_empty() || m.alpha.len() != 1 {
                return None;
            }
            Some(m.alpha.letters()[0])
        })
        .collect::<Option<_>>()?;
    let mut seen = vec![false; perm.len() + 1];
    for &l in &perm {
        if std::mem::replace(&mut seen[l as usize], true) {
            return None;
        }
    }
    Some(perm)
}

/// cyclic: S_i ↦ S_{i+1}; exchange: S_i ↦ S_{n−i+1}; flipflop: n = 2 only.
pub fn named_endo<B: Backend>(b: &B, kind: EndoKind, n: usize) -> Result<Endo<B::Scalar>> {
    let rank = Rank::new(n)?;
    if kind == EndoKind::FlipFlop && n != 2 {
        return Err(Error::InvalidArgument(format!("flip-flop needs n = 2, got {n}")));
    }
    let target = |i: i64| match kind {
        EndoKind::Cyclic | EndoKind::FlipFlop => i + 1,
        EndoKind::Exchange => n as i64 - i + 1,
    };
    let images = (1..=n as i64).map(|i| Element::generator(b, rank, target(i))).collect();
    Endo::new(b, rank, images, false)
}

/// v = Σ_k ζ_n^k S_k S_k*.
pub fn cyclic_unitary<B: Backend>(b: &B, rank: Rank) -> Element<B::Scalar> {
    let n = rank.get();
    let terms = (1..=n).map(|k| {
        let w = Word::new(vec![k as u8]);
        (Monomial::new(w.clone(), w), b.root_of_unity(n as u32, k as i64))
    });
    Element::from_terms(rank, terms)
}

/// The Z_n action of λ_C together with its conditional expectation and
/// spectral decomposition.
#[derive(Clone)]
pub struct CyclicAction<B: Backend> {
    backend: B,
    rank: Rank,
    lambda: Endo<B::Scalar>,
    v: Element<B::Scalar>,
    v_adj: Element<B::Scalar>,
    inv_n: B::Scalar,
}

impl<B: Backend> CyclicAction<B> {
    pub fn new(b: &B, n: usize) -> Result<Self> {
        let rank = Rank::new(n)?;
        let v = cyclic_unitary(b, rank);
        Ok(Self {
            backend: b.clone(),
            rank,
            lambda: named_endo(b, EndoKind::Cyclic, n)?,
            v_adj: v.adjoint(),
            v,
            inv_n: b.rational(&BigRational::new(BigInt::from(1), BigInt::from(n))),
        })
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn lambda(&self) -> &Endo<B::Scalar> {
        &self.lambda
    }

    pub fn v(&self) -> &Element<B::Scalar> {
        &self.v
    }

    /// F(x) = (1/n) Σ_{k=1}^n λ_C^{k−1}(x).
    pub fn expect(&self, x: &Element<B::Scalar>) -> Result<Element<B::Scalar>> {
        let mut term = x.clone();
        let mut sum = x.clone();
        for _ in 1..self.rank.get() {
            term = self.lambda.apply(&term)?;
            sum = sum.checked_add(&term)?;
        }
        Ok(sum.scale(&self.inv_n))
    }

    /// F(x v^k) v^{−k}, with v^{−k} = (v*)^k.
    pub fn component(&self, x: &Element<B::Scalar>, k: usize) -> Result<Element<B::Scalar>> {
        if k >= self.rank.get() {
            return Err(Error::InvalidArgument(format!("component index {k} outside 0..{}", self.rank.get())));
        }
        let vk = self.v.pow(&self.backend, k);
        let vk_adj = self.v_adj.pow(&self.backend, k);
        self.expect(&x.checked_mul(&vk)?)?.checked_mul(&vk_adj)
    }

    pub fn decompose(&self, x: &Element<B::Scalar>) -> Result<Vec<Element<B::Scalar>>> {
        (0..self.rank.get()).map(|k| self.component(x, k)).collect()
    }

    /// ζ_n^k, the eigenvalue carried by component k.
    pub fn eigenvalue(&self, k: usize) -> B::Scalar {
        self.backend.root_of_unity(self.rank.get() as u32, k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CycloScalar, Exact};

    type E = Element<CycloScalar>;

    fn gen(n: usize, i: i64) -> E {
        Element::generator(&Exact, Rank::new(n).unwrap(), i)
    }

    #[test]
    fn unitary_round_trips() {
        let n2 = Rank::new(2).unwrap();
        let u = &(&gen(2, 1) * &gen(2, 2).adjoint()) + &(&gen(2, 2) * &gen(2, 1).adjoint());
        let ff = Endo::from_unitary(&Exact, &u).unwrap();
        assert!(ff.equals(&named_endo(&Exact, EndoKind::FlipFlop, 2).unwrap()).unwrap());
        assert!(ff.unitary(&Exact).equals(&u).unwrap());
        assert!(Endo::identity(&Exact, n2).unitary(&Exact).equals(&Element::one(&Exact, n2)).unwrap());

        let ex = named_endo(&Exact, EndoKind::Exchange, 3).unwrap();
        let mut expected = E::zero(Rank::new(3).unwrap());
        for i in 1..=3 {
            expected = &expected + &(&gen(3, 4 - i) * &gen(3, i).adjoint());
        }
        assert!(ex.unitary(&Exact).equals(&expected).unwrap());
        let back = Endo::from_unitary(&Exact, &ex.unitary(&Exact)).unwrap();
        assert!(back.equals(&ex).unwrap());
    }

    #[test]
    fn cyclic_from_its_unitary() {
        let n3 = Rank::new(3).unwrap();
        let mut u = E::zero(n3);
        for i in 1..=3 {
            u = &u + &(&gen(3, i + 1) * &gen(3, i).adjoint());
        }
        let lc = Endo::from_unitary(&Exact, &u).unwrap();
        assert!(lc.equals(&named_endo(&Exact, EndoKind::Cyclic, 3).unwrap()).unwrap());
        assert!(lc.permutation.is_some());
    }

    #[test]
    fn non_unitary_and_invalid_images_are_rejected() {
        let n2 = Rank::new(2).unwrap();
        assert_eq!(Endo::from_unitary(&Exact, &gen(2, 1)).unwrap_err(), Error::NotUnitary);
        let bad = Endo::new(&Exact, n2, vec![gen(2, 1), gen(2, 1)], true);
        assert!(matches!(bad, Err(Error::InvalidEndomorphism(_))));
        assert!(Endo::new(&Exact, n2, vec![gen(2, 1), gen(2, 1)], false).is_ok());
        assert!(named_endo(&Exact, EndoKind::FlipFlop, 3).is_err());
        assert!(matches!(named_endo(&Exact, EndoKind::Cyclic, 1), Err(Error::InvalidRank(1))));
    }

    #[test]
    fn named_endos_act_as_documented() {
        let lc = named_endo(&Exact, EndoKind::Cyclic, 3).unwrap();
        assert!(lc.apply(&gen(3, 3)).unwrap().equals(&gen(3, 1)).unwrap());
        let ex = named_endo(&Exact, EndoKind::Exchange, 3).unwrap();
        assert!(ex.is_fixed(&gen(3, 2)).unwrap());
        let l2 = named_endo(&Exact, EndoKind::Cyclic, 2).unwrap();
        let x = &gen(2, 1) * &gen(2, 2).adjoint();
        assert!(l2.apply(&x).unwrap().equals(&(&gen(2, 2) * &gen(2, 1).adjoint())).unwrap());
        assert!(l2.is_fixed(&(&gen(2, 1) + &gen(2, 2))).unwrap());
        assert!(!l2.is_fixed(&gen(2, 1)).unwrap());
        let one = E::one(&Exact, Rank::new(3).unwrap());
        assert!(lc.apply(&one).unwrap().equals(&one).unwrap());
    }

    #[test]
    fn orders() {
        let n3 = Rank::new(3).unwrap();
        let lc = named_endo(&Exact, EndoKind::Cyclic, 3).unwrap();
        let id = Endo::identity(&Exact, n3);
        assert!(lc.power(&Exact, 3).unwrap().equals(&id).unwrap());
        assert!(!lc.power(&Exact, 1).unwrap().equals(&id).unwrap());
        let ex = named_endo(&Exact, EndoKind::Exchange, 4).unwrap();
        assert!(ex.power(&Exact, 2).unwrap().equals(&Endo::identity(&Exact, Rank::new(4).unwrap())).unwrap());
    }

    #[test]
    fn general_apply_matches_permutation_path() {
        let n3 = Rank::new(3).unwrap();
        let lc = named_endo(&Exact, EndoKind::Cyclic, 3).unwrap();
        let slow = Endo::new(&Exact, n3, lc.images().to_vec(), false).map(|mut e| {
            e.permutation = None;
            e
        });
        let slow = slow.unwrap();
        let x = &(&gen(3, 1) * &gen(3, 2)) * &gen(3, 3).adjoint();
        let x = &x + &gen(3, 2).adjoint();
        assert!(slow.apply(&x).unwrap().equals(&lc.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn cyclic_action_basics() {
        for n in 2..=5 {
            let act = CyclicAction::new(&Exact, n).unwrap();
            let v = act.v().clone();
            let zinv = CycloScalar::root_of_unity(n as u32, -1);
            assert!(act.lambda().apply(&v).unwrap().equals(&v.scale(&zinv)).unwrap());
            assert!(v.is_unitary(&Exact).unwrap());
            assert!(act.expect(&v).unwrap().is_zero().unwrap());
            let one = E::one(&Exact, act.rank());
            assert!(act.expect(&one).unwrap().equals(&one).unwrap());
        }
    }

    #[test]
    fn expectation_and_components_rank_two() {
        let act = CyclicAction::new(&Exact, 2).unwrap();
        let half = CycloScalar::from_rational(&BigRational::new(1.into(), 2.into()));
        let s1 = gen(2, 1);
        let s2 = gen(2, 2);
        let avg = (&s1 + &s2).scale(&half);
        assert!(act.expect(&s1).unwrap().equals(&avg).unwrap());
        let parts = act.decompose(&s1).unwrap();
        assert!(parts[0].equals(&avg).unwrap());
        assert!(parts[1].equals(&(&s1 - &s2).scale(&half)).unwrap());

        let one = E::one(&Exact, act.rank());
        let parts = act.decompose(&one).unwrap();
        assert!(parts[0].equals(&one).unwrap());
        assert!(parts[1].is_zero().unwrap());
    }

    #[test]
    fn v_is_homogeneous() {
        let act = CyclicAction::new(&Exact, 3).unwrap();
        let parts = act.decompose(act.v()).unwrap();
        let nonzero: Vec<usize> = (0..3).filter(|&k| !parts[k].is_zero().unwrap()).collect();
        assert_eq!(nonzero.len(), 1);
        assert!(parts[nonzero[0]].equals(act.v()).unwrap());
        let k = nonzero[0];
        let lhs = act.lambda().apply(&parts[k]).unwrap();
        assert!(lhs.equals(&parts[k].scale(&act.eigenvalue(k))).unwrap());
    }
}
