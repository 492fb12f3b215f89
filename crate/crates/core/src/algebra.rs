//! Reduced Cuntz monomials `S_α S_β*` and their finite linear combinations.
//!
//! Products are reduced with `S_i* S_j = δ_ij`. The remaining relation
//! `Σ_i S_i S_i* = 1` is not applied syntactically; [`Element::equals`]
//! decides equality by splitting the difference into gauge-degree classes
//! and expanding each class to a common co-word length, where the
//! monomials form a basis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Backend, CycloScalar, Scalar};

/// Default cap on the number of monomials an expansion may produce.
pub const DEFAULT_EXPANSION_LIMIT: usize = 2_000_000;

static EXPANSION_LIMIT: AtomicUsize = AtomicUsize::new(DEFAULT_EXPANSION_LIMIT);

/// Process-wide expansion cap used by [`Element::equals`].
pub fn expansion_limit() -> usize {
    EXPANSION_LIMIT.load(AtomicOrdering::Relaxed)
}

pub fn set_expansion_limit(limit: usize) {
    EXPANSION_LIMIT.store(limit, AtomicOrdering::Relaxed);
}

/// Number of generators of O_n; always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(usize);

impl Rank {
    pub fn new(n: usize) -> Result<Self> {
        if (2..=255).contains(&n) {
            Ok(Rank(n))
        } else {
            Err(Error::InvalidRank(n))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Reduces an arbitrary integer index to 1..=n, i ↦ ((i−1) mod n) + 1.
    pub fn wrap(self, i: i64) -> u8 {
        ((i - 1).rem_euclid(self.0 as i64) + 1) as u8
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Multi-index: a word over the letters 1..=n.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, rest: &[u8]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + rest.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(rest);
        Word(v)
    }

    fn strip_prefix(&self, prefix: &Word) -> Option<&[u8]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }

    fn check(&self, rank: Rank) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > rank.get()) {
            Some(&l) => Err(Error::LetterOutOfRange { index: l as usize, rank: rank.get() }),
            None => Ok(()),
        }
    }
}

/// `S_α S_β*`; the pair of empty words is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Word,
    pub beta: Word,
}

impl Monomial {
    pub fn new(alpha: Word, beta: Word) -> Self {
        Self { alpha, beta }
    }

    pub fn unit() -> Self {
        Self { alpha: Word::empty(), beta: Word::empty() }
    }

    /// Gauge degree |α| − |β|.
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn adjoint(&self) -> Self {
        Self { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    /// `S_α S_β* · S_γ S_δ*`, or `None` when the middle collapses to zero.
    pub fn product(&self, rhs: &Monomial) -> Option<Monomial> {
        if let Some(rest) = rhs.alpha.strip_prefix(&self.beta) {
            Some(Monomial::new(self.alpha.concat(rest), rhs.beta.clone()))
        } else {
            self.beta
                .strip_prefix(&rhs.alpha)
                .map(|rest| Monomial::new(self.alpha.clone(), rhs.beta.concat(rest)))
        }
    }

    /// Expression-language rendering: `S1*S2*S3'`, or `1`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self.alpha.0.iter().map(|l| format!("S{l}")).collect();
        parts.extend(self.beta.0.iter().rev().map(|l| format!("S{l}'")));
        if parts.is_empty() {
            "1".to_owned()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of reduced monomials in O_n.
#[derive(Clone)]
pub struct Element<S> {
    rank: Rank,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Element<S> {
    pub fn zero(rank: Rank) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn one<B: Backend<Scalar = S>>(b: &B, rank: Rank) -> Self {
        Self::monomial(rank, Monomial::unit(), b.one())
    }

    /// Multiple of a single monomial. Letters must lie in 1..=n.
    pub fn monomial(rank: Rank, m: Monomial, coeff: S) -> Self {
        debug_assert!(m.alpha.check(rank).is_ok() && m.beta.check(rank).is_ok());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Self { rank, terms }
    }

    pub fn try_monomial(rank: Rank, m: Monomial, coeff: S) -> Result<Self> {
        m.alpha.check(rank)?;
        m.beta.check(rank)?;
        Ok(Self::monomial(rank, m, coeff))
    }

    /// The generator S_i, index reduced mod n.
    pub fn generator<B: Backend<Scalar = S>>(b: &B, rank: Rank, i: i64) -> Self {
        Self::monomial(rank, Monomial::new(Word(vec![rank.wrap(i)]), Word::empty()), b.one())
    }

    /// S_i S_i*, index reduced mod n.
    pub fn range_projection<B: Backend<Scalar = S>>(b: &B, rank: Rank, i: i64) -> Self {
        let w = Word(vec![rank.wrap(i)]);
        Self::monomial(rank, Monomial::new(w.clone(), w), b.one())
    }

    pub fn scalar(rank: Rank, c: S) -> Self {
        Self::monomial(rank, Monomial::unit(), c)
    }

    pub fn from_terms(rank: Rank, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut acc = Accumulator::new();
        for (m, c) in terms {
            acc.push(m, c);
        }
        acc.finish(rank)
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Syntactically empty. See [`Element::is_zero`] for the algebraic test.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&S> {
        self.terms.get(m)
    }

    fn same_rank(&self, rhs: &Self) -> Result<()> {
        if self.rank == rhs.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { left: self.rank.get(), right: rhs.rank.get() })
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_rank(rhs)?;
        let mut acc = Accumulator::from_map(self.terms.clone());
        for (m, c) in &rhs.terms {
            acc.push(m.clone(), c.clone());
        }
        Ok(acc.finish(self.rank))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.negate())
    }

    pub fn negate(&self) -> Self {
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_rank(rhs)?;
        let mut acc = Accumulator::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some(m) = m1.product(m2) {
                    acc.push(m, c1.mul(c2));
                }
            }
        }
        Ok(acc.finish(self.rank))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut acc = Accumulator::new();
        for (m, x) in &self.terms {
            acc.push(m.clone(), c.mul(x));
        }
        acc.finish(self.rank)
    }

    /// `(S_α S_β*)* = S_β S_α*` with conjugated coefficients.
    pub fn adjoint(&self) -> Self {
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.adjoint(), c.conj())).collect(),
        }
    }

    /// x^k for k ≥ 0.
    pub fn pow<B: Backend<Scalar = S>>(&self, b: &B, k: usize) -> Self {
        let mut acc = Element::one(b, self.rank);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partition of the terms by gauge degree |α| − |β|.
    pub fn gauge_components(&self) -> BTreeMap<i64, Element<S>> {
        let mut out: BTreeMap<i64, Element<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Element::zero(self.rank))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Rewrites every term so that its co-word has length `level`, using
    /// `S_α S_β* = Σ_{|μ| = level − |β|} S_{αμ} S_{βμ}*`.
    pub fn expand_to_level(&self, level: usize) -> Result<Self> {
        self.expand_to_level_with_limit(level, expansion_limit())
    }

    pub fn expand_to_level_with_limit(&self, level: usize, limit: usize) -> Result<Self> {
        let required = self.terms.keys().map(|m| m.beta.len()).max().unwrap_or(0);
        if required > level {
            return Err(Error::LevelTooLow { level, required });
        }
        let n = self.rank.get();
        let projected: u128 = self
            .terms
            .keys()
            .map(|m| (n as u128).saturating_pow((level - m.beta.len()) as u32))
            .fold(0u128, u128::saturating_add);
        if projected > limit as u128 {
            return Err(Error::ExpansionLimit { projected, limit });
        }
        let mut acc = Accumulator::new();
        for (m, c) in &self.terms {
            expand_term(n, m, c, level - m.beta.len(), &mut acc);
        }
        Ok(acc.finish(self.rank))
    }

    /// Algebraic equality in O_n.
    pub fn equals(&self, rhs: &Self) -> Result<bool> {
        self.equals_with_limit(rhs, expansion_limit())
    }

    pub fn equals_with_limit(&self, rhs: &Self, limit: usize) -> Result<bool> {
        self.checked_sub(rhs)?.is_zero_with_limit(limit)
    }

    /// Algebraic test x = 0: each gauge class must vanish once expanded to
    /// its longest co-word.
    pub fn is_zero(&self) -> Result<bool> {
        self.is_zero_with_limit(expansion_limit())
    }

    pub fn is_zero_with_limit(&self, limit: usize) -> Result<bool> {
        if self.terms.is_empty() {
            return Ok(true);
        }
        let classes = self.gauge_components();
        let n = self.rank.get() as u128;
        let mut projected = 0u128;
        for class in classes.values() {
            let level = class.terms.keys().map(|m| m.beta.len()).max().unwrap_or(0);
            for m in class.terms.keys() {
                projected = projected.saturating_add(n.saturating_pow((level - m.beta.len()) as u32));
            }
        }
        if projected > limit as u128 {
            return Err(Error::ExpansionLimit { projected, limit });
        }
        for class in classes.values() {
            let level = class.terms.keys().map(|m| m.beta.len()).max().unwrap_or(0);
            // Uniform co-word length: already in the basis, and every stored
            // coefficient is nonzero.
            if class.terms.keys().all(|m| m.beta.len() == level) {
                return Ok(false);
            }
            if !class.expand_to_level_with_limit(level, usize::MAX)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// x* x = 1.
    pub fn is_isometry<B: Backend<Scalar = S>>(&self, b: &B) -> Result<bool> {
        (&self.adjoint() * self).equals(&Element::one(b, self.rank))
    }

    /// x* x = x x* = 1.
    pub fn is_unitary<B: Backend<Scalar = S>>(&self, b: &B) -> Result<bool> {
        Ok(self.is_isometry(b)? && (self * &self.adjoint()).equals(&Element::one(b, self.rank))?)
    }

    pub fn is_selfadjoint(&self) -> Result<bool> {
        self.equals(&self.adjoint())
    }

    /// x = x* = x².
    pub fn is_projection(&self) -> Result<bool> {
        Ok(self.is_selfadjoint()? && (self * self).equals(self)?)
    }

    pub fn predicate<B: Backend<Scalar = S>>(&self, b: &B, kind: Predicate) -> Result<bool> {
        match kind {
            Predicate::Isometry => self.is_isometry(b),
            Predicate::Unitary => self.is_unitary(b),
            Predicate::SelfAdjoint => self.is_selfadjoint(),
            Predicate::Projection => self.is_projection(),
        }
    }

    /// Display form: repeatedly folds complete sibling families
    /// `{(α·i, β·i)}_{i=1..n}` with equal coefficients into `(α, β)`.
    /// The result is equal to `self` but never used to decide equality.
    pub fn contracted(&self) -> Self {
        let n = self.rank.get();
        let mut terms = self.terms.clone();
        loop {
            let mut fold: Option<(Monomial, S)> = None;
            for (m, c) in &terms {
                let (Some(&a), Some(&b)) = (m.alpha.0.last(), m.beta.0.last()) else { continue };
                if a != 1 || b != 1 {
                    continue;
                }
                let parent = Monomial::new(
                    Word(m.alpha.0[..m.alpha.len() - 1].to_vec()),
                    Word(m.beta.0[..m.beta.len() - 1].to_vec()),
                );
                let complete = (2..=n as u8).all(|i| {
                    let sib = Monomial::new(parent.alpha.concat(&[i]), parent.beta.concat(&[i]));
                    terms.get(&sib).is_some_and(|s| s.sub(c).is_zero())
                });
                if complete {
                    fold = Some((parent, c.clone()));
                    break;
                }
            }
            let Some((parent, c)) = fold else { break };
            for i in 1..=n as u8 {
                terms.remove(&Monomial::new(parent.alpha.concat(&[i]), parent.beta.concat(&[i])));
            }
            let merged = match terms.remove(&parent) {
                Some(existing) => existing.add(&c),
                None => c,
            };
            if !merged.is_zero() {
                terms.insert(parent, merged);
            }
        }
        Self { rank: self.rank, terms }
    }

    /// Deterministic expression-language text of the contracted form.
    pub fn format(&self) -> String {
        let shown = self.contracted();
        if shown.terms.is_empty() {
            return "0".to_owned();
        }
        let mut out = String::new();
        for (i, (m, c)) in shown.terms.iter().enumerate() {
            let t = render_term(m, c);
            if i == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }

    /// `{"n": …, "terms": [{"alpha", "beta", "coeff"}]}` over the
    /// contracted, sorted term list.
    pub fn to_json(&self) -> serde_json::Value {
        let shown = self.contracted();
        let terms: Vec<serde_json::Value> = shown
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "alpha": m.alpha,
                    "beta": m.beta,
                    "coeff": c.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "n": self.rank.get(), "terms": terms })
    }
}

fn render_term<S: Scalar>(m: &Monomial, c: &S) -> String {
    let word = m.render();
    let unit = m.alpha.is_empty() && m.beta.is_empty();
    if c.is_one() {
        return word;
    }
    let coeff = match c.as_rational() {
        Some(q) if q == -num_rational::BigRational::from_integer(1.into()) => {
            return if unit { "-1".to_owned() } else { format!("-{word}") };
        }
        Some(_) => c.render(),
        None => {
            let r = c.render();
            if r.starts_with('(') {
                r
            } else {
                format!("({r})")
            }
        }
    };
    if unit {
        coeff
    } else {
        format!("{coeff}*{word}")
    }
}

fn expand_term<S: Scalar>(n: usize, m: &Monomial, c: &S, extra: usize, acc: &mut Accumulator<S>) {
    if extra == 0 {
        acc.push(m.clone(), c.clone());
        return;
    }
    for i in 1..=n as u8 {
        let child = Monomial::new(m.alpha.concat(&[i]), m.beta.concat(&[i]));
        expand_term(n, &child, c, extra - 1, acc);
    }
}

/// Collects terms, merging equal monomials and dropping zero sums.
pub(crate) struct Accumulator<S> {
    map: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Accumulator<S> {
    pub(crate) fn new() -> Self {
        Self { map: BTreeMap::new() }
    }

    fn from_map(map: BTreeMap<Monomial, S>) -> Self {
        Self { map }
    }

    pub(crate) fn push(&mut self, m: Monomial, c: S) {
        match self.map.get_mut(&m) {
            Some(existing) => *existing = existing.add(&c),
            None => {
                self.map.insert(m, c);
            }
        }
    }

    pub(crate) fn finish(mut self, rank: Rank) -> Element<S> {
        self.map.retain(|_, c| !c.is_zero());
        Element { rank, terms: self.map }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    Isometry,
    Unitary,
    SelfAdjoint,
    Projection,
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element(n={}, {})", self.rank, self.format())
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl<'a, S: Scalar> Add<&'a Element<S>> for &'a Element<S> {
    type Output = Element<S>;
    fn add(self, rhs: &Element<S>) -> Element<S> {
        self.checked_add(rhs).expect("element addition")
    }
}

impl<'a, S: Scalar> Sub<&'a Element<S>> for &'a Element<S> {
    type Output = Element<S>;
    fn sub(self, rhs: &Element<S>) -> Element<S> {
        self.checked_sub(rhs).expect("element subtraction")
    }
}

impl<'a, S: Scalar> Mul<&'a Element<S>> for &'a Element<S> {
    type Output = Element<S>;
    fn mul(self, rhs: &Element<S>) -> Element<S> {
        self.checked_mul(rhs).expect("element multiplication")
    }
}

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        self.negate()
    }
}

#[derive(Deserialize)]
struct TermWire {
    alpha: Vec<u8>,
    beta: Vec<u8>,
    coeff: CycloScalar,
}

#[derive(Deserialize)]
struct ElementWire {
    n: usize,
    terms: Vec<TermWire>,
}

impl Element<CycloScalar> {
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let wire: ElementWire = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("element JSON: {e}")))?;
        let rank = Rank::new(wire.n)?;
        let mut acc = Accumulator::new();
        for t in wire.terms {
            let m = Monomial::new(Word(t.alpha), Word(t.beta));
            m.alpha.check(rank)?;
            m.beta.check(rank)?;
            acc.push(m, t.coeff);
        }
        Ok(acc.finish(rank))
    }
}
