//! Named verification suites and the backend cross-check.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::algebra::{self, Element, Rank};
use crate::construct::{CyclicModel, ExchangeModel, NogoWitness, Normalization};
use crate::error::{Error, Result};
use crate::expr;
use crate::morphism::{named_endo, CyclicAction, Endo, EndoKind};
use crate::random::{self, Sampling, DEFAULT_SEED};
use crate::report::{CheckRecord, CheckReport, Status};
use crate::scalar::numeric::{DEFAULT_PRECISION, DEFAULT_TOLERANCE};
use crate::scalar::{Backend, BackendKind, Exact, Numeric};

pub const SPECTRAL_SAMPLES: usize = 50;
pub const MEMBERSHIP_SAMPLES: usize = 50;
pub const INTERTWINING_SAMPLES: usize = 25;
pub const EXCHANGE_SAMPLES: usize = 25;
/// Per law; four laws make 200 instances.
pub const LAW_SAMPLES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteName {
    Spectral,
    CyclicFixed,
    Exchange,
    Nogo,
    AlgebraLaws,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] =
        [SuiteName::Spectral, SuiteName::CyclicFixed, SuiteName::Exchange, SuiteName::Nogo, SuiteName::AlgebraLaws];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Spectral => "spectral",
            SuiteName::CyclicFixed => "cyclic-fixed",
            SuiteName::Exchange => "exchange",
            SuiteName::Nogo => "nogo",
            SuiteName::AlgebraLaws => "algebra-laws",
        }
    }

    /// Ranks the suite accepts.
    pub fn valid_ranks(self) -> &'static [usize] {
        match self {
            SuiteName::Spectral | SuiteName::CyclicFixed | SuiteName::AlgebraLaws => &[2, 3, 4, 5, 6],
            SuiteName::Exchange => &[2, 4, 6],
            SuiteName::Nogo => &[2],
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub backend: BackendKind,
    pub precision: u32,
    pub tolerance: f64,
    pub seed: u64,
    /// Overrides every per-check sample count when set.
    pub samples: Option<usize>,
    /// Expansion guard for the duration of the run.
    pub max_terms: Option<usize>,
    pub normalization: Normalization,
    /// When false the report carries `elapsed_ms = 0`.
    pub record_timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            backend: BackendKind::Exact,
            precision: DEFAULT_PRECISION,
            tolerance: DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
            samples: None,
            max_terms: None,
            normalization: Normalization::Both,
            record_timing: true,
        }
    }
}

impl RunOptions {
    fn sampling(&self, default: usize) -> Sampling {
        Sampling { seed: self.seed, samples: self.samples.unwrap_or(default) }
    }
}

pub fn run_suite(name: SuiteName, n: usize, opts: &RunOptions) -> Result<CheckReport> {
    if !name.valid_ranks().contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "suite {name} accepts n in {:?}, got {n}",
            name.valid_ranks()
        )));
    }
    let previous = algebra::expansion_limit();
    if let Some(limit) = opts.max_terms {
        algebra::set_expansion_limit(limit);
    }
    let start = Instant::now();
    let checks = match opts.backend {
        BackendKind::Exact => checks_for(&Exact, name, n, opts),
        BackendKind::Numeric => checks_for(&Numeric::new(opts.precision, opts.tolerance), name, n, opts),
    };
    let elapsed = start.elapsed().as_millis() as u64;
    if opts.max_terms.is_some() {
        algebra::set_expansion_limit(previous);
    }
    let checks = checks?;
    Ok(CheckReport::new(name.as_str(), n, opts.backend, checks, if opts.record_timing { elapsed } else { 0 }))
}

fn checks_for<B: Backend>(b: &B, name: SuiteName, n: usize, opts: &RunOptions) -> Result<Vec<CheckRecord>> {
    match name {
        SuiteName::Spectral => spectral_checks(b, n, &opts.sampling(SPECTRAL_SAMPLES)),
        SuiteName::CyclicFixed => {
            let model = CyclicModel::new(b, n)?;
            let membership = opts.sampling(MEMBERSHIP_SAMPLES);
            let mut out = model.model_checks(&membership);
            out.extend(model.membership_checks(&membership));
            out.extend(model.fixed_generator_checks(&opts.sampling(INTERTWINING_SAMPLES)));
            Ok(out)
        }
        SuiteName::Exchange => {
            let model = ExchangeModel::new(b, n / 2)?;
            Ok(model.checks(&opts.sampling(EXCHANGE_SAMPLES), opts.normalization))
        }
        SuiteName::Nogo => Ok(NogoWitness::new(b).checks()),
        SuiteName::AlgebraLaws => law_checks(b, n, &opts.sampling(LAW_SAMPLES)),
    }
}

fn spectral_checks<B: Backend>(b: &B, n: usize, sampling: &Sampling) -> Result<Vec<CheckRecord>> {
    let act = CyclicAction::new(b, n)?;
    let rank = act.rank();
    let lc = act.lambda();
    let v = act.v();
    let samples: Vec<Element<B::Scalar>> = {
        let mut rng = sampling.rng(1);
        (0..sampling.samples).map(|_| random::element(&mut rng, rank, 3, 2).realize(b)).collect()
    };
    let one = Element::one(b, rank);
    let mut out = Vec::new();

    out.push(CheckRecord::evaluate("v_eigenvector", "lambda_C(v) = zeta_n^-1 v", |r| {
        r.push(lc.apply(v)?.equals(&v.scale(&b.root_of_unity(n as u32, -1)))?);
        Ok(())
    }));
    out.push(CheckRecord::evaluate("v_unitary", "v*v = vv* = 1", |r| {
        r.push(v.is_unitary(b)?);
        Ok(())
    }));
    out.push(CheckRecord::evaluate("expectation_of_v_vanishes", "F(v) = 0", |r| {
        r.push(act.expect(v)?.is_zero()?);
        Ok(())
    }));
    out.push(CheckRecord::evaluate("expectation_unital", "F(1) = 1", |r| {
        r.push(act.expect(&one)?.equals(&one)?);
        Ok(())
    }));
    out.push(CheckRecord::evaluate("expectation_idempotent", "F(F(x)) = F(x) on random x", |r| {
        for x in &samples {
            let fx = act.expect(x)?;
            r.push(act.expect(&fx)?.equals(&fx)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("expectation_invariant", "lambda_C(F(x)) = F(x) on random x", |r| {
        for x in &samples {
            r.push(lc.is_fixed(&act.expect(x)?)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("expectation_module_property", "F(a x) = a F(x) for fixed a = F(y)", |r| {
        let mut rng = sampling.rng(2);
        for x in &samples {
            let a = act.expect(&random::element(&mut rng, rank, 2, 1).realize(b))?;
            r.push(act.expect(&a.checked_mul(x)?)?.equals(&a.checked_mul(&act.expect(x)?)?)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("components_sum_to_x", "sum_k F(x v^k) v^-k = x on random x", |r| {
        for x in &samples {
            let mut sum = Element::zero(rank);
            for c in act.decompose(x)? {
                sum = sum.checked_add(&c)?;
            }
            r.push(sum.equals(x)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("component_eigenvalues", "lambda_C(c_k) = zeta_n^k c_k on random x", |r| {
        for x in &samples {
            for (k, c) in act.decompose(x)?.iter().enumerate() {
                r.push(lc.apply(c)?.equals(&c.scale(&act.eigenvalue(k)))?);
            }
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("homomorphism_law", "lambda_C(xy) = lambda_C(x)lambda_C(y), lambda_C(x*) = lambda_C(x)*", |r| {
        for pair in samples.chunks(2) {
            let (x, y) = (&pair[0], pair.get(1).unwrap_or(&pair[0]));
            r.push(lc.apply(&x.checked_mul(y)?)?.equals(&lc.apply(x)?.checked_mul(&lc.apply(y)?)?)?);
            r.push(lc.apply(&x.adjoint())?.equals(&lc.apply(x)?.adjoint())?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("automorphism_orders", "lambda_C^n = id and lambda_E^2 = id", |r| {
        let id = Endo::identity(b, rank);
        r.push(lc.power(b, n)?.equals(&id)?);
        r.push(named_endo(b, EndoKind::Exchange, n)?.power(b, 2)?.equals(&id)?);
        Ok(())
    }));
    out.push(CheckRecord::evaluate("unitary_round_trip", "endomorphism -> unitary -> endomorphism is the identity", |r| {
        let mut endos = vec![named_endo(b, EndoKind::Cyclic, n)?, named_endo(b, EndoKind::Exchange, n)?];
        if n == 2 {
            endos.push(named_endo(b, EndoKind::FlipFlop, 2)?);
        }
        for e in endos {
            let u = e.unitary(b);
            let back = Endo::from_unitary(b, &u)?;
            r.push(back.equals(&e)?);
            r.push(back.unitary(b).equals(&u)?);
        }
        Ok(())
    }));
    Ok(out)
}

fn law_checks<B: Backend>(b: &B, n: usize, sampling: &Sampling) -> Result<Vec<CheckRecord>> {
    let rank = Rank::new(n)?;
    let draw = |stream: u64, count: usize| -> Vec<Element<B::Scalar>> {
        let mut rng = sampling.rng(stream);
        (0..count).map(|_| random::element(&mut rng, rank, 3, 3).realize(b)).collect()
    };
    let k = sampling.samples;
    let xs = draw(51, k);
    let ys = draw(52, k);
    let zs = draw(53, k);
    let one = Element::one(b, rank);
    let mut out = Vec::new();

    out.push(CheckRecord::evaluate("associativity", "(xy)z = x(yz)", |r| {
        for ((x, y), z) in xs.iter().zip(&ys).zip(&zs) {
            r.push(x.checked_mul(y)?.checked_mul(z)?.equals(&x.checked_mul(&y.checked_mul(z)?)?)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("adjoint_anti_multiplicative", "(xy)* = y* x*", |r| {
        for (x, y) in xs.iter().zip(&ys) {
            r.push(x.checked_mul(y)?.adjoint().equals(&y.adjoint().checked_mul(&x.adjoint())?)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate("expansion_preserves_equality", "level expansion leaves the element unchanged", |r| {
        for (i, x) in xs.iter().enumerate() {
            let level = x.terms().map(|(m, _)| m.beta.len()).max().unwrap_or(0) + 1 + i % 2;
            r.push(x.expand_to_level(level)?.equals(x)?);
        }
        Ok(())
    }));
    out.push(CheckRecord::evaluate(
        "cuntz_relation_invariance",
        "adding multiples of sum S_iS_i* - 1 and S_i*S_j - delta_ij does not change equals",
        |r| {
            let mut rng = sampling.rng(54);
            let mut sum = Element::zero(rank);
            for i in 1..=n as i64 {
                sum = sum.checked_add(&Element::range_projection(b, rank, i))?;
            }
            let unit_relation = sum.checked_sub(&one)?;
            for (x, y) in xs.iter().zip(&ys) {
                let i = random::index(&mut rng, n) as i64 + 1;
                let j = random::index(&mut rng, n) as i64 + 1;
                let gi = Element::generator(b, rank, i);
                let gj = Element::generator(b, rank, j);
                let delta = if i == j { one.clone() } else { Element::zero(rank) };
                let isometry_relation = gi.adjoint().checked_mul(&gj)?.checked_sub(&delta)?;
                let perturbed = x
                    .checked_add(&y.checked_mul(&unit_relation)?)?
                    .checked_add(&isometry_relation.checked_mul(y)?)?;
                r.push(perturbed.equals(x)?);
                r.push(!perturbed.checked_add(&one)?.equals(x)?);
            }
            Ok(())
        },
    ));
    out.push(round_trip_record(b, &xs));
    Ok(out)
}

fn round_trip_record<B: Backend>(b: &B, xs: &[Element<B::Scalar>]) -> CheckRecord {
    const ID: &str = "parse_format_round_trip";
    if b.kind() != BackendKind::Exact {
        return CheckRecord::new(ID, Status::Skipped, "decimal coefficients are not part of the expression syntax");
    }
    CheckRecord::evaluate(ID, "parse(format(x)) = x", |r| {
        for x in xs {
            let text = expr::format_element(x);
            match expr::parse_element(b, &text, x.rank()) {
                Ok(back) => r.push(back.equals(x)?),
                Err(e) => return Err(Error::InvalidArgument(format!("'{text}': {e}"))),
            }
        }
        Ok(())
    })
}

/// Exact and numeric reports of one suite with their verdict mismatches.
#[derive(Clone, Debug)]
pub struct BackendComparison {
    pub exact: CheckReport,
    pub numeric: CheckReport,
    /// Check ids whose equality verdicts differ, or that exist on one side only.
    pub mismatches: Vec<String>,
}

impl BackendComparison {
    pub fn agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn verdict_count(&self) -> usize {
        self.exact.checks.iter().map(|c| c.verdicts.len()).sum()
    }
}

pub fn compare_backends(name: SuiteName, n: usize, opts: &RunOptions) -> Result<BackendComparison> {
    let exact = run_suite(name, n, &RunOptions { backend: BackendKind::Exact, ..opts.clone() })?;
    let numeric = run_suite(name, n, &RunOptions { backend: BackendKind::Numeric, ..opts.clone() })?;
    let mut mismatches = Vec::new();
    for c in &exact.checks {
        match numeric.check(&c.id) {
            Some(d) if d.status == Status::Skipped || c.status == Status::Skipped => {}
            Some(d) if d.verdicts == c.verdicts => {}
            _ => mismatches.push(c.id.clone()),
        }
    }
    for d in &numeric.checks {
        if exact.check(&d.id).is_none() {
            mismatches.push(d.id.clone());
        }
    }
    Ok(BackendComparison { exact, numeric, mismatches })
}

/// Evaluates `text` and returns its display form.
pub fn eval_expression(text: &str, n: usize, backend: BackendKind, precision: u32) -> Result<String, String> {
    let rank = Rank::new(n).map_err(|e| e.to_string())?;
    match backend {
        BackendKind::Exact => eval_with(&Exact, text, rank),
        BackendKind::Numeric => eval_with(&Numeric::new(precision, DEFAULT_TOLERANCE), text, rank),
    }
}

fn eval_with<B: Backend>(b: &B, text: &str, rank: Rank) -> Result<String, String> {
    let x = expr::parse_element(b, text, rank).map_err(|e| e.to_string())?;
    Ok(expr::format_element(&x))
}

/// Equality verdict of two expressions.
pub fn compare_expressions(
    lhs: &str,
    rhs: &str,
    n: usize,
    backend: BackendKind,
    precision: u32,
) -> Result<bool, String> {
    let rank = Rank::new(n).map_err(|e| e.to_string())?;
    match backend {
        BackendKind::Exact => eq_with(&Exact, lhs, rhs, rank),
        BackendKind::Numeric => eq_with(&Numeric::new(precision, DEFAULT_TOLERANCE), lhs, rhs, rank),
    }
}

fn eq_with<B: Backend>(b: &B, lhs: &str, rhs: &str, rank: Rank) -> Result<bool, String> {
    let x = expr::parse_element(b, lhs, rank).map_err(|e| format!("left: {e}"))?;
    let y = expr::parse_element(b, rhs, rank).map_err(|e| format!("right: {e}"))?;
    x.equals(&y).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RunOptions {
        RunOptions { samples: Some(3), record_timing: false, ..RunOptions::default() }
    }

    #[test]
    fn suite_names_parse() {
        for s in SuiteName::ALL {
            assert_eq!(s.as_str().parse::<SuiteName>().unwrap(), s);
        }
        assert!("bogus".parse::<SuiteName>().is_err());
    }

    #[test]
    fn rank_bounds() {
        assert!(run_suite(SuiteName::Nogo, 3, &quick()).is_err());
        assert!(run_suite(SuiteName::Exchange, 3, &quick()).is_err());
        assert!(run_suite(SuiteName::Spectral, 7, &quick()).is_err());
    }

    #[test]
    fn small_suites_pass() {
        for (s, n) in [(SuiteName::Spectral, 2), (SuiteName::Nogo, 2), (SuiteName::AlgebraLaws, 3), (SuiteName::CyclicFixed, 2)] {
            let r = run_suite(s, n, &quick()).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(SuiteName::Spectral, 3, &quick()).unwrap().to_json_string();
        let b = run_suite(SuiteName::Spectral, 3, &quick()).unwrap().to_json_string();
        assert_eq!(a, b);
    }

    #[test]
    fn eval_and_eq() {
        assert_eq!(eval_expression("S1*S1' + S2*S2'", 2, BackendKind::Exact, 128).unwrap(), "1");
        assert!(compare_expressions("S1'*S2", "0", 2, BackendKind::Exact, 128).unwrap());
        assert!(!compare_expressions("S1", "S2", 2, BackendKind::Numeric, 128).unwrap());
        assert!(eval_expression("S9", 2, BackendKind::Exact, 128).is_err());
    }
}
