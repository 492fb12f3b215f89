use cuntz_core::construct::CyclicModel;
use cuntz_core::random::{self, ElementSpec};
use cuntz_core::scalar::{radical, CycloScalar};
use cuntz_core::suites::{run_suite, RunOptions, SuiteName};
use cuntz_core::{format_element, named_endo, parse_element, CyclicAction, Element, Endo, EndoKind, Exact, OpMatrix, Rank};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

type E = Element<CycloScalar>;

fn cyclo(order: u32, coeffs: &[(i64, i64)]) -> CycloScalar {
    let qs: Vec<BigRational> = coeffs.iter().map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q))).collect();
    CycloScalar::from_coefficients(order, &qs)
}

fn scalar_strategy() -> impl Strategy<Value = CycloScalar> {
    (prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 12]), prop::collection::vec((-5i64..=5, 1i64..=4), 1..6))
        .prop_map(|(order, coeffs)| cyclo(order, &coeffs))
}

fn realize(rank: Rank, seed: u64, terms: usize, len: usize) -> E {
    let mut rng = random::stream(seed, 0);
    random::element(&mut rng, rank, terms, len).realize(&Exact)
}

/// Smallest level accepted by `expand_to_level`, plus `extra`.
fn valid_level(x: &E, extra: usize) -> usize {
    x.terms().map(|(m, _)| m.beta.len()).max().unwrap_or(0) + extra
}

fn rank(n: usize) -> Rank {
    Rank::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclo_field_laws(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert!(a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c))).is_zero());
        prop_assert!(a.add(&b).add(&c).sub(&a.add(&b.add(&c))).is_zero());
        prop_assert!(a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c))).is_zero());
        prop_assert!(a.mul(&b).sub(&b.mul(&a)).is_zero());
        prop_assert!(a.add(&b).sub(&b.add(&a)).is_zero());
    }

    #[test]
    fn cyclo_conjugation(a in scalar_strategy()) {
        prop_assert!(a.conjugate().conjugate() == a);
        let lhs = a.conjugate().embed_numeric(128).to_complex64();
        let rhs = a.embed_numeric(128).to_complex64().conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn cyclo_lift_preserves_zero_verdict(a in scalar_strategy(), factor in 1u32..4) {
        let lifted = a.lift(a.order() * factor);
        prop_assert_eq!(lifted.is_zero(), a.is_zero());
        prop_assert!(lifted == a);
        prop_assert!(lifted.sub(&a).is_zero());
    }

    #[test]
    fn cyclo_reduce_is_idempotent(a in scalar_strategy()) {
        let again = CycloScalar::from_coefficients(a.order(), &a.coeffs());
        prop_assert!(again == a);
        prop_assert_eq!(again.coeffs(), a.coeffs());
    }

    #[test]
    fn element_associativity(n in 2usize..=4, seed in any::<u64>()) {
        let r = rank(n);
        let (x, y, z) = (realize(r, seed, 3, 3), realize(r, seed ^ 1, 3, 3), realize(r, seed ^ 2, 3, 3));
        prop_assert!((&(&x * &y) * &z).equals(&(&x * &(&y * &z))).unwrap());
    }

    #[test]
    fn adjoint_is_anti_multiplicative(n in 2usize..=4, seed in any::<u64>()) {
        let r = rank(n);
        let (x, y) = (realize(r, seed, 3, 3), realize(r, seed ^ 7, 3, 3));
        prop_assert!((&x * &y).adjoint().equals(&(&y.adjoint() * &x.adjoint())).unwrap());
    }

    #[test]
    fn expansion_preserves_equality(n in 2usize..=4, seed in any::<u64>(), extra in 0usize..=2) {
        let x = realize(rank(n), seed, 3, 3);
        let level = valid_level(&x, extra);
        prop_assert!(x.equals(&x.expand_to_level(level).unwrap()).unwrap());
    }

    #[test]
    fn equals_ignores_cuntz_relation_multiples(n in 2usize..=4, seed in any::<u64>()) {
        let r = rank(n);
        let x = realize(r, seed, 3, 3);
        let y = realize(r, seed ^ 3, 2, 2);
        let mut rel = Element::one(&Exact, r).negate();
        for i in 1..=n as i64 {
            rel = &rel + &Element::range_projection(&Exact, r, i);
        }
        prop_assert!(rel.is_zero().unwrap());
        prop_assert!(x.equals(&(&x + &(&rel * &y))).unwrap());
        prop_assert!(x.equals(&(&x + &(&y * &rel))).unwrap());
    }

    #[test]
    fn equals_is_an_equivalence(n in 2usize..=4, seed in any::<u64>(), extra in 0usize..=2) {
        let x = realize(rank(n), seed, 3, 2);
        let y = x.expand_to_level(valid_level(&x, extra)).unwrap();
        let z = y.contracted();
        prop_assert!(x.equals(&x).unwrap());
        prop_assert_eq!(x.equals(&y).unwrap(), y.equals(&x).unwrap());
        prop_assert!(x.equals(&y).unwrap() && y.equals(&z).unwrap() && x.equals(&z).unwrap());
    }

    #[test]
    fn gauge_degrees_add(n in 2usize..=4, seed in any::<u64>()) {
        let r = rank(n);
        let x = realize(r, seed, 3, 3);
        let y = realize(r, seed ^ 5, 3, 3);
        for (dx, cx) in x.gauge_components() {
            for (dy, cy) in y.gauge_components() {
                let p = &cx * &cy;
                prop_assert!(p.terms().all(|(m, _)| m.degree() == dx + dy));
            }
        }
    }

    #[test]
    fn parse_format_round_trip(n in 2usize..=4, seed in any::<u64>()) {
        let r = rank(n);
        let mut rng = random::stream(seed, 0);
        let spec: ElementSpec = random::element(&mut rng, r, 4, 3);
        let x = spec.realize(&Exact);
        let text = format_element(&x);
        let back = parse_element(&Exact, &text, r).unwrap();
        prop_assert!(back.equals(&x).unwrap(), "{}", text);
        let from_spec = parse_element(&Exact, &spec.to_expression(), r).unwrap();
        prop_assert!(from_spec.equals(&x).unwrap());
    }

    #[test]
    fn endomorphisms_are_homomorphisms(n in 2usize..=4, seed in any::<u64>(), kind in 0usize..2) {
        let r = rank(n);
        let kind = [EndoKind::Cyclic, EndoKind::Exchange][kind];
        let e: Endo<CycloScalar> = named_endo(&Exact, kind, n).unwrap();
        let (x, y) = (realize(r, seed, 3, 2), realize(r, seed ^ 9, 3, 2));
        let exy = e.apply(&(&x * &y)).unwrap();
        prop_assert!(exy.equals(&(&e.apply(&x).unwrap() * &e.apply(&y).unwrap())).unwrap());
        prop_assert!(e.apply(&x.adjoint()).unwrap().equals(&e.apply(&x).unwrap().adjoint()).unwrap());
    }

    #[test]
    fn conditional_expectation_laws(n in 2usize..=4, seed in any::<u64>()) {
        let act = CyclicAction::new(&Exact, n).unwrap();
        let r = rank(n);
        let x = realize(r, seed, 3, 2);
        let fx = act.expect(&x).unwrap();
        prop_assert!(act.expect(&fx).unwrap().equals(&fx).unwrap());
        prop_assert!(act.lambda().is_fixed(&fx).unwrap());
        let a = act.expect(&realize(r, seed ^ 11, 2, 2)).unwrap();
        prop_assert!(act.expect(&(&a * &x)).unwrap().equals(&(&a * &fx)).unwrap());
        let parts = act.decompose(&x).unwrap();
        let mut sum = Element::zero(r);
        for (k, c) in parts.iter().enumerate() {
            prop_assert!(act.lambda().apply(c).unwrap().equals(&c.scale(&act.eigenvalue(k))).unwrap());
            sum = &sum + c;
        }
        prop_assert!(sum.equals(&x).unwrap());
    }

    #[test]
    fn matrix_associativity_and_adjoint(n in 2usize..=3, size in 1usize..=3, seed in any::<u64>()) {
        let r = rank(n);
        let mut rng = random::stream(seed, 1);
        let a = random::matrix(&Exact, &mut rng, r, size);
        let b = random::matrix(&Exact, &mut rng, r, size);
        let c = random::matrix(&Exact, &mut rng, r, size);
        prop_assert!((&(&a * &b) * &c).equals(&(&a * &(&b * &c))).unwrap());
        prop_assert!((&a * &b).adjoint().equals(&(&b.adjoint() * &a.adjoint())).unwrap());
    }

    #[test]
    fn ad_is_multiplicative(n in 2usize..=3, seed in any::<u64>(), use_w in any::<bool>()) {
        let model = CyclicModel::new(&Exact, n).unwrap();
        let u = if use_w { &model.w } else { &model.z };
        let mut rng = random::stream(seed, 2);
        let a = random::matrix(&Exact, &mut rng, model.rank(), n);
        let b = random::matrix(&Exact, &mut rng, model.rank(), n);
        let lhs = (&a * &b).conjugate_by(u).unwrap();
        let rhs = &a.conjugate_by(u).unwrap() * &b.conjugate_by(u).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
        let id = OpMatrix::identity(&Exact, n, model.rank());
        prop_assert!(id.conjugate_by(u).unwrap().equals(&id).unwrap());
    }
}

#[test]
fn radicals_square_to_their_radicand() {
    for m in 1..=12u32 {
        let (_, r) = radical(m);
        assert!(r.mul(&r) == CycloScalar::from_integer(m as i64), "m = {m}");
    }
}

#[test]
fn automorphism_orders() {
    for n in 2..=6 {
        let c: Endo<CycloScalar> = named_endo(&Exact, EndoKind::Cyclic, n).unwrap();
        assert!(c.power(&Exact, n).unwrap().equals(&Endo::identity(&Exact, rank(n))).unwrap());
        let e: Endo<CycloScalar> = named_endo(&Exact, EndoKind::Exchange, n).unwrap();
        assert!(e.power(&Exact, 2).unwrap().equals(&Endo::identity(&Exact, rank(n))).unwrap());
    }
}

#[test]
fn cuntz_takesaki_round_trip() {
    for n in 2..=5 {
        for kind in [EndoKind::Cyclic, EndoKind::Exchange] {
            let e: Endo<CycloScalar> = named_endo(&Exact, kind, n).unwrap();
            let u = e.unitary(&Exact);
            let back = Endo::from_unitary(&Exact, &u).unwrap();
            assert!(back.equals(&e).unwrap());
            assert!(back.unitary(&Exact).equals(&u).unwrap());
        }
    }
}

#[test]
fn reports_are_deterministic_without_timing() {
    let opts = RunOptions { record_timing: false, samples: Some(5), ..RunOptions::default() };
    for (suite, n) in [(SuiteName::Spectral, 3), (SuiteName::Nogo, 2), (SuiteName::AlgebraLaws, 2)] {
        let a = run_suite(suite, n, &opts).unwrap().to_json_string();
        let b = run_suite(suite, n, &opts).unwrap().to_json_string();
        assert_eq!(a, b);
    }
}
