//! Strategies and checked properties shared by the property tests and the
//! acceptance suite. Each check returns `Err` with a description on failure.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use logdiv::cas::*;
use logdiv::divisor::SymbolRing;
use logdiv::weyl::{WeylOp, WeylRing};

pub const CASES: u32 = 1000;

pub fn ring3() -> Arc<Ring> {
    Ring::new(&["x", "y", "z"])
}

fn q(c: i64) -> Q {
    Q::from_integer(c.into())
}

/// Up to `terms` monomials of total degree at most `deg` in `n` variables.
pub fn poly_terms(n: usize, deg: u32, terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), -3i64..=3), 1..=terms)
        .prop_map(move |ts| ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= deg).collect())
}

/// Homogeneous of degree `deg`: exponents come from compositions of `deg`.
pub fn homogeneous_terms(deg: u32, terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(((0..=deg), (0..=deg), -3i64..=3), 1..=terms).prop_map(move |ts| {
        ts.into_iter()
            .filter(|(a, b, _)| a + b <= deg)
            .map(|(a, b, c)| (vec![a, b, deg - a - b], c))
            .collect()
    })
}

pub fn build(ring: &Arc<Ring>, ts: &[(Vec<u32>, i64)]) -> Poly {
    Poly::from_terms(ring, ts.iter().map(|(e, c)| (Monomial::from_slice(e), q(*c))))
}

pub fn ideal(n_gens: usize) -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64)>>> {
    prop::collection::vec(poly_terms(3, 2, 3), 1..=n_gens)
}

/// Two or three generators with at least one term each.
pub fn several() -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64)>>> {
    let term = (prop::collection::vec(0u32..=1, 3), prop_oneof![-3i64..=-1, 1i64..=3]);
    prop::collection::vec(prop::collection::vec(term, 1..=3), 2..=3)
}

pub fn nonzero(ring: &Arc<Ring>, raw: &[Vec<(Vec<u32>, i64)>]) -> Vec<Poly> {
    raw.iter().map(|t| build(ring, t)).filter(|p| !p.is_zero()).collect()
}

pub fn orders() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just(MonomialOrder::Lex),
        Just(MonomialOrder::DegRevLex),
        Just(MonomialOrder::Weighted(vec![3, 2, 1])),
        Just(MonomialOrder::Block {
            first: vec![0],
            first_order: Box::new(MonomialOrder::DegRevLex),
            second_order: Box::new(MonomialOrder::DegRevLex),
        }),
    ]
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn cas<T>(r: Result<T, CasError>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn gb_idempotent(raw: &[Vec<(Vec<u32>, i64)>], order: &MonomialOrder) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(&r, raw);
    prop_assume!(!gens.is_empty());
    let once = cas(buchberger(&cas(IdealBasis::new(&r, gens.clone(), order.clone()))?))?;
    let twice = cas(buchberger(&cas(IdealBasis::new(&r, once.generators().to_vec(), order.clone()))?))?;
    check(once.generators() == twice.generators(), || format!("{:?} vs {:?}", once.generators(), twice.generators()))?;
    for g in &gens {
        check(cas(normal_form(g, &once))?.is_zero(), || format!("generator {g} does not reduce to zero"))?;
    }
    Ok(())
}

pub fn membership(
    raw: &[Vec<(Vec<u32>, i64)>],
    mult: &[Vec<(Vec<u32>, i64)>],
    rest: &[(Vec<u32>, i64)],
) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(&r, raw);
    prop_assume!(!gens.is_empty());
    let mut p = Poly::zero(&r);
    for (g, h) in gens.iter().zip(mult) {
        p = &p + &(g * &build(&r, h));
    }
    check(cas(ideal_contains(&gens, &p))?, || format!("{p} is a combination but was rejected"))?;
    let gb = cas(buchberger(&cas(IdealBasis::new(&r, gens.clone(), MonomialOrder::DegRevLex))?))?;
    let extra = build(&r, rest);
    let a = cas(normal_form(&(&p + &extra), &gb))?;
    let b = cas(normal_form(&extra, &gb))?;
    check(a == b, || format!("normal forms differ: {a} vs {b}"))?;
    check(cas(ideal_contains(&gens, &(&extra - &b)))?, || "p − NF(p) is not in the ideal".into())
}

pub fn syzygies_contract(raw: &[Vec<(Vec<u32>, i64)>]) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(&r, raw);
    prop_assume!(gens.len() >= 2);
    let syz = cas(syzygies(&gens))?;
    check(!syz.is_empty(), || "two or more generators always have a syzygy".into())?;
    for s in &syz {
        let mut acc = Poly::zero(&r);
        for (c, g) in s.iter().zip(&gens) {
            acc = &acc + &(c * g);
        }
        check(acc.is_zero(), || format!("syzygy {s:?} contracts to {acc}"))?;
        check(s.iter().any(|c| !c.is_zero()), || "zero syzygy returned".into())?;
    }
    Ok(())
}

pub fn elimination_sound(raw: &[Vec<(Vec<u32>, i64)>], var: usize) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(&r, raw);
    prop_assume!(!gens.is_empty());
    let out = cas(elimination_ideal(&r, &gens, &[var]))?;
    for p in &out {
        check(!p.uses_var(var), || format!("{p} still uses variable {var}"))?;
        check(cas(ideal_contains(&gens, p))?, || format!("{p} is not in the ideal"))?;
    }
    // products that avoid the variable must be caught
    let free: Vec<&Poly> = gens.iter().filter(|g| !g.uses_var(var)).collect();
    for g in free {
        check(cas(ideal_contains(&out, g))?, || format!("{g} avoids the variable but is not in the elimination"))?;
    }
    Ok(())
}

pub fn dimension_drops(raw: &[Vec<(Vec<u32>, i64)>], line: &[i64; 3]) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(&r, raw);
    let d = cas(krull_dimension(&r, &gens))?;
    let l = Poly::from_terms(&r, (0..3).map(|i| (Monomial::var(3, i, 1), q(line[i]))));
    let mut cut = gens.clone();
    cut.push(l);
    let e = cas(krull_dimension(&r, &cut))?;
    check(e == (d - 1).max(0), || format!("dimension {d} became {e}"))
}

pub fn homogeneous_ideal() -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64)>>> {
    prop::collection::vec((1u32..=2).prop_flat_map(|d| homogeneous_terms(d, 3)), 1..=2)
}

pub fn generic_line() -> impl Strategy<Value = [i64; 3]> {
    [1i64..=1_000_000, 1i64..=1_000_000, 1i64..=1_000_000]
}

pub fn weyl_ring() -> Arc<WeylRing> {
    WeylRing::new(&Ring::new(&["x", "y"]))
}

/// Operators in `D_2[s]`: exponents `[x, y, ∂x, ∂y, s]`.
pub fn weyl_terms() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 5), -3i64..=3), 1..=4)
}

pub fn weyl_op(ring: &Arc<WeylRing>, ts: &[(Vec<u32>, i64)]) -> WeylOp {
    WeylOp::from_terms(ring, ts.iter().map(|(e, c)| (Monomial::from_slice(e), q(*c))))
}

pub fn weyl_associative(a: &[(Vec<u32>, i64)], b: &[(Vec<u32>, i64)], c: &[(Vec<u32>, i64)]) -> Result<(), TestCaseError> {
    let r = weyl_ring();
    let (a, b, c) = (weyl_op(&r, a), weyl_op(&r, b), weyl_op(&r, c));
    let left = &(&a * &b) * &c;
    let right = &a * &(&b * &c);
    check(left == right, || format!("({a})({b})({c}) is not associative"))?;
    let dist = &a * &(&b + &c);
    check(dist == &(&a * &b) + &(&a * &c), || "left distributivity fails".into())
}

pub fn pbw_symbols(a: &[(Vec<u32>, i64)], b: &[(Vec<u32>, i64)], c: &[(Vec<u32>, i64)]) -> Result<(), TestCaseError> {
    let r = weyl_ring();
    let sr = SymbolRing::new(r.base());
    let (a, b, c) = (weyl_op(&r, a), weyl_op(&r, b), weyl_op(&r, c));
    prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
    let abc = &(&a * &b) * &c;
    let expect = &(&a.sigma_t(&sr) * &b.sigma_t(&sr)) * &c.sigma_t(&sr);
    check(abc.sigma_t(&sr) == expect, || format!("σ(abc) ≠ σ(a)σ(b)σ(c) for {a}, {b}, {c}"))?;
    let ord = |p: &WeylOp| p.total_order().expect("nonzero");
    check(ord(&abc) == ord(&a) + ord(&b) + ord(&c), || "total order is not additive".into())?;
    let comm = &(&a * &b) - &(&b * &a);
    check(comm.total_order().is_none_or(|o| o + 1 <= ord(&a) + ord(&b)), || {
        format!("[{a}, {b}] does not drop the total order")
    })
}

/// Runs `CASES` cases of a property outside the test harness.
pub fn run_cases<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map(|_| CASES).map_err(|e| e.to_string())
}
