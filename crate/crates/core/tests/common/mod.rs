//! Shared oracles and generators for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use flask_core::algebra::{eval_protocol, Algebra};
use flask_core::signature::{OpSymbol, Protocol, ProtocolTerm, Signature};
use flask_core::{Distribution, Multiset};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// Brute-force step distribution: every ordered sequence of `k` distinct
/// token positions is equally likely.
pub fn token_oracle<A: Algebra>(alg: &A, p: &Protocol, state: &Multiset<A::Elem>) -> Distribution<Multiset<A::Elem>> {
    let tokens: Vec<A::Elem> = state
        .iter()
        .flat_map(|(e, n)| std::iter::repeat_n(e.clone(), n as usize))
        .collect();
    let k = p.inputs;
    if k > tokens.len() {
        return Distribution::unit(state.clone());
    }
    let mut outcomes: BTreeMap<Multiset<A::Elem>, u64> = BTreeMap::new();
    let mut chosen = Vec::new();
    sequences(tokens.len(), k, &mut chosen, &mut |positions| {
        let drawn: Vec<A::Elem> = positions.iter().map(|&i| tokens[i].clone()).collect();
        let next: Multiset<A::Elem> = tokens
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, e)| e.clone())
            .chain(eval_protocol(alg, p, &drawn))
            .collect();
        *outcomes.entry(next).or_default() += 1;
    });
    Distribution::from_counts(outcomes).unwrap()
}

fn sequences(n: usize, k: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for i in 0..n {
        if !chosen.contains(&i) {
            chosen.push(i);
            sequences(n, k, chosen, visit);
            chosen.pop();
        }
    }
}

/// Random positive rational weights on `items`, normalized; repeated items
/// have their weights added.
pub fn random_weights<S: Ord>(rng: &mut impl Rng, items: Vec<S>) -> Distribution<S> {
    let raw: Vec<BigRational> = items
        .iter()
        .map(|_| {
            BigRational::new(
                BigInt::from(rng.random_range(1..=50u32)),
                BigInt::from(rng.random_range(1..=13u32)),
            )
        })
        .collect();
    let total: BigRational = raw.iter().sum();
    Distribution::new(items.into_iter().zip(raw).map(|(s, w)| (s, w / &total))).unwrap()
}

/// A distribution over `0..universe` with at most `max_support` points.
pub fn random_dist(rng: &mut impl Rng, universe: u32, max_support: usize) -> Distribution<u32> {
    let size = rng.random_range(1..=max_support);
    let points = (0..size).map(|_| rng.random_range(0..universe)).collect();
    random_weights(rng, points)
}

/// A multiset with total uniform in `0..=max_total` over `pool`.
pub fn random_state<E: Ord + Clone>(rng: &mut impl Rng, pool: &[E], max_total: u64) -> Multiset<E> {
    let total = rng.random_range(0..=max_total);
    (0..total)
        .map(|_| pool[rng.random_range(0..pool.len())].clone())
        .collect()
}

/// `k` inputs and `l` outputs, for algebras over one binary `op`.
pub fn protocol_zoo(op: &str) -> Vec<Protocol> {
    let v = ProtocolTerm::var;
    let app = |a, b| ProtocolTerm::app(op, vec![a, b]);
    vec![
        Protocol::new(0, vec![]),
        Protocol::delete(),
        Protocol::new(1, vec![v(0)]),
        Protocol::new(1, vec![app(v(0), v(0)), v(0)]),
        Protocol::new(2, vec![]),
        Protocol::new(2, vec![v(0), app(v(0), v(1))]),
        Protocol::new(2, vec![app(v(1), v(0))]),
        Protocol::new(2, vec![v(1), v(0), app(v(0), v(1))]),
    ]
}

/// Bytes with a nullary `seed` (zero) and a wrapping successor `inc`, for
/// testing protocols without inputs.
#[derive(Debug, Clone)]
pub struct Counter {
    sig: Signature,
}

impl Counter {
    pub fn new() -> Self {
        Self {
            sig: Signature::new(vec![OpSymbol::new("seed", 0), OpSymbol::new("inc", 1)]).unwrap(),
        }
    }
}

impl Algebra for Counter {
    type Elem = u8;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: usize, args: &[u8]) -> u8 {
        match op {
            0 => 0,
            _ => args[0].wrapping_add(1),
        }
    }
}
