//! Markov processes built from an algebra and a list of protocols.
//!
//! One step of a single protocol `P : X^k -> X^l` draws an ordered `k`-tuple
//! of members without replacement, removes them, and inserts the `l`
//! outputs of `A(P)` on that tuple. If the reactor holds fewer than `k`
//! members the state is left unchanged. A list of protocols is applied in
//! order, each step feeding the next.
//!
//! `k = 0` protocols fire on every state, the empty one included, and
//! insert their constant outputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{eval_protocol, Algebra, Homomorphism};
use crate::dist::Distribution;
use crate::multiset::Multiset;
use crate::signature::{is_permutation, Protocol, ValidationError};

/// Default cap on the number of label tuples an exact step may enumerate.
pub const DEFAULT_EXACT_BUDGET: u64 = 1_000_000;

pub type StateDist<E> = Distribution<Multiset<E>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlaskError {
    #[error("a process needs at least one protocol")]
    NoProtocols,
    #[error("protocol {index} is invalid: {source}")]
    InvalidProtocol {
        index: usize,
        #[source]
        source: ValidationError,
    },
    #[error("exact step needs {tuples} tuples, over the budget of {budget}; use sampling instead")]
    BudgetExceeded { tuples: u128, budget: u64 },
    #[error("source and target processes have different protocol lists")]
    ProtocolMismatch,
    #[error("{0:?} is not a permutation of the protocol outputs")]
    InvalidPermutation(Vec<usize>),
}

/// `|supp σ|^k`, saturating.
fn tuple_count(species: usize, k: usize) -> u128 {
    let k = u32::try_from(k).unwrap_or(u32::MAX);
    (species as u128).checked_pow(k).unwrap_or(u128::MAX)
}

/// Exact one-step distribution of a single protocol.
///
/// Only ordered tuples of supported labels with positive pick probability
/// are enumerated; `budget` bounds `|supp σ|^k`.
pub fn step_exact_single<A: Algebra + ?Sized>(
    alg: &A,
    p: &Protocol,
    state: &Multiset<A::Elem>,
    budget: u64,
) -> Result<StateDist<A::Elem>, FlaskError> {
    let k = p.inputs;
    let total = state.total();
    if k as u64 > total {
        return Ok(Distribution::unit(state.clone()));
    }
    let tuples = tuple_count(state.species(), k);
    if tuples > budget as u128 {
        return Err(FlaskError::BudgetExceeded { tuples, budget });
    }
    let denom: BigInt = (0..k as u64).map(|i| BigInt::from(total - i)).product();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    enumerate_draws(alg, p, state.clone(), &mut prefix, BigInt::one(), &denom, &mut out);
    Ok(Distribution::new(out).expect("pick probabilities sum to one"))
}

fn enumerate_draws<A: Algebra + ?Sized>(
    alg: &A,
    p: &Protocol,
    remaining: Multiset<A::Elem>,
    prefix: &mut Vec<A::Elem>,
    numer: BigInt,
    denom: &BigInt,
    out: &mut Vec<(Multiset<A::Elem>, BigRational)>,
) {
    if prefix.len() == p.inputs {
        let mut next = remaining;
        for product in eval_protocol(alg, p, prefix) {
            next.insert(product);
        }
        out.push((next, BigRational::new(numer, denom.clone())));
        return;
    }
    let choices: Vec<(A::Elem, u64)> = remaining.iter().map(|(e, n)| (e.clone(), n)).collect();
    for (label, count) in choices {
        let mut rest = remaining.clone();
        rest.take(&label);
        prefix.push(label);
        enumerate_draws(alg, p, rest, prefix, &numer * count, denom, out);
        prefix.pop();
    }
}

/// Draws one step of `p` by picking tokens sequentially without replacement.
pub fn step_sample_single<A: Algebra + ?Sized, R: Rng + ?Sized>(
    alg: &A,
    p: &Protocol,
    state: &mut Multiset<A::Elem>,
    rng: &mut R,
) {
    let mut total = state.total();
    if p.inputs as u64 > total {
        return;
    }
    let mut drawn = Vec::with_capacity(p.inputs);
    for _ in 0..p.inputs {
        let index = rng.random_range(0..total);
        let label = state.token(index).expect("token index below total").clone();
        state.take(&label);
        drawn.push(label);
        total -= 1;
    }
    for product in eval_protocol(alg, p, &drawn) {
        state.insert(product);
    }
}

/// An algebra together with the ordered protocol list `(P_1, …, P_n)`.
#[derive(Debug, Clone)]
pub struct FlaskProcess<A: Algebra> {
    alg: A,
    protocols: Vec<Protocol>,
    exact_budget: u64,
}

impl<A: Algebra> FlaskProcess<A> {
    pub fn new(alg: A, protocols: Vec<Protocol>) -> Result<Self, FlaskError> {
        if protocols.is_empty() {
            return Err(FlaskError::NoProtocols);
        }
        for (index, p) in protocols.iter().enumerate() {
            p.validate(alg.signature())
                .map_err(|source| FlaskError::InvalidProtocol { index, source })?;
        }
        Ok(Self {
            alg,
            protocols,
            exact_budget: DEFAULT_EXACT_BUDGET,
        })
    }

    pub fn with_exact_budget(mut self, budget: u64) -> Self {
        self.exact_budget = budget;
        self
    }

    pub fn algebra(&self) -> &A {
        &self.alg
    }

    pub fn protocols(&self) -> &[Protocol] {
        &self.protocols
    }

    pub fn exact_budget(&self) -> u64 {
        self.exact_budget
    }

    /// Exact one-step distribution of the whole protocol list: each
    /// protocol's step is bound onto the distribution of the previous ones.
    pub fn step_exact(&self, state: &Multiset<A::Elem>) -> Result<StateDist<A::Elem>, FlaskError> {
        let (first, rest) = self.protocols.split_first().expect("nonempty protocol list");
        let mut d = step_exact_single(&self.alg, first, state, self.exact_budget)?;
        for p in rest {
            d = d.try_and_then(|s| step_exact_single(&self.alg, p, s, self.exact_budget))?;
        }
        Ok(d)
    }

    pub fn step_sample<R: Rng + ?Sized>(&self, state: &Multiset<A::Elem>, rng: &mut R) -> Multiset<A::Elem> {
        let mut next = state.clone();
        self.step_sample_in_place(&mut next, rng);
        next
    }

    pub fn step_sample_in_place<R: Rng + ?Sized>(&self, state: &mut Multiset<A::Elem>, rng: &mut R) {
        for p in &self.protocols {
            step_sample_single(&self.alg, p, state, rng);
        }
    }

    /// `initial` followed by `steps` sampled states.
    pub fn run_trajectory<R: Rng + ?Sized>(
        &self,
        initial: &Multiset<A::Elem>,
        steps: usize,
        rng: &mut R,
    ) -> Vec<Multiset<A::Elem>> {
        let mut states = Vec::with_capacity(steps + 1);
        self.walk(initial, steps, rng, |_, s| states.push(s.clone()));
        states
    }

    /// Runs a trajectory, handing each state (step 0 included) to `observe`
    /// without keeping the history.
    pub fn walk<R: Rng + ?Sized>(
        &self,
        initial: &Multiset<A::Elem>,
        steps: usize,
        rng: &mut R,
        mut observe: impl FnMut(usize, &Multiset<A::Elem>),
    ) {
        let mut state = initial.clone();
        observe(0, &state);
        for t in 1..=steps {
            self.step_sample_in_place(&mut state, rng);
            observe(t, &state);
        }
    }
}

/// The generator for trajectory `index` of an ensemble seeded with
/// `master_seed`: ChaCha8 keyed by `seed_from_u64(master_seed)`, using
/// `index` as the stream number. Streams never overlap.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Runs `job` once per trajectory index with that index's generator and
/// returns the results in index order, independent of `parallel`.
pub fn run_ensemble<T, F>(master_seed: u64, trajectories: usize, parallel: bool, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync,
{
    let run = |i: usize| job(i, &mut trajectory_rng(master_seed, i as u64));
    if parallel {
        (0..trajectories).into_par_iter().map(run).collect()
    } else {
        (0..trajectories).map(run).collect()
    }
}

/// Both ways around the naturality square for one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityReport<E: Ord> {
    pub relabelled_state: Multiset<E>,
    /// `D(f_*)(Flask(A)(σ))`
    pub step_then_relabel: StateDist<E>,
    /// `Flask(B)(f_* σ)`
    pub relabel_then_step: StateDist<E>,
}

impl<E: Ord> NaturalityReport<E> {
    pub fn passed(&self) -> bool {
        self.step_then_relabel == self.relabel_then_step
    }
}

/// The state map `f_*` induced by an algebra homomorphism.
pub struct MarkovMorphism<'a, A: Algebra, B: Algebra> {
    source: &'a FlaskProcess<A>,
    target: &'a FlaskProcess<B>,
    hom: &'a Homomorphism<A, B>,
}

/// Pairs two processes over the same protocol list with a homomorphism
/// between their algebras. The processes' algebras are expected to be the
/// homomorphism's source and target.
pub fn markov_morphism<'a, A: Algebra, B: Algebra>(
    source: &'a FlaskProcess<A>,
    target: &'a FlaskProcess<B>,
    hom: &'a Homomorphism<A, B>,
) -> Result<MarkovMorphism<'a, A, B>, FlaskError> {
    if source.protocols != target.protocols {
        return Err(FlaskError::ProtocolMismatch);
    }
    Ok(MarkovMorphism { source, target, hom })
}

impl<A: Algebra, B: Algebra> MarkovMorphism<'_, A, B> {
    pub fn map_state(&self, state: &Multiset<A::Elem>) -> Multiset<B::Elem> {
        state.pushforward(|a| self.hom.apply(a))
    }

    /// Computes both paths around the square with exact arithmetic.
    pub fn check_naturality(&self, state: &Multiset<A::Elem>) -> Result<NaturalityReport<B::Elem>, FlaskError> {
        let step_then_relabel = self.source.step_exact(state)?.map(|s| self.map_state(s));
        let relabelled_state = self.map_state(state);
        let relabel_then_step = self.target.step_exact(&relabelled_state)?;
        Ok(NaturalityReport {
            relabelled_state,
            step_then_relabel,
            relabel_then_step,
        })
    }
}

/// Compares the exact step of `p` with that of `p` with its outputs reordered
/// by `perm`.
pub fn check_output_order_invariance<A: Algebra + ?Sized>(
    alg: &A,
    p: &Protocol,
    perm: &[usize],
    state: &Multiset<A::Elem>,
    budget: u64,
) -> Result<bool, FlaskError> {
    if !is_permutation(perm, p.outputs.len()) {
        return Err(FlaskError::InvalidPermutation(perm.to_vec()));
    }
    let permuted = p.permute_outputs(perm).expect("checked permutation");
    Ok(step_exact_single(alg, p, state, budget)? == step_exact_single(alg, &permuted, state, budget)?)
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(rest, prefix, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}
