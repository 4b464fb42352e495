//! The finite distribution monad with exact rational weights.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error("distribution has empty support")]
    Empty,
    #[error("negative weight {0}")]
    NegativeWeight(BigRational),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(BigRational),
}

/// A finitely supported probability distribution.
///
/// Every stored weight is strictly positive and the weights sum to exactly
/// one. Support is kept in the canonical order of `S`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution<S: Ord> {
    weights: BTreeMap<S, BigRational>,
}

impl<S: Ord + fmt::Debug> fmt::Debug for Distribution<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (s, w) in &self.weights {
            list.entry(&format_args!("{w} * {s:?}"));
        }
        list.finish()
    }
}

fn collect<S: Ord>(pairs: impl IntoIterator<Item = (S, BigRational)>) -> BTreeMap<S, BigRational> {
    let mut weights: BTreeMap<S, BigRational> = BTreeMap::new();
    for (s, w) in pairs {
        *weights.entry(s).or_insert_with(BigRational::zero) += w;
    }
    weights.retain(|_, w| !w.is_zero());
    weights
}

impl<S: Ord> Distribution<S> {
    /// `η(s)`: the point mass at `s`.
    pub fn unit(s: S) -> Self {
        Self {
            weights: BTreeMap::from([(s, BigRational::one())]),
        }
    }

    /// Collects like terms and checks the result is a distribution.
    pub fn new(pairs: impl IntoIterator<Item = (S, BigRational)>) -> Result<Self, DistError> {
        let weights = collect(pairs);
        if let Some(w) = weights.values().find(|w| w.is_negative()) {
            return Err(DistError::NegativeWeight(w.clone()));
        }
        if weights.is_empty() {
            return Err(DistError::Empty);
        }
        let sum: BigRational = weights.values().sum();
        if !sum.is_one() {
            return Err(DistError::NotNormalized(sum));
        }
        Ok(Self { weights })
    }

    /// Normalized empirical distribution of observed counts.
    pub fn from_counts(counts: impl IntoIterator<Item = (S, u64)>) -> Result<Self, DistError> {
        let counts: Vec<(S, u64)> = counts.into_iter().collect();
        let n: u64 = counts.iter().map(|(_, c)| c).sum();
        if n == 0 {
            return Err(DistError::Empty);
        }
        let n = BigInt::from(n);
        Self::new(
            counts
                .into_iter()
                .map(|(s, c)| (s, BigRational::new(c.into(), n.clone()))),
        )
    }

    /// Weight of `s`; zero outside the support.
    pub fn weight(&self, s: &S) -> BigRational {
        self.weights.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &BigRational)> + '_ {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &S> + '_ {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> BigRational {
        self.weights.values().sum()
    }

    pub fn into_inner(self) -> BTreeMap<S, BigRational> {
        self.weights
    }

    /// `D(f)`: pushes weight along `f`, collecting like terms.
    pub fn map<T: Ord>(&self, mut f: impl FnMut(&S) -> T) -> Distribution<T> {
        Distribution {
            weights: collect(self.weights.iter().map(|(s, w)| (f(s), w.clone()))),
        }
    }

    /// `μ ∘ D(f)` computed without materializing the nested distribution.
    pub fn and_then<T: Ord>(&self, mut f: impl FnMut(&S) -> Distribution<T>) -> Distribution<T> {
        self.try_and_then(|s| Ok::<_, std::convert::Infallible>(f(s)))
            .unwrap_or_else(|e| match e {})
    }

    pub fn try_and_then<T: Ord, E>(
        &self,
        mut f: impl FnMut(&S) -> Result<Distribution<T>, E>,
    ) -> Result<Distribution<T>, E> {
        let mut pairs = Vec::new();
        for (s, w) in &self.weights {
            for (t, v) in f(s)?.weights {
                pairs.push((t, v * w));
            }
        }
        Ok(Distribution {
            weights: collect(pairs),
        })
    }

    /// Total variation distance `½ Σ |d1(s) − d2(s)|`.
    pub fn tv_distance(&self, other: &Self) -> BigRational {
        let mut sum = BigRational::zero();
        for (s, w) in &self.weights {
            sum += (w - other.weight(s)).abs();
        }
        for (s, w) in &other.weights {
            if !self.weights.contains_key(s) {
                sum += w;
            }
        }
        sum / BigRational::from_integer(2.into())
    }

    pub fn sampler(&self) -> Sampler<'_, S> {
        Sampler::new(self)
    }

    /// Draws one state; see [`Sampler`].
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> &S {
        self.sampler().sample(rng)
    }
}

impl<S: Ord + Clone> Distribution<Distribution<S>> {
    /// `μ`: the weight of `s` is `Σ_e e(s)·dd(e)`.
    pub fn join(&self) -> Distribution<S> {
        self.and_then(Clone::clone)
    }
}

/// Inverse-CDF sampling over the canonically ordered support.
///
/// A draw `u` is a uniform 64-bit integer, read as the rational `u / 2^64`.
/// State `i` is returned when `u` falls below `ceil(c_i · 2^64)` for the
/// cumulative weight `c_i` but not below the previous threshold, which is the
/// same as comparing `u / 2^64 < c_i` exactly.
pub struct Sampler<'a, S: Ord> {
    states: Vec<&'a S>,
    thresholds: Vec<u128>,
}

impl<'a, S: Ord> Sampler<'a, S> {
    fn new(d: &'a Distribution<S>) -> Self {
        let scale = BigInt::one() << 64;
        let mut cumulative = BigRational::zero();
        let mut states = Vec::with_capacity(d.len());
        let mut thresholds = Vec::with_capacity(d.len());
        for (s, w) in &d.weights {
            cumulative += w;
            let scaled: BigInt = cumulative.numer() * &scale;
            let (q, r) = scaled.div_rem(cumulative.denom());
            let ceil = if r.is_zero() { q } else { q + 1 };
            states.push(s);
            thresholds.push(ceil.to_u128().expect("cumulative weight above one"));
        }
        Self { states, thresholds }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> &'a S {
        let u = rng.next_u64() as u128;
        let i = self.thresholds.partition_point(|&t| t <= u);
        self.states[i.min(self.states.len() - 1)]
    }
}
