//! Algebras interpret a signature's operation symbols as total functions on a
//! carrier; homomorphisms relabel carriers compatibly with those functions.

use std::fmt::{self, Debug};
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::signature::{Protocol, ProtocolTerm, Signature};

/// Carrier elements key multisets, so they need a total order (which also
/// fixes the canonical output order) and a hash.
pub trait Carrier: Clone + Ord + Hash + Debug + Send + Sync {}

impl<T: Clone + Ord + Hash + Debug + Send + Sync> Carrier for T {}

/// A semantics for a [`Signature`].
///
/// `apply` must be deterministic and total on the carrier: partial
/// operations have to be totalized by the implementation.
pub trait Algebra {
    type Elem: Carrier;

    fn signature(&self) -> &Signature;

    /// Applies the operation at position `op` in `signature().ops()`.
    /// `args.len()` equals that operation's arity.
    fn apply(&self, op: usize, args: &[Self::Elem]) -> Self::Elem;
}

/// An algebra whose carrier can be listed, enabling exhaustive checks.
pub trait FiniteAlgebra: Algebra {
    fn elements(&self) -> Vec<Self::Elem>;
}

impl<A: Algebra + ?Sized> Algebra for &A {
    type Elem = A::Elem;

    fn signature(&self) -> &Signature {
        (**self).signature()
    }

    fn apply(&self, op: usize, args: &[Self::Elem]) -> Self::Elem {
        (**self).apply(op, args)
    }
}

impl<A: FiniteAlgebra + ?Sized> FiniteAlgebra for &A {
    fn elements(&self) -> Vec<Self::Elem> {
        (**self).elements()
    }
}

/// Evaluates `term` with `Var(i)` bound to `env[i]`.
///
/// # Panics
///
/// If `term` was not validated against `alg.signature()` with
/// `env.len()` inputs.
pub fn eval_term<A: Algebra + ?Sized>(alg: &A, term: &ProtocolTerm, env: &[A::Elem]) -> A::Elem {
    match term {
        ProtocolTerm::Var(i) => env[*i].clone(),
        ProtocolTerm::App { op, args } => {
            let index = alg
                .signature()
                .index_of(op)
                .unwrap_or_else(|| panic!("operation `{op}` missing from signature"));
            let values: Vec<A::Elem> = args.iter().map(|a| eval_term(alg, a, env)).collect();
            alg.apply(index, &values)
        }
    }
}

/// `A(P) : |A|^k -> |A|^l`, evaluated component-wise.
pub fn eval_protocol<A: Algebra + ?Sized>(alg: &A, p: &Protocol, env: &[A::Elem]) -> Vec<A::Elem> {
    debug_assert_eq!(env.len(), p.inputs);
    p.outputs.iter().map(|t| eval_term(alg, t, env)).collect()
}

/// Every `n`-tuple over `elements`, in lexicographic order of positions.
pub fn cartesian_power<T: Clone>(elements: &[T], n: usize) -> Vec<Vec<T>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                elements.iter().map(move |e| {
                    let mut next = prefix.clone();
                    next.push(e.clone());
                    next
                })
            })
            .collect()
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("source and target algebras have different signatures")]
pub struct SignatureMismatch;

type CarrierMap<S, T> = Arc<dyn Fn(&S) -> T + Send + Sync>;

/// A carrier map between two algebras over the same signature.
///
/// The homomorphism law is not verified on construction; use
/// [`check_hom_property`] to test it on samples.
pub struct Homomorphism<A: Algebra, B: Algebra> {
    source: A,
    target: B,
    map: CarrierMap<A::Elem, B::Elem>,
}

impl<A: Algebra + Clone, B: Algebra + Clone> Clone for Homomorphism<A, B> {
    fn clone(&self) -> Self {
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            map: Arc::clone(&self.map),
        }
    }
}

impl<A: Algebra + Debug, B: Algebra + Debug> Debug for Homomorphism<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}

impl<A: Algebra, B: Algebra> Homomorphism<A, B> {
    pub fn new(
        source: A,
        target: B,
        map: impl Fn(&A::Elem) -> B::Elem + Send + Sync + 'static,
    ) -> Result<Self, SignatureMismatch> {
        if source.signature() != target.signature() {
            return Err(SignatureMismatch);
        }
        Ok(Self {
            source,
            target,
            map: Arc::new(map),
        })
    }

    pub fn source(&self) -> &A {
        &self.source
    }

    pub fn target(&self) -> &B {
        &self.target
    }

    pub fn apply(&self, a: &A::Elem) -> B::Elem {
        (self.map)(a)
    }

    pub fn map_fn(&self) -> &(dyn Fn(&A::Elem) -> B::Elem + Send + Sync) {
        &*self.map
    }
}

impl<A: Algebra + Clone> Homomorphism<A, A> {
    pub fn identity(alg: A) -> Self {
        Self {
            source: alg.clone(),
            target: alg,
            map: Arc::new(|a: &A::Elem| a.clone()),
        }
    }
}

/// One operation application to test the homomorphism law on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSample<E> {
    pub op: String,
    pub args: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomOutcome<E, F> {
    pub sample: HomSample<E>,
    /// `f(op_source(args))`
    pub mapped_result: F,
    /// `op_target(f(args))`
    pub result_of_mapped: F,
}

impl<E, F: PartialEq> HomOutcome<E, F> {
    pub fn passed(&self) -> bool {
        self.mapped_result == self.result_of_mapped
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport<E, F> {
    pub outcomes: Vec<HomOutcome<E, F>>,
}

impl<E, F: PartialEq> HomReport<E, F> {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(HomOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HomOutcome<E, F>> {
        self.outcomes.iter().filter(|o| !o.passed())
    }
}

/// Checks `f(op_A(a_1..a_n)) = op_B(f(a_1)..f(a_n))` on each sample.
///
/// # Panics
///
/// If a sample names an unknown operation or has the wrong number of arguments.
pub fn check_hom_property<A: Algebra, B: Algebra>(
    h: &Homomorphism<A, B>,
    samples: &[HomSample<A::Elem>],
) -> HomReport<A::Elem, B::Elem> {
    let sig = h.source.signature();
    let outcomes = samples
        .iter()
        .map(|sample| {
            let index = sig
                .index_of(&sample.op)
                .unwrap_or_else(|| panic!("operation `{}` missing from signature", sample.op));
            assert_eq!(sig.ops()[index].arity, sample.args.len(), "sample arity");
            let mapped_result = h.apply(&h.source.apply(index, &sample.args));
            let mapped_args: Vec<B::Elem> = sample.args.iter().map(|a| h.apply(a)).collect();
            let result_of_mapped = h.target.apply(index, &mapped_args);
            HomOutcome {
                sample: sample.clone(),
                mapped_result,
                result_of_mapped,
            }
        })
        .collect();
    HomReport { outcomes }
}

/// Every operation applied to every argument tuple of a finite carrier.
pub fn exhaustive_samples<A: FiniteAlgebra + ?Sized>(alg: &A) -> Vec<HomSample<A::Elem>> {
    samples_over(alg.signature(), &alg.elements())
}

/// Every operation applied to every argument tuple drawn from `pool`.
pub fn samples_over<E: Clone>(sig: &Signature, pool: &[E]) -> Vec<HomSample<E>> {
    sig.ops()
        .iter()
        .flat_map(|op| {
            cartesian_power(pool, op.arity).into_iter().map(move |args| HomSample {
                op: op.name.clone(),
                args,
            })
        })
        .collect()
}
