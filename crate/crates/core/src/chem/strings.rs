//! Strings over a finite alphabet under concatenation.

use std::collections::BTreeSet;

use crate::algebra::{Algebra, Homomorphism};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringMonoid {
    sig: Signature,
    alphabet: BTreeSet<char>,
}

impl StringMonoid {
    pub fn new(alphabet: impl IntoIterator<Item = char>) -> Self {
        Self {
            sig: Signature::binary("interact"),
            alphabet: alphabet.into_iter().collect(),
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn contains(&self, s: &str) -> bool {
        s.chars().all(|c| self.alphabet.contains(&c))
    }
}

pub fn string_monoid_algebra(alphabet: impl IntoIterator<Item = char>) -> StringMonoid {
    StringMonoid::new(alphabet)
}

impl Algebra for StringMonoid {
    type Elem = String;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, _op: usize, args: &[String]) -> String {
        let mut out = String::with_capacity(args[0].len() + args[1].len());
        out.push_str(&args[0]);
        out.push_str(&args[1]);
        out
    }
}

/// Erases every letter outside `keep`; the target alphabet is
/// `keep ∩ source.alphabet()`.
pub fn alphabet_projection(
    source: &StringMonoid,
    keep: impl IntoIterator<Item = char>,
) -> Homomorphism<StringMonoid, StringMonoid> {
    let keep: BTreeSet<char> = keep.into_iter().filter(|c| source.alphabet.contains(c)).collect();
    let target = StringMonoid::new(keep.iter().copied());
    Homomorphism::new(source.clone(), target, move |s: &String| {
        s.chars().filter(|c| keep.contains(c)).collect()
    })
    .expect("same signature")
}
