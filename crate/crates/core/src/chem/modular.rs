//! Cyclic groups `ℤ/n` under addition, with reduction homomorphisms.

use thiserror::Error;

use crate::algebra::{Algebra, FiniteAlgebra, Homomorphism};
use crate::signature::Signature;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModulusError {
    #[error("modulus must be at least 1")]
    Zero,
    #[error("{target} does not divide {modulus}")]
    NotADivisor { modulus: u64, target: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularGroup {
    sig: Signature,
    modulus: u64,
}

impl ModularGroup {
    pub fn new(modulus: u64) -> Result<Self, ModulusError> {
        if modulus == 0 {
            return Err(ModulusError::Zero);
        }
        Ok(Self {
            sig: Signature::binary("star"),
            modulus,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.modulus
    }
}

pub fn modular_group_algebra(n: u64) -> Result<ModularGroup, ModulusError> {
    ModularGroup::new(n)
}

impl Algebra for ModularGroup {
    type Elem = u64;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, _op: usize, args: &[u64]) -> u64 {
        ((args[0] as u128 + args[1] as u128) % self.modulus as u128) as u64
    }
}

impl FiniteAlgebra for ModularGroup {
    fn elements(&self) -> Vec<u64> {
        (0..self.modulus).collect()
    }
}

/// `ℤ/m → ℤ/n`, `x ↦ x mod n`, defined when `n | m`.
pub fn reduce_mod(m: u64, n: u64) -> Result<Homomorphism<ModularGroup, ModularGroup>, ModulusError> {
    let source = ModularGroup::new(m)?;
    let target = ModularGroup::new(n)?;
    if !m.is_multiple_of(n) {
        return Err(ModulusError::NotADivisor { modulus: m, target: n });
    }
    Ok(Homomorphism::new(source, target, move |x: &u64| x % n).expect("same signature"))
}
