//! The number-division chemistry over the positive integers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{Algebra, Homomorphism};
use crate::signature::Signature;

/// `interact(a, b) = a / b` when `b | a`, else `a`, on `ℕ≥1`.
///
/// Positive integers under multiplication cancel on the right, which is what
/// makes the quotient well defined. Zero is outside the carrier; if it shows
/// up as a divisor the operation returns `a`.
#[derive(Debug, Clone)]
pub struct DivisionAlgebra {
    sig: Signature,
}

impl Default for DivisionAlgebra {
    fn default() -> Self {
        Self {
            sig: Signature::binary("interact"),
        }
    }
}

pub fn division_algebra() -> DivisionAlgebra {
    DivisionAlgebra::default()
}

impl DivisionAlgebra {
    pub fn interact(a: &BigUint, b: &BigUint) -> BigUint {
        if b.is_zero() {
            return a.clone();
        }
        let (q, r) = a.div_rem(b);
        if r.is_zero() {
            q
        } else {
            a.clone()
        }
    }
}

impl Algebra for DivisionAlgebra {
    type Elem = BigUint;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, _op: usize, args: &[BigUint]) -> BigUint {
        Self::interact(&args[0], &args[1])
    }
}

/// The algebra map induced by a monoid homomorphism `f` of `ℕ≥1`.
///
/// The homomorphism law holds only if `f` also reflects divisibility; check
/// candidates with [`crate::algebra::check_hom_property`].
pub fn induced_hom(
    f: impl Fn(&BigUint) -> BigUint + Send + Sync + 'static,
) -> Homomorphism<DivisionAlgebra, DivisionAlgebra> {
    Homomorphism::new(division_algebra(), division_algebra(), f).expect("same signature")
}

/// `x ↦ x²`, a homomorphism because `b | a ⇔ b² | a²`.
pub fn square_hom() -> Homomorphism<DivisionAlgebra, DivisionAlgebra> {
    induced_hom(|x| x * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_hom_property, HomSample};

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn interact_examples() {
        let alg = division_algebra();
        assert_eq!(alg.apply(0, &[n(6), n(3)]), n(2));
        assert_eq!(alg.apply(0, &[n(6), n(4)]), n(6));
        for a in 1..50 {
            assert_eq!(alg.apply(0, &[n(a), n(1)]), n(a));
        }
    }

    #[test]
    fn closure_and_square_law() {
        let h = square_hom();
        let mut samples = Vec::new();
        for a in 1..=60u64 {
            for b in 1..=60u64 {
                let q = DivisionAlgebra::interact(&n(a), &n(b));
                assert!(q >= n(1) && q <= n(a));
                samples.push(HomSample {
                    op: "interact".into(),
                    args: vec![n(a), n(b)],
                });
            }
        }
        assert!(check_hom_property(&h, &samples).passed());
    }

    #[test]
    fn doubling_is_not_a_hom() {
        // x ↦ 2x does not preserve the unit: interact(2, 2) = 1 ↦ 2, but interact(4, 4) = 1
        let h = induced_hom(|x| x * 2u32);
        let report = check_hom_property(
            &h,
            &[HomSample {
                op: "interact".into(),
                args: vec![n(2), n(2)],
            }],
        );
        assert!(!report.passed());
    }
}
