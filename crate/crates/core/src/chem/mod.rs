//! Builtin chemistries and their stock protocols.

pub mod division;
pub mod lambda;
pub mod modular;
pub mod strings;
pub mod table;

pub use division::{division_algebra, induced_hom, square_hom, DivisionAlgebra};
pub use lambda::{
    lambda_algebra, parse_lambda, reduce, LambdaAlgebra, LambdaTerm, ReducerConfig, Reduction, SyntaxError,
};
pub use modular::{modular_group_algebra, reduce_mod, ModularGroup, ModulusError};
pub use strings::{alphabet_projection, string_monoid_algebra, StringMonoid};
pub use table::{library_algebras, library_coarse, library_fine, TableAlgebra, TableError};

use crate::flask::FlaskProcess;
use crate::signature::{Protocol, ProtocolTerm};

fn binary(op: &str, a: usize, b: usize) -> ProtocolTerm {
    ProtocolTerm::app(op, vec![ProtocolTerm::var(a), ProtocolTerm::var(b)])
}

/// `x1 + x2 → x1 + x2 + interact(x1, x2)`
pub fn reproduce_protocol() -> Protocol {
    Protocol::new(
        2,
        vec![ProtocolTerm::var(0), ProtocolTerm::var(1), binary("interact", 0, 1)],
    )
}

/// `x1 + x2 → x1 + interact(x1, x2)`: the sender is kept, the receiver updated.
pub fn communicate_protocol() -> Protocol {
    Protocol::new(2, vec![ProtocolTerm::var(0), binary("interact", 0, 1)])
}

/// `x1 + x2 → op(x1, x2)`
pub fn collide_protocol(op: &str) -> Protocol {
    Protocol::new(2, vec![binary(op, 0, 1)])
}

/// Reproduction followed by a random deletion, which keeps the population fixed.
pub fn mc0_protocols() -> Vec<Protocol> {
    vec![reproduce_protocol(), Protocol::delete()]
}

pub fn mc0(cfg: ReducerConfig) -> FlaskProcess<LambdaAlgebra> {
    FlaskProcess::new(lambda_algebra(cfg), mc0_protocols()).expect("MC0 protocols are valid")
}
