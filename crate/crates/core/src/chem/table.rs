//! Finite algebras given by a binary operation table, and the library
//! communication model with its coarse-graining.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Algebra, FiniteAlgebra, Homomorphism};
use crate::signature::Signature;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("no entry for ({0}, {1})")]
    Missing(String, String),
}

/// A named-state carrier with `interact` given by a total table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableAlgebra {
    sig: Signature,
    states: Vec<String>,
    table: BTreeMap<(String, String), String>,
}

impl TableAlgebra {
    /// `entries` are `(row, col, result)`, meaning `interact(row, col) = result`.
    pub fn new<S: Into<String>>(
        states: impl IntoIterator<Item = S>,
        entries: impl IntoIterator<Item = (S, S, S)>,
    ) -> Result<Self, TableError> {
        let mut seen = Vec::new();
        for s in states {
            let s = s.into();
            if seen.contains(&s) {
                return Err(TableError::DuplicateState(s));
            }
            seen.push(s);
        }
        let known = |s: String| {
            if seen.contains(&s) {
                Ok(s)
            } else {
                Err(TableError::UnknownState(s))
            }
        };
        let mut table = BTreeMap::new();
        for (row, col, out) in entries {
            table.insert((known(row.into())?, known(col.into())?), known(out.into())?);
        }
        for row in &seen {
            for col in &seen {
                if !table.contains_key(&(row.clone(), col.clone())) {
                    return Err(TableError::Missing(row.clone(), col.clone()));
                }
            }
        }
        Ok(Self {
            sig: Signature::binary("interact"),
            states: seen,
            table,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn contains(&self, s: &str) -> bool {
        self.states.iter().any(|t| t == s)
    }

    pub fn interact(&self, row: &str, col: &str) -> &str {
        self.table
            .get(&(row.to_string(), col.to_string()))
            .unwrap_or_else(|| panic!("({row}, {col}) is outside the carrier"))
    }

    /// Overwrites one entry; both arguments and the result must be states.
    pub fn with_entry(mut self, row: &str, col: &str, out: &str) -> Result<Self, TableError> {
        for s in [row, col, out] {
            if !self.contains(s) {
                return Err(TableError::UnknownState(s.to_string()));
            }
        }
        self.table.insert((row.into(), col.into()), out.into());
        Ok(self)
    }
}

impl Algebra for TableAlgebra {
    type Elem = String;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, _op: usize, args: &[String]) -> String {
        self.interact(&args[0], &args[1]).to_string()
    }
}

impl FiniteAlgebra for TableAlgebra {
    fn elements(&self) -> Vec<String> {
        self.states.clone()
    }
}

pub const LIBRARIAN: &str = "l";
pub const NOISY: &str = "m_n";
pub const QUIET: &str = "m_q";
pub const MEMBER: &str = "m";

/// Librarian, noisy member and quiet member. `interact(sender, receiver)`
/// is the receiver's new state.
pub fn library_fine() -> TableAlgebra {
    let (l, n, q) = (LIBRARIAN, NOISY, QUIET);
    TableAlgebra::new(
        [l, n, q],
        [
            (l, l, l),
            (l, n, q),
            (l, q, q),
            (n, l, l),
            (n, n, n),
            (n, q, n),
            (q, l, l),
            (q, n, n),
            (q, q, q),
        ],
    )
    .expect("library table is total")
}

/// Librarian and member, where the receiver keeps its own state.
pub fn library_coarse() -> TableAlgebra {
    let (l, m) = (LIBRARIAN, MEMBER);
    TableAlgebra::new([l, m], [(l, l, l), (l, m, m), (m, l, l), (m, m, m)]).expect("total")
}

/// Forgets whether a member is noisy or quiet.
pub fn coarse_grain(state: &String) -> String {
    if state == LIBRARIAN {
        LIBRARIAN.to_string()
    } else {
        MEMBER.to_string()
    }
}

/// The fine and coarse library models with the coarse-graining between them.
pub fn library_algebras() -> (TableAlgebra, TableAlgebra, Homomorphism<TableAlgebra, TableAlgebra>) {
    let fine = library_fine();
    let coarse = library_coarse();
    let f = Homomorphism::new(fine.clone(), coarse.clone(), coarse_grain).expect("same signature");
    (fine, coarse, f)
}
