//! Finite presentations of single-sorted algebraic theories.
//!
//! A [`Signature`] lists operation symbols with their input arities (every
//! operation has exactly one output). A [`Protocol`] is a morphism `X^k -> X^l`
//! written as an `l`-tuple of [`ProtocolTerm`]s over `k` input variables.
//! Structural morphisms (projections, diagonals, swaps) are expressed by how
//! the outputs reuse or omit variables.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("operation symbol at position {0} has an empty name")]
    EmptyName(usize),
    #[error("duplicate operation symbol `{0}`")]
    DuplicateOp(String),
}

/// An ordered list of uniquely named operation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Result<Self, SignatureError> {
        let mut seen = HashSet::new();
        for (i, op) in ops.iter().enumerate() {
            if op.name.is_empty() {
                return Err(SignatureError::EmptyName(i));
            }
            if !seen.insert(op.name.as_str()) {
                return Err(SignatureError::DuplicateOp(op.name.clone()));
            }
        }
        Ok(Self { ops })
    }

    /// The signature with a single binary operation, used by every
    /// interaction-style chemistry.
    pub fn binary(name: &str) -> Self {
        Self {
            ops: vec![OpSymbol::new(name, 2)],
        }
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.name == name)
    }

    pub fn op(&self, name: &str) -> Option<&OpSymbol> {
        self.ops.iter().find(|op| op.name == name)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ops = Vec::<OpSymbol>::deserialize(deserializer)?;
        Signature::new(ops).map_err(serde::de::Error::custom)
    }
}

/// A syntax tree over a signature in numbered input variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProtocolTerm {
    /// 0-based input variable.
    Var(usize),
    App {
        op: String,
        args: Vec<ProtocolTerm>,
    },
}

impl ProtocolTerm {
    pub fn var(index: usize) -> Self {
        ProtocolTerm::Var(index)
    }

    pub fn app(op: impl Into<String>, args: Vec<ProtocolTerm>) -> Self {
        ProtocolTerm::App { op: op.into(), args }
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            ProtocolTerm::Var(i) => {
                out.insert(*i);
            }
            ProtocolTerm::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn validate(&self, sig: &Signature, inputs: usize, path: &mut Vec<usize>) -> Result<(), ValidationError> {
        match self {
            ProtocolTerm::Var(index) if *index >= inputs => Err(ValidationError {
                path: TermPath(path.clone()),
                kind: ValidationErrorKind::VarOutOfRange { index: *index, inputs },
            }),
            ProtocolTerm::Var(_) => Ok(()),
            ProtocolTerm::App { op, args } => {
                let symbol = sig.op(op).ok_or_else(|| ValidationError {
                    path: TermPath(path.clone()),
                    kind: ValidationErrorKind::UnknownOp(op.clone()),
                })?;
                if symbol.arity != args.len() {
                    return Err(ValidationError {
                        path: TermPath(path.clone()),
                        kind: ValidationErrorKind::ArityMismatch {
                            op: op.clone(),
                            expected: symbol.arity,
                            got: args.len(),
                        },
                    });
                }
                for (i, arg) in args.iter().enumerate() {
                    path.push(i);
                    arg.validate(sig, inputs, path)?;
                    path.pop();
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ProtocolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolTerm::Var(i) => write!(f, "x{i}"),
            ProtocolTerm::App { op, args } => {
                write!(f, "{op}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TermRepr {
    Var {
        var: usize,
    },
    App {
        op: String,
        #[serde(default)]
        args: Vec<ProtocolTerm>,
    },
}

impl Serialize for ProtocolTerm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ProtocolTerm::Var(var) => TermRepr::Var { var: *var },
            ProtocolTerm::App { op, args } => TermRepr::App {
                op: op.clone(),
                args: args.clone(),
            },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProtocolTerm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match TermRepr::deserialize(deserializer)? {
            TermRepr::Var { var } => ProtocolTerm::Var(var),
            TermRepr::App { op, args } => ProtocolTerm::App { op, args },
        })
    }
}

/// A morphism `X^k -> X^l`: `inputs` is `k`, `outputs` has length `l`.
///
/// `l = 0` is the delete protocol; `k = 0` injects constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Protocol {
    pub inputs: usize,
    pub outputs: Vec<ProtocolTerm>,
}

impl Protocol {
    pub fn new(inputs: usize, outputs: Vec<ProtocolTerm>) -> Self {
        Self { inputs, outputs }
    }

    /// The unique protocol `X -> 1`.
    pub fn delete() -> Self {
        Self::new(1, Vec::new())
    }

    pub fn arity_in(&self) -> usize {
        self.inputs
    }

    pub fn arity_out(&self) -> usize {
        self.outputs.len()
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), ValidationError> {
        let mut path = Vec::new();
        for (i, term) in self.outputs.iter().enumerate() {
            path.push(i);
            term.validate(sig, self.inputs, &mut path)?;
            path.pop();
        }
        Ok(())
    }

    pub fn vars_used(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.outputs.iter().for_each(|t| t.collect_vars(&mut out));
        out
    }

    /// The same protocol with its outputs reordered: output `i` of the result
    /// is output `perm[i]` of `self`.
    pub fn permute_outputs(&self, perm: &[usize]) -> Option<Self> {
        if !is_permutation(perm, self.outputs.len()) {
            return None;
        }
        Some(Self {
            inputs: self.inputs,
            outputs: perm.iter().map(|&j| self.outputs[j].clone()).collect(),
        })
    }
}

pub(crate) fn is_permutation(perm: &[usize], len: usize) -> bool {
    let mut seen = vec![false; len];
    perm.len() == len && perm.iter().all(|&j| j < len && !std::mem::replace(&mut seen[j], true))
}

/// Location of a subterm: output index followed by argument indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermPath(pub Vec<usize>);

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.split_first() {
            None => write!(f, "<root>"),
            Some((output, rest)) => {
                write!(f, "outputs[{output}]")?;
                rest.iter().try_for_each(|i| write!(f, ".args[{i}]"))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationErrorKind {
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("operation `{op}` expects {expected} arguments, got {got}")]
    ArityMismatch { op: String, expected: usize, got: usize },
    #[error("variable x{index} out of range for {inputs} inputs")]
    VarOutOfRange { index: usize, inputs: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at {path}")]
pub struct ValidationError {
    pub path: TermPath,
    pub kind: ValidationErrorKind,
}

pub fn validate_protocol(sig: &Signature, p: &Protocol) -> Result<(), ValidationError> {
    p.validate(sig)
}

pub fn protocol_vars_used(p: &Protocol) -> BTreeSet<usize> {
    p.vars_used()
}
