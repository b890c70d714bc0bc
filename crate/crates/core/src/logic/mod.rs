//! Nonduplicating first-order logic over quantum sets.

pub mod ast;
pub mod env;
pub mod interpret;
pub mod translate;

use thiserror::Error;

pub use ast::{nondup_check, Duplication, Formula, Pred, Term};
pub use env::{Env, FnSym, RelSym};
pub use interpret::{forall_residual, residual, Context, ForallMode, Interpreter};
pub use translate::translate;

use crate::relation::RelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error("free variable `{0}` is not in the context")]
    FreeVariableNotInContext(String),
    #[error("variable `{0}` appears twice in the context")]
    DuplicateContextVariable(String),
    #[error("variable `{0}` is already bound")]
    Rebinding(String),
    #[error("sentence has free variables {0:?}")]
    HasFreeVariables(Vec<String>),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("nonduplication violated: {0}")]
    Duplication(Duplication),
    #[error(transparent)]
    Relation(#[from] RelError),
}

impl From<crate::SubspaceError> for LogicError {
    fn from(e: crate::SubspaceError) -> Self {
        LogicError::Relation(e.into())
    }
}
