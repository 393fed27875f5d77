//! Types, terms, typing, substitution and the six-rule deduction relation.

pub mod build;
pub mod deduction;
pub mod error;
pub mod hol;
pub mod sexp;
pub mod signature;
pub mod subst;
pub mod syntax;
pub mod term;
pub mod types;

pub use deduction::{derive, Context, Derivation, FormulaSet, Sequent, Step};
pub use error::{KResult, KernelError};
pub use signature::{check_formula, infer_type, Fixity, Signature};
pub use subst::{beta_normalize, subst_many, subst_term, subst_type_in_term, type_of, TermSubst};
pub use term::{Nameless, Term, Var};
pub use types::{is_instance, Type, TypeSubst};
