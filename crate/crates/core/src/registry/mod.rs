//! Classes, features and the builtin feature catalogue.

mod catalogue;
mod format;
mod validate;

use thiserror::Error;

use crate::kernel::sexp::ParseError;
use crate::kernel::{KernelError, Term, Type};

pub use catalogue::{builtin_catalogue, builtin_features, Catalogue, BUILTIN_SOURCES};
pub use format::{parse_class_file, print_class_file, ClassFile};
pub use validate::{
    orphans,
    instantiate_class, validate_class, validate_feature, Instantiation, Issue, Report,
};

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{file}: {source}")]
    Parse {
        file: String,
        #[source]
        source: ParseError,
    },
    #[error("unknown class '{0}'")]
    UnknownClass(String),
    #[error("unknown feature '{0}'")]
    UnknownFeature(String),
    #[error("duplicate class '{0}'")]
    DuplicateClass(String),
    #[error("no binding for parameter '{0}'")]
    MissingBinding(String),
    #[error("binding for '{name}' mentions type variables: {term}")]
    TypeVarInBinding { name: String, term: String },
    #[error("binding for '{name}' is not closed: {term}")]
    OpenBinding { name: String, term: String },
    #[error("binding for '{name}' has type {found}, expected {expected}")]
    BindingType {
        name: String,
        expected: Type,
        found: Type,
    },
    #[error("class '{class}' is invalid: {issues}")]
    Invalid { class: String, issues: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type RResult<T> = Result<T, RegistryError>;

/// `[𝒟, 𝒦, Φ, Θ]` with a name. `lemmas` holds stated properties that are
/// neither axioms nor definitions (the tier introduction rules).
#[derive(Clone, Debug)]
pub struct Class {
    pub name: String,
    pub deps: Vec<String>,
    pub params: Vec<(String, Type)>,
    pub axioms: Vec<Term>,
    pub defs: Vec<Term>,
    pub lemmas: Vec<Term>,
}

impl Class {
    /// The single type variable of the parameters, when there is one.
    pub fn type_var(&self) -> Option<String> {
        let tvs: std::collections::BTreeSet<String> = self
            .params
            .iter()
            .flat_map(|(_, t)| t.type_vars())
            .collect();
        if tvs.len() == 1 {
            tvs.into_iter().next()
        } else {
            None
        }
    }

    pub fn param(&self, name: &str) -> Option<&Type> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Names of the constants introduced by the definitions.
    pub fn defined_names(&self) -> Vec<String> {
        self.defs
            .iter()
            .filter_map(|d| match crate::kernel::build::dest_eq(d) {
                Some((Term::Const(n, _), _)) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }

    /// Right-hand side of the definition of `name`.
    pub fn def_rhs(&self, name: &str) -> Option<&Term> {
        self.defs.iter().find_map(|d| match crate::kernel::build::dest_eq(d) {
            Some((Term::Const(n, _), rhs)) if n == name => Some(rhs),
            _ => None,
        })
    }
}

/// `[C, P_logo, P_cargo, κ_default]`
#[derive(Clone, Debug)]
pub struct Feature {
    pub name: String,
    pub class: String,
    pub logo: Term,
    pub cargo: Term,
    pub default: String,
}

/// `[F, D, ℬ]`, referring to features by name.
#[derive(Clone, Debug)]
pub struct FeatureConfig {
    pub feature: String,
    pub default_value: Term,
    pub blacklist: Vec<String>,
}
