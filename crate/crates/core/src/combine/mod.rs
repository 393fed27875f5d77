//! Generating GST classes from lists of feature configurations.

mod generate;
mod io;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::sexp::ParseError;
use crate::kernel::{KernelError, Term, Type};
use crate::registry::{Catalogue, Class, Feature, FeatureConfig, RegistryError};

pub use generate::{
    admit_cargo, all_otherwise, cargo_ax, cover, disjoint, mk_gst, otherwise, restrict_cargo,
    typ_list, zfplus_spec,
};
pub use io::{load_axiom_set, parse_spec, AxiomSet, AxiomEntry};

#[derive(Debug, Error)]
pub enum CombineError {
    #[error("otherwise needs at least one argument")]
    EmptyArgList,
    #[error("cover of an empty list of logos")]
    EmptyCover,
    #[error("the spec lists no features")]
    EmptySpec,
    #[error("feature '{0}' occurs twice in the spec")]
    DuplicateFeature(String),
    #[error("blacklist of '{feature}' names '{entry}', which is not in the spec")]
    UnknownBlacklist { feature: String, entry: String },
    #[error("default for '{feature}' has type {found}, expected an individual")]
    DefaultType { feature: String, found: Type },
    #[error("{context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type CResult<T> = Result<T, CombineError>;

/// Why a generated formula is in the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "lowercase")]
pub enum Provenance {
    Otherwise { feature: String, constant: String },
    Disjoint,
    Cover,
    Admit { feature: String },
    Restrict { feature: String },
    Defs { feature: String },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Otherwise { .. } => "otherwise",
            Provenance::Disjoint => "disjoint",
            Provenance::Cover => "cover",
            Provenance::Admit { .. } => "admit",
            Provenance::Restrict { .. } => "restrict",
            Provenance::Defs { .. } => "defs",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Otherwise { feature, constant } => write!(f, "otherwise {feature} {constant}"),
            Provenance::Admit { feature }
            | Provenance::Restrict { feature }
            | Provenance::Defs { feature } => write!(f, "{} {feature}", self.label()),
            _ => f.write_str(self.label()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Labeled {
    pub provenance: Provenance,
    pub formula: Term,
}

/// Which axioms of a feature trigger an otherwise axiom; returns the
/// operator and its soft type.
#[derive(Clone, Copy, Debug, Default)]
pub enum OtherwisePolicy {
    /// Top-level `κ : R` with κ a parameter and `R` of the form `P ⇛ Q` or
    /// `Π P Q`.
    #[default]
    SoftTyping,
    /// No otherwise axioms at all.
    Never,
    Custom(fn(&Class, &Term) -> Option<(String, Term)>),
}

impl OtherwisePolicy {
    pub fn select(&self, class: &Class, axiom: &Term) -> Option<(String, Term)> {
        match self {
            OtherwisePolicy::SoftTyping => soft_typing_of(class, axiom),
            OtherwisePolicy::Never => None,
            OtherwisePolicy::Custom(f) => f(class, axiom),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "soft-typing" => Some(OtherwisePolicy::SoftTyping),
            "never" => Some(OtherwisePolicy::Never),
            _ => None,
        }
    }
}

fn soft_typing_of(class: &Class, axiom: &Term) -> Option<(String, Term)> {
    let (k, r) = axiom.as_binary(":")?;
    let Term::Const(name, _) = k else { return None };
    class.param(name)?;
    let (head, _) = r.strip_app();
    (head.is_const("⇛") || head.is_const("Π")).then(|| (name.clone(), r.clone()))
}

/// `[[F₁, D₁, ℬ₁], …]` with the features resolved against a catalogue.
#[derive(Clone, Debug)]
pub struct GstSpec {
    pub name: String,
    pub configs: Vec<FeatureConfig>,
}

impl GstSpec {
    /// Checks the spec invariants and resolves each feature.
    pub fn resolve<'c>(&self, cat: &'c Catalogue) -> CResult<Vec<&'c Feature>> {
        if self.configs.is_empty() {
            return Err(CombineError::EmptySpec);
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in &self.configs {
            if !seen.insert(c.feature.as_str()) {
                return Err(CombineError::DuplicateFeature(c.feature.clone()));
            }
            out.push(cat.feature(&c.feature)?);
        }
        for c in &self.configs {
            if let Some(e) = c.blacklist.iter().find(|e| !seen.contains(e.as_str())) {
                return Err(CombineError::UnknownBlacklist {
                    feature: c.feature.clone(),
                    entry: e.clone(),
                });
            }
            let ty = crate::kernel::type_of(&c.default_value)?;
            if ty.as_arrow().is_some() || ty.is_bool() {
                return Err(CombineError::DefaultType {
                    feature: c.feature.clone(),
                    found: ty,
                });
            }
        }
        Ok(out)
    }
}

/// `mkGST(spec)`: a class with the features' classes as dependencies, no
/// parameters, and labelled axioms and definitions.
#[derive(Clone, Debug)]
pub struct GstClass {
    pub name: String,
    pub deps: Vec<String>,
    pub axioms: Vec<Labeled>,
    pub defs: Vec<Labeled>,
}

impl GstClass {
    pub fn as_class(&self) -> Class {
        Class {
            name: self.name.clone(),
            deps: self.deps.clone(),
            params: vec![],
            axioms: self.axioms.iter().map(|l| l.formula.clone()).collect(),
            defs: self.defs.iter().map(|l| l.formula.clone()).collect(),
            lemmas: vec![],
        }
    }

    pub fn count(&self, label: &str) -> usize {
        self.axioms.iter().filter(|l| l.provenance.label() == label).count()
    }
}
