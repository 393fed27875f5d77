use super::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("ill-typed term at {location}: {message}")]
    IllTyped { location: String, message: String },
    #[error("unknown constant '{0}'")]
    UnknownConstant(String),
    #[error("constant '{name}' used at {ty}, which is not an instance of {declared}")]
    NotAnInstance {
        name: String,
        ty: Type,
        declared: Type,
    },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Type, found: Type },
    #[error("constant '{0}' declared twice")]
    DuplicateConstant(String),
    #[error("{rule}: side condition violated: {condition}")]
    SideConditionViolated { rule: String, condition: String },
    #[error("{rule}: premises do not match: {reason}")]
    RuleMismatch { rule: String, reason: String },
    #[error("not a formula: {0}")]
    NotAFormula(String),
    #[error("bad definition set: {0}")]
    BadDefinition(String),
    #[error("replay failed at {rule}: {source}")]
    ReplayFailed {
        rule: String,
        #[source]
        source: Box<KernelError>,
    },
}

impl KernelError {
    pub fn side(rule: &str, condition: impl Into<String>) -> Self {
        KernelError::SideConditionViolated {
            rule: rule.to_owned(),
            condition: condition.into(),
        }
    }

    pub fn mismatch(rule: &str, reason: impl Into<String>) -> Self {
        KernelError::RuleMismatch {
            rule: rule.to_owned(),
            reason: reason.into(),
        }
    }
}

pub type KResult<T> = Result<T, KernelError>;
