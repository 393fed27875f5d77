//! A finite tagged hierarchy: hereditarily finite values, model components,
//! the tier construction and the denotations of the model constants.
//!
//! Ordinal payloads are plain naturals rather than von Neumann sets; tags
//! already keep them apart from sets, and the two presentations are
//! isomorphic.

mod component;
mod interp;
mod tiers;
mod value;

use thiserror::Error;

pub use component::{
    mexception, mfunction, mgzf, mordinal, parse_component, zfplus_components,
    zfplus_exclusions, Constructor, Exclusion, LimitRule, ModelComponent, SuccRule, ZeroRule,
};
pub use interp::{Denotation, Model, Pred, Rel};
pub use tiers::{
    build_tiers, is_function_graph, tag_map, tier_succ, tier_zero, without_excluded,
    ExcludedTable, IntroReport, ModelDump, TagTable, TierDump, TierState, UNMATERIALIZED,
};
pub use value::{
    count_partial_functions, partial_functions, powerset, tag_name, HfValue, Tag, EXC, FUN,
    ORD, SET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("two components use tag '{0}'")]
    TagCollision(String),
    #[error("component '{component}' depends on tag '{tag}', which no component provides")]
    MissingDependency { component: String, tag: String },
    #[error("Excluded {owner} must both contain and omit the {element}-tagged objects")]
    ExcludedUnsatisfiable { owner: String, element: String },
    #[error("depth must be at least 1")]
    DepthZero,
    #[error("{what} exceeds the set-size guard of {limit}; raise GST_MAX_SET_SIZE to allow it")]
    SizeGuard { what: String, limit: usize },
}

pub type MResult<T> = Result<T, ModelError>;

pub const DEFAULT_MAX_SET_SIZE: usize = 1 << 16;

/// The size guard, from `GST_MAX_SET_SIZE` when set and valid.
pub fn max_set_size_from_env() -> usize {
    std::env::var("GST_MAX_SET_SIZE")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|n| *n > 0)
        .unwrap_or(DEFAULT_MAX_SET_SIZE)
}

/// The model of ZF⁺ at `depth`.
pub fn zfplus_model(depth: u64, max_set_size: usize) -> MResult<Model> {
    let state = build_tiers(&zfplus_components(), &zfplus_exclusions(), depth, max_set_size)?;
    Ok(Model::new(state))
}
