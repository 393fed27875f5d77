//! Soft types: predicates used as types, with their combinators.

pub mod defs;
pub mod notation;
pub mod proof;
pub mod rules;

pub use defs::{
    bot, dep_fun_type, extend_signature, fun_type, has_type, join, meet, soft_constants,
    soft_def, soft_defs, soft_signature, sub, top,
};
pub use notation::{desugar, desugar_str, resugar, Elaborator};
pub use rules::{derived_rules, soft_context, DerivedRule, RULE_NAMES};
