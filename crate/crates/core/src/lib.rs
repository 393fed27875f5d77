//! Generalized set theories as data: a small higher-order kernel with soft
//! types, a feature catalogue, the axiom generator, a finite tagged model and
//! a bounded checker.

pub mod kernel;
pub mod softtypes;
pub mod registry;
pub mod combine;
pub mod hfmodel;
pub mod morphisms;
pub mod checker;
