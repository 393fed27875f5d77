//! Generators and oracles shared by the integration tests.
#![allow(dead_code)]

pub mod fo;
pub mod terms;
pub mod tiers;
pub mod zfplus;
