//! Generators, oracles and corpus helpers shared by the integration tests
//! and the acceptance runner.
#![allow(dead_code)]

pub mod arity;
pub mod corpus;
pub mod cycles;
pub mod grammar;
pub mod labels;
pub mod locators;
pub mod mutate;
