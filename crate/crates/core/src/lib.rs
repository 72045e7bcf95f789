#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod cli;
pub mod config;
pub mod coupling;
pub mod dynamics;
pub mod effects;
pub mod error;
pub mod inference;
pub mod trap;
