//! Clifford data regression error mitigation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod fit;
pub mod harness;
pub mod noise;
pub mod rng;
pub mod sim;
pub mod target;
pub mod training;
