//! Majority-logic synthesis and verification for QCA-style primitives.

pub mod cellsim;
pub mod cost;
pub mod designs;
pub mod network;
pub mod parse;
pub mod synth;
pub mod truth_table;
pub mod verify;
