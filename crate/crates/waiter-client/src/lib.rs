//! Biased (1:q) Waiter-Client and Client-Waiter games on finite boards, with
//! a focus on edge boards of complete graphs.
//!
//! The crate contains a rules-exact referee ([`game`]), winning families and
//! potential sums ([`families`]), Client and Waiter strategies ([`client`],
//! [`waiter`]), exact graph verifiers ([`graph`]), a memoized minimax solver
//! for tiny boards ([`solver`]) and an experiment harness ([`harness`]).

pub mod board;
pub mod client;
pub mod error;
pub mod families;
pub mod game;
pub mod graph;
pub mod harness;
pub mod solver;
pub mod waiter;

pub use error::{Error, Result, Side};
