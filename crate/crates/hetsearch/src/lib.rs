//! Heterogeneous edge search on edge-labeled trees.
//!
//! Searchers carry colors: a searcher may only be placed on a vertex
//! touching an edge of its color, and may only slide along edges of its
//! color. An invisible fast intruder contaminates every edge not cut off
//! by guards. The crate provides:
//!
//! * tree and strategy types with two independent simulation routines
//!   ([`sim`]),
//! * an exhaustive game-state solver for small instances ([`solver`]),
//! * classic colorless tree search numbers and strategies ([`classic`]),
//! * the area decomposition, the per-color lower bound, and a polynomial
//!   cleaning algorithm for trees with one area per color ([`polyclean`]),
//! * gadget families with special search behavior ([`constructions`]),
//! * 3-SAT round trips through search instances ([`cnf`]),
//! * enumeration and random generation of labeled trees ([`treegen`]),
//! * plain-text file formats for trees and strategies ([`fileio`]).

pub mod classic;
pub mod cnf;
pub mod constructions;
pub mod fileio;
pub mod graph;
pub mod polyclean;
pub mod sim;
pub mod solver;
pub mod treegen;
