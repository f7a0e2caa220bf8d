//! Finite coarse-geometry lab: geodesic families, property B covers, A1 partition maps,
//! Farey graph probes and a calculator for asymptotic dimension bounds.

pub mod a1;
pub mod calculator;
pub mod cli;
pub mod cover;
pub mod geodesics;
pub mod graph;
pub mod probes;
pub mod registry;
pub mod spaces;
