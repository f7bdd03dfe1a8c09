//! Planar string diagrams for the categories `B_k`, their simplicial
//! structure, the operad assembled from them and evaluations into
//! concrete monoids with twist.

pub mod diagram;
pub mod dsl;
pub mod model;
pub mod random;
pub mod render;
pub mod report;
pub mod rewrite;
pub mod simplicial;
pub mod tw;
