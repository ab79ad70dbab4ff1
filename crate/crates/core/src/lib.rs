#![forbid(unsafe_code)]

pub mod error;
pub mod linalg;
pub mod exterior;
pub mod torus;
pub mod graded;
pub mod maps;
pub mod invariant;
pub mod complexes;
pub mod registry;
pub mod report;
pub mod cli;
pub mod commands;
