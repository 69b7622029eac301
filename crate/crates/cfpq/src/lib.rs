//! Loaders, forest export, benchmarks and the command-line driver for
//! [`cfpq_core`].

pub mod bench;
pub mod cli;
pub mod export;
pub mod grammars;
pub mod io;

pub use cfpq_core as core;
