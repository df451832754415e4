//! Experiment runners, the randomized invariant suite, and the
//! renderers behind the `inscribed` binary. Everything the binary can
//! do is callable as a library so tests drive the same code.

pub mod experiments;
pub mod io;
pub mod suite;
