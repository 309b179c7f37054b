//! Benchmark-only package; see `benches/kernels.rs`.

pub use quadsure_core as core;
