//! Benchmarks for the fintopo engine live under `benches/`.

pub use fintopo;
