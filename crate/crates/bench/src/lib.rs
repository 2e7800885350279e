//! Benchmarks for the `motgraph` engine live in `benches/engine.rs`.
