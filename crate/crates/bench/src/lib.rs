//! Benchmarks for the numerical kernels live in `benches/`.
