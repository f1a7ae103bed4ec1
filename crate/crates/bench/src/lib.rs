//! Criterion benchmarks for the factorization kernels; see `benches/`.
