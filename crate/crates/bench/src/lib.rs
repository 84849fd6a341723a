//! Criterion benchmarks for `itc-core`; see `benches/`.
