//! Criterion benchmarks for `locman-core`; see `benches/`.
