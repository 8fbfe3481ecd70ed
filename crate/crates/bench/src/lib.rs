//! Criterion benchmarks for netsparse live under `benches/`.
