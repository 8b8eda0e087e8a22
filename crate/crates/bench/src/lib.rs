//! Criterion benchmarks for the arctan-bounds workspace; see `benches/`.
