//! Criterion benchmarks for `blowup-core`; see `benches/`.
