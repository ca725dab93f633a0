//! Criterion benchmarks for `algcomm`; see `benches/`.
