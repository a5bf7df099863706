//! Criterion benchmarks live in benches/; nothing to export.
