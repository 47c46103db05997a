//! Criterion benchmarks for `qcurv-core`; see `benches/engine.rs`.
