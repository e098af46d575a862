//! Benchmark harness crate; see the `benches/` targets.
