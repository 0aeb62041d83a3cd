//! Benchmark-only crate; see `benches/control.rs`.
