//! Benchmark-only crate; see `benches/saturation.rs`.
