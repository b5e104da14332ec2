//! Benchmark host crate; the interesting code is under benches/.
