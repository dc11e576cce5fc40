//! Benchmark-only crate: see `benches/hot_paths.rs`. Kept as a library
//! stub so the package builds on its own.
