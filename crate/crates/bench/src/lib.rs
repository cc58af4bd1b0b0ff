//! Benchmarks for the awrlab solvers live under `benches/`.
