//! Criterion benchmarks for the qutrit-bell kernels; see `benches/`.
