//! Criterion benchmarks for the contour methods and the long-term response.
//! Run with `cargo bench -p envcontour-bench`.
