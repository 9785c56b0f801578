//! Placeholder bench harness; real comparisons are added with the
//! geometry and search kernels.

fn main() {}
