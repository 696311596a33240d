// The guide lives in book/ as plain mdbook chapters. Each chapter is pulled in
// as the docs of an empty module so `cargo test --doc` compiles and runs every
// Rust snippet, keeping the book honest against the current API.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/equilibria.md")]
pub mod equilibria {}
#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
