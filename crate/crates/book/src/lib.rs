//! Compiles every Rust listing in the guide under `book/src` as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/patches.md")]
pub mod patches {}
#[doc = include_str!("../../../book/src/estimation.md")]
pub mod estimation {}
#[doc = include_str!("../../../book/src/cross-validation.md")]
pub mod cross_validation {}
#[doc = include_str!("../../../book/src/vertex-bootstrap.md")]
pub mod vertex_bootstrap {}
#[doc = include_str!("../../../book/src/coverage.md")]
pub mod coverage {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
