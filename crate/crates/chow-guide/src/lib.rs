//! mdbook cannot run book snippets against the workspace crates, so each
//! chapter is included here as a doc comment and `cargo test --doc` keeps
//! the book compiling and passing alongside the API.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/groebner.md")]
pub mod groebner {}

#[doc = include_str!("../../../book/src/hilbert.md")]
pub mod hilbert {}

#[doc = include_str!("../../../book/src/cycles.md")]
pub mod cycles {}

#[doc = include_str!("../../../book/src/intersection.md")]
pub mod intersection {}

#[doc = include_str!("../../../book/src/correspondences.md")]
pub mod correspondences {}

#[doc = include_str!("../../../book/src/ultraproduct.md")]
pub mod ultraproduct {}

#[doc = include_str!("../../../book/src/transfer.md")]
pub mod transfer {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
