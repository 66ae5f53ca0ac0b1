//! mdbook cannot run a book's code blocks against workspace crates, so the
//! chapters are included here as doc comments and `cargo test --doc` keeps
//! every snippet in the guide compiling and passing. One module per
//! chapter, so a failing doctest names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}

#[doc = include_str!("../../../book/src/padic-valuations.md")]
pub mod padic_valuations {}

#[doc = include_str!("../../../book/src/identity-and-convergence.md")]
pub mod identity_and_convergence {}

#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
