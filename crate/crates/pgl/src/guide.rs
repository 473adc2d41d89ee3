//! The book chapters, embedded so that every code sample in the guide
//! compiles and runs under `cargo test --doc`. The same Markdown files
//! render as the mdBook under `book/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/epidemic.md")]
pub mod epidemic_model {}

#[doc = include_str!("../../../book/src/costs.md")]
pub mod costs {}

#[doc = include_str!("../../../book/src/equilibria.md")]
pub mod equilibria {}

#[doc = include_str!("../../../book/src/anarchy.md")]
pub mod anarchy {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
