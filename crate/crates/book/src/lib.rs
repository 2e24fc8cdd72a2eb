//! The guide's code listings, compiled and run as doc-tests.
//!
//! mdbook cannot test snippets that depend on external crates, so each
//! chapter is included as the docs of an empty module instead. A failing
//! doc-test names its chapter module.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/dictionaries.md")]
pub mod dictionaries {}
#[doc = include_str!("../../../book/src/coding.md")]
pub mod coding {}
#[doc = include_str!("../../../book/src/decoding.md")]
pub mod decoding {}
#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
