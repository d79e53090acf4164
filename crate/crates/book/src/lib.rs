//! mdbook cannot test snippets that use workspace crates, so each chapter is
//! included here as a module doc and `cargo test --doc` runs its code blocks.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/valuations.md")]
pub mod valuations {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/hypotheses.md")]
pub mod hypotheses {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}
#[doc = include_str!("../../../book/src/applications.md")]
pub mod applications {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
