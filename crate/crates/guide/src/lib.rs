//! The guide in `book/`, compiled as doc tests so its snippets stay in sync
//! with the library. mdbook cannot link external crates when testing, so
//! each chapter is pulled in here as the docs of an empty module instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/format.md")]
pub mod format {}
#[doc = include_str!("../../../book/src/io.md")]
pub mod io {}
#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
#[doc = include_str!("../../../book/src/planning.md")]
pub mod planning {}
#[doc = include_str!("../../../book/src/profiles.md")]
pub mod profiles {}
#[doc = include_str!("../../../book/src/merging.md")]
pub mod merging {}
#[doc = include_str!("../../../book/src/rendering.md")]
pub mod rendering {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
