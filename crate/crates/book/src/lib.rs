//! The guide in `book/` is plain mdbook, whose own test runner cannot link
//! against workspace crates. Each chapter is pulled in here as the docs of
//! an empty module instead, so `cargo test --doc` compiles and runs every
//! snippet. A failing doctest is named after the module, which names the
//! chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/kinematics.md")]
pub mod kinematics {}
#[doc = include_str!("../../../book/src/materials.md")]
pub mod materials {}
#[doc = include_str!("../../../book/src/dynamics.md")]
pub mod dynamics {}
#[doc = include_str!("../../../book/src/control.md")]
pub mod control {}
#[doc = include_str!("../../../book/src/sysid.md")]
pub mod sysid {}
#[doc = include_str!("../../../book/src/module.md")]
pub mod module {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
