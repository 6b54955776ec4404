//! The chapters of the guide under `book/src`, one module each, so that
//! `cargo test --doc` runs every listing. A failing doctest names the
//! chapter module it came from.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/levels.md")]
pub mod levels {}
#[doc = include_str!("../../../book/src/projectors.md")]
pub mod projectors {}
#[doc = include_str!("../../../book/src/propagators.md")]
pub mod propagators {}
#[doc = include_str!("../../../book/src/pseudo_pure.md")]
pub mod pseudo_pure {}
#[doc = include_str!("../../../book/src/readout.md")]
pub mod readout {}
#[doc = include_str!("../../../book/src/programs.md")]
pub mod programs {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
