//! Guide chapters compiled as doctests, so every listing in `book/` is
//! checked by `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/coupler.md")]
pub mod coupler {}

#[doc = include_str!("../../../book/src/jpm.md")]
pub mod jpm {}

#[doc = include_str!("../../../book/src/master-equation.md")]
pub mod master_equation {}

#[doc = include_str!("../../../book/src/fidelity.md")]
pub mod fidelity {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/configuration.md")]
pub mod configuration {}
