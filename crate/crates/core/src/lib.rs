//! Spin^c prequantizations of circle-action models and numerical checks of
//! symplectic cutting.
//!
//! The layers build on each other: [`clifford`] supplies the algebra,
//! [`spin`] the groups, [`forms`] the finite-difference calculus, [`models`]
//! the concrete prequantizations and [`cutting`] the cut construction. The
//! [`cli`] module drives all of them from the `spinc` binary.

pub mod cli;
pub mod clifford;
pub mod cutting;
pub mod error;
pub mod forms;
pub mod models;
pub mod spin;
pub mod u1;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/clifford.md")]
mod book_clifford {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spin.md")]
mod book_spin {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/forms.md")]
mod book_forms {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/models.md")]
mod book_models {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cutting.md")]
mod book_cutting {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
