//! Explicit degrees-of-freedom conditions for constant single-antenna K-user
//! interference channels.
//!
//! The crate decides the monomial independence condition on a channel matrix
//! ([`condition`]), builds the self-similar input alphabets that achieve the
//! `K/2` lower bound ([`dofbound`]), evaluates and samples self-similar
//! distributions ([`ifs`]) and estimates information dimension from samples
//! ([`dimest`]). All combinatorial paths are exact: channel gains live in a
//! free polynomial algebra over Q ([`algebra`]).

pub mod algebra;
pub mod channel;
pub mod cli;
pub mod condition;
pub mod dimest;
pub mod dofbound;
pub mod error;
pub mod ifs;
pub mod info;
pub mod linalg;
mod serde_util;
pub mod sumset;

pub use error::{Error, Result};
