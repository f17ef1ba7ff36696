// SPDX-License-Identifier: Apache-2.0

//! Exact constructions on the cylinder `X × J` of a fuzzy topological space
//! over a finite ground set `X`, with `J = [0,1)`.

pub mod base;
pub mod connectivity;
pub mod cylinder;
pub mod error;
pub mod functor;
pub mod fuzzy;
pub mod interval;
pub mod laws;
pub mod oracle;
pub mod path;
pub mod random;
pub mod rational;
pub mod retraction;
pub mod sweep;

pub use error::{Error, Result};
pub use rational::{q, Rational};
