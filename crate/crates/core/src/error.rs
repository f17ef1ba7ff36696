// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: Rational,
        range: &'static str,
    },
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("ground set is empty")]
    EmptyGround,
    #[error("ground set has {0} elements, at most 64 are supported here")]
    GroundTooLarge(usize),
    #[error("empty family")]
    EmptyFamily,
    #[error("unknown open {0:?}")]
    UnknownOpen(String),
    #[error("duplicate open name {0:?}")]
    DuplicateOpen(String),
    #[error("missing value for element {0:?}")]
    MissingValue(String),
    #[error("fiber at {0:?} is not of the form [0,v)")]
    NotPsiImage(String),
    #[error("invalid fuzzy topology: {0}")]
    InvalidTopology(String),
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("paths do not compose: {0}")]
    EndpointMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
