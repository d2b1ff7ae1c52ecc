//! Determinantal equations for reducible forms and forms of small slice rank:
//! Ruppert flattenings on prolongation spaces, Δ-syzygies, Koszul spans and
//! randomized restriction protocols, all in exact arithmetic.

pub mod fixtures;
pub mod flattening;
pub mod linalg;
pub mod poly;
pub mod prolongation;
pub mod protocols;
pub mod syzygy;

use thiserror::Error;

use linalg::LinalgError;
use poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    Shape(String),
    #[error("{0}")]
    Usage(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("decomposition does not match the form: {0}")]
    Decomposition(String),
    #[error("the zero form has no verdict")]
    ZeroForm,
}
