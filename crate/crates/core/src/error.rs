use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported configuration: {0}")]
    Config(String),
    #[error("order error: {0}")]
    Order(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("path error: {0}")]
    Path(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("axiom violation: {0}")]
    Axiom(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
