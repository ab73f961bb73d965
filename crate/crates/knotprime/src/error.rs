use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("PD code: {0}")]
    Pd(String),
    #[error("polynomial: {0}")]
    Poly(String),
    #[error("field: {0}")]
    Field(String),
    #[error("metacyclic: {0}")]
    Metacyclic(String),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("ingestion: {0}")]
    Ingestion(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
