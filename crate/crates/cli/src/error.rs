use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Protocol(#[from] fsband::protocols::ProtocolError),
    #[error(transparent)]
    Pfa(#[from] fsband::pfa::PfaError),
    #[error(transparent)]
    Bandit(#[from] fsband::bandit::BanditError),
    #[error("PFA document error: {0}")]
    Document(#[from] fsband::pfa::document::DocumentError),
    #[error("bandit is not generic: {0}")]
    NonGeneric(&'static str),
}
