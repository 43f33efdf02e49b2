//! Error type shared by the solver layers.

use crate::game::GameError;
use crate::linalg::LinAlgError;
use crate::pump::ContraErgodicPartition;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("policy iteration exceeded {0} iterations")]
    NonTermination(u64),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("potential lies outside the feasible polyhedron")]
    InfeasibleInput,
    #[error("game is not ergodic")]
    NotErgodic(Box<ContraErgodicPartition>),
    #[error("no rank guess produced a verified saddle point")]
    ExhaustedGuesses,
    #[error("budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("no saddle point among the enumerated situations")]
    NoSaddleFound,
}

pub type Result<T> = std::result::Result<T, Error>;
