use thiserror::Error;

use crate::charges::Charge;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("slope undefined for torsion charge {0}")]
    TorsionSlope(Charge),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error in {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("incomparable: different total charge")]
    Incomparable,

    #[error("no stable F of charge ({k},{n})")]
    NotCoprime { k: i64, n: i64 },

    #[error("rank/degree out of range: need 1 <= k < n, got k={k}, n={n}")]
    OutOfRange { k: i64, n: i64 },

    #[error("type not admissible at this n: {0}")]
    NotAdmissibleAtN(String),

    #[error("malformed {what}: {reason}")]
    Malformed { what: &'static str, reason: String },

    #[error("enumeration produced an invalid type: {0}")]
    InvalidEnumeration(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
