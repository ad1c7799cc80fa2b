use thiserror::Error;

use crate::gamble::Gamble;
use crate::lp::LpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a space needs at least one outcome")]
    EmptySpace,
    #[error("duplicate outcome label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown outcome label {0:?}")]
    UnknownLabel(String),
    #[error("gambles or events live on different spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("space of size {size} exceeds the event limit of {max} outcomes")]
    SpaceTooLarge { size: usize, max: usize },
    #[error("event mask {mask:#x} refers to outcomes outside the space")]
    EventOutOfRange { mask: u64 },
    #[error("gamble {0} appears twice")]
    DuplicateGamble(Gamble),
    #[error("domain is not a lattice: meet or join of {f} and {g} is missing")]
    NotALattice { f: Gamble, g: Gamble },
    #[error("lattice closure exceeded its budget of {budget} elements")]
    ClosureBudgetExceeded { budget: usize },
    #[error("gamble {0} is not in the domain")]
    NotInDomain(Gamble),
    #[error("negative mass {0} in a mass functional")]
    NegativeMass(String),
    #[error("assessment incurs sure loss")]
    SureLoss,
    #[error("functional is not exact")]
    NotExact,
    #[error("set function domain must contain the empty set and the whole space")]
    MissingBounds,
    #[error("domain must contain only indicators of events")]
    NotASetFunction,
    #[error("set function must be defined on all {expected} events")]
    PartialDomain { expected: usize },
    #[error("set function must vanish on the empty set")]
    NonzeroOnEmpty,
    #[error("set function is not monotone: {smaller:?} ⊆ {larger:?} but value decreases")]
    NotMonotone { smaller: Vec<String>, larger: Vec<String> },
    #[error("event must be non-empty")]
    EmptyEvent,
    #[error("no domain gamble lies below {0}")]
    NoCandidate(Gamble),
    #[error("not a ∧-homomorphism: r({f} ∧ {g}) ≠ r({f}) ∧ r({g})")]
    NotWedgeHomomorphism { f: Gamble, g: Gamble },
    #[error("homomorphism image {0} is outside the functional's domain")]
    ImageOutsideDomain(Gamble),
    #[error("{f} + {g} is outside the domain and the functional is not exact")]
    CannotEvaluateSum { f: Gamble, g: Gamble },
    #[error("complete monotonicity by enumeration is limited to lattices of {max} elements, got {size}")]
    LatticeTooLarge { size: usize, max: usize },
    #[error("order n must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Lp(#[from] LpError),
}
