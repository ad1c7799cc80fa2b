//! Exact computations for coherent lower previsions, exact functionals and
//! n-monotone functionals on finite possibility spaces.
//!
//! All arithmetic is over arbitrary precision rationals, so every verdict
//! is decided exactly and comes with a witness that can be checked
//! independently.

pub mod choquet;
pub mod consistency;
pub mod error;
pub mod gamble;
pub mod lp;
pub mod monotone;
pub mod rational;
pub mod verdict;

pub use choquet::{choquet_integral, decreasing_distribution, is_comonotone_additive, ChoquetResult};
pub use consistency::{
    avoids_sure_loss, conjugate, decompose, find_attaining, is_coherent, is_exact, natural_extension_exact,
    natural_extension_prevision, norm, Assessment, MassFunctional, NaturalExtension, Norm,
};
pub use error::{Error, Result};
pub use gamble::{Event, Gamble, GambleLattice, Space};
pub use monotone::{is_n_alternating, is_n_monotone, mobius, MonotonicityReport, Order, SetFunction};
pub use rational::{parse_rational, Rational};
pub use verdict::{Verdict, Witness};
