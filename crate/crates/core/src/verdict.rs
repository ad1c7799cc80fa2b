//! Decisions packaged with the object that certifies them.

use crate::consistency::MassFunctional;
use crate::gamble::{Event, Gamble};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub decision: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn yes() -> Self {
        Verdict {
            decision: true,
            witness: None,
        }
    }

    pub fn yes_with(witness: Witness) -> Self {
        Verdict {
            decision: true,
            witness: Some(witness),
        }
    }

    pub fn no(witness: Witness) -> Self {
        Verdict {
            decision: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// A linear functional dominating the assessment.
    Dominating(MassFunctional),
    /// Nonnegative integer multiples of domain gambles whose sum has
    /// supremum `sup` strictly below `bound`, the matching sum of lower
    /// prices.
    SureLoss {
        gambles: Vec<Gamble>,
        multiples: Vec<Rational>,
        sup: Rational,
        bound: Rational,
    },
    /// The verdict stands but no certificate survived re-verification.
    Unavailable,
    /// A domain gamble whose assessed value exceeds its natural extension.
    Incoherent {
        gamble: Gamble,
        assessed: Rational,
        extension: Rational,
    },
    /// No dominating positive functional attains the value of `gamble`.
    AttainmentInfeasible { gamble: Gamble },
    /// Every total mass attaining `lower_gamble` is at least `lower`, every
    /// total mass attaining `upper_gamble` is at most `upper < lower`.
    DisjointIntervals {
        lower_gamble: Gamble,
        lower: Rational,
        upper_gamble: Gamble,
        upper: Rational,
    },
    /// A pair of gambles on which an identity between gambles fails:
    /// `left` and `right` are the two sides.
    GamblePair {
        f: Gamble,
        g: Gamble,
        left: Gamble,
        right: Gamble,
    },
    /// A pair of gambles on which an identity between values fails.
    ValuePair {
        f: Gamble,
        g: Gamble,
        left: Rational,
        right: Rational,
    },
    NegativeMobius { event: Event, coefficient: Rational },
}
