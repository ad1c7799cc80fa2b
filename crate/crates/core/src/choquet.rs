//! Choquet integrals against set functions on the full power set, and
//! comonotone additivity.
//!
//! For a gamble with sorted distinct values `v_0 < v_1 < ... < v_k` the
//! decreasing distribution `x ↦ ℓ({f >= x})` is a step function, so its
//! Riemann integral has the closed form
//!
//! ```text
//! ℓ(Ω) v_0 + Σ_{j >= 1} (v_j - v_{j-1}) ℓ({f >= v_j})
//! ```

use num_traits::Zero;

use crate::consistency::{Assessment, NaturalExtension};
use crate::error::{Error, Result};
use crate::gamble::{is_comonotone, Event, Gamble};
use crate::monotone::SetFunction;
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// Breakpoints `(v_j, ℓ({f >= v_j}))` at the distinct values of a gamble,
/// thresholds strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingDistribution {
    pub breakpoints: Vec<(Rational, Rational)>,
    /// `ℓ(∅)`, the value above the largest threshold.
    pub beyond: Rational,
}

impl DecreasingDistribution {
    /// `G(x) = ℓ({f >= x})`.
    pub fn at(&self, x: &Rational) -> Rational {
        self.breakpoints
            .iter()
            .find(|(v, _)| x <= v)
            .map_or_else(|| self.beyond.clone(), |(_, level)| level.clone())
    }
}

/// The level set `{f >= v}`.
pub fn level_set(f: &Gamble, v: &Rational) -> Event {
    let indices: Vec<usize> = (0..f.values().len()).filter(|&i| f.values()[i] >= *v).collect();
    Event::from_indices(f.space(), &indices).expect("gamble space already validated")
}

fn sorted_values(f: &Gamble) -> Vec<Rational> {
    let mut vs = f.values().to_vec();
    vs.sort();
    vs.dedup();
    vs
}

pub fn decreasing_distribution(ell: &SetFunction, f: &Gamble) -> Result<DecreasingDistribution> {
    if f.space() != ell.space() {
        return Err(Error::SpaceMismatch);
    }
    let table = ell.table()?;
    let breakpoints = sorted_values(f)
        .into_iter()
        .map(|v| {
            let level = table[level_set(f, &v).mask() as usize].clone();
            (v, level)
        })
        .collect();
    Ok(DecreasingDistribution {
        breakpoints,
        beyond: table[0].clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelStep {
    pub threshold: Rational,
    pub event: Event,
    pub level: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoquetResult {
    pub value: Rational,
    /// One step per distinct value of the gamble, in increasing order. The
    /// first step is always the whole space.
    pub trace: Vec<LevelStep>,
}

impl ChoquetResult {
    /// The telescoping sum over the trace.
    pub fn recompute(&self) -> Rational {
        let mut total = Rational::zero();
        let mut previous: Option<&Rational> = None;
        for step in &self.trace {
            total += match previous {
                None => &step.threshold * &step.level,
                Some(p) => (&step.threshold - p) * &step.level,
            };
            previous = Some(&step.threshold);
        }
        total
    }
}

/// Choquet integral of `f` against a monotone power-set function that
/// vanishes on ∅.
pub fn choquet_integral(ell: &SetFunction, f: &Gamble) -> Result<ChoquetResult> {
    if f.space() != ell.space() {
        return Err(Error::SpaceMismatch);
    }
    let table = ell.table()?;
    if !table[0].is_zero() {
        return Err(Error::NonzeroOnEmpty);
    }
    ell.check_monotone()?;
    let trace: Vec<LevelStep> = sorted_values(f)
        .into_iter()
        .map(|v| {
            let event = level_set(f, &v);
            let level = table[event.mask() as usize].clone();
            LevelStep {
                threshold: v,
                event,
                level,
            }
        })
        .collect();
    let mut result = ChoquetResult {
        value: Rational::zero(),
        trace,
    };
    result.value = result.recompute();
    Ok(result)
}

/// The Choquet functional restricted to `gambles`.
pub fn choquet_assessment(ell: &SetFunction, gambles: &[Gamble]) -> Result<Assessment> {
    let mut out = Assessment::new(ell.space());
    for g in gambles {
        out.insert(g.clone(), choquet_integral(ell, g)?.value)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdditivityReport {
    pub verdict: Verdict,
    /// Comonotone pairs whose sum lies outside the domain and was valued
    /// by natural extension.
    pub extended: Vec<(Gamble, Gamble)>,
}

/// Checks `E(f + g) = E(f) + E(g)` for every comonotone pair of domain
/// gambles, including `f = g`. Sums outside the domain are valued by the
/// natural extension, which requires the functional to be exact.
pub fn is_comonotone_additive(ell: &Assessment) -> Result<AdditivityReport> {
    let gambles = ell.gambles();
    let values = ell.values();
    let mut extension: Option<NaturalExtension> = None;
    let mut extended = Vec::new();
    for i in 0..gambles.len() {
        for j in i..gambles.len() {
            let (f, g) = (&gambles[i], &gambles[j]);
            if !is_comonotone(f, g)? {
                continue;
            }
            let sum = f.add(g)?;
            let left = match ell.get(&sum) {
                Some(v) => v.clone(),
                None => {
                    if extension.is_none() {
                        extension = Some(NaturalExtension::exact(ell).map_err(|_| {
                            Error::CannotEvaluateSum {
                                f: f.clone(),
                                g: g.clone(),
                            }
                        })?);
                    }
                    extended.push((f.clone(), g.clone()));
                    extension.as_ref().expect("just built").lower(&sum)?
                }
            };
            let right = &values[i] + &values[j];
            if left != right {
                return Ok(AdditivityReport {
                    verdict: Verdict::no(Witness::ValuePair {
                        f: f.clone(),
                        g: g.clone(),
                        left,
                        right,
                    }),
                    extended,
                });
            }
        }
    }
    Ok(AdditivityReport {
        verdict: Verdict::yes(),
        extended,
    })
}
