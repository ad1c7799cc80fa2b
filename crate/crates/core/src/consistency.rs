//! Avoiding sure loss, coherence, exactness and natural extension.
//!
//! Every question here reduces to linear programs over mass vectors: a
//! positive linear functional on a finite space is a nonnegative mass per
//! outcome, and its total mass is its norm. The dominating functionals of
//! an assessment with a fixed total mass form a polytope, and the natural
//! extension of a gamble is the minimum of its expectation over that
//! polytope.
//!
//! The norm of a functional is computed as the smallest `λ >= 0` for which
//! `ℓ / λ` is coherent. For each domain gamble `f0`, the total masses of
//! dominating functionals that attain `ℓ(f0)` form an interval
//! `[l(f0), u(f0)]`; `ℓ = λ P` with `P` coherent exactly when `λ` lies in
//! every such interval. So the norm is `max l(f0)` when the intervals
//! intersect, and `+∞` otherwise. Any decomposition `ℓ = λ P` has
//! `‖ℓ‖ = λ ‖P‖ <= λ`, and `‖ℓ‖` itself admits one, so the minimum is the
//! norm.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gamble::{Event, Gamble, GambleLattice, Space};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::monotone::{self, Order};
use crate::rational::{primitive_integer_direction, Rational};
use crate::verdict::{Verdict, Witness};

/// A finite map from gambles to lower prices; a lower probability (set
/// function) when every gamble is an indicator.
#[derive(Clone)]
pub struct Assessment {
    space: Space,
    gambles: Vec<Gamble>,
    values: Vec<Rational>,
    index: HashMap<Gamble, usize>,
}

impl Assessment {
    pub fn new(space: &Space) -> Self {
        Assessment {
            space: space.clone(),
            gambles: Vec::new(),
            values: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_entries<I>(space: &Space, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Gamble, Rational)>,
    {
        let mut a = Self::new(space);
        for (g, v) in entries {
            a.insert(g, v)?;
        }
        Ok(a)
    }

    /// Assessment on event indicators.
    pub fn from_events<I>(space: &Space, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Event, Rational)>,
    {
        Self::from_entries(space, entries.into_iter().map(|(e, v)| (e.indicator(), v)))
    }

    pub fn insert(&mut self, gamble: Gamble, value: Rational) -> Result<()> {
        if gamble.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        if self.index.contains_key(&gamble) {
            return Err(Error::DuplicateGamble(gamble));
        }
        self.index.insert(gamble.clone(), self.gambles.len());
        self.gambles.push(gamble);
        self.values.push(value);
        Ok(())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.gambles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gambles.is_empty()
    }

    pub fn gambles(&self) -> &[Gamble] {
        &self.gambles
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gamble, &Rational)> {
        self.gambles.iter().zip(&self.values)
    }

    pub fn get(&self, gamble: &Gamble) -> Option<&Rational> {
        self.index.get(gamble).map(|&i| &self.values[i])
    }

    pub fn contains(&self, gamble: &Gamble) -> bool {
        self.index.contains_key(gamble)
    }

    /// True when every domain gamble is an indicator.
    pub fn is_lower_probability(&self) -> bool {
        self.gambles.iter().all(|g| g.as_event().is_some())
    }

    pub fn map_values(&self, op: impl Fn(&Rational) -> Rational) -> Assessment {
        Assessment {
            space: self.space.clone(),
            gambles: self.gambles.clone(),
            values: self.values.iter().map(op).collect(),
            index: self.index.clone(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Assessment {
        self.map_values(|v| v * factor)
    }

    /// The domain as a lattice; fails when it is not closed under ∧ and ∨.
    pub fn lattice(&self) -> Result<GambleLattice> {
        GambleLattice::from_elements(&self.space, self.gambles.clone())
    }

    /// Restriction to the gambles satisfying `keep`, in domain order.
    pub fn restrict(&self, keep: impl Fn(&Gamble) -> bool) -> Assessment {
        Assessment::from_entries(
            &self.space,
            self.iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, v)| (g.clone(), v.clone())),
        )
        .expect("restriction of a valid assessment")
    }
}

impl PartialEq for Assessment {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.gambles == other.gambles && self.values == other.values
    }
}

impl fmt::Debug for Assessment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

/// A positive linear functional: one nonnegative mass per outcome.
#[derive(Clone, PartialEq)]
pub struct MassFunctional {
    space: Space,
    masses: Vec<Rational>,
}

impl MassFunctional {
    pub fn new(space: &Space, masses: Vec<Rational>) -> Result<Self> {
        if masses.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: masses.len(),
            });
        }
        if let Some(m) = masses.iter().find(|m| m.is_negative()) {
            return Err(Error::NegativeMass(m.to_string()));
        }
        Ok(MassFunctional {
            space: space.clone(),
            masses,
        })
    }

    pub fn uniform(space: &Space) -> Self {
        let m = Rational::new(1.into(), space.size().into());
        MassFunctional {
            space: space.clone(),
            masses: vec![m; space.size()],
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    /// `Λ(1)`, which is also the norm of `Λ`.
    pub fn total(&self) -> Rational {
        self.masses.iter().sum()
    }

    pub fn evaluate(&self, f: &Gamble) -> Result<Rational> {
        evaluate(self, f)
    }

    /// The expectation functional `g ↦ Λ(g)` on the given gambles; repeats
    /// are skipped.
    pub fn assessment_on(&self, gambles: &[Gamble]) -> Result<Assessment> {
        let mut a = Assessment::new(&self.space);
        for g in gambles {
            if !a.contains(g) {
                a.insert(g.clone(), self.evaluate(g)?)?;
            }
        }
        Ok(a)
    }

    /// Exact check that `Λ(f) >= ℓ(f)` on the whole domain of `ℓ`.
    pub fn dominates(&self, ell: &Assessment) -> Result<bool> {
        for (g, v) in ell.iter() {
            if self.evaluate(g)? < *v {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for MassFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.masses.iter().map(|m| m.to_string()))
            .finish()
    }
}

/// `Λ(f) = Σ_ω mass(ω) f(ω)`.
pub fn evaluate(functional: &MassFunctional, f: &Gamble) -> Result<Rational> {
    if f.space() != &functional.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(lp::dot(&functional.masses, f.values()))
}

/// Masses `>= 0` with `Λ(f) >= ℓ(f)` on the domain, plus any extra rows.
fn dominance_program(ell: &Assessment, objective: Vec<Rational>) -> LinearProgram {
    let mut program = LinearProgram::minimize(objective);
    for (g, v) in ell.iter() {
        program.add_ge(g.values().to_vec(), v.clone());
    }
    program
}

fn total_row(space: &Space) -> Vec<Rational> {
    vec![Rational::one(); space.size()]
}

fn mass_from_point(space: &Space, point: &[Rational]) -> MassFunctional {
    MassFunctional::new(space, point.to_vec()).expect("LP points are nonnegative")
}

/// Minimum of `Λ(f)` over dominating `Λ` with total mass `total`.
fn envelope(ell: &Assessment, total: &Rational, f: &Gamble) -> Result<LpOutcome> {
    if f.space() != ell.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut program = dominance_program(ell, f.values().to_vec());
    program.add_eq(total_row(ell.space()), total.clone());
    Ok(lp::solve(&program)?)
}

/// Decides whether some linear prevision dominates `P`.
///
/// A positive verdict carries such a prevision. A negative one carries
/// integer multiples `n_i` of domain gambles `f_i` with
/// `sup Σ n_i f_i < Σ n_i P(f_i)`, read off the Farkas certificate of the
/// infeasible dominance program and re-verified exactly.
pub fn avoids_sure_loss(p: &Assessment) -> Verdict {
    let space = p.space();
    let mut program = dominance_program(p, vec![Rational::zero(); space.size()]);
    program.add_eq(total_row(space), Rational::one());
    match lp::solve(&program).expect("dominance program is well formed") {
        LpOutcome::Optimal { point, .. } => {
            Verdict::yes_with(Witness::Dominating(mass_from_point(space, &point)))
        }
        LpOutcome::Infeasible { certificate } => {
            Verdict::no(sure_loss_witness(p, &certificate[..p.len()]))
        }
        LpOutcome::Unbounded => unreachable!("constant objective cannot be unbounded"),
    }
}

fn sure_loss_witness(p: &Assessment, weights: &[Rational]) -> Witness {
    let multiples = primitive_integer_direction(weights);
    let mut gambles = Vec::new();
    let mut kept = Vec::new();
    for ((g, _), n) in p.iter().zip(&multiples) {
        if n.is_positive() {
            gambles.push(g.clone());
            kept.push(n.clone());
        }
    }
    let witness = build_sure_loss(p, gambles, kept);
    match &witness {
        Some(w) if verify_witness(p, w).unwrap_or(false) => witness.unwrap(),
        _ => Witness::Unavailable,
    }
}

fn build_sure_loss(p: &Assessment, gambles: Vec<Gamble>, multiples: Vec<Rational>) -> Option<Witness> {
    if gambles.is_empty() || multiples.iter().any(|n| n.is_negative()) {
        return None;
    }
    let mut sum = Gamble::zero(p.space());
    let mut bound = Rational::zero();
    for (g, n) in gambles.iter().zip(&multiples) {
        sum = sum.add(&g.scale(n)).ok()?;
        bound += n * p.get(g)?;
    }
    Some(Witness::SureLoss {
        gambles,
        multiples,
        sup: sum.sup(),
        bound,
    })
}

/// Natural extension of a lower prevision that avoids sure loss: the
/// minimum of `Q(f)` over dominating linear previsions `Q`.
pub fn natural_extension_prevision(p: &Assessment, f: &Gamble) -> Result<Rational> {
    match envelope(p, &Rational::one(), f)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible { .. } => Err(Error::SureLoss),
        LpOutcome::Unbounded => unreachable!("bounded over the probability simplex"),
    }
}

/// Coherent iff it avoids sure loss and equals its natural extension on
/// its domain. The witness for a negative verdict is either the sure loss
/// or the first domain gamble whose natural extension is strictly larger.
pub fn is_coherent(p: &Assessment) -> Verdict {
    let asl = avoids_sure_loss(p);
    if !asl.decision {
        return asl;
    }
    for (g, v) in p.iter() {
        let extension = natural_extension_prevision(p, g).expect("avoids sure loss");
        if extension != *v {
            return Verdict::no(Witness::Incoherent {
                gamble: g.clone(),
                assessed: v.clone(),
                extension,
            });
        }
    }
    Verdict::yes()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Norm {
    Finite(Rational),
    Infinite,
}

impl Norm {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Norm::Finite(v) => Some(v),
            Norm::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Norm::Finite(_))
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Finite(v) => write!(f, "{v}"),
            Norm::Infinite => write!(f, "inf"),
        }
    }
}

/// Total-mass interval of dominating functionals attaining `ℓ(f0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttainmentInterval {
    pub gamble: Gamble,
    pub lower: Rational,
    /// `None` when unbounded above.
    pub upper: Option<Rational>,
}

fn attainment_program(ell: &Assessment, f0: &Gamble, objective: Vec<Rational>) -> LinearProgram {
    let mut program = dominance_program(ell, objective);
    program.add_eq(f0.values().to_vec(), ell.get(f0).expect("domain gamble").clone());
    program
}

/// The interval `[l(f0), u(f0)]`, or `None` when no dominating functional
/// attains `ℓ(f0)`.
pub fn attainment_interval(ell: &Assessment, f0: &Gamble) -> Result<Option<AttainmentInterval>> {
    if !ell.contains(f0) {
        return Err(Error::NotInDomain(f0.clone()));
    }
    let ones = total_row(ell.space());
    let lower = match lp::solve(&attainment_program(ell, f0, ones.clone()))? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Unbounded => unreachable!("total mass is bounded below by zero"),
    };
    let negated = ones.into_iter().map(|c| -c).collect();
    let upper = match lp::solve(&attainment_program(ell, f0, negated))? {
        LpOutcome::Optimal { value, .. } => Some(-value),
        LpOutcome::Unbounded => None,
        LpOutcome::Infeasible { .. } => unreachable!("feasible for the minimisation"),
    };
    Ok(Some(AttainmentInterval {
        gamble: f0.clone(),
        lower,
        upper,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormAnalysis {
    pub norm: Norm,
    pub intervals: Vec<AttainmentInterval>,
    /// Present exactly when the norm is infinite.
    pub witness: Option<Witness>,
}

/// Runs the interval-intersection algorithm over every domain gamble.
pub fn norm_analysis(ell: &Assessment) -> NormAnalysis {
    let mut intervals = Vec::with_capacity(ell.len());
    for g in ell.gambles() {
        match attainment_interval(ell, g).expect("domain gamble on the same space") {
            Some(iv) => intervals.push(iv),
            None => {
                return NormAnalysis {
                    norm: Norm::Infinite,
                    intervals,
                    witness: Some(Witness::AttainmentInfeasible { gamble: g.clone() }),
                }
            }
        }
    }
    let Some(lowest) = intervals.iter().max_by(|a, b| a.lower.cmp(&b.lower).then(std::cmp::Ordering::Greater)) else {
        return NormAnalysis {
            norm: Norm::Finite(Rational::zero()),
            intervals,
            witness: None,
        };
    };
    let tightest = intervals
        .iter()
        .filter(|iv| iv.upper.is_some())
        .min_by(|a, b| a.upper.cmp(&b.upper).then(std::cmp::Ordering::Less));
    if let Some(top) = tightest {
        let upper = top.upper.clone().expect("filtered");
        if lowest.lower > upper {
            let witness = Witness::DisjointIntervals {
                lower_gamble: lowest.gamble.clone(),
                lower: lowest.lower.clone(),
                upper_gamble: top.gamble.clone(),
                upper,
            };
            return NormAnalysis {
                norm: Norm::Infinite,
                intervals,
                witness: Some(witness),
            };
        }
    }
    let norm = Norm::Finite(lowest.lower.clone());
    NormAnalysis {
        norm,
        intervals,
        witness: None,
    }
}

/// The norm of a functional: finite exactly when it is exact, and equal to
/// `ℓ(1)` when the constant gamble 1 is in an exact functional's domain.
pub fn norm(ell: &Assessment) -> Norm {
    norm_analysis(ell).norm
}

/// Exact iff the norm is finite.
///
/// Set functions on a lattice of events containing ∅ and Ω that are
/// 2-monotone are exact iff they vanish on ∅; that test runs first.
pub fn is_exact(ell: &Assessment) -> Verdict {
    if let Some(decision) = set_function_shortcut(ell) {
        return decision;
    }
    let analysis = norm_analysis(ell);
    match analysis.witness {
        None => Verdict::yes(),
        Some(w) => Verdict::no(w),
    }
}

fn set_function_shortcut(ell: &Assessment) -> Option<Verdict> {
    if ell.is_empty() || !ell.is_lower_probability() {
        return None;
    }
    let space = ell.space();
    let empty = Event::empty(space).ok()?.indicator();
    let full = Event::full(space).ok()?.indicator();
    let at_empty = ell.get(&empty)?;
    ell.get(&full)?;
    let report = monotone::is_n_monotone(ell, Order::Finite(2)).ok()?;
    if report.violation.is_some() {
        return None;
    }
    Some(if at_empty.is_zero() {
        Verdict::yes()
    } else {
        Verdict::no(Witness::AttainmentInfeasible { gamble: empty })
    })
}

/// The natural extension of an exact functional (or of a lower prevision,
/// which is the norm-one case), with the norm computed once.
#[derive(Debug, Clone)]
pub struct NaturalExtension {
    assessment: Assessment,
    norm: Rational,
}

impl NaturalExtension {
    /// Extension of an exact functional; its norm is preserved.
    pub fn exact(ell: &Assessment) -> Result<Self> {
        match norm(ell) {
            Norm::Finite(norm) => Ok(NaturalExtension {
                assessment: ell.clone(),
                norm,
            }),
            Norm::Infinite => Err(Error::NotExact),
        }
    }

    /// Extension of a lower prevision that avoids sure loss.
    pub fn prevision(p: &Assessment) -> Result<Self> {
        if !avoids_sure_loss(p).decision {
            return Err(Error::SureLoss);
        }
        Ok(NaturalExtension {
            assessment: p.clone(),
            norm: Rational::one(),
        })
    }

    pub fn norm(&self) -> &Rational {
        &self.norm
    }

    pub fn assessment(&self) -> &Assessment {
        &self.assessment
    }

    pub fn lower(&self, f: &Gamble) -> Result<Rational> {
        Ok(self.minimiser(f)?.0)
    }

    /// The value at `f` together with a dominating functional attaining it.
    pub fn minimiser(&self, f: &Gamble) -> Result<(Rational, MassFunctional)> {
        match envelope(&self.assessment, &self.norm, f)? {
            LpOutcome::Optimal { value, point } => {
                Ok((value, mass_from_point(self.assessment.space(), &point)))
            }
            LpOutcome::Infeasible { .. } => Err(Error::NotExact),
            LpOutcome::Unbounded => unreachable!("bounded over a scaled simplex"),
        }
    }

    /// The extension restricted to `gambles`; repeats are skipped.
    pub fn assessment_on(&self, gambles: &[Gamble]) -> Result<Assessment> {
        let mut a = Assessment::new(self.assessment.space());
        for g in gambles {
            if !a.contains(g) {
                a.insert(g.clone(), self.lower(g)?)?;
            }
        }
        Ok(a)
    }
}

/// Natural extension of an exact functional: the minimum of `Λ(f)` over
/// dominating positive functionals with total mass equal to the norm.
pub fn natural_extension_exact(ell: &Assessment, f: &Gamble) -> Result<Rational> {
    NaturalExtension::exact(ell)?.lower(f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactDecomposition {
    pub lambda: Rational,
    pub coherent: Assessment,
    /// False when another `(λ, P)` pair also reproduces the functional,
    /// which can happen when the constant 1 is outside the domain or the
    /// functional vanishes.
    pub unique: bool,
}

/// Writes an exact functional as `‖ℓ‖ · P` with `P` coherent. For the
/// zero functional the vacuous prevision `inf f` is used.
pub fn decompose(ell: &Assessment) -> Result<ExactDecomposition> {
    let lambda = match norm(ell) {
        Norm::Finite(v) => v,
        Norm::Infinite => return Err(Error::NotExact),
    };
    let coherent = if lambda.is_zero() {
        Assessment::from_entries(
            ell.space(),
            ell.gambles().iter().map(|g| (g.clone(), g.inf())),
        )?
    } else {
        ell.map_values(|v| v / &lambda)
    };
    let unique = !lambda.is_zero() && ell.contains(&Gamble::one(ell.space()));
    Ok(ExactDecomposition {
        lambda,
        coherent,
        unique,
    })
}

/// `ℓ̄(f) = -ℓ(-f)` on the negated domain.
pub fn conjugate(ell: &Assessment) -> Assessment {
    Assessment::from_entries(ell.space(), ell.iter().map(|(g, v)| (g.neg(), -v)))
        .expect("negation is injective")
}

/// A dominating functional of matching norm attaining the values of both
/// `f` and `g`, if one exists. Gambles outside the domain are targeted at
/// their natural extension.
pub fn find_attaining(ell: &Assessment, f: &Gamble, g: &Gamble) -> Result<Option<MassFunctional>> {
    let ext = NaturalExtension::exact(ell)?;
    let target = |h: &Gamble| -> Result<Rational> {
        match ell.get(h) {
            Some(v) => Ok(v.clone()),
            None => ext.lower(h),
        }
    };
    let (tf, tg) = (target(f)?, target(g)?);
    let space = ell.space();
    let mut program = dominance_program(ell, vec![Rational::zero(); space.size()]);
    program.add_eq(total_row(space), ext.norm.clone());
    program.add_eq(f.values().to_vec(), tf);
    program.add_eq(g.values().to_vec(), tg);
    Ok(match lp::solve(&program)? {
        LpOutcome::Optimal { point, .. } => Some(mass_from_point(space, &point)),
        _ => None,
    })
}

/// Re-checks a witness produced for `ell` by this module.
///
/// Dominating functionals must dominate; sure-loss multiples must
/// reproduce `sup < bound`; incoherence must show a strictly larger
/// natural extension; norm witnesses are re-solved.
pub fn verify_witness(ell: &Assessment, witness: &Witness) -> Result<bool> {
    match witness {
        Witness::Dominating(m) => Ok(m.total().is_one() && m.dominates(ell)?),
        Witness::SureLoss {
            gambles,
            multiples,
            sup,
            bound,
        } => {
            if gambles.len() != multiples.len() || gambles.iter().any(|g| !ell.contains(g)) {
                return Ok(false);
            }
            match build_sure_loss(ell, gambles.clone(), multiples.clone()) {
                Some(Witness::SureLoss { sup: s, bound: b, .. }) => {
                    Ok(s == *sup && b == *bound && s < b)
                }
                _ => Ok(false),
            }
        }
        Witness::Incoherent {
            gamble,
            assessed,
            extension,
        } => Ok(ell.get(gamble) == Some(assessed)
            && natural_extension_prevision(ell, gamble)? == *extension
            && extension > assessed),
        Witness::AttainmentInfeasible { gamble } => {
            Ok(ell.contains(gamble) && attainment_interval(ell, gamble)?.is_none())
        }
        Witness::DisjointIntervals {
            lower_gamble,
            lower,
            upper_gamble,
            upper,
        } => {
            let lo = attainment_interval(ell, lower_gamble)?;
            let up = attainment_interval(ell, upper_gamble)?;
            Ok(match (lo, up) {
                (Some(lo), Some(up)) => {
                    lo.lower == *lower && up.upper.as_ref() == Some(upper) && lower > upper
                }
                _ => false,
            })
        }
        _ => Ok(false),
    }
}
