//! n-monotonicity of functionals on finite lattices, inner set functions
//! and inner extensions, Möbius transforms, and the canonical completely
//! monotone examples.
//!
//! The checker evaluates the alternating sum
//!
//! ```text
//! Σ_{I ⊆ {1..p}} (-1)^|I| ℓ(f ∧ ⋀_{i ∈ I} f_i)
//! ```
//!
//! with the empty meet contributing `ℓ(f)`. Replacing `f_i` by `f ∧ f_i`
//! leaves every term unchanged, a repeated `f_i` cancels in pairs down to
//! a single copy, and `f_i = f` makes the whole sum vanish. So it suffices
//! to range over sets of distinct elements strictly below the base `f`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::consistency::{conjugate, Assessment};
use crate::error::{Error, Result};
use crate::gamble::{check_wedge_homomorphism, full_mask, Event, Gamble, GambleLattice, HomomorphismTable, Space};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// Power sets beyond this many outcomes are refused.
pub const MAX_POWER_SET_OUTCOMES: usize = 20;

/// Without the Möbius certificate, complete monotonicity is decided by
/// enumeration, which is only attempted up to this lattice size.
pub const MAX_ENUMERATED_LATTICE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    Complete,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Complete => write!(f, "inf"),
        }
    }
}

/// A tuple `(base; f_1, ..., f_p)` with a negative alternating sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub p: usize,
    pub base: Gamble,
    pub tuple: Vec<Gamble>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub requested: Order,
    /// Largest order for which every alternating sum was checked and found
    /// nonnegative. `Finite(0)` means monotonicity itself fails.
    pub verified: Order,
    pub violation: Option<Violation>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// The alternating sum for `base` and `tuple`, evaluated through `ℓ`.
pub fn alternating_sum(ell: &Assessment, base: &Gamble, tuple: &[Gamble]) -> Result<Rational> {
    let mut sum = Rational::zero();
    for mask in 0u64..(1 << tuple.len()) {
        let mut m = base.clone();
        for (i, g) in tuple.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m = m.meet(g)?;
            }
        }
        let v = ell.get(&m).ok_or_else(|| Error::NotInDomain(m.clone()))?;
        if mask.count_ones() % 2 == 0 {
            sum += v;
        } else {
            sum -= v;
        }
    }
    Ok(sum)
}

/// Checks n-monotonicity on the (lattice) domain of `ell`.
///
/// With [`Order::Complete`], event lattices containing ∅ and Ω are
/// decided through the Möbius transform of their inner set function, and
/// other lattices by enumerating every order up to their size minus one.
pub fn is_n_monotone(ell: &Assessment, n: Order) -> Result<MonotonicityReport> {
    let lattice = ell.lattice()?;
    match n {
        Order::Finite(0) => Err(Error::ZeroOrder),
        Order::Finite(k) => Ok(enumerate(ell, &lattice, n, k)),
        Order::Complete => complete(ell, &lattice),
    }
}

fn complete(ell: &Assessment, lattice: &GambleLattice) -> Result<MonotonicityReport> {
    if lattice.is_event_lattice() && !lattice.is_empty() {
        if let Ok(sf) = SetFunction::new(ell.clone()) {
            if sf.has_bounds() {
                // The inner set function hides decreases, so monotonicity
                // itself is checked on the domain first.
                let base = enumerate(ell, lattice, Order::Complete, 1);
                if !base.holds() {
                    return Ok(base);
                }
                let extended = sf.inner_power_set()?;
                let transform = mobius_shifted(&extended)?;
                let smallest = transform
                    .iter()
                    .filter(|(e, c)| !e.is_empty() && c.is_negative())
                    .min_by_key(|(e, _)| e.len())
                    .map(|(e, c)| (e, c.clone()));
                return Ok(match smallest {
                    None => MonotonicityReport {
                        requested: Order::Complete,
                        verified: Order::Complete,
                        violation: None,
                    },
                    Some((event, coefficient)) => {
                        // ℓ being k-monotone would make its inner set function
                        // k-monotone, so a violation of order <= k sits in the
                        // domain itself.
                        let k = event.len();
                        let mut report = enumerate(ell, lattice, Order::Complete, k);
                        if report.holds() {
                            // Unreachable in exact arithmetic; fall back to the
                            // tuple on the extension, whose sum is m(C).
                            let tuple = event
                                .members()
                                .map(|w| Event::from_mask(ell.space(), event.mask() & !(1 << w)).map(|e| e.indicator()))
                                .collect::<Result<Vec<_>>>()?;
                            report.verified = Order::Finite(k - 1);
                            report.violation = Some(Violation {
                                p: k,
                                base: event.indicator(),
                                tuple,
                                sum: coefficient,
                            });
                        }
                        report
                    }
                });
            }
        }
    }
    if lattice.len() > MAX_ENUMERATED_LATTICE {
        return Err(Error::LatticeTooLarge {
            size: lattice.len(),
            max: MAX_ENUMERATED_LATTICE,
        });
    }
    let top = lattice.len().saturating_sub(1).max(1);
    let mut report = enumerate(ell, lattice, Order::Complete, top);
    if report.holds() {
        report.verified = Order::Complete;
    }
    Ok(report)
}

/// Orders `1..=k`, then bases in domain order, then ascending index
/// combinations of elements strictly below the base.
fn enumerate(ell: &Assessment, lattice: &GambleLattice, requested: Order, k: usize) -> MonotonicityReport {
    let elements = lattice.elements();
    let values: Vec<&Rational> = elements
        .iter()
        .map(|g| ell.get(g).expect("lattice built from the domain"))
        .collect();
    let meet = lattice.meet_table();
    let below: Vec<Vec<usize>> = (0..elements.len())
        .map(|b| {
            (0..elements.len())
                .filter(|&i| i != b && meet[i][b] == i)
                .collect()
        })
        .collect();
    let mut meets = Vec::new();
    for p in 1..=k {
        for (b, candidates) in below.iter().enumerate() {
            if candidates.len() < p {
                continue;
            }
            let mut combo: Vec<usize> = (0..p).collect();
            loop {
                let tuple: Vec<usize> = combo.iter().map(|&c| candidates[c]).collect();
                let sum = subset_sum(&values, &meet, b, &tuple, &mut meets);
                if sum.is_negative() {
                    return MonotonicityReport {
                        requested,
                        verified: Order::Finite(p - 1),
                        violation: Some(Violation {
                            p,
                            base: elements[b].clone(),
                            tuple: tuple.iter().map(|&i| elements[i].clone()).collect(),
                            sum,
                        }),
                    };
                }
                if !next_combination(&mut combo, candidates.len()) {
                    break;
                }
            }
        }
    }
    MonotonicityReport {
        requested,
        verified: Order::Finite(k),
        violation: None,
    }
}

fn subset_sum(
    values: &[&Rational],
    meet: &[Vec<usize>],
    base: usize,
    tuple: &[usize],
    meets: &mut Vec<usize>,
) -> Rational {
    let size = 1usize << tuple.len();
    meets.clear();
    meets.resize(size, base);
    let mut sum = values[base].clone();
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let m = meet[meets[mask & (mask - 1)]][tuple[low]];
        meets[mask] = m;
        if mask.count_ones() % 2 == 0 {
            sum += values[m];
        } else {
            sum -= values[m];
        }
    }
    sum
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let p = combo.len();
    for i in (0..p).rev() {
        if combo[i] < n - p + i {
            combo[i] += 1;
            for j in i + 1..p {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// n-alternation of `ell`, checked as n-monotonicity of its conjugate on
/// the negated lattice. Reported gambles belong to the negated lattice.
pub fn is_n_alternating(ell: &Assessment, n: Order) -> Result<MonotonicityReport> {
    is_n_monotone(&conjugate(ell), n)
}

/// An assessment on a lattice of events.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    assessment: Assessment,
    events: Vec<Event>,
    by_mask: HashMap<u64, usize>,
}

impl SetFunction {
    /// Requires indicator gambles forming a lattice.
    pub fn new(assessment: Assessment) -> Result<Self> {
        let mut events = Vec::with_capacity(assessment.len());
        for g in assessment.gambles() {
            events.push(g.as_event().ok_or(Error::NotASetFunction)?);
        }
        assessment.lattice()?;
        let by_mask = events.iter().enumerate().map(|(i, e)| (e.mask(), i)).collect();
        Ok(SetFunction {
            assessment,
            events,
            by_mask,
        })
    }

    pub fn from_events<I>(space: &Space, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Event, Rational)>,
    {
        Self::new(Assessment::from_events(space, entries)?)
    }

    /// Tabulates `value` over all events, in increasing mask order.
    pub fn power_set(space: &Space, value: impl Fn(&Event) -> Rational) -> Result<Self> {
        check_power_set_size(space)?;
        let events = (0..=full_mask(space.size())).map(|m| Event::from_mask(space, m));
        let entries = events
            .map(|e| e.map(|e| {
                let v = value(&e);
                (e, v)
            }))
            .collect::<Result<Vec<_>>>()?;
        Self::from_events(space, entries)
    }

    pub fn space(&self) -> &Space {
        self.assessment.space()
    }

    pub fn assessment(&self) -> &Assessment {
        &self.assessment
    }

    pub fn into_assessment(self) -> Assessment {
        self.assessment
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn value(&self, event: &Event) -> Option<&Rational> {
        self.by_mask
            .get(&event.mask())
            .map(|&i| &self.assessment.values()[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Event, &Rational)> {
        self.events.iter().zip(self.assessment.values())
    }

    /// True when ∅ and Ω are both in the domain.
    pub fn has_bounds(&self) -> bool {
        self.by_mask.contains_key(&0) && self.by_mask.contains_key(&full_mask(self.space().size()))
    }

    pub fn is_power_set(&self) -> bool {
        self.space().size() <= MAX_POWER_SET_OUTCOMES && self.events.len() == 1 << self.space().size()
    }

    /// Values indexed by event mask; requires the full power set.
    pub fn table(&self) -> Result<Vec<Rational>> {
        let m = self.space().size();
        check_power_set_size(self.space())?;
        if self.events.len() != 1 << m {
            return Err(Error::PartialDomain { expected: 1 << m });
        }
        let mut table = vec![Rational::zero(); 1 << m];
        for (e, v) in self.iter() {
            table[e.mask() as usize] = v.clone();
        }
        Ok(table)
    }

    /// The first pair `A ⊆ A ∪ {ω}` on which a power-set function
    /// decreases.
    pub fn check_monotone(&self) -> Result<()> {
        let table = self.table()?;
        let m = self.space().size();
        for mask in 0..table.len() {
            for w in 0..m {
                let larger = mask | 1 << w;
                if larger != mask && table[larger] < table[mask] {
                    let label = |x: usize| {
                        Event::from_mask(self.space(), x as u64)
                            .expect("mask within space")
                            .labels()
                            .into_iter()
                            .map(String::from)
                            .collect()
                    };
                    return Err(Error::NotMonotone {
                        smaller: label(mask),
                        larger: label(larger),
                    });
                }
            }
        }
        Ok(())
    }

    /// The inner set function on every event.
    pub fn inner_power_set(&self) -> Result<SetFunction> {
        if !self.has_bounds() {
            return Err(Error::MissingBounds);
        }
        check_power_set_size(self.space())?;
        let size = 1usize << self.space().size();
        // best[A] = max over domain events B ⊆ A, by a superset sweep.
        let mut best: Vec<Option<Rational>> = vec![None; size];
        for (e, v) in self.iter() {
            let slot = &mut best[e.mask() as usize];
            *slot = Some(v.clone());
        }
        for w in 0..self.space().size() {
            for mask in 0..size {
                if mask >> w & 1 == 1 {
                    if let Some(sub) = best[mask ^ 1 << w].clone() {
                        let slot = &mut best[mask];
                        if slot.as_ref().is_none_or(|cur| *cur < sub) {
                            *slot = Some(sub);
                        }
                    }
                }
            }
        }
        SetFunction::power_set(self.space(), |e| {
            best[e.mask() as usize].clone().expect("∅ is below every event")
        })
    }
}

fn check_power_set_size(space: &Space) -> Result<()> {
    if space.size() > MAX_POWER_SET_OUTCOMES {
        return Err(Error::SpaceTooLarge {
            size: space.size(),
            max: MAX_POWER_SET_OUTCOMES,
        });
    }
    Ok(())
}

/// `ℓ*(A) = max { ℓ(B) : B ∈ dom ℓ, B ⊆ A }`.
pub fn inner_set_function(ell: &SetFunction, event: &Event) -> Result<Rational> {
    if event.space() != ell.space() {
        return Err(Error::SpaceMismatch);
    }
    if !ell.has_bounds() {
        return Err(Error::MissingBounds);
    }
    Ok(ell
        .iter()
        .filter(|(b, _)| b.is_subset(event))
        .map(|(_, v)| v)
        .max()
        .expect("∅ is in the domain")
        .clone())
}

/// `ℓ*(f) = max { ℓ(g) : g ∈ dom ℓ, g <= f }`.
pub fn inner_extension(ell: &Assessment, f: &Gamble) -> Result<Rational> {
    let mut best: Option<&Rational> = None;
    for (g, v) in ell.iter() {
        if g.le(f)? && best.is_none_or(|b| b < v) {
            best = Some(v);
        }
    }
    best.cloned().ok_or_else(|| Error::NoCandidate(f.clone()))
}

/// Coefficients `m(A) = Σ_{B ⊆ A} (-1)^|A \ B| ℓ(B)` on every event.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusTransform {
    space: Space,
    coefficients: Vec<Rational>,
}

impl MobiusTransform {
    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Indexed by event mask.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, event: &Event) -> &Rational {
        &self.coefficients[event.mask() as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Event, &Rational)> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(m, c)| (Event::from_mask(&self.space, m as u64).expect("mask within space"), c))
    }

    /// `ℓ(A) = Σ_{B ⊆ A} m(B)`.
    pub fn reconstruct(&self) -> SetFunction {
        let mut table = self.coefficients.clone();
        zeta(&mut table, self.space.size());
        SetFunction::power_set(&self.space, |e| table[e.mask() as usize].clone())
            .expect("space size already checked")
    }
}

fn zeta(table: &mut [Rational], m: usize) {
    for w in 0..m {
        for mask in 0..table.len() {
            if mask >> w & 1 == 1 {
                let low = table[mask ^ 1 << w].clone();
                table[mask] += low;
            }
        }
    }
}

fn moebius_in_place(table: &mut [Rational], m: usize) {
    for w in 0..m {
        for mask in 0..table.len() {
            if mask >> w & 1 == 1 {
                let low = table[mask ^ 1 << w].clone();
                table[mask] -= low;
            }
        }
    }
}

pub fn mobius(ell: &SetFunction) -> Result<MobiusTransform> {
    let mut coefficients = ell.table()?;
    moebius_in_place(&mut coefficients, ell.space().size());
    Ok(MobiusTransform {
        space: ell.space().clone(),
        coefficients,
    })
}

/// Möbius transform of `ℓ - ℓ(∅)`; only `m(∅)` differs from [`mobius`].
fn mobius_shifted(ell: &SetFunction) -> Result<MobiusTransform> {
    let mut t = mobius(ell)?;
    t.coefficients[0] = Rational::zero();
    Ok(t)
}

/// Complete monotonicity of a power-set function vanishing on ∅: yes iff
/// every Möbius coefficient is nonnegative. The witness is the first
/// negative coefficient in mask order.
pub fn is_completely_monotone(ell: &SetFunction) -> Result<Verdict> {
    let table = ell.table()?;
    if !table[0].is_zero() {
        return Err(Error::NonzeroOnEmpty);
    }
    let transform = mobius(ell)?;
    let negative = transform
        .iter()
        .find(|(_, c)| c.is_negative())
        .map(|(event, c)| (event, c.clone()));
    Ok(match negative {
        Some((event, coefficient)) => Verdict::no(Witness::NegativeMobius { event, coefficient }),
        None => Verdict::yes(),
    })
}

/// `g ↦ ℓ(r(g))` on the domain of `r`, after checking that `r` preserves
/// meets and lands in the domain of `ℓ`.
pub fn compose_homomorphism(ell: &Assessment, r: &HomomorphismTable) -> Result<Assessment> {
    let verdict = check_wedge_homomorphism(r)?;
    if let Some(Witness::GamblePair { f, g, .. }) = verdict.witness.filter(|_| !verdict.decision) {
        return Err(Error::NotWedgeHomomorphism { f, g });
    }
    let mut out = Assessment::new(ell.space());
    for (s, t) in r.sources().iter().zip(r.targets()) {
        let v = ell.get(t).ok_or_else(|| Error::ImageOutsideDomain(t.clone()))?;
        out.insert(s.clone(), v.clone())?;
    }
    Ok(out)
}

/// The vacuous lower prevision relative to `event`, `f ↦ min_{ω ∈ A} f(ω)`,
/// on the requested gambles.
pub fn vacuous(event: &Event, gambles: &[Gamble]) -> Result<Assessment> {
    if event.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let mut out = Assessment::new(event.space());
    for g in gambles {
        let v = vacuous_value(event, g)?;
        out.insert(g.clone(), v)?;
    }
    Ok(out)
}

pub fn vacuous_value(event: &Event, g: &Gamble) -> Result<Rational> {
    if event.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    if event.is_empty() {
        return Err(Error::EmptyEvent);
    }
    Ok(event
        .members()
        .map(|i| &g.values()[i])
        .min()
        .expect("non-empty event")
        .clone())
}

/// Checks `ℓ(f ∧ g) = min(ℓ(f), ℓ(g))` on every domain pair.
pub fn minimum_preserving_check(ell: &Assessment) -> Result<Verdict> {
    ell.lattice()?;
    let gambles = ell.gambles();
    for i in 0..gambles.len() {
        for j in i + 1..gambles.len() {
            let (f, g) = (&gambles[i], &gambles[j]);
            let left = ell.get(&f.meet(g)?).expect("lattice domain").clone();
            let right = ell.values()[i].clone().min(ell.values()[j].clone());
            if left != right {
                return Ok(Verdict::no(Witness::ValuePair {
                    f: f.clone(),
                    g: g.clone(),
                    left,
                    right,
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::{MassFunctional, NaturalExtension};
    use crate::gamble::lattice_closure;
    use crate::rational::{int, rat};

    fn abc() -> Space {
        Space::new(["a", "b", "c"]).unwrap()
    }

    fn g(space: &Space, v: &[i64]) -> Gamble {
        Gamble::from_ints(space, v).unwrap()
    }

    fn ev(space: &Space, labels: &[&str]) -> Event {
        Event::from_labels(space, labels).unwrap()
    }

    fn counterexample_lattice() -> Assessment {
        let s = abc();
        let f = g(&s, &[0, 1, 2]);
        let one = Gamble::one(&s);
        Assessment::from_entries(
            &s,
            [
                (f.clone(), int(1)),
                (one.clone(), int(1)),
                (f.meet(&one).unwrap(), rat(1, 2)),
                (f.join(&one).unwrap(), int(1)),
            ],
        )
        .unwrap()
    }

    fn counterexample_events() -> SetFunction {
        let s = abc();
        let bc = ev(&s, &["b", "c"]).mask();
        SetFunction::power_set(&s, |e| {
            if e.is_full() {
                int(1)
            } else if e.mask() == bc {
                rat(1, 2)
            } else {
                int(0)
            }
        })
        .unwrap()
    }

    #[test]
    fn counterexample_violates_two_monotonicity() {
        let ell = counterexample_lattice();
        let s = ell.space().clone();
        let report = is_n_monotone(&ell, Order::Finite(2)).unwrap();
        let v = report.violation.clone().unwrap();
        assert_eq!(v.p, 2);
        assert_eq!(v.base, g(&s, &[1, 1, 2]));
        assert_eq!(v.tuple, vec![g(&s, &[0, 1, 2]), Gamble::one(&s)]);
        assert_eq!(v.sum, rat(-1, 2));
        assert_eq!(report.verified, Order::Finite(1));
        assert_eq!(alternating_sum(&ell, &v.base, &v.tuple).unwrap(), v.sum);
        assert!(is_n_monotone(&ell, Order::Finite(1)).unwrap().holds());
    }

    #[test]
    fn counterexample_events_are_completely_monotone() {
        let sf = counterexample_events();
        assert!(is_n_monotone(sf.assessment(), Order::Finite(2)).unwrap().holds());
        assert!(is_n_monotone(sf.assessment(), Order::Finite(3)).unwrap().holds());
        assert_eq!(is_completely_monotone(&sf).unwrap(), Verdict::yes());
        let report = is_n_monotone(sf.assessment(), Order::Complete).unwrap();
        assert_eq!(report.verified, Order::Complete);
    }

    #[test]
    fn uniform_expectation_is_four_monotone() {
        let s = abc();
        let lattice = lattice_closure(&s, &[g(&s, &[0, 1, 2]), g(&s, &[2, 0, 1]), g(&s, &[1, 1, 0])]).unwrap();
        let ell = MassFunctional::uniform(&s).assessment_on(lattice.elements()).unwrap();
        assert!(is_n_monotone(&ell, Order::Finite(4)).unwrap().holds());
        assert!(is_n_alternating(&ell, Order::Finite(3)).unwrap().holds());
    }

    #[test]
    fn alternation_examples() {
        let s = abc();
        let lattice = lattice_closure(&s, &[g(&s, &[0, 1, 2]), g(&s, &[2, 0, 1])]).unwrap();
        let whole = Event::full(&s).unwrap();
        let vac = vacuous(&whole, lattice.elements()).unwrap();
        for n in 1..=3 {
            assert!(is_n_alternating(&conjugate(&vac), Order::Finite(n)).unwrap().holds());
        }
        let report = is_n_alternating(&conjugate(&counterexample_lattice()), Order::Finite(2)).unwrap();
        assert!(!report.holds());
    }

    #[test]
    fn inner_set_function_examples() {
        let s = abc();
        let sf = SetFunction::from_events(
            &s,
            [
                (Event::empty(&s).unwrap(), int(0)),
                (ev(&s, &["a"]), rat(1, 4)),
                (ev(&s, &["a", "b"]), rat(1, 2)),
                (Event::full(&s).unwrap(), int(1)),
            ],
        )
        .unwrap();
        assert_eq!(inner_set_function(&sf, &ev(&s, &["a", "c"])).unwrap(), rat(1, 4));
        assert_eq!(inner_set_function(&sf, &ev(&s, &["c"])).unwrap(), int(0));
        assert_eq!(inner_set_function(&sf, &ev(&s, &["a", "b"])).unwrap(), rat(1, 2));
        let full = sf.inner_power_set().unwrap();
        for (e, v) in full.iter() {
            assert_eq!(*v, inner_set_function(&sf, e).unwrap());
        }

        let partial = SetFunction::from_events(&s, [(ev(&s, &["a"]), int(1))]).unwrap();
        assert_eq!(inner_set_function(&partial, &ev(&s, &["a"])), Err(Error::MissingBounds));
    }

    #[test]
    fn inner_extension_examples() {
        let s = Space::new(["a", "b"]).unwrap();
        let ell = Assessment::from_entries(
            &s,
            [(Gamble::zero(&s), int(0)), (g(&s, &[1, 1]), int(1)), (g(&s, &[2, 0]), rat(1, 2))],
        )
        .unwrap();
        assert_eq!(inner_extension(&ell, &g(&s, &[2, 1])).unwrap(), int(1));
        let half = Gamble::new(&s, vec![int(2), rat(1, 2)]).unwrap();
        assert_eq!(inner_extension(&ell, &half).unwrap(), rat(1, 2));
        assert_eq!(inner_extension(&ell, &g(&s, &[1, 1])).unwrap(), int(1));
        assert!(matches!(inner_extension(&ell, &g(&s, &[-1, 5])), Err(Error::NoCandidate(_))));
    }

    #[test]
    fn mobius_examples() {
        let s = Space::new(["a", "b"]).unwrap();
        let uniform = SetFunction::power_set(&s, |e| rat(e.len() as i64, 2)).unwrap();
        let m = mobius(&uniform).unwrap();
        assert_eq!(m.coefficients(), &[int(0), rat(1, 2), rat(1, 2), int(0)]);
        assert_eq!(m.reconstruct(), uniform);

        let t = abc();
        let vac = SetFunction::power_set(&t, |e| if e.is_full() { int(1) } else { int(0) }).unwrap();
        let m = mobius(&vac).unwrap();
        assert!(m.iter().all(|(e, c)| if e.is_full() { *c == int(1) } else { c.is_zero() }));

        let m = mobius(&counterexample_events()).unwrap();
        for (e, c) in m.iter() {
            let expected = if e.is_full() || e == ev(&t, &["b", "c"]) { rat(1, 2) } else { int(0) };
            assert_eq!(*c, expected, "coefficient of {:?}", e.labels());
        }

        let partial = SetFunction::from_events(&t, [(ev(&t, &["a"]), int(1))]).unwrap();
        assert_eq!(mobius(&partial), Err(Error::PartialDomain { expected: 8 }));
    }

    #[test]
    fn complete_monotonicity_verdicts() {
        let s = abc();
        let masses = [rat(1, 6), rat(1, 3), rat(1, 2)];
        let prob = SetFunction::power_set(&s, |e| e.members().map(|i| masses[i].clone()).sum()).unwrap();
        assert_eq!(is_completely_monotone(&prob).unwrap(), Verdict::yes());

        // Supermodular on pairs, yet m(Ω) < 0.
        let bad = SetFunction::power_set(&s, |e| match e.len() {
            0 | 1 => int(0),
            2 => rat(1, 2),
            _ => int(1),
        })
        .unwrap();
        let v = is_completely_monotone(&bad).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::NegativeMobius {
                event: Event::full(&s).unwrap(),
                coefficient: rat(-1, 2)
            })
        );
        assert!(is_n_monotone(bad.assessment(), Order::Finite(2)).unwrap().holds());
        let report = is_n_monotone(bad.assessment(), Order::Complete).unwrap();
        let violation = report.violation.unwrap();
        assert_eq!(violation.p, 3);
        assert!(violation.sum.is_negative());

        let nonzero = SetFunction::power_set(&s, |_| int(1)).unwrap();
        assert_eq!(is_completely_monotone(&nonzero), Err(Error::NonzeroOnEmpty));
    }

    #[test]
    fn complete_marker_on_small_gamble_lattices() {
        let ell = counterexample_lattice();
        let report = is_n_monotone(&ell, Order::Complete).unwrap();
        assert_eq!(report.violation.unwrap().p, 2);

        let s = abc();
        let lattice = lattice_closure(&s, &[g(&s, &[0, 1, 2]), g(&s, &[2, 0, 1])]).unwrap();
        let vac = vacuous(&Event::full(&s).unwrap(), lattice.elements()).unwrap();
        assert_eq!(is_n_monotone(&vac, Order::Complete).unwrap().verified, Order::Complete);
    }

    #[test]
    fn homomorphism_composition() {
        let s = abc();
        let lattice = lattice_closure(&s, &[g(&s, &[0, 1, 2]), g(&s, &[2, 0, 1])]).unwrap();
        let bc = ev(&s, &["b", "c"]);
        let r = HomomorphismTable::tabulate(&lattice, |h| {
            Gamble::constant(&s, vacuous_value(&bc, h).unwrap())
        })
        .unwrap();
        let vac_prev = Assessment::from_events(&s, [(Event::empty(&s).unwrap(), int(0)), (Event::full(&s).unwrap(), int(1))]).unwrap();
        let ext = NaturalExtension::prevision(&vac_prev)
            .unwrap()
            .assessment_on(r.targets())
            .unwrap();
        let composed = compose_homomorphism(&ext, &r).unwrap();
        assert_eq!(composed, vacuous(&bc, lattice.elements()).unwrap());

        let id = HomomorphismTable::identity(&lattice);
        let ell = MassFunctional::uniform(&s).assessment_on(lattice.elements()).unwrap();
        assert_eq!(compose_homomorphism(&ell, &id).unwrap(), ell);

        let missing = Assessment::new(&s);
        assert!(matches!(compose_homomorphism(&missing, &id), Err(Error::ImageOutsideDomain(_))));
    }

    #[test]
    fn vacuous_examples() {
        let s = abc();
        let f = g(&s, &[0, 1, 2]);
        assert_eq!(vacuous_value(&Event::full(&s).unwrap(), &f).unwrap(), int(0));
        assert_eq!(vacuous_value(&ev(&s, &["c"]), &f).unwrap(), int(2));
        assert_eq!(vacuous_value(&ev(&s, &["b", "c"]), &f).unwrap(), int(1));
        assert_eq!(vacuous(&Event::empty(&s).unwrap(), &[f]), Err(Error::EmptyEvent));
    }

    #[test]
    fn minimum_preservation() {
        let s = Space::new(["a", "b"]).unwrap();
        let lattice = [g(&s, &[0, 0]), g(&s, &[1, 0]), g(&s, &[0, 1]), g(&s, &[1, 1])];
        let uniform = MassFunctional::uniform(&s).assessment_on(&lattice).unwrap();
        assert_eq!(
            minimum_preserving_check(&uniform).unwrap().witness,
            Some(Witness::ValuePair {
                f: g(&s, &[1, 0]),
                g: g(&s, &[0, 1]),
                left: int(0),
                right: rat(1, 2)
            })
        );
        let vac = vacuous(&ev(&s, &["a"]), &lattice).unwrap();
        assert_eq!(minimum_preserving_check(&vac).unwrap(), Verdict::yes());

        let chain = Assessment::from_entries(&s, [(g(&s, &[0, 0]), int(0)), (g(&s, &[1, 0]), rat(1, 3)), (g(&s, &[2, 1]), int(1))]).unwrap();
        assert_eq!(minimum_preserving_check(&chain).unwrap(), Verdict::yes());
    }

    #[test]
    fn zero_order_is_rejected() {
        assert_eq!(is_n_monotone(&counterexample_lattice(), Order::Finite(0)), Err(Error::ZeroOrder));
    }
}
