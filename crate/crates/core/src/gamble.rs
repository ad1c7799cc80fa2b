//! Finite possibility spaces, gambles, events and lattices of gambles.
//!
//! A [`Gamble`] is an exact rational vector indexed by the outcomes of a
//! [`Space`]; an [`Event`] is a subset of outcomes stored as a bit mask.
//! Gambles compare by value, so lattices built from them deduplicate by
//! value as well.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// Largest space on which events (bit masks) are supported.
pub const MAX_EVENT_OUTCOMES: usize = 63;

/// Default element budget for [`GambleLattice::closure`].
pub const DEFAULT_CLOSURE_BUDGET: usize = 10_000;

#[derive(Clone)]
pub struct Space {
    labels: Arc<[String]>,
}

impl Space {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Space {
            labels: labels.into(),
        })
    }

    /// Space with labels `w0, w1, ...`.
    pub fn anonymous(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| format!("w{i}")))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space{:?}", &*self.labels)
    }
}

#[derive(Clone)]
pub struct Gamble {
    space: Space,
    values: Vec<Rational>,
}

impl Gamble {
    pub fn new(space: &Space, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: values.len(),
            });
        }
        Ok(Gamble {
            space: space.clone(),
            values,
        })
    }

    pub fn from_ints(space: &Space, values: &[i64]) -> Result<Self> {
        Self::new(space, values.iter().map(|&v| crate::rational::int(v)).collect())
    }

    pub fn constant(space: &Space, value: Rational) -> Self {
        Gamble {
            space: space.clone(),
            values: vec![value; space.size()],
        }
    }

    pub fn zero(space: &Space) -> Self {
        Self::constant(space, Rational::zero())
    }

    pub fn one(space: &Space) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn inf(&self) -> Rational {
        self.values.iter().min().cloned().expect("spaces are non-empty")
    }

    pub fn sup(&self) -> Rational {
        self.values.iter().max().cloned().expect("spaces are non-empty")
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| *v == self.values[0])
    }

    /// The event whose indicator this gamble is, if it is 0/1-valued.
    pub fn as_event(&self) -> Option<Event> {
        if self.space.size() > MAX_EVENT_OUTCOMES {
            return None;
        }
        let mut mask = 0u64;
        for (i, v) in self.values.iter().enumerate() {
            if v.is_one() {
                mask |= 1 << i;
            } else if !v.is_zero() {
                return None;
            }
        }
        Some(Event {
            space: self.space.clone(),
            mask,
        })
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Gamble) -> Result<bool> {
        self.space.check_same(&other.space)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    fn zip_with(&self, other: &Gamble, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<Gamble> {
        self.space.check_same(&other.space)?;
        Ok(Gamble {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect(),
        })
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    pub fn add(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: &Rational) -> Gamble {
        self.map(|v| v * factor)
    }

    pub fn shift(&self, offset: &Rational) -> Gamble {
        self.map(|v| v + offset)
    }

    pub fn neg(&self) -> Gamble {
        self.map(|v| -v)
    }

    pub fn abs(&self) -> Gamble {
        self.map(|v| v.abs())
    }

    pub fn map(&self, op: impl Fn(&Rational) -> Rational) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(op).collect(),
        }
    }

    /// Sup-norm distance `max |f - g|`.
    pub fn distance(&self, other: &Gamble) -> Result<Rational> {
        Ok(self.sub(other)?.abs().sup())
    }
}

impl PartialEq for Gamble {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.space == other.space
    }
}

impl Eq for Gamble {}

impl Hash for Gamble {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl fmt::Debug for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Event {
    space: Space,
    mask: u64,
}

impl Hash for Event {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mask.hash(state);
    }
}

impl Event {
    pub fn from_mask(space: &Space, mask: u64) -> Result<Self> {
        let m = space.size();
        if m > MAX_EVENT_OUTCOMES {
            return Err(Error::SpaceTooLarge {
                size: m,
                max: MAX_EVENT_OUTCOMES,
            });
        }
        if mask >> m != 0 {
            return Err(Error::EventOutOfRange { mask });
        }
        Ok(Event {
            space: space.clone(),
            mask,
        })
    }

    pub fn from_labels<S: AsRef<str>>(space: &Space, labels: &[S]) -> Result<Self> {
        let mut mask = 0u64;
        for l in labels {
            let i = space
                .index_of(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            mask |= 1 << i;
        }
        Self::from_mask(space, mask)
    }

    pub fn from_indices(space: &Space, indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i >= space.size() {
                return Err(Error::EventOutOfRange { mask: 1 << i.min(63) });
            }
            mask |= 1 << i;
        }
        Self::from_mask(space, mask)
    }

    pub fn empty(space: &Space) -> Result<Self> {
        Self::from_mask(space, 0)
    }

    pub fn full(space: &Space) -> Result<Self> {
        Self::from_mask(space, full_mask(space.size()))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, outcome: usize) -> bool {
        outcome < 64 && self.mask >> outcome & 1 == 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.space.size()).filter(|&i| self.contains(i))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members()
            .map(|i| self.space.labels()[i].as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.space.size())
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.mask & !other.mask == 0
    }

    fn with_mask(&self, mask: u64) -> Event {
        Event {
            space: self.space.clone(),
            mask,
        }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        self.with_mask(self.mask & other.mask)
    }

    pub fn union(&self, other: &Event) -> Event {
        self.with_mask(self.mask | other.mask)
    }

    pub fn complement(&self) -> Event {
        self.with_mask(!self.mask & full_mask(self.space.size()))
    }

    /// The 0/1 gamble equal to one exactly on the members of the event.
    pub fn indicator(&self) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: (0..self.space.size())
                .map(|i| {
                    if self.contains(i) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

pub(crate) fn full_mask(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

/// Free-function form of [`Event::indicator`].
pub fn indicator(event: &Event) -> Gamble {
    event.indicator()
}

pub fn meet(f: &Gamble, g: &Gamble) -> Result<Gamble> {
    f.meet(g)
}

pub fn join(f: &Gamble, g: &Gamble) -> Result<Gamble> {
    f.join(g)
}

/// True iff no pair of outcomes orders `f` and `g` strictly oppositely.
pub fn is_comonotone(f: &Gamble, g: &Gamble) -> Result<bool> {
    f.space.check_same(&g.space)?;
    let (fv, gv) = (&f.values, &g.values);
    for i in 0..fv.len() {
        for j in i + 1..fv.len() {
            let df = &fv[i] - &fv[j];
            let dg = &gv[i] - &gv[j];
            if (df * dg).is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff the events contain the empty set and are closed under
/// intersection, union and complement.
pub fn is_field(events: &[Event]) -> bool {
    let masks: std::collections::HashSet<u64> = events.iter().map(|e| e.mask).collect();
    let Some(first) = events.first() else {
        return false;
    };
    let full = full_mask(first.space.size());
    masks.contains(&0)
        && masks.iter().all(|&a| {
            masks.contains(&(!a & full))
                && masks
                    .iter()
                    .all(|&b| masks.contains(&(a & b)) && masks.contains(&(a | b)))
        })
}

/// A finite set of distinct gambles closed under pointwise min and max.
/// Elements keep the order in which they were supplied or discovered.
#[derive(Clone, Debug)]
pub struct GambleLattice {
    space: Space,
    elements: Vec<Gamble>,
    index: HashMap<Gamble, usize>,
}

impl GambleLattice {
    /// Wraps `elements` after checking that they are distinct and closed.
    pub fn from_elements(space: &Space, elements: Vec<Gamble>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, g) in elements.iter().enumerate() {
            space.check_same(&g.space)?;
            if index.insert(g.clone(), i).is_some() {
                return Err(Error::DuplicateGamble(g.clone()));
            }
        }
        let lattice = GambleLattice {
            space: space.clone(),
            elements,
            index,
        };
        if let Some((f, g)) = lattice.first_unclosed_pair() {
            return Err(Error::NotALattice { f, g });
        }
        Ok(lattice)
    }

    /// Smallest lattice containing `generators`. Generators come first (in
    /// order, deduplicated), then new elements in discovery order, meet
    /// before join.
    pub fn closure(space: &Space, generators: &[Gamble], budget: usize) -> Result<Self> {
        let mut elements: Vec<Gamble> = Vec::new();
        let mut index: HashMap<Gamble, usize> = HashMap::new();
        let mut push = |g: Gamble, elements: &mut Vec<Gamble>| -> Result<()> {
            if !index.contains_key(&g) {
                if elements.len() >= budget {
                    return Err(Error::ClosureBudgetExceeded { budget });
                }
                index.insert(g.clone(), elements.len());
                elements.push(g);
            }
            Ok(())
        };
        for g in generators {
            space.check_same(&g.space)?;
            push(g.clone(), &mut elements)?;
        }
        let mut next = 0;
        while next < elements.len() {
            for j in 0..=next {
                let a = elements[next].clone();
                let b = &elements[j];
                let m = a.meet(b)?;
                let jn = a.join(b)?;
                push(m, &mut elements)?;
                push(jn, &mut elements)?;
            }
            next += 1;
        }
        Self::from_elements(space, elements)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn elements(&self) -> &[Gamble] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &Gamble) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Gamble) -> bool {
        self.index.contains_key(g)
    }

    /// `table[i][j]` is the index of `elements[i] ∧ elements[j]`.
    #[allow(clippy::needless_range_loop)]
    pub fn meet_table(&self) -> Vec<Vec<usize>> {
        let n = self.elements.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            table[i][i] = i;
            for j in 0..i {
                let m = self.elements[i]
                    .meet(&self.elements[j])
                    .expect("lattice elements share a space");
                let k = self.index[&m];
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        table
    }

    #[allow(clippy::needless_range_loop)]
    pub fn join_table(&self) -> Vec<Vec<usize>> {
        let n = self.elements.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            table[i][i] = i;
            for j in 0..i {
                let m = self.elements[i]
                    .join(&self.elements[j])
                    .expect("lattice elements share a space");
                let k = self.index[&m];
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        table
    }

    /// True iff every element is an indicator.
    pub fn is_event_lattice(&self) -> bool {
        self.elements.iter().all(|g| g.as_event().is_some())
    }

    fn first_unclosed_pair(&self) -> Option<(Gamble, Gamble)> {
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[..=i] {
                let m = a.meet(b).ok()?;
                let j = a.join(b).ok()?;
                if !self.index.contains_key(&m) || !self.index.contains_key(&j) {
                    return Some((b.clone(), a.clone()));
                }
            }
        }
        None
    }
}

/// Free-function form of [`GambleLattice::closure`] with the default budget.
pub fn lattice_closure(space: &Space, generators: &[Gamble]) -> Result<GambleLattice> {
    GambleLattice::closure(space, generators, DEFAULT_CLOSURE_BUDGET)
}

/// A finite map between lattices of gambles, given as a table.
#[derive(Clone, Debug)]
pub struct HomomorphismTable {
    sources: Vec<Gamble>,
    targets: Vec<Gamble>,
    index: HashMap<Gamble, usize>,
}

impl HomomorphismTable {
    pub fn new(pairs: Vec<(Gamble, Gamble)>) -> Result<Self> {
        let mut sources = Vec::with_capacity(pairs.len());
        let mut targets = Vec::with_capacity(pairs.len());
        let mut index = HashMap::new();
        for (i, (s, t)) in pairs.into_iter().enumerate() {
            if let Some(first) = sources.first() {
                Gamble::space(first).check_same(s.space())?;
                Gamble::space(&targets[0]).check_same(t.space())?;
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateGamble(s));
            }
            sources.push(s);
            targets.push(t);
        }
        Ok(HomomorphismTable {
            sources,
            targets,
            index,
        })
    }

    /// Tabulates `map` over the elements of `source`.
    pub fn tabulate(source: &GambleLattice, map: impl Fn(&Gamble) -> Gamble) -> Result<Self> {
        Self::new(source.elements().iter().map(|g| (g.clone(), map(g))).collect())
    }

    pub fn identity(source: &GambleLattice) -> Self {
        Self::tabulate(source, Gamble::clone).expect("lattice elements are distinct")
    }

    pub fn sources(&self) -> &[Gamble] {
        &self.sources
    }

    pub fn targets(&self) -> &[Gamble] {
        &self.targets
    }

    pub fn apply(&self, g: &Gamble) -> Option<&Gamble> {
        self.index.get(g).map(|&i| &self.targets[i])
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
}

/// Checks `r(f ∧ g) = r(f) ∧ r(g)` on every pair of the (lattice) domain.
/// A negative verdict carries the first violating pair in table order.
pub fn check_wedge_homomorphism(r: &HomomorphismTable) -> Result<Verdict> {
    for i in 0..r.len() {
        for j in 0..=i {
            let (f, g) = (&r.sources[j], &r.sources[i]);
            let m = f.meet(g)?;
            let image = r.apply(&m).ok_or_else(|| Error::NotALattice {
                f: f.clone(),
                g: g.clone(),
            })?;
            let meet_of_images = r.targets[j].meet(&r.targets[i])?;
            if *image != meet_of_images {
                return Ok(Verdict::no(Witness::GamblePair {
                    f: f.clone(),
                    g: g.clone(),
                    left: image.clone(),
                    right: meet_of_images,
                }));
            }
        }
    }
    Ok(Verdict::yes())
}
