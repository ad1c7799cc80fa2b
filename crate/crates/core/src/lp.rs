//! Exact-rational linear programming.
//!
//! Two-phase primal simplex on a dense tableau with Bland's rule. Problems
//! here are desk sized (a handful of outcomes, tens of constraints), so the
//! solver favours exactness and determinism over speed.
//!
//! Programs are always minimisations over `>=` and `=` rows. Free variables
//! are split into a difference of two nonnegative columns.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        dot(&self.coefficients, point)
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    kinds: Vec<VarKind>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program has no variables")]
    NoVariables,
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    WidthMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{found} variable kinds given for {expected} variables")]
    KindMismatch { expected: usize, found: usize },
}

impl LinearProgram {
    /// Minimise `objective . x` over nonnegative `x`.
    pub fn minimize(objective: Vec<Rational>) -> Self {
        let kinds = vec![VarKind::NonNegative; objective.len()];
        LinearProgram {
            objective,
            kinds,
            constraints: Vec::new(),
        }
    }

    /// Maximisation is expressed as minimisation of the negated objective;
    /// the optimal value reported by [`solve`] is then the negated maximum.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::minimize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn with_kinds(mut self, kinds: Vec<VarKind>) -> Self {
        self.kinds = kinds;
        self
    }

    pub fn set_kind(&mut self, var: usize, kind: VarKind) {
        self.kinds[var] = kind;
    }

    pub fn push(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    pub fn add_ge(&mut self, coefficients: Vec<Rational>, rhs: Rational) {
        self.push(coefficients, Relation::Ge, rhs);
    }

    pub fn add_eq(&mut self, coefficients: Vec<Rational>, rhs: Rational) {
        self.push(coefficients, Relation::Eq, rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.is_empty() {
            return Err(LpError::NoVariables);
        }
        if self.kinds.len() != self.objective.len() {
            return Err(LpError::KindMismatch {
                expected: self.objective.len(),
                found: self.kinds.len(),
            });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != self.objective.len() {
                return Err(LpError::WidthMismatch {
                    row,
                    expected: self.objective.len(),
                    found: c.coefficients.len(),
                });
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        dot(&self.objective, point)
    }

    /// Exact feasibility test, no tolerance.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars()
            && self
                .kinds
                .iter()
                .zip(point)
                .all(|(k, x)| *k == VarKind::Free || !x.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    /// Checks a Farkas certificate of infeasibility: `y` has one entry per
    /// row, nonnegative on `>=` rows, with `y'A <= 0` on nonnegative
    /// columns, `y'A = 0` on free columns, and `y'b > 0`.
    pub fn is_infeasibility_certificate(&self, y: &[Rational]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self
            .constraints
            .iter()
            .zip(y)
            .all(|(c, yi)| c.relation == Relation::Eq || !yi.is_negative());
        if !signs_ok {
            return false;
        }
        let columns_ok = (0..self.num_vars()).all(|j| {
            let col: Rational = self
                .constraints
                .iter()
                .zip(y)
                .map(|(c, yi)| &c.coefficients[j] * yi)
                .sum();
            match self.kinds[j] {
                VarKind::NonNegative => !col.is_positive(),
                VarKind::Free => col.is_zero(),
            }
        });
        let rhs: Rational = self.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
        columns_ok && rhs.is_positive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    /// `certificate` is a Farkas vector over the constraint rows; see
    /// [`LinearProgram::is_infeasibility_certificate`].
    Infeasible { certificate: Vec<Rational> },
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the current objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row, &pivot_row, c);
            }
        }
        eliminate(&mut self.obj, &pivot_row, c);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Resets the reduced-cost row for the given column costs.
    fn price(&mut self, costs: &[Rational]) {
        let mut obj: Vec<Rational> = costs.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    fn run(&mut self, allowed: usize) -> Phase {
        let rhs = self.ncols;
        loop {
            // Bland: lowest-index improving column enters.
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Phase::Unbounded,
            }
        }
    }
}

fn eliminate(row: &mut [Rational], pivot_row: &[Rational], c: usize) {
    if row[c].is_zero() {
        return;
    }
    let factor = row[c].clone();
    for (v, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *v -= &factor * p;
        }
    }
}

/// Solves `lp` exactly. Deterministic: identical programs give identical
/// outcomes, including the reported vertex.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.constraints.len();

    // Structural columns: one per nonnegative variable, two per free one.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut next = 0;
    for kind in &lp.kinds {
        match kind {
            VarKind::NonNegative => {
                var_cols.push((next, None));
                next += 1;
            }
            VarKind::Free => {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
    }
    let n_struct = next;
    let mut surplus_col = vec![None; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.relation == Relation::Ge {
            surplus_col[i] = Some(next);
            next += 1;
        }
    }
    let art_base = next;
    let ncols = art_base + m;

    let mut rows = Vec::with_capacity(m);
    let mut flipped = vec![false; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (v, a) in c.coefficients.iter().enumerate() {
            let (plus, minus) = var_cols[v];
            row[plus] = a.clone();
            if let Some(minus) = minus {
                row[minus] = -a;
            }
        }
        if let Some(s) = surplus_col[i] {
            row[s] = -Rational::one();
        }
        row[ncols] = c.rhs.clone();
        if c.rhs.is_negative() {
            flipped[i] = true;
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
        row[art_base + i] = Rational::one();
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis: (art_base..ncols).collect(),
        ncols,
    };

    // Phase I: minimise the sum of artificials.
    let mut phase1_costs = vec![Rational::zero(); ncols];
    for c in phase1_costs.iter_mut().skip(art_base) {
        *c = Rational::one();
    }
    tab.price(&phase1_costs);
    tab.run(ncols);
    if tab.obj[ncols].is_negative() {
        // Phase-I duals: pi_i = 1 - reduced cost of artificial i.
        let certificate = (0..m)
            .map(|i| {
                let pi = Rational::one() - &tab.obj[art_base + i];
                if flipped[i] {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        return Ok(LpOutcome::Infeasible { certificate });
    }

    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and never change again.
    for r in 0..m {
        if tab.basis[r] >= art_base {
            if let Some(c) = (0..art_base).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, c);
            }
        }
    }

    // Phase II.
    let mut costs = vec![Rational::zero(); ncols];
    for (v, (plus, minus)) in var_cols.iter().enumerate() {
        costs[*plus] = lp.objective[v].clone();
        if let Some(minus) = minus {
            costs[*minus] = -&lp.objective[v];
        }
    }
    tab.price(&costs);
    if let Phase::Unbounded = tab.run(art_base) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut col_values = vec![Rational::zero(); n_struct];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n_struct {
            col_values[b] = tab.rows[r][ncols].clone();
        }
    }
    let point: Vec<Rational> = var_cols
        .iter()
        .map(|(plus, minus)| match minus {
            Some(minus) => &col_values[*plus] - &col_values[*minus],
            None => col_values[*plus].clone(),
        })
        .collect();
    debug_assert!(lp.is_feasible_point(&point));
    let value = lp.objective_value(&point);
    Ok(LpOutcome::Optimal { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn single_bound_on_free_variable() {
        let mut lp = LinearProgram::minimize(vec![int(1)]).with_kinds(vec![VarKind::Free]);
        lp.add_ge(vec![int(1)], rat(3, 10));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value(), Some(&rat(3, 10)));
        assert_eq!(out.point().unwrap(), &[rat(3, 10)]);
    }

    #[test]
    fn lower_bounds_exceeding_total_are_infeasible() {
        let mut lp = LinearProgram::minimize(vec![int(0), int(0)]);
        lp.add_ge(vec![int(1), int(0)], rat(3, 5));
        lp.add_ge(vec![int(0), int(1)], rat(3, 5));
        lp.add_eq(vec![int(1), int(1)], int(1));
        let out = solve(&lp).unwrap();
        match out {
            LpOutcome::Infeasible { certificate } => {
                assert!(lp.is_infeasibility_certificate(&certificate))
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn segment_vertex() {
        let mut lp = LinearProgram::minimize(vec![int(2), int(1)]);
        lp.add_ge(vec![int(1), int(0)], rat(3, 10));
        lp.add_ge(vec![int(0), int(1)], rat(1, 2));
        lp.add_eq(vec![int(1), int(1)], int(1));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value(), Some(&rat(13, 10)));
        assert_eq!(out.point().unwrap(), &[rat(3, 10), rat(7, 10)]);
    }

    #[test]
    fn unbounded_below() {
        let mut lp = LinearProgram::minimize(vec![int(-1), int(0)]);
        lp.add_ge(vec![int(1), int(-1)], int(0));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variable_unbounded() {
        let lp = LinearProgram::minimize(vec![int(1)]).with_kinds(vec![VarKind::Free]);
        assert_eq!(solve(&lp).unwrap().status(), LpStatus::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // x + y = 1 twice, -x >= -1/4 (x <= 1/4): minimise -x -> x = 1/4.
        let mut lp = LinearProgram::minimize(vec![int(-1), int(0)]);
        lp.add_eq(vec![int(1), int(1)], int(1));
        lp.add_eq(vec![int(2), int(2)], int(2));
        lp.add_ge(vec![int(-1), int(0)], rat(-1, 4));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value(), Some(&rat(-1, 4)));
        assert!(lp.is_feasible_point(out.point().unwrap()));
    }

    #[test]
    fn width_mismatch_is_an_input_error() {
        let mut lp = LinearProgram::minimize(vec![int(1), int(1)]);
        lp.add_ge(vec![int(1)], int(0));
        assert_eq!(
            solve(&lp),
            Err(LpError::WidthMismatch {
                row: 0,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            solve(&LinearProgram::minimize(vec![])),
            Err(LpError::NoVariables)
        );
    }

    #[test]
    fn degenerate_cycling_candidate_terminates() {
        // Beale's classic cycling example (as a minimisation).
        let mut lp = LinearProgram::minimize(vec![rat(-3, 4), int(150), rat(-1, 50), int(6)]);
        lp.add_ge(vec![rat(-1, 4), int(60), rat(1, 25), int(-9)], int(0));
        lp.add_ge(vec![rat(-1, 2), int(90), rat(1, 50), int(-3)], int(0));
        lp.add_ge(vec![int(0), int(0), int(-1), int(0)], int(-1));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value(), Some(&rat(-1, 20)));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
    }

    fn program() -> impl Strategy<Value = (usize, usize, Vec<Rational>, Vec<Rational>, Vec<Rational>)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(n, m)| {
            (
                Just(n),
                Just(m),
                proptest::collection::vec(small_rational(), n * m),
                proptest::collection::vec(small_rational(), m),
                proptest::collection::vec(small_rational(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn strong_duality_and_certificates((n, m, a, b, c) in program()) {
            // Primal: min c.x, A x >= b, x >= 0.
            let mut primal = LinearProgram::minimize(c.clone());
            for i in 0..m {
                primal.add_ge(a[i * n..(i + 1) * n].to_vec(), b[i].clone());
            }
            // Dual: max b.y, A'y <= c, y >= 0, written as min -b.y, -A'y >= -c.
            let mut dual = LinearProgram::maximize(b.clone());
            for j in 0..n {
                let col = (0..m).map(|i| -&a[i * n + j]).collect();
                dual.add_ge(col, -&c[j]);
            }
            let p = solve(&primal).unwrap();
            let d = solve(&dual).unwrap();
            prop_assert_eq!(solve(&primal).unwrap(), p.clone());
            match (&p, &d) {
                (LpOutcome::Optimal { value: pv, point }, LpOutcome::Optimal { value: dv, .. }) => {
                    prop_assert!(primal.is_feasible_point(point));
                    prop_assert_eq!(pv, &-dv);
                }
                (LpOutcome::Infeasible { certificate }, _) => {
                    prop_assert!(primal.is_infeasibility_certificate(certificate));
                    prop_assert_ne!(d.status(), LpStatus::Optimal);
                }
                (LpOutcome::Unbounded, _) => {
                    prop_assert_eq!(d.status(), LpStatus::Infeasible);
                }
                (LpOutcome::Optimal { .. }, _) => {
                    prop_assert!(false, "primal optimal but dual {:?}", d.status());
                }
            }
        }
    }
}
