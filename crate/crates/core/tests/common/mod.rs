//! Random generators and brute-force oracles shared by the integration
//! tests. Nothing here calls the LP solver: every reference value is
//! computed by a different method than the library uses.

#![allow(dead_code)]

use nmono::consistency::{Assessment, MassFunctional};
use nmono::gamble::{lattice_closure, Event, Gamble, Space};
use nmono::monotone::SetFunction;
use nmono::rational::{int, rat, Rational};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(m: usize) -> Space {
    let labels: Vec<String> = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Space::new(labels).unwrap()
}

/// Numerator in `[-bound, bound]`, denominator in `1..=3`.
pub fn rational(rng: &mut TestRng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=3))
}

pub fn nonnegative(rng: &mut TestRng, bound: i64) -> Rational {
    rat(rng.gen_range(0..=bound), rng.gen_range(1..=3))
}

pub fn positive(rng: &mut TestRng, bound: i64) -> Rational {
    rat(rng.gen_range(1..=bound), rng.gen_range(1..=3))
}

pub fn gamble(rng: &mut TestRng, space: &Space) -> Gamble {
    let values = (0..space.size()).map(|_| rational(rng, 6)).collect();
    Gamble::new(space, values).unwrap()
}

/// Small integer values, which keep lattice closures small.
pub fn small_gamble(rng: &mut TestRng, space: &Space, top: i64) -> Gamble {
    let values: Vec<i64> = (0..space.size()).map(|_| rng.gen_range(0..=top)).collect();
    Gamble::from_ints(space, &values).unwrap()
}

pub fn mass(rng: &mut TestRng, space: &Space, total: &Rational) -> MassFunctional {
    let raw: Vec<Rational> = (0..space.size()).map(|_| int(rng.gen_range(0..=6))).collect();
    let sum: Rational = raw.iter().sum();
    let masses = if sum.is_zero() {
        let mut v = vec![Rational::zero(); space.size()];
        v[rng.gen_range(0..space.size())] = total.clone();
        v
    } else {
        raw.into_iter().map(|r| r * total / &sum).collect()
    };
    MassFunctional::new(space, masses).unwrap()
}

pub fn event(rng: &mut TestRng, space: &Space) -> Event {
    let full = (1u64 << space.size()) - 1;
    Event::from_mask(space, rng.gen_range(0..=full)).unwrap()
}

pub fn proper_event(rng: &mut TestRng, space: &Space) -> Event {
    let full = (1u64 << space.size()) - 1;
    Event::from_mask(space, rng.gen_range(1..full)).unwrap()
}

/// `ℓ(A) = Σ_{B ⊆ A} m(B)` over a power-set table.
pub fn zeta_table(mobius: &[Rational]) -> Vec<Rational> {
    (0..mobius.len())
        .map(|a| {
            (0..mobius.len())
                .filter(|b| b & a == *b)
                .map(|b| mobius[b].clone())
                .sum()
        })
        .collect()
}

pub fn power_set(space: &Space, table: &[Rational]) -> SetFunction {
    SetFunction::power_set(space, |e| table[e.mask() as usize].clone()).unwrap()
}

/// Nonnegative Möbius mass on nonempty events, summing to `total`.
/// Completely monotone, hence n-monotone for every n.
pub fn mobius_set_function(rng: &mut TestRng, space: &Space, total: &Rational) -> SetFunction {
    let size = 1usize << space.size();
    let mut m: Vec<Rational> = (0..size)
        .map(|a| {
            if a == 0 || rng.gen_bool(0.5) {
                Rational::zero()
            } else {
                int(rng.gen_range(1..=5))
            }
        })
        .collect();
    let sum: Rational = m.iter().sum();
    if sum.is_zero() {
        m[size - 1] = total.clone();
    } else {
        for c in &mut m {
            *c = &*c * total / &sum;
        }
    }
    power_set(space, &zeta_table(&m))
}

/// Supermodularity `ℓ(A ∪ B) + ℓ(A ∩ B) >= ℓ(A) + ℓ(B)` on every pair.
pub fn is_supermodular(table: &[Rational]) -> bool {
    (0..table.len()).all(|a| {
        (0..table.len()).all(|b| &table[a | b] + &table[a & b] >= &table[a] + &table[b])
    })
}

pub fn is_monotone_table(table: &[Rational]) -> bool {
    (0..table.len()).all(|a| (0..table.len()).all(|b| b & a != b || table[b] <= table[a]))
}

/// An additive measure plus a convex function of `|A ∩ T|`. These are
/// 2-monotone, and typically not completely monotone once `|T| >= 3`.
/// Returns `None` if re-verification fails.
pub fn bumped_set_function(rng: &mut TestRng, space: &Space, total: &Rational) -> Option<SetFunction> {
    let size = 1usize << space.size();
    let p = mass(rng, space, &Rational::one());
    let t = rng.gen_range(1..size as u64);
    let delta = rat(rng.gen_range(1..=3), 4);
    let raw: Vec<Rational> = (0..size)
        .map(|a| {
            let additive: Rational = (0..space.size())
                .filter(|i| a >> i & 1 == 1)
                .map(|i| p.masses()[i].clone())
                .sum();
            let k = (a as u64 & t).count_ones() as i64;
            additive + &delta * int((k - 1).max(0))
        })
        .collect();
    let top = raw[size - 1].clone();
    let table: Vec<Rational> = raw.into_iter().map(|v| v * total / &top).collect();
    (is_supermodular(&table) && is_monotone_table(&table) && table[0].is_zero()).then(|| power_set(space, &table))
}

/// Indicator lattice generated by ∅, Ω and a few random events.
pub fn event_lattice(rng: &mut TestRng, space: &Space, extra: usize) -> Vec<Event> {
    let mut gens = vec![Event::empty(space).unwrap().indicator(), Event::full(space).unwrap().indicator()];
    for _ in 0..extra {
        gens.push(event(rng, space).indicator());
    }
    lattice_closure(space, &gens)
        .unwrap()
        .elements()
        .iter()
        .map(|g| g.as_event().unwrap())
        .collect()
}

pub fn restrict(sf: &SetFunction, events: &[Event]) -> SetFunction {
    SetFunction::from_events(sf.space(), events.iter().map(|e| (e.clone(), sf.value(e).unwrap().clone()))).unwrap()
}

/// Lower envelope of `k` random linear previsions on `gambles`: always a
/// coherent lower prevision.
pub fn envelope(rng: &mut TestRng, space: &Space, gambles: &[Gamble], k: usize) -> Assessment {
    let previsions: Vec<MassFunctional> = (0..k).map(|_| mass(rng, space, &Rational::one())).collect();
    let mut a = Assessment::new(space);
    for g in gambles {
        if a.contains(g) {
            continue;
        }
        let v = previsions.iter().map(|p| p.evaluate(g).unwrap()).min().unwrap();
        a.insert(g.clone(), v).unwrap();
    }
    a
}

#[allow(clippy::needless_range_loop)]
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Minimum of `f · x` over `x >= 0`, `Σ x = total`, `g · x >= ℓ(g)` on
/// the domain, by enumerating every vertex of the polytope. `None` when the
/// polytope is empty.
pub fn vertex_min(ell: &Assessment, total: &Rational, f: &Gamble) -> Option<Rational> {
    let m = ell.space().size();
    let mut rows: Vec<(Vec<Rational>, Rational)> = ell.iter().map(|(g, v)| (g.values().to_vec(), v.clone())).collect();
    for i in 0..m {
        let mut unit = vec![Rational::zero(); m];
        unit[i] = Rational::one();
        rows.push((unit, Rational::zero()));
    }
    let mut best: Option<Rational> = None;
    for tight in combinations(rows.len(), m - 1) {
        let mut a = vec![vec![Rational::one(); m]];
        let mut b = vec![total.clone()];
        for &t in &tight {
            a.push(rows[t].0.clone());
            b.push(rows[t].1.clone());
        }
        let Some(x) = solve_square(a, b) else { continue };
        let feasible = rows.iter().all(|(c, r)| {
            let lhs: Rational = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            lhs >= *r
        });
        if feasible {
            let value: Rational = f.values().iter().zip(&x).map(|(p, q)| p * q).sum();
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
    }
    best
}

/// The norm of a one-gamble functional straight from its definition:
/// the infimum of `c >= 0` such that `f >= λ f + μ` implies
/// `ℓ(f) >= λ ℓ(f) + μ c` for all `λ >= 0` and real `μ`.
///
/// For fixed `(λ, μ)` with a true premise the conclusion is a half-line in
/// `c` (or all or nothing when `μ = 0`). The constraint only depends on the
/// sign of `κ = 1 - λ` and on `μ` up to its largest admissible value
/// `min_ω κ f(ω)`, so enumerating a handful of `λ` on both sides of 1 and
/// a few admissible `μ` for each captures every constraint. Returns `None`
/// for an empty set of `c`, meaning the norm is infinite.
pub fn definitional_single_norm(f: &Gamble, value: &Rational) -> Option<Rational> {
    let lambdas = [rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1), rat(5, 1)];
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for lambda in &lambdas {
        let kappa = Rational::one() - lambda;
        let top = f.values().iter().map(|v| &kappa * v).min().unwrap();
        for mu in [top.clone(), &top - int(1), &top - int(7)] {
            let premise = f.values().iter().all(|v| &kappa * v >= mu);
            assert!(premise);
            let left = &kappa * value;
            if mu.is_zero() {
                if left.is_negative() {
                    return None;
                }
            } else if mu.is_positive() {
                let bound = &left / &mu;
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            } else {
                let bound = &left / &mu;
                if bound > lo {
                    lo = bound;
                }
            }
        }
    }
    match hi {
        Some(h) if h < lo => None,
        _ => Some(lo),
    }
}

/// Alternating sums over every tuple `(f; f_1..f_p)` with repeats allowed,
/// for `1 <= p <= n`. True iff all are nonnegative.
pub fn multiset_n_monotone(ell: &Assessment, n: usize) -> bool {
    let gambles = ell.gambles();
    let k = gambles.len();
    for p in 1..=n {
        let mut idx = vec![0usize; p];
        loop {
            for base in gambles {
                let mut sum = Rational::zero();
                for mask in 0u32..(1 << p) {
                    let mut m = base.clone();
                    for (i, &j) in idx.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            m = m.meet(&gambles[j]).unwrap();
                        }
                    }
                    let v = ell.get(&m).unwrap();
                    if mask.count_ones() % 2 == 0 {
                        sum += v;
                    } else {
                        sum -= v;
                    }
                }
                if sum.is_negative() {
                    return false;
                }
            }
            let mut i = 0;
            loop {
                if i == p {
                    break;
                }
                idx[i] += 1;
                if idx[i] < k {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == p {
                break;
            }
        }
    }
    true
}

/// Choquet integral by sorting outcomes: with `f(σ_1) <= ... <= f(σ_m)` and
/// `A_i = {σ_i, ..., σ_m}`, the value is `Σ f(σ_i) (ℓ(A_i) - ℓ(A_{i+1}))`.
pub fn permutation_choquet(table: &[Rational], f: &Gamble) -> Rational {
    let mut order: Vec<usize> = (0..f.values().len()).collect();
    order.sort_by(|&i, &j| f.values()[i].cmp(&f.values()[j]));
    let mut total = Rational::zero();
    for (pos, &w) in order.iter().enumerate() {
        let a: usize = order[pos..].iter().map(|&i| 1usize << i).sum();
        let b: usize = order[pos + 1..].iter().map(|&i| 1usize << i).sum();
        total += &f.values()[w] * (&table[a] - &table[b]);
    }
    total
}

/// `sup |f - g|`.
pub fn sup_distance(f: &Gamble, g: &Gamble) -> Rational {
    f.values().iter().zip(g.values()).map(|(a, b)| (a - b).abs()).max().unwrap()
}

pub fn shuffle<T>(rng: &mut TestRng, items: &mut [T]) {
    items.shuffle(rng);
}

/// `P(f) = P(1) = 1` with `f = (0, 1, 2)` on `{a, b, c}`.
pub fn counterexample() -> (Space, Gamble, Assessment) {
    let s = space(3);
    let f = Gamble::from_ints(&s, &[0, 1, 2]).unwrap();
    let p = Assessment::from_entries(&s, [(f.clone(), int(1)), (Gamble::one(&s), int(1))]).unwrap();
    (s, f, p)
}

/// `min{g(b), g(c), (g(a) + g(c)) / 2}`.
pub fn counterexample_formula(g: &Gamble) -> Rational {
    let v = g.values();
    let half = (&v[0] + &v[2]) / int(2);
    v[1].clone().min(v[2].clone()).min(half)
}
