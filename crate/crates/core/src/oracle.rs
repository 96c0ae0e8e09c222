//! Brute-force dynamics used to certify the closed-form constructions.
//!
//! Nothing here knows about traps, fitting or inductions: everything is
//! computed from [`Itm::eval`] and piecewise translation of intervals.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::interval::{HalfOpenInterval, IntervalSet};
use crate::itm::{Itm, ItmError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{base} is not a subinterval of [0, 1)")]
    BaseOutsideDomain { base: Box<HalfOpenInterval> },
    #[error("{pending} fragments had not returned after {budget} steps")]
    BudgetExhausted { budget: usize, pending: usize },
    #[error(transparent)]
    Itm(#[from] ItmError),
}

/// `[x, Tx, …, T^n x]`.
pub fn pointwise_orbit(t: &Itm, x: &Rational, n: usize) -> Result<Vec<Rational>, ItmError> {
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(x.clone());
    for _ in 0..n {
        let next = t.eval(orbit.last().expect("nonempty"))?;
        orbit.push(next);
    }
    Ok(orbit)
}

/// Whether every `x ∈ [0, 1)` has some `1 ≤ n < max_steps` with `T^n x ∈ base`.
///
/// Tracks the set of positions of points that have not yet entered `base`:
/// `A_0 = [0, 1)`, `A_n = T(A_{n-1}) \ base`.
pub fn regular_check(t: &Itm, base: &HalfOpenInterval, max_steps: usize) -> bool {
    let mut pending = IntervalSet::unit();
    for _ in 1..max_steps {
        pending = t.image(&pending).minus_interval(base);
        if pending.is_empty() {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnPiece {
    pub interval: HalfOpenInterval,
    pub translation: Rational,
    pub return_time: usize,
}

/// The first-return map of `T` to `base`, as a partition of `base` into
/// pieces on which the return is a single translation at a single time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnSystem {
    pub base: HalfOpenInterval,
    pub pieces: Vec<ReturnPiece>,
}

impl ReturnSystem {
    pub fn return_times(&self) -> BTreeSet<usize> {
        self.pieces.iter().map(|p| p.return_time).collect()
    }

    /// `(T_Δ x, return time)` for `x ∈ base`.
    pub fn apply(&self, x: &Rational) -> Option<(Rational, usize)> {
        self.pieces
            .iter()
            .find(|p| p.interval.contains(x))
            .map(|p| (x + &p.translation, p.return_time))
    }

    /// The induced map rescaled from `base` onto `[0, 1)`.
    pub fn to_itm(&self) -> Result<Itm, ItmError> {
        let pieces: Vec<_> = self
            .pieces
            .iter()
            .map(|p| (p.interval.clone(), p.translation.clone()))
            .collect();
        Itm::from_pieces_on(&self.base, &pieces)
    }
}

/// `64 · (1 + ⌈1 / shortest piece⌉)`.
pub fn default_return_budget(t: &Itm) -> usize {
    let shortest = (0..t.d())
        .map(|j| t.interval(j).length())
        .min()
        .expect("at least one piece");
    shortest
        .recip()
        .ceil()
        .to_usize()
        .and_then(|n| n.checked_add(1))
        .and_then(|n| n.checked_mul(64))
        .unwrap_or(usize::MAX)
}

struct Fragment {
    /// Points of `base` still travelling.
    origin: HalfOpenInterval,
    /// Total translation so far; the fragment currently sits at `origin + shift`.
    shift: Rational,
}

/// First-return map by forward propagation: fragments of `base` are pushed
/// through `T`, split at the map's breakpoints and at the edges of `base`,
/// and retired the first time they land inside `base`.
pub fn first_return_oracle(
    t: &Itm,
    base: &HalfOpenInterval,
    budget: usize,
) -> Result<ReturnSystem, OracleError> {
    if base.left().is_negative() || base.right() > &Rational::one() {
        return Err(OracleError::BaseOutsideDomain {
            base: Box::new(base.clone()),
        });
    }
    let mut active = vec![Fragment {
        origin: base.clone(),
        shift: Rational::zero(),
    }];
    let mut returned: Vec<ReturnPiece> = Vec::new();
    for time in 1..=budget {
        let mut next = Vec::new();
        for frag in active {
            let position = frag.origin.translate(&frag.shift);
            for (part, g) in t.split_by_pieces(&position) {
                let shift = &frag.shift + &g;
                let landed = part.translate(&g);
                let back = -&frag.shift;
                if let Some(inside) = landed.intersect(base) {
                    returned.push(ReturnPiece {
                        interval: inside.translate(&-&shift),
                        translation: shift.clone(),
                        return_time: time,
                    });
                }
                let outside = IntervalSet::from(landed).minus_interval(base);
                for o in outside.pieces() {
                    next.push(Fragment {
                        origin: o.translate(&(-&g)).translate(&back),
                        shift: shift.clone(),
                    });
                }
            }
        }
        active = next;
        if active.is_empty() {
            return Ok(assemble(base, returned));
        }
    }
    Err(OracleError::BudgetExhausted {
        budget,
        pending: active.len(),
    })
}

/// Sorts the retired fragments and merges neighbours that share translation
/// and return time.
fn assemble(base: &HalfOpenInterval, mut returned: Vec<ReturnPiece>) -> ReturnSystem {
    returned.sort_by(|a, b| a.interval.left().cmp(b.interval.left()));
    let mut pieces: Vec<ReturnPiece> = Vec::with_capacity(returned.len());
    for p in returned {
        match pieces.last_mut() {
            Some(last)
                if last.interval.right() == p.interval.left()
                    && last.translation == p.translation
                    && last.return_time == p.return_time =>
            {
                last.interval =
                    HalfOpenInterval::new(last.interval.left().clone(), p.interval.right().clone())
                        .expect("merging nonempty pieces");
            }
            _ => pieces.push(p),
        }
    }
    debug_assert_eq!(pieces.first().map(|p| p.interval.left()), Some(base.left()));
    debug_assert!(pieces
        .windows(2)
        .all(|w| w[0].interval.right() == w[1].interval.left()));
    debug_assert_eq!(
        pieces.last().map(|p| p.interval.right()),
        Some(base.right())
    );
    ReturnSystem {
        base: base.clone(),
        pieces,
    }
}
