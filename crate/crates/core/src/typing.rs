//! Finite-type detection.
//!
//! `T` has finite type when the image chain `Ω_0 = [0, 1)`, `Ω_{n+1} = T Ω_n`
//! stabilizes. For rational parameters with common denominator `q` every
//! `Ω_n` is a union of `1/q`-grid intervals and the chain is nested, so it
//! stabilizes after at most `q` strict decreases. The detector is still a
//! semi-decision procedure: running out of budget yields
//! [`TypeVerdict::Undecided`], never a claim of infinite type.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::interval::{HalfOpenInterval, IntervalSet};
use crate::itm::Itm;

pub const DEFAULT_MAX_PIECES: usize = 4096;
pub const BUDGET_PER_DENOMINATOR: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypingError {
    #[error("iteration budget must be at least 1")]
    ZeroBudget,
    #[error("hull chain did not stabilize within {0} steps")]
    BudgetExhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum TypeVerdict {
    /// `steps` is the least `n` with `Ω_{n+1} = Ω_n`; `limit` is that `Ω_n`.
    Finite { steps: usize, limit: IntervalSet },
    Undecided {
        #[serde(rename = "budget")]
        budget_spent: usize,
        #[serde(skip)]
        last_omega: IntervalSet,
    },
}

impl TypeVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, TypeVerdict::Finite { .. })
    }
}

/// Limits for [`detect_type_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectConfig {
    /// Maximum number of image computations; `None` means
    /// [`default_budget`] of the map.
    pub budget: Option<usize>,
    /// Give up once some `Ω_n` has more pieces than this.
    pub max_pieces: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            budget: None,
            max_pieces: DEFAULT_MAX_PIECES,
        }
    }
}

/// `16 · q` for `q` the common denominator of all parameters.
pub fn default_budget(t: &Itm) -> usize {
    t.common_denominator()
        .to_usize()
        .and_then(|q| q.checked_mul(BUDGET_PER_DENOMINATOR))
        .unwrap_or(usize::MAX)
}

/// `[Ω_0, Ω_1, …]`, stopping after the first repeated set or after `budget`
/// image computations.
pub fn omega_sequence(t: &Itm, budget: usize) -> Result<Vec<IntervalSet>, TypingError> {
    if budget == 0 {
        return Err(TypingError::ZeroBudget);
    }
    let mut seq = vec![IntervalSet::unit()];
    for _ in 0..budget {
        let last = seq.last().expect("nonempty");
        let next = t.image(last);
        assert!(next.is_subset(last), "image chain is not nested");
        let done = &next == last;
        seq.push(next);
        if done {
            break;
        }
    }
    Ok(seq)
}

pub fn detect_type(t: &Itm, budget: usize) -> Result<TypeVerdict, TypingError> {
    detect_type_with(
        t,
        &DetectConfig {
            budget: Some(budget),
            ..DetectConfig::default()
        },
    )
}

pub fn detect_type_with(t: &Itm, config: &DetectConfig) -> Result<TypeVerdict, TypingError> {
    let budget = config.budget.unwrap_or_else(|| default_budget(t));
    if budget == 0 {
        return Err(TypingError::ZeroBudget);
    }
    let mut omega = IntervalSet::unit();
    for n in 0..budget {
        let next = t.image(&omega);
        debug_assert!(next.is_subset(&omega));
        if next == omega {
            return Ok(TypeVerdict::Finite {
                steps: n,
                limit: omega,
            });
        }
        omega = next;
        if omega.len() > config.max_pieces {
            return Ok(TypeVerdict::Undecided {
                budget_spent: n + 1,
                last_omega: omega,
            });
        }
    }
    Ok(TypeVerdict::Undecided {
        budget_spent: budget,
        last_omega: omega,
    })
}

/// The stabilized hull chain `X'_0 = [0, 1)`, `X'_{k+1} = [T X'_k)`.
pub fn hull_chain_trap(t: &Itm, budget: usize) -> Result<HalfOpenInterval, TypingError> {
    let mut current = HalfOpenInterval::unit();
    for _ in 0..budget {
        let next = t
            .image(&IntervalSet::from(current.clone()))
            .hull()
            .expect("image of a nonempty interval is nonempty");
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(TypingError::BudgetExhausted(budget))
}
