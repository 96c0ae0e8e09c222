//! Reducibility, traps, truncation and the fitting operator.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::interval::HalfOpenInterval;
use crate::itm::{Itm, TightItm};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ReducibilityVerdict {
    /// The first (`Left`) or last (`Right`) piece misses `TΩ`.
    Reducible {
        side: Side,
    },
    Irreducible,
}

/// `Left` if `Δ_1 ∩ TΩ = ∅`, else `Right` if `Δ_d ∩ TΩ = ∅`.
pub fn reducibility_case(t: &Itm) -> ReducibilityVerdict {
    let image = t.image_of_domain();
    if !image.meets(&t.interval(0)) {
        ReducibilityVerdict::Reducible { side: Side::Left }
    } else if !image.meets(&t.interval(t.d() - 1)) {
        ReducibilityVerdict::Reducible { side: Side::Right }
    } else {
        ReducibilityVerdict::Irreducible
    }
}

/// A reducible map with its dead edge piece removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedEdge {
    pub side: Side,
    /// The surviving forward-invariant region in the original coordinates.
    pub domain: HalfOpenInterval,
    /// The restriction to `domain`, rescaled onto `[0, 1)`.
    pub map: Itm,
}

pub fn drop_edge_interval(t: &Itm) -> Result<DroppedEdge, ReductionError> {
    let side = match reducibility_case(t) {
        ReducibilityVerdict::Reducible { side } => side,
        ReducibilityVerdict::Irreducible => return Err(ReductionError::NotReducible),
    };
    let d = t.d();
    let kept = match side {
        Side::Left => 1..d,
        Side::Right => 0..d - 1,
    };
    let pieces: Vec<_> = kept
        .map(|j| (t.interval(j), t.translation(j).clone()))
        .collect();
    let domain = HalfOpenInterval::new(
        pieces[0].0.left().clone(),
        pieces[pieces.len() - 1].0.right().clone(),
    )?;
    let map = Itm::from_pieces_on(&domain, &pieces)?;
    Ok(DroppedEdge { side, domain, map })
}

/// The cell `C_jk`: `j` is the piece whose left end lands leftmost among the
/// pieces moving left, `k` the piece whose right end lands rightmost among
/// those moving right. Piece numbers are 1-based, as in `Δ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub j: usize,
    pub k: usize,
    /// The minimum or maximum was attained by more than one piece; the
    /// smallest index was chosen.
    pub boundary_flag: bool,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{},{}", self.j, self.k)?;
        if self.boundary_flag {
            write!(f, " (tie)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrapFormula {
    pub interval: HalfOpenInterval,
    pub cell: Cell,
}

/// `[min_{γ_i<0} (β_{i-1} + γ_i), max_{γ_i>0} (β_i + γ_i))` over a list of
/// consecutive pieces, with zero-based argmin/argmax positions.
fn extremes(pieces: &[(HalfOpenInterval, Rational)]) -> Result<TrapFormula, ReductionError> {
    let mut low: Option<(Rational, usize, bool)> = None;
    let mut high: Option<(Rational, usize, bool)> = None;
    for (i, (iv, g)) in pieces.iter().enumerate() {
        if g.is_negative() {
            let v = iv.left() + g;
            match &mut low {
                Some((best, _, tie)) if v == *best => *tie = true,
                Some((best, _, _)) if v > *best => {}
                _ => low = Some((v, i, false)),
            }
        } else if g.is_positive() {
            let v = iv.right() + g;
            match &mut high {
                Some((best, _, tie)) if v == *best => *tie = true,
                Some((best, _, _)) if v < *best => {}
                _ => high = Some((v, i, false)),
            }
        }
    }
    let (lo, j, tie_lo) = low.ok_or(ReductionError::EmptySignClass("left"))?;
    let (hi, k, tie_hi) = high.ok_or(ReductionError::EmptySignClass("right"))?;
    Ok(TrapFormula {
        interval: HalfOpenInterval::new(lo, hi)?,
        cell: Cell {
            j: j + 1,
            k: k + 1,
            boundary_flag: tie_lo || tie_hi,
        },
    })
}

fn pieces_of(t: &Itm) -> Vec<(HalfOpenInterval, Rational)> {
    t.pieces().map(|(iv, g)| (iv, g.clone())).collect()
}

/// The explicit trap `[δ_0, δ_1)` and its cell, from a single application
/// of the min/max formula.
pub fn trap_formula(t: &Itm) -> Result<TrapFormula, ReductionError> {
    extremes(&pieces_of(t))
}

pub fn cell(t: &Itm) -> Result<Cell, ReductionError> {
    Ok(trap_formula(t)?.cell)
}

const MAX_FIT_PASSES: usize = 64;

struct TrapIteration {
    first: TrapFormula,
    trap: HalfOpenInterval,
    passes: usize,
    restricted: Vec<(HalfOpenInterval, Rational)>,
}

fn restrict(
    pieces: &[(HalfOpenInterval, Rational)],
    to: &HalfOpenInterval,
) -> Vec<(HalfOpenInterval, Rational)> {
    pieces
        .iter()
        .filter_map(|(iv, g)| iv.intersect(to).map(|p| (p, g.clone())))
        .collect()
}

/// Re-applies the trap formula to the restricted map until the restriction
/// is tight, i.e. until the formula returns the restriction's own domain.
fn iterate_trap(t: &Itm) -> Result<TrapIteration, ReductionError> {
    let mut pieces = pieces_of(t);
    let first = extremes(&pieces)?;
    let mut trap = first.interval.clone();
    for passes in 1..=MAX_FIT_PASSES {
        pieces = restrict(&pieces, &trap);
        let next = extremes(&pieces)?.interval;
        if next == trap {
            return Ok(TrapIteration {
                first,
                trap,
                passes,
                restricted: pieces,
            });
        }
        trap = next;
    }
    Err(ReductionError::FitDidNotConverge(MAX_FIT_PASSES))
}

/// The trap of the fitting: the formula's interval, shrunk by further
/// passes of the same formula when the first restriction is not yet tight.
pub fn trap(t: &Itm) -> Result<HalfOpenInterval, ReductionError> {
    Ok(iterate_trap(t)?.trap)
}

/// The truncation of `T` to its trap in the image coordinates
/// `(β_i, B_{i-1} = β_{i-1} + γ_i)`.
///
/// Relative to the map itself, only four coordinates change: the domain
/// edges `0, 1` become `δ_0 = B_{j-1}` and `δ_1 = β_k + γ_k`, and the first
/// and last image coordinates become `δ_0 + γ_1` and `δ_1 + γ_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub cell: Cell,
    pub domain: HalfOpenInterval,
    /// `β_1, …, β_{d-1}`, unchanged; some may lie outside `domain`.
    pub breakpoints: Vec<Rational>,
    /// `[δ_0 + γ_1, B_1, …, B_{d-2}, δ_1 + γ_d]`.
    pub images: Vec<Rational>,
}

/// The coordinates a truncation overwrites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacedEdges {
    pub left: Rational,
    pub right: Rational,
    /// `B_0 = γ_1`.
    pub first_image: Rational,
    /// `B_{d-1} = β_{d-1} + γ_d`.
    pub last_image: Rational,
}

impl Truncation {
    pub fn d(&self) -> usize {
        self.images.len()
    }

    /// `γ_1, …, γ_d` recovered from the image coordinates.
    pub fn translations(&self) -> Vec<Rational> {
        let d = self.d();
        (0..d)
            .map(|i| {
                if i == 0 {
                    &self.images[0] - self.domain.left()
                } else if i == d - 1 {
                    &self.images[i] - self.domain.right()
                } else {
                    &self.images[i] - &self.breakpoints[i - 1]
                }
            })
            .collect()
    }

    /// `T|Δ` as consecutive pieces of `Δ`, not rescaled. Pieces lying
    /// outside `Δ` are dropped.
    pub fn restricted_pieces(&self) -> Vec<(HalfOpenInterval, Rational)> {
        let d = self.d();
        let edge = |i: usize| -> Rational {
            if i == 0 {
                self.domain.left().clone()
            } else if i == d {
                self.domain.right().clone()
            } else {
                self.breakpoints[i - 1].clone()
            }
        };
        self.translations()
            .into_iter()
            .enumerate()
            .filter_map(|(i, g)| {
                HalfOpenInterval::try_new(edge(i), edge(i + 1))
                    .and_then(|iv| iv.intersect(&self.domain))
                    .map(|iv| (iv, g))
            })
            .collect()
    }
}

pub fn truncate(t: &Itm, cell: &Cell) -> Result<(Truncation, DisplacedEdges), ReductionError> {
    let formula = trap_formula(t)?;
    if formula.cell != *cell {
        return Err(ReductionError::CellMismatch {
            expected: formula.cell,
            given: *cell,
        });
    }
    let d = t.d();
    let gammas = t.translations();
    let domain = formula.interval;
    let images = (0..d)
        .map(|i| {
            if i == 0 {
                domain.left() + &gammas[0]
            } else if i == d - 1 {
                domain.right() + &gammas[d - 1]
            } else {
                t.edge(i) + &gammas[i]
            }
        })
        .collect();
    let displaced = DisplacedEdges {
        left: Rational::zero(),
        right: Rational::one(),
        first_image: gammas[0].clone(),
        last_image: t.edge(d - 1) + &gammas[d - 1],
    };
    Ok((
        Truncation {
            cell: *cell,
            domain,
            breakpoints: t.breakpoints().to_vec(),
            images,
        },
        displaced,
    ))
}

/// Inverse of [`truncate`].
pub fn untruncate(tr: &Truncation, displaced: &DisplacedEdges) -> Result<Itm, ReductionError> {
    let bad = |msg: &str| ReductionError::InconsistentTruncation(msg.to_string());
    if !displaced.left.is_zero() || displaced.right != Rational::one() {
        return Err(bad("displaced domain edges must be 0 and 1"));
    }
    if tr.d() < 2 || tr.breakpoints.len() + 1 != tr.d() {
        return Err(bad("coordinate lists have mismatched lengths"));
    }
    let gammas = tr.translations();
    let d = gammas.len();
    if displaced.first_image != gammas[0] {
        return Err(bad("first image coordinate disagrees with the truncation"));
    }
    if displaced.last_image != &tr.breakpoints[d - 2] + &gammas[d - 1] {
        return Err(bad("last image coordinate disagrees with the truncation"));
    }
    let t = Itm::new(tr.breakpoints.clone(), gammas)?;
    let formula = trap_formula(&t)?;
    if formula.cell != tr.cell {
        return Err(bad("recorded cell is not the cell of the recovered map"));
    }
    if formula.interval != tr.domain {
        return Err(bad("recorded domain is not the trap of the recovered map"));
    }
    Ok(t)
}

/// Result of the fitting operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fitting {
    /// The single-pass formula and its cell.
    pub first_pass: TrapFormula,
    /// The final trap; equal to `first_pass.interval` when `passes == 1`.
    pub trap: HalfOpenInterval,
    pub passes: usize,
    /// The conjugacy `x ↦ (x - offset) * scale` sends `trap` onto `[0, 1)`.
    pub offset: Rational,
    pub scale: Rational,
    /// The rescaled restriction, canonicalized.
    pub fitted: TightItm,
}

impl Fitting {
    /// Maps a point of `[0, 1)` back into the trap.
    pub fn to_original(&self, y: &Rational) -> Rational {
        y / &self.scale + &self.offset
    }

    pub fn to_fitted(&self, x: &Rational) -> Rational {
        (x - &self.offset) * &self.scale
    }
}

/// Truncate to the trap and rescale onto `[0, 1)`.
pub fn fit(t: &Itm) -> Result<Fitting, ReductionError> {
    let it = iterate_trap(t)?;
    let map = Itm::from_pieces_on(&it.trap, &it.restricted)?.canonicalize()?;
    let fitted = TightItm::try_from(map)
        .map_err(|_| ReductionError::Invariant(format!("fit of {t} is not tight")))?;
    Ok(Fitting {
        offset: it.trap.left().clone(),
        scale: it.trap.length().recip(),
        first_pass: it.first,
        trap: it.trap,
        passes: it.passes,
        fitted,
    })
}
