//! The case table for tight three-piece maps.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::itm::TightItm;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum CaseLabel {
    A,
    #[serde(rename = "A'")]
    APrime,
    B,
    #[serde(rename = "B_i")]
    Bi {
        i: u64,
    },
    #[serde(rename = "C_i")]
    Ci {
        i: u64,
    },
    #[serde(rename = "boundary")]
    Boundary {
        witness: String,
    },
}

impl CaseLabel {
    pub fn escape_index(&self) -> Option<u64> {
        match self {
            CaseLabel::Bi { i } | CaseLabel::Ci { i } => Some(*i),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, CaseLabel::Boundary { .. })
    }

    /// Short name without the index: `A`, `A'`, `B`, `B_i`, `C_i`, `boundary`.
    pub fn family(&self) -> &'static str {
        match self {
            CaseLabel::A => "A",
            CaseLabel::APrime => "A'",
            CaseLabel::B => "B",
            CaseLabel::Bi { .. } => "B_i",
            CaseLabel::Ci { .. } => "C_i",
            CaseLabel::Boundary { .. } => "boundary",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Bi { i } => write!(f, "B_{i}"),
            CaseLabel::Ci { i } => write!(f, "C_{i}"),
            CaseLabel::Boundary { witness } => write!(f, "boundary ({witness})"),
            other => f.write_str(other.family()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: CaseLabel,
    /// `map` is the mirror of the input, taken so that `|Δ_1| ≥ |Δ_3|`.
    pub mirrored: bool,
    /// The map the label describes.
    pub map: TightItm,
}

/// Piece indices (zero-based) whose image touches 0, resp. 1.
fn extreme_pieces(t: &TightItm) -> (Vec<usize>, Vec<usize>) {
    let one = Rational::one();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (j, (iv, g)) in t.pieces().enumerate() {
        if (iv.left() + g).is_zero() {
            left.push(j);
        }
        if iv.right() + g == one {
            right.push(j);
        }
    }
    (left, right)
}

/// `ceil(1/γ_1) + 1`: `TΔ_3` advances by `γ_1` per step through `Δ_1`.
pub fn escape_bound(gamma1: &Rational) -> u64 {
    gamma1
        .recip()
        .ceil()
        .to_u64()
        .map_or(u64::MAX, |c| c.saturating_add(1))
}

pub fn classify_tight3(t: &TightItm) -> Result<Classification, ReductionError> {
    if t.d() != 3 {
        return Err(ReductionError::WrongPieceCount {
            expected: 3,
            found: t.d(),
        });
    }
    if !t.is_canonical() {
        return Err(ReductionError::Invariant(format!(
            "{} is not canonical",
            **t
        )));
    }
    let (left, right) = extreme_pieces(t);
    let (l, r) = match (left.as_slice(), right.as_slice()) {
        ([l], [r]) => (*l, *r),
        _ => {
            let names = |v: &[usize]| {
                v.iter()
                    .map(|j| format!("Δ_{}", j + 1))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let witness = if left.len() != 1 {
                format!("leftmost image shared by {}", names(&left))
            } else {
                format!("rightmost image shared by {}", names(&right))
            };
            return Ok(Classification {
                label: CaseLabel::Boundary { witness },
                mirrored: false,
                map: t.clone(),
            });
        }
    };
    let label = match (l, r) {
        (1, 0) => CaseLabel::A,
        (2, 1) => CaseLabel::APrime,
        (2, 0) => return classify_b_c(t),
        _ => {
            return Err(ReductionError::Invariant(format!(
                "impossible extreme pieces (Δ_{}, Δ_{}) for {}",
                l + 1,
                r + 1,
                **t
            )))
        }
    };
    Ok(Classification {
        label,
        mirrored: false,
        map: t.clone(),
    })
}

/// `Δ_3` leftmost and `Δ_1` rightmost.
fn classify_b_c(t: &TightItm) -> Result<Classification, ReductionError> {
    let (len1, len3) = (t.interval(0).length(), t.interval(2).length());
    if len1 == len3 {
        // TΔ_1 = Δ_3 and TΔ_3 = Δ_1: every point of Δ_1 ∪ Δ_3 has period 2,
        // so no induced map on Δ_1 ∪ Δ_2 or Δ_2 ∪ Δ_3 is an ITM
        return Ok(Classification {
            label: CaseLabel::Boundary {
                witness: "|Δ_1| = |Δ_3|".to_string(),
            },
            mirrored: false,
            map: t.clone(),
        });
    }
    let mirrored = len1 < len3;
    let map = if mirrored {
        TightItm::try_from(t.mirror()).map_err(|_| ReductionError::NotTight)?
    } else {
        t.clone()
    };
    let g = map.translations();
    if g[1].is_negative() {
        return Ok(Classification {
            label: CaseLabel::B,
            mirrored,
            map,
        });
    }
    // TΔ_3 = [0, |Δ_3|) ⊆ Δ_1, then T^m Δ_3 = [(m-1)γ_1, |Δ_3| + (m-1)γ_1)
    // while it stays in Δ_1; n is the last such m.
    let beta1 = &map.breakpoints()[0];
    let len3 = map.interval(2).length();
    let steps = ((beta1 - &len3) / &g[0]).floor();
    let n = steps
        .to_u64()
        .and_then(|s| s.checked_add(1))
        .ok_or_else(|| {
            ReductionError::Invariant(format!("escape index of {} is not a u64", *map))
        })?;
    let bound = escape_bound(&g[0]);
    if n > bound {
        return Err(ReductionError::EscapeIndexOverflow { index: n, bound });
    }
    // T^{n+1} Δ_3 = [nγ_1, |Δ_3| + nγ_1) leaves Δ_1 through its right end
    let left_end = Rational::from_integer(n as i64) * &g[0];
    let beta2 = &map.breakpoints()[1];
    let (label, periodic) = if &left_end >= beta1 {
        (CaseLabel::Bi { i: n }, &left_end == beta2)
    } else {
        // Δ_3′ = [β_2, β_1 + β_2 - nγ_1) comes back after n + 2 steps
        (CaseLabel::Ci { i: n }, &(&left_end + &g[0]) == beta2)
    };
    if periodic {
        return Ok(Classification {
            label: CaseLabel::Boundary {
                witness: format!("part of Δ_3 is periodic under {label}"),
            },
            mirrored,
            map,
        });
    }
    Ok(Classification {
        label,
        mirrored,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::HalfOpenInterval;
    use crate::itm::{itm, Itm};
    use crate::rational::q;

    fn tight(t: Itm) -> TightItm {
        TightItm::try_from(t).unwrap()
    }

    fn label(t: Itm) -> CaseLabel {
        classify_tight3(&tight(t)).unwrap().label
    }

    /// Oracle for the escape index: push the interval `TΔ_3` forward by
    /// `γ_1` while it lies inside `Δ_1`.
    fn escape_by_iteration(t: &Itm) -> (u64, HalfOpenInterval) {
        let d1 = t.interval(0);
        let mut cur = t.piece_image(2);
        let mut n = 1;
        while d1.contains_interval(&cur) {
            cur = cur.translate(t.translation(0));
            n += 1;
        }
        (n - 1, cur)
    }

    #[test]
    fn case_a_and_a_prime() {
        assert_eq!(
            label(itm(&[q(1, 3), q(7, 9)], &[q(2, 3), q(-1, 3), q(-2, 3)])),
            CaseLabel::A
        );
        let a = itm(&[q(1, 6), q(5, 6)], &[q(1, 12), q(1, 6), q(-5, 6)]);
        assert_eq!(label(a.clone()), CaseLabel::APrime);
        assert_eq!(label(a.mirror()), CaseLabel::A);
    }

    #[test]
    fn case_b() {
        let c = classify_tight3(&tight(itm(
            &[q(1, 2), q(3, 4)],
            &[q(1, 2), q(-1, 8), q(-3, 4)],
        )))
        .unwrap();
        assert_eq!(c.label, CaseLabel::B);
        assert!(!c.mirrored);
    }

    #[test]
    fn case_b_i() {
        let t = itm(&[q(1, 2), q(5, 8)], &[q(1, 2), q(1, 8), q(-5, 8)]);
        let (n, after) = escape_by_iteration(&t);
        assert_eq!(n, 1);
        assert_eq!(after, HalfOpenInterval::new(q(1, 2), q(7, 8)).unwrap());
        assert_eq!(label(t), CaseLabel::Bi { i: 1 });
    }

    #[test]
    fn case_c_i() {
        let t = itm(&[q(5, 8), q(11, 16)], &[q(3, 8), q(1, 32), q(-11, 16)]);
        let (n, after) = escape_by_iteration(&t);
        assert_eq!(n, 1);
        assert_eq!(after, HalfOpenInterval::new(q(3, 8), q(11, 16)).unwrap());
        assert!(after.contains(&q(5, 8)));
        assert_eq!(label(t), CaseLabel::Ci { i: 1 });
    }

    #[test]
    fn longer_escape() {
        // TΔ_3 = [0, 1/8) and T²Δ_3 = [3/8, 1/2) both lie in Δ_1 = [0, 5/8)
        let t = itm(&[q(5, 8), q(7, 8)], &[q(3, 8), q(1, 16), q(-7, 8)]);
        let (n, _) = escape_by_iteration(&t);
        let c = classify_tight3(&tight(t)).unwrap();
        assert_eq!(c.label.escape_index(), Some(n));
        assert!(n >= 2);
    }

    #[test]
    fn small_first_piece_is_mirrored() {
        // mirror of the B_1 instance has |Δ_1| = 3/8 < |Δ_3| = 1/2
        let t = itm(&[q(1, 2), q(5, 8)], &[q(1, 2), q(1, 8), q(-5, 8)]).mirror();
        let c = classify_tight3(&tight(t.clone())).unwrap();
        assert!(c.mirrored);
        assert_eq!(*c.map, t.mirror());
        assert_eq!(c.label, CaseLabel::Bi { i: 1 });
    }

    #[test]
    fn equal_edge_pieces_are_boundary() {
        let t = itm(&[q(1, 4), q(3, 4)], &[q(3, 4), q(-1, 8), q(-3, 4)]);
        let c = classify_tight3(&tight(t)).unwrap();
        assert!(c.label.is_boundary(), "{}", c.label);
    }

    #[test]
    fn periodic_third_piece_is_boundary() {
        // T^4 Δ_3 = Δ_3: the walk 3γ_1 lands exactly on β_2
        let t = itm(&[q(5, 7), q(6, 7)], &[q(2, 7), q(1, 21), q(-6, 7)]);
        let c = classify_tight3(&tight(t)).unwrap();
        assert!(c.label.is_boundary(), "{}", c.label);
    }

    #[test]
    fn shared_extreme_is_boundary() {
        // Δ_2 and Δ_3 both land on 0
        let t = itm(&[q(1, 4), q(1, 2)], &[q(3, 4), q(-1, 4), q(-1, 2)]);
        let c = classify_tight3(&tight(t)).unwrap();
        assert!(c.label.is_boundary(), "{}", c.label);
    }

    #[test]
    fn rejects_wrong_shape() {
        let rot = tight(itm(&[q(1, 2)], &[q(1, 2), q(-1, 2)]));
        assert_eq!(
            classify_tight3(&rot),
            Err(ReductionError::WrongPieceCount {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn json_shapes() {
        let s = |l: &CaseLabel| serde_json::to_string(l).unwrap();
        assert_eq!(s(&CaseLabel::A), r#"{"case":"A"}"#);
        assert_eq!(s(&CaseLabel::APrime), r#"{"case":"A'"}"#);
        assert_eq!(s(&CaseLabel::Ci { i: 3 }), r#"{"case":"C_i","i":3}"#);
        let b = CaseLabel::Boundary {
            witness: "x".into(),
        };
        assert_eq!(serde_json::from_str::<CaseLabel>(&s(&b)).unwrap(), b);
    }
}
