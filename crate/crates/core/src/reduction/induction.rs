//! Closed-form first-return maps for cases B, B_i and C_i, and the terminal
//! double rotation or rotation.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::classify::{classify_tight3, CaseLabel, Classification};
use super::ReductionError;
use crate::doublerot::DoubleRotation;
use crate::interval::HalfOpenInterval;
use crate::itm::{Itm, TightItm};
use crate::oracle::ReturnPiece;
use crate::rational::Rational;

/// `x ↦ x + shift` reduced modulo `trap`, i.e. a circle rotation by
/// `shift / length`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rotation {
    pub trap: HalfOpenInterval,
    pub shift: Rational,
    pub length: Rational,
}

impl Rotation {
    pub fn rotation_number(&self) -> Rational {
        &self.shift / &self.length
    }

    /// The rotation rescaled onto `[0, 1)`: `β = (1 - s)`, `γ = (s, s - 1)`.
    pub fn as_itm(&self) -> Result<Itm, ReductionError> {
        let s = self.rotation_number();
        let one = Rational::one();
        Ok(Itm::new(vec![&one - &s], vec![s.clone(), s - one])?)
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rotation by {} on {}", self.shift, self.trap)
    }
}

/// A two-piece map is a rotation on its trap `[β_1 + γ_2, β_1 + γ_1)`.
pub fn rotation_from_itm2(t: &Itm) -> Result<Rotation, ReductionError> {
    if t.d() != 2 {
        return Err(ReductionError::WrongPieceCount {
            expected: 2,
            found: t.d(),
        });
    }
    let g = t.translations();
    if !(g[0].is_positive() && g[1].is_negative()) {
        return Err(ReductionError::Invariant(format!(
            "two-piece map {t} does not move its pieces toward each other"
        )));
    }
    let b = &t.breakpoints()[0];
    Ok(Rotation {
        trap: HalfOpenInterval::new(b + &g[1], b + &g[0])?,
        shift: g[0].clone(),
        length: &g[0] - &g[1],
    })
}

/// The double rotation equal to a tight map in case A or A′.
///
/// A: `(-|Δ_1|, γ_3, β_2)`; A′: `(γ_1, |Δ_3|, β_1)`.
pub fn as_double_rotation(t: &TightItm) -> Result<DoubleRotation, ReductionError> {
    let c = classify_tight3(t)?;
    let b = t.breakpoints();
    let g = t.translations();
    let (a, bb, cut) = match c.label {
        CaseLabel::A => (-&b[0], g[2].clone(), b[1].clone()),
        CaseLabel::APrime => (g[0].clone(), Rational::one() - &b[1], b[0].clone()),
        found => {
            return Err(ReductionError::LabelMismatch {
                expected: "A or A'",
                found,
            })
        }
    };
    DoubleRotation::new(a, bb, cut).map_err(|e| ReductionError::Invariant(e.to_string()))
}

/// A tight two-piece map is the circle rotation by `γ_1`, written as the
/// double rotation `(γ_1, γ_1, β_1)`.
fn degenerate_double_rotation(t: &Itm) -> Result<DoubleRotation, ReductionError> {
    debug_assert_eq!(t.d(), 2);
    let g = t.translation(0).clone();
    DoubleRotation::new(g.clone(), g, t.breakpoints()[0].clone())
        .map_err(|e| ReductionError::Invariant(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InductionKind {
    /// Case B, base `Δ_1 ∪ Δ_2`.
    Type1,
    /// Cases B_i and C_i, base `Δ_2 ∪ Δ_3`.
    Type2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InducedMap {
    DoubleRotation(DoubleRotation),
    Rotation(Rotation),
}

impl InducedMap {
    pub fn as_itm(&self) -> Result<Itm, ReductionError> {
        match self {
            InducedMap::DoubleRotation(f) => Ok(f.to_itm()?),
            InducedMap::Rotation(r) => r.as_itm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Induction {
    pub kind: InductionKind,
    pub base: HalfOpenInterval,
    /// First-return pieces in the coordinates of the classified map,
    /// sorted by left endpoint.
    pub pieces: Vec<ReturnPiece>,
    /// The induced map rescaled onto `[0, 1)` and canonicalized.
    pub induced: Itm,
    /// Label of `induced` when it is a tight three-piece map.
    pub induced_label: Option<CaseLabel>,
    pub result: InducedMap,
}

fn piece(l: &Rational, r: &Rational, translation: Rational, time: usize) -> Option<ReturnPiece> {
    HalfOpenInterval::try_new(l.clone(), r.clone()).map(|interval| ReturnPiece {
        interval,
        translation,
        return_time: time,
    })
}

/// Rejects classifications whose label was not computed from `map`.
fn checked_label(c: &Classification) -> Result<CaseLabel, ReductionError> {
    let again = classify_tight3(&c.map)?;
    if again.mirrored || again.label != c.label {
        return Err(ReductionError::Invariant(format!(
            "classification {} does not belong to {}",
            c.label, *c.map
        )));
    }
    Ok(again.label)
}

fn rescaled(base: &HalfOpenInterval, pieces: &[ReturnPiece]) -> Result<Itm, ReductionError> {
    let raw: Vec<_> = pieces
        .iter()
        .map(|p| (p.interval.clone(), p.translation.clone()))
        .collect();
    Ok(Itm::from_pieces_on(base, &raw)?.canonicalize()?)
}

fn time(i: u64, extra: u64) -> Result<usize, ReductionError> {
    i.checked_add(extra)
        .and_then(|t| usize::try_from(t).ok())
        .ok_or_else(|| ReductionError::Invariant(format!("return time {i} + {extra} overflows")))
}

/// First return to `[0, β_2)` in case B: `Δ_1` splits at `β_2 - γ_1` into
/// a part returning at once and a part that visits `Δ_3` first.
pub fn induce_type1(c: &Classification) -> Result<Induction, ReductionError> {
    let label = checked_label(c)?;
    if label != CaseLabel::B {
        return Err(ReductionError::LabelMismatch {
            expected: "B",
            found: label,
        });
    }
    let t = &c.map;
    let (b1, b2) = (&t.breakpoints()[0], &t.breakpoints()[1]);
    let g = t.translations();
    let split = b2 - &g[0];
    let zero = Rational::zero();
    let pieces: Vec<ReturnPiece> = [
        piece(&zero, &split, g[0].clone(), 1),
        piece(&split, b1, &g[0] + &g[2], 2),
        piece(b1, b2, g[1].clone(), 1),
    ]
    .into_iter()
    .flatten()
    .collect();
    let base = HalfOpenInterval::new(zero, b2.clone())?;
    let induced = rescaled(&base, &pieces)?;
    let (induced_label, result) = match induced.d() {
        2 => (None, degenerate_double_rotation(&induced)?),
        _ => {
            let tight = TightItm::try_from(induced.clone()).map_err(|_| {
                ReductionError::Invariant(format!("type 1 induction {induced} is not tight"))
            })?;
            let l = classify_tight3(&tight)?.label;
            if l != CaseLabel::A {
                return Err(ReductionError::Invariant(format!(
                    "type 1 induction landed in case {l}, expected A"
                )));
            }
            (Some(l), as_double_rotation(&tight)?)
        }
    };
    Ok(Induction {
        kind: InductionKind::Type1,
        base,
        pieces,
        induced,
        induced_label,
        result: InducedMap::DoubleRotation(result),
    })
}

/// First return to `[β_1, 1)` in cases B_i and C_i. `Δ_3` travels through
/// `Δ_1` for `i` steps; in C_i it splits at the point whose orbit hits `β_1`.
pub fn induce_type2(c: &Classification) -> Result<Induction, ReductionError> {
    let label = checked_label(c)?;
    let t = &c.map;
    let (b1, b2) = (&t.breakpoints()[0], &t.breakpoints()[1]);
    let g = t.translations();
    let one = Rational::one();
    let base = HalfOpenInterval::new(b1.clone(), one.clone())?;
    let head = piece(b1, b2, g[1].clone(), 1);
    match label {
        CaseLabel::Bi { i } => {
            let walk = Rational::from_integer(i as i64) * &g[0];
            let pieces: Vec<_> = [head, piece(b2, &one, &g[2] + &walk, time(i, 1)?)]
                .into_iter()
                .flatten()
                .collect();
            let induced = rescaled(&base, &pieces)?;
            let rotation = rotation_from_itm2(&induced)?;
            Ok(Induction {
                kind: InductionKind::Type2,
                base,
                pieces,
                induced,
                induced_label: None,
                result: InducedMap::Rotation(rotation),
            })
        }
        CaseLabel::Ci { i } => {
            let walk = Rational::from_integer(i as i64) * &g[0];
            let split = b1 - &g[2] - &walk;
            let long = &g[2] + &walk + &g[0];
            let short = &g[2] + &walk;
            let pieces: Vec<_> = [
                head,
                piece(b2, &split, long, time(i, 2)?),
                piece(&split, &one, short, time(i, 1)?),
            ]
            .into_iter()
            .flatten()
            .collect();
            let induced = rescaled(&base, &pieces)?;
            // Δ_2 and Δ_3′ merge when γ_2 = γ_3 + (i+1)γ_1
            let (induced_label, result) = match induced.d() {
                2 => (None, degenerate_double_rotation(&induced)?),
                _ => {
                    let tight = TightItm::try_from(induced.clone()).map_err(|_| {
                        ReductionError::Invariant(format!(
                            "type 2 induction {induced} is not tight"
                        ))
                    })?;
                    let l = classify_tight3(&tight)?.label;
                    if l != CaseLabel::APrime {
                        return Err(ReductionError::Invariant(format!(
                            "type 2 induction landed in case {l}, expected A'"
                        )));
                    }
                    (Some(l), as_double_rotation(&tight)?)
                }
            };
            Ok(Induction {
                kind: InductionKind::Type2,
                base,
                pieces,
                induced,
                induced_label,
                result: InducedMap::DoubleRotation(result),
            })
        }
        found => Err(ReductionError::LabelMismatch {
            expected: "B_i or C_i",
            found,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itm::itm;
    use crate::oracle::{default_return_budget, first_return_oracle};
    use crate::rational::q;

    fn iv(l: Rational, r: Rational) -> HalfOpenInterval {
        HalfOpenInterval::new(l, r).unwrap()
    }

    fn classified(t: Itm) -> Classification {
        classify_tight3(&TightItm::try_from(t).unwrap()).unwrap()
    }

    fn rp(l: Rational, r: Rational, g: Rational, time: usize) -> ReturnPiece {
        ReturnPiece {
            interval: iv(l, r),
            translation: g,
            return_time: time,
        }
    }

    fn assert_matches_oracle(c: &Classification, ind: &Induction) {
        let oracle = first_return_oracle(&c.map, &ind.base, default_return_budget(&c.map)).unwrap();
        assert_eq!(oracle.pieces, ind.pieces);
        assert_eq!(
            oracle.to_itm().unwrap().canonicalize().unwrap(),
            ind.induced
        );
    }

    fn assert_dr_pointwise(f: &DoubleRotation, t: &Itm) {
        for k in 0..1000 {
            let x = q(k, 1000);
            assert_eq!(f.eval(&x).unwrap(), t.eval(&x).unwrap(), "at {x}");
        }
    }

    #[test]
    fn rotation_examples() {
        let r = rotation_from_itm2(&itm(&[q(1, 4)], &[q(1, 4), q(-1, 4)])).unwrap();
        assert_eq!(r.trap, iv(q(0, 1), q(1, 2)));
        assert_eq!(r.shift, q(1, 4));
        let t = itm(&[q(1, 4)], &[q(1, 4), q(-1, 4)]);
        assert_eq!(t.image(&r.trap.clone().into()), r.trap.clone().into());

        let r = rotation_from_itm2(&itm(&[q(1, 2)], &[q(1, 2), q(-1, 2)])).unwrap();
        assert_eq!(r.trap, HalfOpenInterval::unit());
        assert_eq!(r.shift, q(1, 2));

        let r = rotation_from_itm2(&itm(&[q(1, 2)], &[q(1, 3), q(-1, 2)])).unwrap();
        assert_eq!(r.trap, iv(q(0, 1), q(5, 6)));
        assert_eq!(r.shift, q(1, 3));
        assert_eq!(r.as_itm().unwrap(), itm(&[q(3, 5)], &[q(2, 5), q(-3, 5)]));

        assert!(
            rotation_from_itm2(&itm(&[q(1, 3), q(2, 3)], &[q(1, 2), q(-1, 4), q(-1, 2)])).is_err()
        );
    }

    #[test]
    fn case_a_double_rotation() {
        let t =
            TightItm::try_from(itm(&[q(1, 3), q(7, 9)], &[q(2, 3), q(-1, 3), q(-2, 3)])).unwrap();
        let f = as_double_rotation(&t).unwrap();
        assert_eq!(f, DoubleRotation::new(q(2, 3), q(1, 3), q(7, 9)).unwrap());
        assert_dr_pointwise(&f, &t);

        let b =
            TightItm::try_from(itm(&[q(1, 2), q(3, 4)], &[q(1, 2), q(-1, 8), q(-3, 4)])).unwrap();
        assert!(matches!(
            as_double_rotation(&b),
            Err(ReductionError::LabelMismatch { .. })
        ));
    }

    #[test]
    fn type1_example() {
        let c = classified(itm(&[q(1, 2), q(3, 4)], &[q(1, 2), q(-1, 8), q(-3, 4)]));
        let ind = induce_type1(&c).unwrap();
        assert_eq!(ind.base, iv(q(0, 1), q(3, 4)));
        assert_eq!(
            ind.pieces,
            vec![
                rp(q(0, 1), q(1, 4), q(1, 2), 1),
                rp(q(1, 4), q(1, 2), q(-1, 4), 2),
                rp(q(1, 2), q(3, 4), q(-1, 8), 1),
            ]
        );
        assert_eq!(
            ind.induced,
            itm(&[q(1, 3), q(2, 3)], &[q(2, 3), q(-1, 3), q(-1, 6)])
        );
        assert_eq!(ind.induced_label, Some(CaseLabel::A));
        let f = DoubleRotation::new(q(2, 3), q(5, 6), q(2, 3)).unwrap();
        assert_eq!(ind.result, InducedMap::DoubleRotation(f.clone()));
        assert_matches_oracle(&c, &ind);
        assert_dr_pointwise(&f, &ind.induced);
    }

    #[test]
    fn type1_degenerate_rotation() {
        let c = classified(itm(&[q(1, 2), q(3, 4)], &[q(1, 2), q(-1, 4), q(-3, 4)]));
        assert_eq!(c.label, CaseLabel::B);
        let ind = induce_type1(&c).unwrap();
        assert_eq!(ind.induced, itm(&[q(1, 3)], &[q(2, 3), q(-1, 3)]));
        let InducedMap::DoubleRotation(f) = &ind.result else {
            panic!("expected a double rotation");
        };
        assert!(f.is_degenerate());
        assert_eq!(f.a(), &q(2, 3));
        assert_matches_oracle(&c, &ind);
        assert_dr_pointwise(f, &ind.induced);
    }

    #[test]
    fn type2_b_i_example() {
        let c = classified(itm(&[q(1, 2), q(5, 8)], &[q(1, 2), q(1, 8), q(-5, 8)]));
        let ind = induce_type2(&c).unwrap();
        assert_eq!(
            ind.pieces,
            vec![
                rp(q(1, 2), q(5, 8), q(1, 8), 1),
                rp(q(5, 8), q(1, 1), q(-1, 8), 2),
            ]
        );
        assert_eq!(ind.induced, itm(&[q(1, 4)], &[q(1, 4), q(-1, 4)]));
        let InducedMap::Rotation(r) = &ind.result else {
            panic!("expected a rotation");
        };
        assert_eq!(r.trap, iv(q(0, 1), q(1, 2)));
        assert_eq!(r.shift, q(1, 4));
        assert_matches_oracle(&c, &ind);
    }

    #[test]
    fn type2_c_i_example() {
        let c = classified(itm(&[q(5, 8), q(11, 16)], &[q(3, 8), q(1, 32), q(-11, 16)]));
        let ind = induce_type2(&c).unwrap();
        assert_eq!(
            ind.pieces,
            vec![
                rp(q(5, 8), q(11, 16), q(1, 32), 1),
                rp(q(11, 16), q(15, 16), q(1, 16), 3),
                rp(q(15, 16), q(1, 1), q(-5, 16), 2),
            ]
        );
        assert_eq!(
            ind.induced,
            itm(&[q(1, 6), q(5, 6)], &[q(1, 12), q(1, 6), q(-5, 6)])
        );
        assert_eq!(ind.induced_label, Some(CaseLabel::APrime));
        let f = DoubleRotation::new(q(1, 12), q(1, 6), q(1, 6)).unwrap();
        assert_eq!(ind.result, InducedMap::DoubleRotation(f.clone()));
        assert_matches_oracle(&c, &ind);
        assert_dr_pointwise(&f, &ind.induced);
    }

    #[test]
    fn type2_c_i_with_merged_pieces() {
        let c = classified(itm(
            &[q(7, 13), q(11, 13)],
            &[q(6, 13), q(1, 13), q(-11, 13)],
        ));
        assert_eq!(c.label, CaseLabel::Ci { i: 1 });
        let ind = induce_type2(&c).unwrap();
        assert_eq!(ind.pieces.len(), 3);
        assert_eq!(ind.induced.d(), 2);
        let InducedMap::DoubleRotation(f) = &ind.result else {
            panic!("expected a double rotation");
        };
        assert!(f.is_degenerate());
        assert_matches_oracle(&c, &ind);
        assert_dr_pointwise(f, &ind.induced);
    }

    #[test]
    fn label_mismatch() {
        let a = classified(itm(&[q(1, 3), q(7, 9)], &[q(2, 3), q(-1, 3), q(-2, 3)]));
        assert!(matches!(
            induce_type1(&a),
            Err(ReductionError::LabelMismatch { .. })
        ));
        let b = classified(itm(&[q(1, 2), q(3, 4)], &[q(1, 2), q(-1, 8), q(-3, 4)]));
        assert!(matches!(
            induce_type2(&b),
            Err(ReductionError::LabelMismatch { .. })
        ));
        let mut forged = b.clone();
        forged.label = CaseLabel::Bi { i: 1 };
        assert!(matches!(
            induce_type2(&forged),
            Err(ReductionError::Invariant(_))
        ));
    }
}
