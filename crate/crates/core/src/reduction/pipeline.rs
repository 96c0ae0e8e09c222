//! The full reduction of a map with at most three pieces.

use serde::{Deserialize, Serialize};

use super::classify::{classify_tight3, CaseLabel};
use super::fitting::{
    drop_edge_interval, fit, reducibility_case, Cell, DroppedEdge, Fitting, ReducibilityVerdict,
};
use super::induction::{
    as_double_rotation, induce_type1, induce_type2, rotation_from_itm2, InducedMap, Induction,
    Rotation,
};
use super::ReductionError;
use crate::doublerot::DoubleRotation;
use crate::interval::HalfOpenInterval;
use crate::itm::Itm;
use crate::typing::{detect_type_with, DetectConfig, TypeVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Terminal {
    DoubleRotation(DoubleRotation),
    Rotation(Rotation),
    /// Classification hit an equality; nothing further is claimed.
    BoundaryStop {
        witness: String,
    },
}

impl Terminal {
    pub fn as_itm(&self) -> Result<Option<Itm>, ReductionError> {
        match self {
            Terminal::DoubleRotation(f) => Ok(Some(f.to_itm()?)),
            Terminal::Rotation(r) => Ok(Some(r.as_itm()?)),
            Terminal::BoundaryStop { .. } => Ok(None),
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Terminal::BoundaryStop { .. })
    }
}

impl From<InducedMap> for Terminal {
    fn from(m: InducedMap) -> Self {
        match m {
            InducedMap::DoubleRotation(f) => Terminal::DoubleRotation(f),
            InducedMap::Rotation(r) => Terminal::Rotation(r),
        }
    }
}

/// Every stage of [`reduce_pipeline`]. Stages that did not run are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub input: Itm,
    pub canonical: Itm,
    pub reducibility: ReducibilityVerdict,
    pub dropped: Option<DroppedEdge>,
    pub trap: Option<HalfOpenInterval>,
    pub cell: Option<Cell>,
    pub fitting: Option<Fitting>,
    pub mirrored: bool,
    pub label: Option<CaseLabel>,
    pub induction: Option<Induction>,
    pub terminal: Terminal,
    /// Finite-type verdict of the terminal map; absent after a boundary stop.
    pub terminal_verdict: Option<TypeVerdict>,
}

pub fn reduce_pipeline(t: &Itm) -> Result<ReductionTrace, ReductionError> {
    reduce_pipeline_with(t, &DetectConfig::default())
}

pub fn reduce_pipeline_with(
    t: &Itm,
    config: &DetectConfig,
) -> Result<ReductionTrace, ReductionError> {
    let canonical = t.canonicalize()?;
    let d = canonical.d();
    if !(2..=3).contains(&d) {
        return Err(ReductionError::WrongPieceCount {
            expected: 3,
            found: d,
        });
    }
    let mut trace = ReductionTrace {
        input: t.clone(),
        canonical: canonical.clone(),
        reducibility: reducibility_case(&canonical),
        dropped: None,
        trap: None,
        cell: None,
        fitting: None,
        mirrored: false,
        label: None,
        induction: None,
        terminal: Terminal::BoundaryStop {
            witness: String::new(),
        },
        terminal_verdict: None,
    };

    trace.terminal = if d == 2 {
        Terminal::Rotation(rotation_from_itm2(&canonical)?)
    } else if let ReducibilityVerdict::Reducible { .. } = trace.reducibility {
        let dropped = drop_edge_interval(&canonical)?;
        let rotation = rotation_from_itm2(&dropped.map)?;
        trace.dropped = Some(dropped);
        Terminal::Rotation(rotation)
    } else {
        let fitting = fit(&canonical)?;
        trace.trap = Some(fitting.trap.clone());
        trace.cell = Some(fitting.first_pass.cell);
        let fitted = fitting.fitted.clone();
        trace.fitting = Some(fitting);
        if fitted.d() == 2 {
            Terminal::Rotation(rotation_from_itm2(&fitted)?)
        } else {
            let c = classify_tight3(&fitted)?;
            trace.mirrored = c.mirrored;
            trace.label = Some(c.label.clone());
            match &c.label {
                CaseLabel::A | CaseLabel::APrime => {
                    Terminal::DoubleRotation(as_double_rotation(&c.map)?)
                }
                CaseLabel::B => induced(&mut trace, induce_type1(&c)?),
                CaseLabel::Bi { .. } | CaseLabel::Ci { .. } => {
                    induced(&mut trace, induce_type2(&c)?)
                }
                CaseLabel::Boundary { witness } => Terminal::BoundaryStop {
                    witness: witness.clone(),
                },
            }
        }
    };

    if let Some(map) = trace.terminal.as_itm()? {
        trace.terminal_verdict = Some(detect_type_with(&map, config)?);
    }
    Ok(trace)
}

fn induced(trace: &mut ReductionTrace, induction: Induction) -> Terminal {
    let terminal = induction.result.clone().into();
    trace.induction = Some(induction);
    terminal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itm::itm;
    use crate::rational::q;

    fn iv(l: crate::rational::Rational, r: crate::rational::Rational) -> HalfOpenInterval {
        HalfOpenInterval::new(l, r).unwrap()
    }

    #[test]
    fn golden_t0() {
        let t = itm(&[q(1, 3), q(2, 3)], &[q(1, 2), q(-1, 4), q(-1, 2)]);
        let tr = reduce_pipeline(&t).unwrap();
        assert_eq!(tr.reducibility, ReducibilityVerdict::Irreducible);
        assert_eq!(tr.trap, Some(iv(q(1, 12), q(5, 6))));
        assert_eq!(
            *tr.fitting.as_ref().unwrap().fitted,
            itm(&[q(1, 3), q(7, 9)], &[q(2, 3), q(-1, 3), q(-2, 3)])
        );
        assert_eq!(tr.label, Some(CaseLabel::A));
        assert_eq!(
            tr.terminal,
            Terminal::DoubleRotation(DoubleRotation::new(q(2, 3), q(1, 3), q(7, 9)).unwrap())
        );
        assert!(tr.terminal_verdict.unwrap().is_finite());
    }

    #[test]
    fn golden_b() {
        let t = itm(&[q(1, 2), q(3, 4)], &[q(1, 2), q(-1, 8), q(-3, 4)]);
        let tr = reduce_pipeline(&t).unwrap();
        assert_eq!(tr.label, Some(CaseLabel::B));
        assert_eq!(
            tr.terminal,
            Terminal::DoubleRotation(DoubleRotation::new(q(2, 3), q(5, 6), q(2, 3)).unwrap())
        );
    }

    #[test]
    fn golden_b1_and_c1() {
        let t = itm(&[q(1, 2), q(5, 8)], &[q(1, 2), q(1, 8), q(-5, 8)]);
        let tr = reduce_pipeline(&t).unwrap();
        assert_eq!(tr.label, Some(CaseLabel::Bi { i: 1 }));
        let Terminal::Rotation(r) = &tr.terminal else {
            panic!("expected a rotation, got {:?}", tr.terminal);
        };
        assert_eq!(
            (r.trap.clone(), r.shift.clone()),
            (iv(q(0, 1), q(1, 2)), q(1, 4))
        );

        let t = itm(&[q(5, 8), q(11, 16)], &[q(3, 8), q(1, 32), q(-11, 16)]);
        let tr = reduce_pipeline(&t).unwrap();
        assert_eq!(tr.label, Some(CaseLabel::Ci { i: 1 }));
        assert_eq!(
            tr.terminal,
            Terminal::DoubleRotation(DoubleRotation::new(q(1, 12), q(1, 6), q(1, 6)).unwrap())
        );
    }

    #[test]
    fn reducible_shortcut() {
        let t = itm(&[q(1, 2), q(3, 4)], &[q(1, 8), q(-1, 4), q(-1, 2)]);
        let tr = reduce_pipeline(&t).unwrap();
        assert!(tr.dropped.is_some());
        assert!(tr.fitting.is_none());
        assert!(matches!(tr.terminal, Terminal::Rotation(_)));
    }

    #[test]
    fn boundary_stop() {
        let t = itm(&[q(1, 4), q(1, 2)], &[q(3, 4), q(-1, 4), q(-1, 2)]);
        let tr = reduce_pipeline(&t).unwrap();
        assert!(tr.terminal.is_boundary());
        assert!(tr.terminal_verdict.is_none());
    }

    #[test]
    fn piece_count_limits() {
        assert!(matches!(
            reduce_pipeline(&Itm::identity()),
            Err(ReductionError::WrongPieceCount { found: 1, .. })
        ));
        let four = itm(
            &[q(1, 4), q(1, 2), q(3, 4)],
            &[q(1, 2), q(1, 4), q(-1, 4), q(-1, 2)],
        );
        assert!(reduce_pipeline(&four).is_err());
        // two adjacent equal translations collapse to a rotation
        let r = itm(&[q(1, 4), q(1, 2)], &[q(1, 2), q(1, 2), q(-1, 2)]);
        let tr = reduce_pipeline(&r).unwrap();
        assert_eq!(tr.canonical.d(), 2);
        assert!(matches!(tr.terminal, Terminal::Rotation(_)));
    }

    #[test]
    fn trace_json_round_trip() {
        let t = itm(&[q(5, 8), q(11, 16)], &[q(3, 8), q(1, 32), q(-11, 16)]);
        let tr = reduce_pipeline(&t).unwrap();
        let s = serde_json::to_string(&tr).unwrap();
        assert_eq!(serde_json::from_str::<ReductionTrace>(&s).unwrap(), tr);
    }
}
