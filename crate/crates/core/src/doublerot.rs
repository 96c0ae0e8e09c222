//! Double rotations `f_(a,b,c)`: `{x + a}` on `[0, c)` and `{x + b}` on `[c, 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::interval::HalfOpenInterval;
use crate::itm::{Itm, ItmError};
use crate::rational::Rational;
use crate::typing::{detect_type_with, DetectConfig, TypeVerdict, TypingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DoubleRotationError {
    #[error("cut point c = {0} must lie in (0, 1)")]
    CutOutOfRange(Rational),
    #[error("point {0} is outside [0, 1)")]
    OutOfDomain(Rational),
}

/// Parameters `(a, b, c) ∈ [0, 1) × [0, 1) × (0, 1)`. Rotation amounts are
/// reduced mod 1 on construction.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDoubleRotation", into = "RawDoubleRotation")]
pub struct DoubleRotation {
    a: Rational,
    b: Rational,
    c: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawDoubleRotation {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl TryFrom<RawDoubleRotation> for DoubleRotation {
    type Error = DoubleRotationError;
    fn try_from(raw: RawDoubleRotation) -> Result<Self, Self::Error> {
        DoubleRotation::new(raw.a, raw.b, raw.c)
    }
}

impl From<DoubleRotation> for RawDoubleRotation {
    fn from(f: DoubleRotation) -> Self {
        RawDoubleRotation {
            a: f.a,
            b: f.b,
            c: f.c,
        }
    }
}

impl DoubleRotation {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, DoubleRotationError> {
        if !c.is_positive() || c >= Rational::one() {
            return Err(DoubleRotationError::CutOutOfRange(c));
        }
        Ok(DoubleRotation {
            a: a.fract_part(),
            b: b.fract_part(),
            c,
        })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `a = b`: a single circle rotation.
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, DoubleRotationError> {
        if x.is_negative() || x >= &Rational::one() {
            return Err(DoubleRotationError::OutOfDomain(x.clone()));
        }
        let shift = if x < &self.c { &self.a } else { &self.b };
        Ok((x + shift).fract_part())
    }

    /// The same map as a canonical ITM of one to four pieces. Fails when
    /// exactly one of `a`, `b` is zero, since a fixed arc next to a moving
    /// one is not an ITM with nonzero translations.
    pub fn to_itm(&self) -> Result<Itm, ItmError> {
        let one = Rational::one();
        let mut pieces: Vec<(HalfOpenInterval, Rational)> = Vec::with_capacity(4);
        let mut push = |l: &Rational, r: &Rational, g: Rational| {
            if let Some(iv) = HalfOpenInterval::try_new(l.clone(), r.clone()) {
                match pieces.last_mut() {
                    Some((last, lg)) if *lg == g => {
                        *last = HalfOpenInterval::try_new(last.left().clone(), r.clone())
                            .expect("extends a nonempty piece");
                    }
                    _ => pieces.push((iv, g)),
                }
            }
        };
        let zero = Rational::zero();
        // x + s wraps past 1 exactly for x ≥ 1 - s
        for (lo, hi, s) in [(&zero, &self.c, &self.a), (&self.c, &one, &self.b)] {
            let wrap = &one - s;
            let split = wrap.clone().clamp(lo.clone(), hi.clone());
            push(lo, &split, s.clone());
            push(&split, hi, s - &one);
        }
        Itm::from_pieces_on(&HalfOpenInterval::unit(), &pieces)
    }

    pub fn detect_type(
        &self,
        config: &DetectConfig,
    ) -> Result<TypeVerdict, DoubleRotationTypeError> {
        let t = self.to_itm()?;
        Ok(detect_type_with(&t, config)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DoubleRotationTypeError {
    #[error(transparent)]
    Itm(#[from] ItmError),
    #[error(transparent)]
    Typing(#[from] TypingError),
}

impl fmt::Display for DoubleRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f(a={}, b={}, c={})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for DoubleRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
