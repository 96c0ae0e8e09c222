//! Interval translation maps on `[0, 1)`.
//!
//! An [`Itm`] with `d` pieces is given by breakpoints `0 < β_1 < … < β_{d-1} < 1`
//! and translations `γ_1, …, γ_d`; on `Δ_j = [β_{j-1}, β_j)` it acts as
//! `x ↦ x + γ_j`. Indices in this API are zero-based: `interval(0)` is `Δ_1`.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::interval::{HalfOpenInterval, IntervalSet};
use crate::rational::{common_denominator, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ItmError {
    #[error("an ITM needs at least one piece")]
    NoPieces,
    #[error("{translations} translations given for {breakpoints} breakpoints (need one more translation than breakpoints)")]
    LengthMismatch {
        breakpoints: usize,
        translations: usize,
    },
    #[error("piece {index} has zero length")]
    ZeroLengthInterval { index: usize },
    #[error("breakpoints are not increasing in (0, 1) at position {index}")]
    UnsortedBreakpoints { index: usize },
    #[error("piece {index} has zero translation")]
    ZeroTranslation { index: usize },
    #[error("image of piece {index} escapes [0, 1)")]
    ImageEscapesDomain { index: usize },
    #[error("point {0} is outside [0, 1)")]
    OutOfDomain(Rational),
    #[error("map is not tight: hull of the image is {0}")]
    NotTight(Box<HalfOpenInterval>),
    #[error("pieces do not tile their domain")]
    BadTiling,
}

/// A validated interval translation map.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawItm", into = "RawItm")]
pub struct Itm {
    breakpoints: Vec<Rational>,
    translations: Vec<Rational>,
}

/// Unvalidated wire form: `{ "breakpoints": [...], "translations": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawItm {
    pub breakpoints: Vec<Rational>,
    pub translations: Vec<Rational>,
}

impl TryFrom<RawItm> for Itm {
    type Error = ItmError;
    fn try_from(raw: RawItm) -> Result<Self, ItmError> {
        Itm::new(raw.breakpoints, raw.translations)
    }
}

impl From<Itm> for RawItm {
    fn from(t: Itm) -> Self {
        RawItm {
            breakpoints: t.breakpoints,
            translations: t.translations,
        }
    }
}

impl Itm {
    /// Checks every invariant and builds the map.
    ///
    /// Pieces must have positive length, translations must be nonzero when
    /// there are two or more pieces, and every piece must map into `[0, 1)`.
    /// With a single piece the only valid translation is zero.
    pub fn new(breakpoints: Vec<Rational>, translations: Vec<Rational>) -> Result<Self, ItmError> {
        if translations.is_empty() {
            return Err(ItmError::NoPieces);
        }
        if translations.len() != breakpoints.len() + 1 {
            return Err(ItmError::LengthMismatch {
                breakpoints: breakpoints.len(),
                translations: translations.len(),
            });
        }
        let zero = Rational::zero();
        let one = Rational::one();
        let mut prev = &zero;
        for (i, b) in breakpoints.iter().enumerate() {
            if b == prev {
                return Err(ItmError::ZeroLengthInterval { index: i });
            }
            if b < prev || b > &one {
                return Err(ItmError::UnsortedBreakpoints { index: i });
            }
            prev = b;
        }
        if prev == &one {
            return Err(ItmError::ZeroLengthInterval {
                index: breakpoints.len(),
            });
        }
        let d = translations.len();
        if d >= 2 {
            if let Some(index) = translations.iter().position(Rational::is_zero) {
                return Err(ItmError::ZeroTranslation { index });
            }
        }
        let t = Itm {
            breakpoints,
            translations,
        };
        for (index, (piece, g)) in t.pieces().enumerate() {
            if (piece.left() + g).is_negative() || piece.right() + g > one {
                return Err(ItmError::ImageEscapesDomain { index });
            }
        }
        Ok(t)
    }

    /// The identity on `[0, 1)`, the one-piece degenerate map.
    pub fn identity() -> Self {
        Itm {
            breakpoints: Vec::new(),
            translations: vec![Rational::zero()],
        }
    }

    /// Builds a map from consecutive pieces tiling `domain`, conjugated by
    /// the affine map sending `domain` onto `[0, 1)`.
    pub fn from_pieces_on(
        domain: &HalfOpenInterval,
        pieces: &[(HalfOpenInterval, Rational)],
    ) -> Result<Self, ItmError> {
        let first = pieces.first().ok_or(ItmError::NoPieces)?;
        if first.0.left() != domain.left() || pieces.last().unwrap().0.right() != domain.right() {
            return Err(ItmError::BadTiling);
        }
        if pieces.windows(2).any(|w| w[0].0.right() != w[1].0.left()) {
            return Err(ItmError::BadTiling);
        }
        let scale = domain.length().recip();
        let breakpoints = pieces[1..]
            .iter()
            .map(|(iv, _)| (iv.left() - domain.left()) * &scale)
            .collect();
        let translations = pieces.iter().map(|(_, g)| g * &scale).collect();
        Itm::new(breakpoints, translations)
    }

    pub fn d(&self) -> usize {
        self.translations.len()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn translations(&self) -> &[Rational] {
        &self.translations
    }

    pub fn translation(&self, j: usize) -> &Rational {
        &self.translations[j]
    }

    /// `β_j` for `0 ≤ j ≤ d`, including the implicit `β_0 = 0` and `β_d = 1`.
    pub fn edge(&self, j: usize) -> Rational {
        if j == 0 {
            Rational::zero()
        } else if j == self.d() {
            Rational::one()
        } else {
            self.breakpoints[j - 1].clone()
        }
    }

    /// The zero-based `j`-th piece, `Δ_{j+1}`.
    pub fn interval(&self, j: usize) -> HalfOpenInterval {
        HalfOpenInterval::try_new(self.edge(j), self.edge(j + 1)).expect("validated piece")
    }

    pub fn pieces(&self) -> impl Iterator<Item = (HalfOpenInterval, &Rational)> + '_ {
        (0..self.d()).map(move |j| (self.interval(j), &self.translations[j]))
    }

    /// Image of the `j`-th piece.
    pub fn piece_image(&self, j: usize) -> HalfOpenInterval {
        self.interval(j).translate(&self.translations[j])
    }

    /// Index of the piece containing `x`.
    pub fn piece_index(&self, x: &Rational) -> Result<usize, ItmError> {
        if x.is_negative() || x >= &Rational::one() {
            return Err(ItmError::OutOfDomain(x.clone()));
        }
        Ok(self.breakpoints.partition_point(|b| b <= x))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, ItmError> {
        let j = self.piece_index(x)?;
        Ok(x + &self.translations[j])
    }

    /// Exact point-set image `T(S)` of `S ⊆ [0, 1)`.
    pub fn image(&self, set: &IntervalSet) -> IntervalSet {
        let mut out = Vec::with_capacity(set.len() + self.d());
        let src = set.pieces();
        let mut i = 0;
        for (piece, g) in self.pieces() {
            // skip set pieces that end before this map piece
            while i < src.len() && src[i].right() <= piece.left() {
                i += 1;
            }
            let mut k = i;
            while k < src.len() && src[k].left() < piece.right() {
                if let Some(p) = src[k].intersect(&piece) {
                    out.push(p.translate(g));
                }
                k += 1;
            }
        }
        IntervalSet::normalize(out)
    }

    pub fn image_of_domain(&self) -> IntervalSet {
        self.image(&IntervalSet::unit())
    }

    /// Image of a single interval, kept piecewise: each part of `iv` lying
    /// in one map piece, paired with its translation.
    pub fn split_by_pieces(&self, iv: &HalfOpenInterval) -> Vec<(HalfOpenInterval, Rational)> {
        self.pieces()
            .filter_map(|(p, g)| p.intersect(iv).map(|part| (part, g.clone())))
            .collect()
    }

    /// Conjugate by `x ↦ 1 - x`, re-anchored to half-open pieces.
    pub fn mirror(&self) -> Itm {
        let one = Rational::one();
        Itm {
            breakpoints: self.breakpoints.iter().rev().map(|b| &one - b).collect(),
            translations: self.translations.iter().rev().map(|g| -g).collect(),
        }
    }

    /// `[TΩ) = [Ω)`.
    pub fn is_tight(&self) -> bool {
        let hull = self
            .image_of_domain()
            .hull()
            .expect("image of [0,1) is nonempty");
        hull == HalfOpenInterval::unit()
    }

    /// Merges adjacent pieces with equal translations.
    pub fn canonicalize(&self) -> Result<Itm, ItmError> {
        let mut breakpoints = Vec::with_capacity(self.breakpoints.len());
        let mut translations: Vec<Rational> = vec![self.translations[0].clone()];
        for (b, g) in self.breakpoints.iter().zip(&self.translations[1..]) {
            if Some(g) != translations.last() {
                breakpoints.push(b.clone());
                translations.push(g.clone());
            }
        }
        Itm::new(breakpoints, translations)
    }

    pub fn is_canonical(&self) -> bool {
        self.translations.windows(2).all(|w| w[0] != w[1])
    }

    /// Least common multiple of all parameter denominators.
    pub fn common_denominator(&self) -> BigInt {
        common_denominator(self.breakpoints.iter().chain(&self.translations))
    }
}

impl fmt::Display for Itm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "β=({}) γ=({})",
            join(&self.breakpoints),
            join(&self.translations)
        )
    }
}

impl fmt::Debug for Itm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ITM known to be tight.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Itm", into = "Itm")]
pub struct TightItm(Itm);

impl TryFrom<Itm> for TightItm {
    type Error = ItmError;
    fn try_from(t: Itm) -> Result<Self, ItmError> {
        if t.is_tight() {
            Ok(TightItm(t))
        } else {
            Err(ItmError::NotTight(Box::new(
                t.image_of_domain().hull().expect("nonempty"),
            )))
        }
    }
}

impl From<TightItm> for Itm {
    fn from(t: TightItm) -> Itm {
        t.0
    }
}

impl Deref for TightItm {
    type Target = Itm;
    fn deref(&self) -> &Itm {
        &self.0
    }
}

impl TightItm {
    pub fn into_inner(self) -> Itm {
        self.0
    }
}

impl fmt::Display for TightItm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for TightItm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Shorthand constructor for tests and examples; panics on invalid input.
pub fn itm(breakpoints: &[Rational], translations: &[Rational]) -> Itm {
    Itm::new(breakpoints.to_vec(), translations.to_vec()).expect("valid ITM")
}
