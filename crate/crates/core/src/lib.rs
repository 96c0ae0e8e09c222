//! Exact-arithmetic interval translation maps.
//!
//! The crate represents interval translation maps (ITMs) on `[0, 1)` with
//! rational parameters and provides:
//!
//! - [`rational`] and [`interval`]: exact numbers and canonical half-open
//!   interval sets;
//! - [`itm`]: the map type, its images, mirror symmetry and tightness;
//! - [`typing`]: finite-type detection by iterating `Ω_{n+1} = T Ω_n`;
//! - [`reduction`]: traps, the fitting operator, the classification of tight
//!   three-interval maps and the inductions that reduce them to a double
//!   rotation or a rotation;
//! - [`doublerot`]: double rotations `f_(a,b,c)`;
//! - [`oracle`]: brute-force orbits and first-return maps used to check the
//!   closed-form constructions.

pub mod doublerot;
pub mod interval;
pub mod itm;
pub mod oracle;
pub mod rational;
pub mod reduction;
pub mod typing;

pub use doublerot::DoubleRotation;
pub use interval::{HalfOpenInterval, IntervalSet};
pub use itm::{Itm, ItmError, TightItm};
pub use rational::{q, Rational};
pub use typing::TypeVerdict;
