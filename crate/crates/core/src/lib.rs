//! Numerical machinery for Schwarz-type interior bounds and boundary
//! derivative bounds of sense-preserving harmonic self-maps of the unit
//! disk with a zero of prescribed order.
//!
//! The crate is organized around a small set of carriers:
//!
//! - [`series::ComplexSeries`] — truncated complex power series, the
//!   workhorse for every derivative computation;
//! - [`harmonic::HarmonicMap`] — a pair `(h, g)` of series representing
//!   `w = h + conj(g)`, with Wirtinger calculus and zero-order analysis;
//! - [`bounds`] — closed-form evaluation of the interior and boundary
//!   bounds themselves;
//! - [`transforms`] — disk automorphisms, the directional projection onto
//!   an analytic strip map, and the tangent strip-to-disk transport;
//! - [`verify`] — seeded sample generation, grid verification of every
//!   inequality, and a derivative-free sharpness probe.
//!
//! All numerics are plain `f64`; everything is deterministic in the seed.

pub mod bounds;
pub mod cli;
pub mod harmonic;
pub mod series;
pub mod transforms;
pub mod verify;

pub use harmonic::{GridSpec, HarmonicMap, ZeroOrder};
pub use series::ComplexSeries;
