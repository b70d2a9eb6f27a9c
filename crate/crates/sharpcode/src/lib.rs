//! Sharp spherical codes and universal polarization/energy lower bounds.
//!
//! The crate builds the classical quadrature machinery behind linear
//! programming bounds for discrete potentials on the sphere:
//!
//! * [`orthopoly`] — Gegenbauer and adjacent Jacobi polynomials normalized
//!   to 1 at t = 1, moments of the projected surface measure, expansions.
//! * [`quadrature`] — Gauss-Gegenbauer, polarization lower bound (PULB)
//!   case (i)/(ii), Levenshtein 1/N, and Skip 1-Add 2 rules, each certified
//!   for exactness and weight positivity.
//! * [`codes`] — explicit coordinates for every catalog configuration, from
//!   the regular N-gon through the kissing configurations of E8 and the
//!   Leech lattice, together with the universal-minimum witness points.
//! * [`potentials`] — potential kernels, confluent divided differences,
//!   Hermite interpolants, and the modified interpolants with an
//!   annihilated Gegenbauer component.
//! * [`verify`] — moment tests, distance distributions, bound evaluation,
//!   attainment checks at witnesses, empirical minimization, facet checks.

pub mod codes;
pub(crate) mod dd;
pub mod error;
pub mod golay;
pub mod orthopoly;
pub mod potentials;
pub mod quadrature;
pub mod report;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
