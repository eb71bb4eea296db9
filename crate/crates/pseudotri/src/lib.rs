//! Cluster algebras of type D through centrally symmetric pseudotriangulations of a
//! punctured 2n-gon.
//!
//! Modules, bottom up:
//! * [`geometry`]: chords, crossings, pseudotriangulations, faces, flips, enumeration.
//! * [`laurent`]: exact Laurent polynomials with big-integer coefficients.
//! * [`cluster`]: quivers, seeds, mutation, cluster variables and d-vectors.
//! * [`matching`]: openings, incidence graphs and the perfect matching formula.
//! * [`coxeter`]: signed permutations, the word `Q_c`, subword facets and root labels.
//! * [`cli`] and [`service`]: the command line and the HTTP session API.

pub mod cli;
pub mod cluster;
pub mod coxeter;
pub mod geometry;
pub mod laurent;
pub mod matching;
pub mod service;

pub use cluster::{Quiver, Seed};
pub use geometry::{Chord, Classification, CsPair, Dn, Face, Pseudotriangulation, Side};
pub use laurent::LaurentPoly;
