//! Exact and numeric machinery for computing global Ext groups on model
//! spaces (ℂ, ℂ², P¹) through two routes: the total cohomology of a twisted
//! complex built from local free resolutions, and Dolbeault-type
//! representatives obtained from residue currents.
//!
//! The crate is split into an exact layer (Gaussian-rational polynomial
//! algebra, Gröbner bases, syzygies, the nerve cochain algebra and its
//! differentials) and a numeric layer (pointwise Moore–Penrose operator
//! fields, regularized current pairings, partition-of-unity transfer).
//! Everything that can be exact is exact; only genuinely analytic limits
//! are approximated, always with a reported error estimate.
//!
//! `no_std` compatible (requires `alloc`); the companion CLI crate carries
//! scenario files, reporting and orchestration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;




pub mod ext;
pub mod graded;
pub mod groebner;
pub mod jet;

pub mod linalg;
pub mod matrix;


pub mod poly;
pub mod resolution;

pub mod rng;
pub mod sheafext;
pub mod scalar;
pub mod suite;
pub mod transfer;






pub mod cochain;
pub mod nerve;
pub mod numeric;
pub mod symbol;
pub mod twist;

pub use matrix::Mat;
pub use poly::{Poly, PolyMatrix};
pub use scalar::Scalar;
