//! Numeric realization of the current-theoretic layer on model spaces:
//! pointwise operator fields from twisting data, ε-regularized pairings
//! with test forms on uniform grids, and Richardson-extrapolated limits
//! with reported error estimates.

pub mod cochain;
pub mod form;
pub mod opfield;
pub mod pairing;
pub mod pointform;
pub mod quad;
pub mod schedule;
pub mod svd;
