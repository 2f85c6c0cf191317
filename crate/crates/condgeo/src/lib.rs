//! Condition lengths of paths in spaces of monic univariate polynomials,
//! variational approximation of condition-metric geodesics by Bezier
//! control nets, and a prediction-correction root tracker whose step
//! counts the lengths bound.

pub mod bezier;
pub mod cli;
pub mod condlength;
pub mod geodesic;
pub mod paths;
pub mod polyspace;
pub mod tracker;

pub use bezier::ControlNet;
pub use condlength::{condition_length, euclidean_length, toy_length, QuadConfig, QuadResult};
pub use paths::ParamPath;
pub use polyspace::MonicPoly;
