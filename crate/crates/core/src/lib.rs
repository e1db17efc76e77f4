//! Exact real computation with resource-accounted oracle machines.
//!
//! Functions on `[0,1]` are given by names (total string functions) under two
//! representations: [`funcrep::XicName`], whose answers carry their own
//! stability radius, and [`funcrep::KcName`], which pairs a modulus with
//! approximations. Operators run against names through [`machine::Oracle`],
//! which logs every query and charges an abstract cost.

pub mod encodings;
pub mod machine;
pub mod funcrep;
pub mod reals;
pub mod evaluation;
pub mod catalog;
pub mod sopoly;
pub mod translation;
pub mod adversaries;
