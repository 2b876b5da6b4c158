//! Support functions, maximiser sets and gauges of closed sets `A` in `R^p`
//! that are unbounded along a closed convex cone `K`, with `A + K ⊂ A`.
//!
//! The support function `σ_A(x*) = sup{<x, x*> : x in A}` is finite only on
//! the polar cone `-K#`. Its differentiability at `x*` is decided by the size
//! of the maximiser set, which [`support`] computes numerically. [`conditions`]
//! samples the strict-convexity type conditions that make `σ_A`
//! differentiable and reports replayable witnesses when one fails. [`gauge`]
//! covers `F_A(x) = sup{t > 0 : x/t in A}` and [`cost`] the cost function
//! `c(x*, γ) = -σ_{L(γ)}(-x*)` of a production function with level sets `L(γ)`.
//!
//! ```
//! use suppdiff::fixtures::set_fixture;
//! use suppdiff::support::{is_differentiable_at, support_value};
//! use suppdiff::vector::Vector;
//!
//! let set = set_fixture("hyperbola").unwrap(); // x1 x2 >= 1 on the orthant
//! let y = Vector::new(vec![-1.0, -4.0]).unwrap();
//! assert!((support_value(&set, &y).unwrap().value + 4.0).abs() < 1e-9);
//! assert_eq!(is_differentiable_at(&set, &y).unwrap().gradient.unwrap().len(), 2);
//! ```
//!
//! Sampled checks return `holds_on_sample` or `violated`, never a proof. Runs
//! are deterministic for a given seed regardless of the thread count.

pub mod conditions;
pub mod cli;
pub mod cone;
pub mod cost;
pub mod error;
pub mod fixtures;
pub mod gauge;
pub mod parallel;
pub mod report;
pub mod sampling;
pub mod sets;
pub mod support;
pub mod tol;
pub mod vector;
