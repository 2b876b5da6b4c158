//! Numerical tolerances shared by every module.
//!
//! All values are either absolute constants or factors meant to be multiplied
//! by a set's `bound_hint`, which carries the geometric scale of the problem.

use serde::{Deserialize, Serialize};

/// Relative slack on support values: `tol_val = VAL_REL * (1 + |sigma|)`.
pub const VAL_REL: f64 = 1e-8;
/// Cluster merge radius as a fraction of `bound_hint`.
pub const CLUSTER_REL: f64 = 1e-5;
/// Singleton diameter threshold as a fraction of `bound_hint`.
pub const DIAM_REL: f64 = 1e-4;
/// Gauge bisection stops once the bracket is below `BIS_REL * (1 + t)`.
pub const BIS_REL: f64 = 1e-10;
pub const BIS_MAX_ITER: usize = 200;
/// Doublings (upward) and halvings (downward) allowed while bracketing.
pub const BRACKET_STEPS: usize = 60;
/// Below this scale the gauge is declared zero.
pub const GAUGE_FLOOR: f64 = 1e-12;
/// Separation required before a strict inequality is tested.
pub const STRICT_REL: f64 = 1e-7;
/// Boundary points located along rays are accurate to this relative width.
pub const BOUNDARY_REL: f64 = 1e-9;
/// Probe radii for interior tests, as fractions of `bound_hint`.
pub const INTERIOR_RADII: [f64; 9] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10];
/// Minimum chord length, as a fraction of `bound_hint`, for conditions that
/// ask whether a chord point is interior. Shorter chords bow inward by less
/// than the smallest probe radius.
pub const CHORD_SEP_REL: f64 = 1e-2;
/// Finite-difference step relative to the norm of the evaluation point.
pub const FD_REL: f64 = 1e-5;
/// Number of cone directions used to test membership in `E_C`.
pub const E_DIRECTIONS: usize = 64;
/// Translation length for the `E_C` test, as a fraction of `bound_hint`. Interior
/// points closer than this to the boundary pass the test, so it is kept small.
pub const E_STEP_REL: f64 = 1e-9;
/// Multistart count for support maximisation.
pub const MULTISTART: usize = 32;
/// Times `bound_hint` may be doubled when a maximiser hits the search box.
pub const MAX_EXPANSIONS: usize = 6;
pub const DEFAULT_SEED: u64 = 3_735_928_559;

/// Overridable tolerance factors, all relative as documented on the constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub val: f64,
    pub cluster: f64,
    pub diam: f64,
    pub bis: f64,
    pub strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            val: VAL_REL,
            cluster: CLUSTER_REL,
            diam: DIAM_REL,
            bis: BIS_REL,
            strict: STRICT_REL,
        }
    }
}

impl Tolerances {
    pub fn val_abs(&self, sigma: f64) -> f64 {
        self.val * (1.0 + sigma.abs())
    }
}
