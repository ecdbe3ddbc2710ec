//! Finite complex-exponential sums shared by the channel builders.
//!
//! All sums are evaluated term by term; no closed forms are used.

use std::f64::consts::TAU;
use std::ops::Range;

use crate::C64;

/// Real affine weight `alpha + beta·i` applied to term `i` of a sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineWeight {
    pub alpha: f64,
    pub beta: f64,
}

impl AffineWeight {
    pub const ONE: AffineWeight = AffineWeight {
        alpha: 1.0,
        beta: 0.0,
    };

    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// Weight `i` (pure index).
    pub fn index() -> Self {
        Self::new(0.0, 1.0)
    }
}

/// `Dir(φ, Z) = Σ_{z=0}^{Z-1} e^{j2πφz/Z}`.
pub fn dirichlet(phi: f64, z: usize) -> C64 {
    let step = TAU * phi / z as f64;
    (0..z).map(|i| C64::from_polar(1.0, step * i as f64)).sum()
}

/// `Σ_{i ∈ range} (α + β·i) e^{j2πφi/Z}`. An empty range gives zero.
pub fn weighted_exp_sum(phi: f64, z: usize, range: Range<usize>, weight: AffineWeight) -> C64 {
    debug_assert!(range.end <= z, "range end {} exceeds Z={}", range.end, z);
    let step = TAU * phi / z as f64;
    range
        .map(|i| {
            let w = weight.alpha + weight.beta * i as f64;
            C64::from_polar(1.0, step * i as f64) * w
        })
        .sum()
}
