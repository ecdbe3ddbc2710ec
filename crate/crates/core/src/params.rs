//! Packing of path parameters into the real vector `θ ∈ R^{4P}`.

use std::fmt;

use crate::config::{PathParams, PathSet};
use crate::error::{Error, Result};

/// The four per-path parameters, in packing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Amplitude,
    Phase,
    Delay,
    Doppler,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Amplitude, Param::Phase, Param::Delay, Param::Doppler];

    /// Offset within a path's block of four.
    pub fn offset(self) -> usize {
        match self {
            Param::Amplitude => 0,
            Param::Phase => 1,
            Param::Delay => 2,
            Param::Doppler => 3,
        }
    }

    pub fn get(self, path: &PathParams) -> f64 {
        match self {
            Param::Amplitude => path.amplitude,
            Param::Phase => path.phase,
            Param::Delay => path.delay,
            Param::Doppler => path.doppler,
        }
    }

    pub fn set(self, path: &mut PathParams, value: f64) {
        match self {
            Param::Amplitude => path.amplitude = value,
            Param::Phase => path.phase = value,
            Param::Delay => path.delay = value,
            Param::Doppler => path.doppler = value,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::Amplitude => "amp",
            Param::Phase => "phase",
            Param::Delay => "tau",
            Param::Doppler => "nu",
        })
    }
}

/// `[a_1, φ_1, τ_1, ν_1, a_2, …]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn pack_params(paths: &PathSet) -> ParamVector {
    ParamVector(
        paths
            .iter()
            .flat_map(|p| Param::ALL.map(|q| q.get(p)))
            .collect(),
    )
}

pub fn unpack_params(theta: &ParamVector) -> Result<PathSet> {
    if theta.is_empty() || !theta.len().is_multiple_of(4) {
        return Err(Error::ParamLength(theta.len()));
    }
    let paths = theta
        .0
        .chunks_exact(4)
        .map(|c| PathParams::new(c[0], c[1], c[2], c[3]))
        .collect();
    PathSet::new(paths)
}
