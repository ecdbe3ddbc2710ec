use thiserror::Error;

use crate::config::Violation;
use crate::params::Param;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {}", format_violations(.0))]
    InvalidConfig(Vec<Violation>),

    #[error("delay {tau:e} s outside the admissible range (limit {limit:e} s, {rule})")]
    DelayOutOfRange {
        tau: f64,
        limit: f64,
        rule: &'static str,
    },

    #[error("amplitude derivative undefined for a zero-amplitude path")]
    ZeroAmplitude,

    #[error("parameter vector length {0} is not a positive multiple of 4")]
    ParamLength(usize),

    #[error("pilot grid has {got} symbols, expected {expected}")]
    PilotLength { got: usize, expected: usize },

    #[error("received signal power is zero; SNR undefined")]
    ZeroReceivedPower,

    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoise(f64),

    #[error("Fisher matrix is singular (condition {condition:e}, eigenvalue {eigenvalue:e})")]
    SingularFim { condition: f64, eigenvalue: f64 },

    #[error("Fisher matrix is indefinite (condition {condition:e}, eigenvalue {eigenvalue:e})")]
    IndefiniteFim { condition: f64, eigenvalue: f64 },

    #[error("Fisher matrix is not symmetric")]
    AsymmetricFim,

    #[error("finite-difference step for {param} crosses an ISI boundary ({lo} vs {hi})")]
    BranchCrossing { param: Param, lo: usize, hi: usize },

    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("matrix shapes differ: {a:?} vs {b:?}")]
    ShapeMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
