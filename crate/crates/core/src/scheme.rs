//! Scheme dispatch and the dense channel-matrix container.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::config::{PathParams, SystemConfig};
use crate::error::{Error, Result};
use crate::params::Param;
use crate::{ofdm, otfs, C64};

/// The four modem models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    CpFreeOfdm,
    CpOfdm,
    ZakOtfs,
    TwoStepOtfs,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::CpFreeOfdm,
        Scheme::CpOfdm,
        Scheme::ZakOtfs,
        Scheme::TwoStepOtfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::CpFreeOfdm => "cp_free_ofdm",
            Scheme::CpOfdm => "cp_ofdm",
            Scheme::ZakOtfs => "zak_otfs",
            Scheme::TwoStepOtfs => "two_step_otfs",
        }
    }

    /// True for the schemes whose matrices live in the delay-Doppler domain.
    pub fn is_otfs(self) -> bool {
        matches!(self, Scheme::ZakOtfs | Scheme::TwoStepOtfs)
    }

    pub fn channel(self, cfg: &SystemConfig, path: &PathParams) -> Result<ChannelMatrix> {
        match self {
            Scheme::CpFreeOfdm => ofdm::build_cpfree(cfg, path),
            Scheme::CpOfdm => ofdm::build_cpofdm(cfg, path),
            Scheme::ZakOtfs => otfs::build_zak(cfg, path),
            Scheme::TwoStepOtfs => otfs::build_twostep(cfg, path),
        }
    }

    pub fn derivative(
        self,
        cfg: &SystemConfig,
        path: &PathParams,
        param: Param,
    ) -> Result<ChannelMatrix> {
        match self {
            Scheme::CpFreeOfdm => ofdm::build_cpfree_deriv(cfg, path, param),
            Scheme::CpOfdm => ofdm::build_cpofdm_deriv(cfg, path, param),
            Scheme::ZakOtfs => otfs::build_zak_deriv(cfg, path, param),
            Scheme::TwoStepOtfs => otfs::build_twostep_deriv(cfg, path, param),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown scheme '{}' (expected cp_free_ofdm, cp_ofdm, zak_otfs or two_step_otfs)",
            self.0
        )
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

/// Dense `MN × MN` matrix `Ψᵖ` (or one of its partial derivatives).
///
/// Rows index the receiver grid and columns the transmit grid, both stacked
/// with the slow index (symbol / Doppler bin) outer and the fast index
/// (subcarrier / delay bin) inner.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub scheme: Scheme,
    /// `None` for the channel itself, `Some(p)` for `∂Ψ/∂p`.
    pub param: Option<Param>,
    pub entries: DMatrix<C64>,
}

impl ChannelMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Block `(row_block, col_block)` of size `M × M`.
    pub fn block(&self, m: usize, row_block: usize, col_block: usize) -> DMatrix<C64> {
        self.entries
            .view((row_block * m, col_block * m), (m, m))
            .into_owned()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Amplitude and phase derivatives of any scheme follow from the channel
/// itself, since the gain enters as the common factor `a·e^{jφ}`.
pub(crate) fn gain_derivative(
    parent: ChannelMatrix,
    path: &PathParams,
    param: Param,
) -> Result<ChannelMatrix> {
    let entries = match param {
        Param::Amplitude => {
            if path.amplitude == 0.0 {
                return Err(Error::ZeroAmplitude);
            }
            parent.entries.map(|z| z / path.amplitude)
        }
        Param::Phase => parent.entries.map(|z| C64::new(-z.im, z.re)),
        Param::Delay | Param::Doppler => unreachable!("not a gain parameter"),
    };
    Ok(ChannelMatrix {
        scheme: parent.scheme,
        param: Some(param),
        entries,
    })
}
