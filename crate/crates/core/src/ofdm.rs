//! Time-frequency channel matrices for CP-free OFDM and CP-OFDM.
//!
//! Both models sample each received symbol `M` times at spacing `T/M` and
//! apply an `M`-point unitary DFT. Without a CP, the first `⌈τM/T⌉` samples of
//! symbol `n'` still carry symbol `n'−1`, giving a block lower-bidiagonal
//! `Ψᵖ`. With a CP at least as long as the delay, `Ψᵖ` is block diagonal.

use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::config::{require_delay_below_symbol, PathParams, SystemConfig};
use crate::error::{Error, Result};
use crate::kernels::{dirichlet, weighted_exp_sum, AffineWeight};
use crate::params::Param;
use crate::scheme::{gain_derivative, ChannelMatrix, Scheme};
use crate::C64;

const J: C64 = C64::new(0.0, 1.0);

/// Which entry-wise quantity a builder evaluates.
#[derive(Clone, Copy, PartialEq)]
enum Quantity {
    Value,
    DelayDerivative,
    DopplerDerivative,
}

/// Index of `m - m'` in a table spanning `-(M-1)..=(M-1)`.
#[inline]
fn diff_index(m: usize, m_rx: usize, size: usize) -> usize {
    m + size - 1 - m_rx
}

pub fn build_cpfree(cfg: &SystemConfig, path: &PathParams) -> Result<ChannelMatrix> {
    cpfree(cfg, path, Quantity::Value, None)
}

/// Partial derivative of the CP-free channel. The ISI boundary `⌈τM/T⌉` is
/// held fixed, so the delay derivative is one-sided at integer `τM/T`.
pub fn build_cpfree_deriv(
    cfg: &SystemConfig,
    path: &PathParams,
    param: Param,
) -> Result<ChannelMatrix> {
    match param {
        Param::Delay => cpfree(cfg, path, Quantity::DelayDerivative, Some(param)),
        Param::Doppler => cpfree(cfg, path, Quantity::DopplerDerivative, Some(param)),
        Param::Amplitude | Param::Phase => gain_derivative(build_cpfree(cfg, path)?, path, param),
    }
}

fn cpfree(
    cfg: &SystemConfig,
    path: &PathParams,
    what: Quantity,
    param: Option<Param>,
) -> Result<ChannelMatrix> {
    require_delay_below_symbol(cfg, path.delay)?;
    let (m_sz, n_sz) = (cfg.m, cfg.n);
    let t = cfg.symbol_duration();
    let boundary = cfg.isi_boundary(path.delay);
    let nu_t = path.doppler * t;
    let scale = path.gain() * (1.0 / (m_sz as f64).sqrt());

    // Per-column factor e^{-j2πmΔfτ}, with the delay derivative's -j2πmΔf folded in.
    let col: Vec<C64> = (0..m_sz)
        .map(|m| {
            let f = m as f64 * cfg.delta_f;
            let c = C64::from_polar(1.0, -TAU * f * path.delay);
            match what {
                Quantity::DelayDerivative => c * (-J * TAU * f),
                _ => c,
            }
        })
        .collect();

    let mut out = DMatrix::<C64>::zeros(cfg.dim(), cfg.dim());
    let mut cur = vec![C64::new(0.0, 0.0); 2 * m_sz - 1];
    let mut isi = vec![C64::new(0.0, 0.0); 2 * m_sz - 1];
    for n_rx in 0..n_sz {
        // Sum weights: 1, or j2π(n'T + iT/M) for the Doppler derivative.
        let (weight, factor) = match what {
            Quantity::DopplerDerivative => {
                (AffineWeight::new(n_rx as f64 * t, t / m_sz as f64), J * TAU)
            }
            _ => (AffineWeight::ONE, C64::new(1.0, 0.0)),
        };
        for (idx, d) in (-(m_sz as isize - 1)..m_sz as isize).enumerate() {
            let phi = d as f64 + nu_t;
            cur[idx] = weighted_exp_sum(phi, m_sz, boundary..m_sz, weight) * factor;
            isi[idx] = weighted_exp_sum(phi, m_sz, 0..boundary, weight) * factor;
        }
        let row_phase = C64::from_polar(1.0, TAU * path.doppler * n_rx as f64 * t);
        for m_rx in 0..m_sz {
            let row = n_rx * m_sz + m_rx;
            for m in 0..m_sz {
                let common = scale * (row_phase * col[m]);
                let k = diff_index(m, m_rx, m_sz);
                out[(row, n_rx * m_sz + m)] = common * cur[k];
                if n_rx > 0 && boundary > 0 {
                    out[(row, (n_rx - 1) * m_sz + m)] = common * isi[k];
                }
            }
        }
    }
    Ok(ChannelMatrix {
        scheme: Scheme::CpFreeOfdm,
        param,
        entries: out,
    })
}

pub fn build_cpofdm(cfg: &SystemConfig, path: &PathParams) -> Result<ChannelMatrix> {
    cpofdm(cfg, path, Quantity::Value, None)
}

pub fn build_cpofdm_deriv(
    cfg: &SystemConfig,
    path: &PathParams,
    param: Param,
) -> Result<ChannelMatrix> {
    match param {
        Param::Delay => cpofdm(cfg, path, Quantity::DelayDerivative, Some(param)),
        Param::Doppler => cpofdm(cfg, path, Quantity::DopplerDerivative, Some(param)),
        Param::Amplitude | Param::Phase => gain_derivative(build_cpofdm(cfg, path)?, path, param),
    }
}

fn cpofdm(
    cfg: &SystemConfig,
    path: &PathParams,
    what: Quantity,
    param: Option<Param>,
) -> Result<ChannelMatrix> {
    if !(path.delay >= 0.0 && path.delay <= cfg.cp_s) {
        return Err(Error::DelayOutOfRange {
            tau: path.delay,
            limit: cfg.cp_s,
            rule: "0 <= tau <= T_cp",
        });
    }
    let m_sz = cfg.m;
    let t = cfg.symbol_duration();
    let t_sym = cfg.cp_symbol_duration();
    let nu_t = path.doppler * t;
    let scale = path.gain() * (1.0 / (m_sz as f64).sqrt());

    let col: Vec<C64> = (0..m_sz)
        .map(|m| {
            let f = m as f64 * cfg.delta_f;
            C64::from_polar(1.0, -TAU * f * path.delay)
        })
        .collect();
    let dir: Vec<C64> = (-(m_sz as isize - 1)..m_sz as isize)
        .map(|d| dirichlet(d as f64 + nu_t, m_sz))
        .collect();

    let mut out = DMatrix::<C64>::zeros(cfg.dim(), cfg.dim());
    for n_rx in 0..cfg.n {
        let start = n_rx as f64 * t_sym + cfg.cp_s;
        let row_phase = C64::from_polar(1.0, TAU * path.doppler * start);
        let weighted: Vec<C64> = if what == Quantity::DopplerDerivative {
            let w = AffineWeight::new(start, t / m_sz as f64);
            (-(m_sz as isize - 1)..m_sz as isize)
                .map(|d| weighted_exp_sum(d as f64 + nu_t, m_sz, 0..m_sz, w) * (J * TAU))
                .collect()
        } else {
            Vec::new()
        };
        for m_rx in 0..m_sz {
            let row = n_rx * m_sz + m_rx;
            for m in 0..m_sz {
                let k = diff_index(m, m_rx, m_sz);
                let common = scale * (row_phase * col[m]);
                out[(row, n_rx * m_sz + m)] = match what {
                    Quantity::Value => common * dir[k],
                    Quantity::DelayDerivative => {
                        common * dir[k] * (-J * TAU * (m as f64 * cfg.delta_f))
                    }
                    Quantity::DopplerDerivative => common * weighted[k],
                };
            }
        }
    }
    Ok(ChannelMatrix {
        scheme: Scheme::CpOfdm,
        param,
        entries: out,
    })
}
