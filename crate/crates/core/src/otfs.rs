//! Delay-Doppler channel matrices for Zak-OTFS and two-step OTFS.
//!
//! Row `k'M + l'` is received Doppler bin `k'`, delay bin `l'`; column
//! `kM + l` is the transmitted symbol `x[k, l]`. Both models assume `τ < T`,
//! so at most one preceding symbol period contributes and each entry has two
//! branches selected by the delay index relative to `⌈τM/T⌉`.
//!
//! Normalizations differ between the two: the Zak receiver carries
//! `1/√(MN)` and the two-step receiver `1/(MN)`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::config::{require_delay_below_symbol, PathParams, SystemConfig};
use crate::error::Result;
use crate::kernels::{dirichlet, weighted_exp_sum, AffineWeight};
use crate::params::Param;
use crate::scheme::{gain_derivative, ChannelMatrix, Scheme};
use crate::C64;

const J: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq)]
enum Quantity {
    Value,
    DelayDerivative,
    DopplerDerivative,
}

/// Values of `f(d)` for `d = -(size-1) ..= size-1`, indexed by `d + size - 1`.
fn diff_table(size: usize, f: impl Fn(f64) -> C64) -> Vec<C64> {
    (-(size as isize - 1)..size as isize)
        .map(|d| f(d as f64))
        .collect()
}

pub fn build_zak(cfg: &SystemConfig, path: &PathParams) -> Result<ChannelMatrix> {
    zak(cfg, path, Quantity::Value, None)
}

pub fn build_zak_deriv(
    cfg: &SystemConfig,
    path: &PathParams,
    param: Param,
) -> Result<ChannelMatrix> {
    match param {
        Param::Delay => zak(cfg, path, Quantity::DelayDerivative, Some(param)),
        Param::Doppler => zak(cfg, path, Quantity::DopplerDerivative, Some(param)),
        Param::Amplitude | Param::Phase => gain_derivative(build_zak(cfg, path)?, path, param),
    }
}

/// Zak receiver: delay bins `l' ≥ ⌈τM/T⌉` see the current symbol period;
/// bins below it see the previous one and pick up `e^{j2πνT} e^{-j2πk'/N}`.
fn zak(
    cfg: &SystemConfig,
    path: &PathParams,
    what: Quantity,
    param: Option<Param>,
) -> Result<ChannelMatrix> {
    require_delay_below_symbol(cfg, path.delay)?;
    let (m_sz, n_sz) = (cfg.m, cfg.n);
    let t = cfg.symbol_duration();
    let boundary = cfg.isi_boundary(path.delay);
    let tau_bins = cfg.delay_bins(path.delay);
    let nu_bins = path.doppler * t * n_sz as f64;
    let scale = path.gain() * (1.0 / ((m_sz * n_sz) as f64).sqrt());

    // Delay kernel over l' - l. For the delay derivative,
    // ∂/∂τ Σ_m e^{j2π(l'-l-τΔfM)m/M} = -j2πΔf Σ_m m e^{…}.
    let delay_kernel = diff_table(m_sz, |d| match what {
        Quantity::DelayDerivative => {
            weighted_exp_sum(d - tau_bins, m_sz, 0..m_sz, AffineWeight::index())
                * (-J * TAU * cfg.delta_f)
        }
        _ => dirichlet(d - tau_bins, m_sz),
    });
    // Doppler kernel over k - k' (not needed by the Doppler derivative, which
    // weights the sum per row).
    let doppler_kernel = if what == Quantity::DopplerDerivative {
        Vec::new()
    } else {
        diff_table(n_sz, |e| dirichlet(e + nu_bins, n_sz))
    };

    let mut out = DMatrix::<C64>::zeros(cfg.dim(), cfg.dim());
    let mut row_kernel = vec![C64::new(0.0, 0.0); 2 * n_sz - 1];
    for l_rx in 0..m_sz {
        let delay_time = l_rx as f64 * t / m_sz as f64;
        let previous = l_rx < boundary;
        let base = C64::from_polar(1.0, TAU * path.doppler * delay_time);
        let wrap = if previous {
            C64::from_polar(1.0, TAU * path.doppler * t)
        } else {
            C64::new(1.0, 0.0)
        };
        if what == Quantity::DopplerDerivative {
            // ∂/∂ν of e^{j2πν(l'T/M [+T])} Σ_n e^{j2π(k-k'+νTN)n/N}
            //   = j2π e^{…} Σ_n (l'T/M [+T] + nT) e^{j2π(k-k'+νTN)n/N}.
            let offset = if previous { delay_time + t } else { delay_time };
            let w = AffineWeight::new(offset, t);
            for (slot, e) in row_kernel
                .iter_mut()
                .zip(-(n_sz as isize - 1)..n_sz as isize)
            {
                *slot = weighted_exp_sum(e as f64 + nu_bins, n_sz, 0..n_sz, w) * (J * TAU);
            }
        }
        for k_rx in 0..n_sz {
            let row = k_rx * m_sz + l_rx;
            let mut row_phase = base * wrap;
            if previous {
                row_phase *= C64::from_polar(1.0, -TAU * k_rx as f64 / n_sz as f64);
            }
            let common = scale * row_phase;
            for k in 0..n_sz {
                let e = k + n_sz - 1 - k_rx;
                let dop = if what == Quantity::DopplerDerivative {
                    row_kernel[e]
                } else {
                    doppler_kernel[e]
                };
                for l in 0..m_sz {
                    let d = l_rx + m_sz - 1 - l;
                    out[(row, k * m_sz + l)] = common * (delay_kernel[d] * dop);
                }
            }
        }
    }
    Ok(ChannelMatrix {
        scheme: Scheme::ZakOtfs,
        param,
        entries: out,
    })
}

pub fn build_twostep(cfg: &SystemConfig, path: &PathParams) -> Result<ChannelMatrix> {
    twostep(cfg, path, Quantity::Value, None)
}

pub fn build_twostep_deriv(
    cfg: &SystemConfig,
    path: &PathParams,
    param: Param,
) -> Result<ChannelMatrix> {
    match param {
        Param::Delay => twostep(cfg, path, Quantity::DelayDerivative, Some(param)),
        Param::Doppler => twostep(cfg, path, Quantity::DopplerDerivative, Some(param)),
        Param::Amplitude | Param::Phase => gain_derivative(build_twostep(cfg, path)?, path, param),
    }
}

/// Two-step receiver: transmit delay bins `l ≥ M - ⌈τM/T⌉` overlap the next
/// symbol period and pick up `e^{-j2π(νT + k/N)}`.
fn twostep(
    cfg: &SystemConfig,
    path: &PathParams,
    what: Quantity,
    param: Option<Param>,
) -> Result<ChannelMatrix> {
    require_delay_below_symbol(cfg, path.delay)?;
    let (m_sz, n_sz) = (cfg.m, cfg.n);
    let t = cfg.symbol_duration();
    let boundary = cfg.isi_boundary(path.delay);
    let wrap_start = m_sz - boundary;
    let tau_bins = cfg.delay_bins(path.delay);
    let nu_bins = path.doppler * t * n_sz as f64;
    let scale = path.gain() * (1.0 / (m_sz * n_sz) as f64);
    let bulk = C64::from_polar(1.0, TAU * path.doppler * path.delay);

    // ∂/∂τ of e^{j2πντ} Σ_m e^{j2π(l'-l-τMΔf)m/M} = j2π Σ_m (ν - mΔf) e^{…}·e^{j2πντ}.
    let delay_kernel = diff_table(m_sz, |d| match what {
        Quantity::DelayDerivative => {
            let w = AffineWeight::new(path.doppler, -cfg.delta_f);
            weighted_exp_sum(d - tau_bins, m_sz, 0..m_sz, w) * (J * TAU)
        }
        _ => dirichlet(d - tau_bins, m_sz),
    });
    let doppler_kernel = if what == Quantity::DopplerDerivative {
        Vec::new()
    } else {
        diff_table(n_sz, |e| dirichlet(e + nu_bins, n_sz))
    };

    let mut out = DMatrix::<C64>::zeros(cfg.dim(), cfg.dim());
    let mut col_kernel = vec![C64::new(0.0, 0.0); 2 * n_sz - 1];
    for l in 0..m_sz {
        let delay_time = l as f64 * t / m_sz as f64;
        let wrapped = l >= wrap_start;
        let col_phase = bulk * C64::from_polar(1.0, TAU * path.doppler * delay_time);
        if what == Quantity::DopplerDerivative {
            // ∂/∂ν: weights (lT/M + nT + τ [−T]) from e^{j2πν(τ + lT/M)},
            // the kernel sum and the e^{-j2πνT} wrap factor.
            let offset = delay_time + path.delay - if wrapped { t } else { 0.0 };
            let w = AffineWeight::new(offset, t);
            for (slot, e) in col_kernel
                .iter_mut()
                .zip(-(n_sz as isize - 1)..n_sz as isize)
            {
                *slot = weighted_exp_sum(e as f64 + nu_bins, n_sz, 0..n_sz, w) * (J * TAU);
            }
        }
        for k in 0..n_sz {
            let col = k * m_sz + l;
            let mut phase = col_phase;
            if wrapped {
                phase *= C64::from_polar(1.0, -TAU * (path.doppler * t + k as f64 / n_sz as f64));
            }
            let common = scale * phase;
            for k_rx in 0..n_sz {
                let e = k + n_sz - 1 - k_rx;
                let dop = if what == Quantity::DopplerDerivative {
                    col_kernel[e]
                } else {
                    doppler_kernel[e]
                };
                for l_rx in 0..m_sz {
                    let d = l_rx + m_sz - 1 - l;
                    out[(k_rx * m_sz + l_rx, col)] = common * (delay_kernel[d] * dop);
                }
            }
        }
    }
    Ok(ChannelMatrix {
        scheme: Scheme::TwoStepOtfs,
        param,
        entries: out,
    })
}
