//! Independent checks for the fast builders.
//!
//! [`elementwise_channel`] re-evaluates every closed form entry by entry with
//! its own scalar loops and boundary rule; it calls nothing from the builder
//! or kernel modules. [`fd_derivative`] and [`numeric_fim`] replace the
//! analytic derivatives with central differences of the builders.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::config::{PathParams, PathSet, SystemConfig};
use crate::error::{Error, Result};
use crate::fim::{FisherMatrix, NoiseModel};
use crate::params::Param;
use crate::pilots::{PilotGrid, SplitMix64};
use crate::scheme::{ChannelMatrix, Scheme};
use crate::C64;

/// Fast builders against the element-wise oracle.
pub const EQUIVALENCE_TOL: f64 = 1e-12;
/// Analytic derivatives against central differences.
pub const FD_TOL: f64 = 1e-6;
/// Analytic Fisher matrix against the finite-difference one.
pub const FIM_TOL: f64 = 1e-5;

fn expj(angle: f64) -> C64 {
    C64::new(angle.cos(), angle.sin())
}

/// Number of leading samples `i` with `iT/M < τ`, i.e. the samples that
/// still carry the previous symbol.
fn samples_before(tau: f64, m: usize, delta_f: f64) -> usize {
    let sample = 1.0 / (m as f64 * delta_f);
    (0..m).filter(|&i| (i as f64) < tau / sample - 1e-9).count()
}

/// Entry-by-entry evaluation of `Ψᵖ` for `scheme`.
pub fn elementwise_channel(
    scheme: Scheme,
    cfg: &SystemConfig,
    path: &PathParams,
) -> Result<ChannelMatrix> {
    let t = 1.0 / cfg.delta_f;
    let tau = path.delay;
    let ok = match scheme {
        Scheme::CpOfdm => tau >= 0.0 && tau <= cfg.cp_s,
        _ => tau >= 0.0 && tau < t,
    };
    if !ok {
        let (limit, rule) = match scheme {
            Scheme::CpOfdm => (cfg.cp_s, "0 <= tau <= T_cp"),
            _ => (t, "0 <= tau < T"),
        };
        return Err(Error::DelayOutOfRange { tau, limit, rule });
    }
    let entries = match scheme {
        Scheme::CpFreeOfdm => cpfree(cfg, path),
        Scheme::CpOfdm => cpofdm(cfg, path),
        Scheme::ZakOtfs => zak(cfg, path),
        Scheme::TwoStepOtfs => twostep(cfg, path),
    };
    Ok(ChannelMatrix {
        scheme,
        param: None,
        entries,
    })
}

fn cpfree(cfg: &SystemConfig, path: &PathParams) -> DMatrix<C64> {
    let (mm, nn, df) = (cfg.m, cfg.n, cfg.delta_f);
    let t = 1.0 / df;
    let h = C64::new(
        path.amplitude * path.phase.cos(),
        path.amplitude * path.phase.sin(),
    );
    let b = samples_before(path.delay, mm, df);
    let mut out = DMatrix::zeros(mm * nn, mm * nn);
    for n_rx in 0..nn {
        for m_rx in 0..mm {
            for n in 0..nn {
                for m in 0..mm {
                    let range = if n == n_rx {
                        b..mm
                    } else if n + 1 == n_rx {
                        0..b
                    } else {
                        continue;
                    };
                    let mut acc = C64::new(0.0, 0.0);
                    for i in range {
                        let phi = m as f64 - m_rx as f64 + path.doppler * t;
                        acc += expj(TAU * phi * i as f64 / mm as f64);
                    }
                    let outer =
                        expj(TAU * (path.doppler * n_rx as f64 * t - m as f64 * df * path.delay));
                    out[(n_rx * mm + m_rx, n * mm + m)] = h / (mm as f64).sqrt() * outer * acc;
                }
            }
        }
    }
    out
}

fn cpofdm(cfg: &SystemConfig, path: &PathParams) -> DMatrix<C64> {
    let (mm, nn, df) = (cfg.m, cfg.n, cfg.delta_f);
    let t = 1.0 / df;
    let t_sym = t + cfg.cp_s;
    let h = C64::new(
        path.amplitude * path.phase.cos(),
        path.amplitude * path.phase.sin(),
    );
    let mut out = DMatrix::zeros(mm * nn, mm * nn);
    for n_rx in 0..nn {
        for m_rx in 0..mm {
            for m in 0..mm {
                let mut dir = C64::new(0.0, 0.0);
                for z in 0..mm {
                    let phi = m as f64 - m_rx as f64 + path.doppler * t;
                    dir += expj(TAU * phi * z as f64 / mm as f64);
                }
                let v = h / (mm as f64).sqrt()
                    * expj(-TAU * m as f64 * df * path.delay)
                    * expj(TAU * path.doppler * (n_rx as f64 * t_sym + cfg.cp_s))
                    * dir;
                out[(n_rx * mm + m_rx, n_rx * mm + m)] = v;
            }
        }
    }
    out
}

fn zak(cfg: &SystemConfig, path: &PathParams) -> DMatrix<C64> {
    let (mm, nn, df) = (cfg.m, cfg.n, cfg.delta_f);
    let t = 1.0 / df;
    let h = C64::new(
        path.amplitude * path.phase.cos(),
        path.amplitude * path.phase.sin(),
    );
    let b = samples_before(path.delay, mm, df);
    let mut out = DMatrix::zeros(mm * nn, mm * nn);
    for k_rx in 0..nn {
        for l_rx in 0..mm {
            for k in 0..nn {
                for l in 0..mm {
                    let mut dir_l = C64::new(0.0, 0.0);
                    for z in 0..mm {
                        let phi = l_rx as f64 - l as f64 - path.delay * df * mm as f64;
                        dir_l += expj(TAU * phi * z as f64 / mm as f64);
                    }
                    let mut dir_k = C64::new(0.0, 0.0);
                    for z in 0..nn {
                        let phi = k as f64 - k_rx as f64 + path.doppler * t * nn as f64;
                        dir_k += expj(TAU * phi * z as f64 / nn as f64);
                    }
                    let mut v = h / ((mm * nn) as f64).sqrt()
                        * expj(TAU * path.doppler * l_rx as f64 * t / mm as f64)
                        * dir_l
                        * dir_k;
                    if l_rx < b {
                        v *= expj(TAU * path.doppler * t) * expj(-TAU * k_rx as f64 / nn as f64);
                    }
                    out[(k_rx * mm + l_rx, k * mm + l)] = v;
                }
            }
        }
    }
    out
}

fn twostep(cfg: &SystemConfig, path: &PathParams) -> DMatrix<C64> {
    let (mm, nn, df) = (cfg.m, cfg.n, cfg.delta_f);
    let t = 1.0 / df;
    let h = C64::new(
        path.amplitude * path.phase.cos(),
        path.amplitude * path.phase.sin(),
    );
    let b = samples_before(path.delay, mm, df);
    let mut out = DMatrix::zeros(mm * nn, mm * nn);
    for k_rx in 0..nn {
        for l_rx in 0..mm {
            for k in 0..nn {
                for l in 0..mm {
                    let mut dir_k = C64::new(0.0, 0.0);
                    for z in 0..nn {
                        let phi = path.doppler * nn as f64 * t - k_rx as f64 + k as f64;
                        dir_k += expj(TAU * phi * z as f64 / nn as f64);
                    }
                    let mut dir_l = C64::new(0.0, 0.0);
                    for z in 0..mm {
                        let phi = l_rx as f64 - l as f64 - path.delay * mm as f64 * df;
                        dir_l += expj(TAU * phi * z as f64 / mm as f64);
                    }
                    let mut v = h / (mm * nn) as f64
                        * expj(TAU * path.doppler * path.delay)
                        * dir_k
                        * dir_l
                        * expj(TAU * path.doppler * l as f64 / (mm as f64 * df));
                    if l + b >= mm {
                        v *= expj(-TAU * (path.doppler * t + k as f64 / nn as f64));
                    }
                    out[(k_rx * mm + l_rx, k * mm + l)] = v;
                }
            }
        }
    }
    out
}

/// Default central-difference step for `param`.
pub fn default_step(cfg: &SystemConfig, path: &PathParams, param: Param) -> f64 {
    match param {
        Param::Delay => 1e-4 / (cfg.m as f64 * cfg.delta_f),
        Param::Doppler => 1e-4 * cfg.delta_f / cfg.n as f64,
        Param::Amplitude => 1e-6 * path.amplitude,
        Param::Phase => 1e-6,
    }
}

/// `(Ψ(θ + h) − Ψ(θ − h)) / 2h` along `param`.
///
/// Refuses steps whose two evaluation points fall on different sides of an
/// ISI boundary, where the closed forms are discontinuous.
pub fn fd_derivative(
    scheme: Scheme,
    cfg: &SystemConfig,
    path: &PathParams,
    param: Param,
    step: f64,
) -> Result<ChannelMatrix> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidStep(step));
    }
    let center = param.get(path);
    let mut lo = *path;
    let mut hi = *path;
    param.set(&mut lo, center - step);
    param.set(&mut hi, center + step);
    if param == Param::Delay && scheme != Scheme::CpOfdm {
        let a = samples_before(lo.delay, cfg.m, cfg.delta_f);
        let b = samples_before(hi.delay, cfg.m, cfg.delta_f);
        if a != b {
            return Err(Error::BranchCrossing {
                param,
                lo: a,
                hi: b,
            });
        }
    }
    let plus = scheme.channel(cfg, &hi)?.entries;
    let minus = scheme.channel(cfg, &lo)?.entries;
    // Divide by the realized spacing rather than 2·step.
    let width = (center + step) - (center - step);
    Ok(ChannelMatrix {
        scheme,
        param: Some(param),
        entries: (plus - minus).map(|z| z / width),
    })
}

/// Fisher matrix from finite-difference derivative matrices at default steps.
pub fn numeric_fim(
    scheme: Scheme,
    cfg: &SystemConfig,
    paths: &PathSet,
    pilots: &PilotGrid,
    noise: &NoiseModel,
) -> Result<FisherMatrix> {
    if pilots.len() != cfg.dim() {
        return Err(Error::PilotLength {
            got: pilots.len(),
            expected: cfg.dim(),
        });
    }
    let noise = NoiseModel::new(noise.sigma2)?;
    let x = DVector::from_column_slice(&pilots.symbols);
    let mut grads: Vec<DVector<C64>> = Vec::new();
    for path in paths {
        for param in Param::ALL {
            let step = default_step(cfg, path, param);
            grads.push(fd_derivative(scheme, cfg, path, param, step)?.entries * &x);
        }
    }
    let n = grads.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for r in 0..n {
        for c in r..n {
            let inner = grads[c].dotc(&grads[r]);
            j[(r, c)] = 2.0 * inner.re / noise.sigma2;
            j[(c, r)] = j[(r, c)];
        }
    }
    let mut fim = FisherMatrix::from_matrix(j)?;
    fim.scheme = Some(scheme);
    fim.config = Some(*cfg);
    Ok(fim)
}

/// Discrepancy between a candidate matrix and a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub max_abs_error: f64,
    /// `‖A − B‖_F / ‖B‖_F` (absolute when `B = 0`).
    pub relative_frobenius_error: f64,
    pub worst_entry_index: (usize, usize),
    pub pass: bool,
}

/// Compare `a` against reference `b`.
pub fn compare(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> Result<ComparisonReport> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            a: a.shape(),
            b: b.shape(),
        });
    }
    let mut max_abs = 0.0;
    let mut worst = (0, 0);
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            let d = (a[(r, c)] - b[(r, c)]).norm();
            if d > max_abs {
                max_abs = d;
                worst = (r, c);
            }
            diff2 += d * d;
            ref2 += b[(r, c)].norm_sqr();
        }
    }
    let rel = if ref2 > 0.0 {
        (diff2 / ref2).sqrt()
    } else {
        diff2.sqrt()
    };
    Ok(ComparisonReport {
        max_abs_error: max_abs,
        relative_frobenius_error: rel,
        worst_entry_index: worst,
        pass: rel <= tol,
    })
}

/// [`compare`] for real matrices.
pub fn compare_real(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<ComparisonReport> {
    compare(
        &a.map(|v| C64::new(v, 0.0)),
        &b.map(|v| C64::new(v, 0.0)),
        tol,
    )
}

/// Seeded configuration and path away from every ISI boundary: the
/// fractional part of `τM/T` lies in `[0.2, 0.8]`, so default delay steps
/// never cross a branch. Spacing is drawn from 15, 30 and 60 kHz.
pub fn random_case(scheme: Scheme, m: usize, n: usize, seed: u64) -> (SystemConfig, PathParams) {
    let mut rng = SplitMix64::new(seed);
    let delta_f = [15e3, 30e3, 60e3][(rng.next_u64() % 3) as usize];
    let cfg = SystemConfig::new(m, n, delta_f);
    let path = random_path(&mut rng, scheme, &cfg);
    (cfg, path)
}

/// One non-boundary path valid for `scheme` under `cfg`.
pub fn random_path(rng: &mut SplitMix64, scheme: Scheme, cfg: &SystemConfig) -> PathParams {
    let sample = cfg.symbol_duration() / cfg.m as f64;
    let max_whole = match scheme {
        // τ ≤ T_cp: whole bins strictly below T_cp / sample − 1.
        Scheme::CpOfdm => ((cfg.cp_s / sample).floor() as u64).saturating_sub(1),
        _ => cfg.m as u64 - 1,
    };
    let whole = rng.next_u64() % (max_whole + 1);
    let frac = rng.uniform(0.2, 0.8);
    let delay = (whole as f64 + frac) * sample;
    PathParams::new(
        rng.uniform(0.2, 1.5),
        rng.uniform(0.0, TAU),
        delay,
        rng.uniform(-0.5, 0.5) * cfg.delta_f,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fim::assemble_fim;
    use crate::pilots::generate_pilots;

    #[test]
    fn identity_cases() {
        let cfg = SystemConfig::new(5, 3, 15e3);
        let p = PathParams::new(1.0, 0.0, 0.0, 0.0);
        let id = DMatrix::<C64>::identity(15, 15);
        let cp = elementwise_channel(Scheme::CpOfdm, &cfg, &p).unwrap();
        assert!(
            compare(&cp.entries, &(&id * C64::new(5f64.sqrt(), 0.0)), 1e-12)
                .unwrap()
                .pass
        );
        let two = elementwise_channel(Scheme::TwoStepOtfs, &cfg, &p).unwrap();
        assert!(compare(&two.entries, &id, 1e-12).unwrap().pass);
    }

    #[test]
    fn matches_fast_builders() {
        for scheme in Scheme::ALL {
            for seed in 0..5 {
                let (cfg, path) = random_case(scheme, 6, 5, seed);
                let fast = scheme.channel(&cfg, &path).unwrap();
                let slow = elementwise_channel(scheme, &cfg, &path).unwrap();
                let r = compare(&fast.entries, &slow.entries, EQUIVALENCE_TOL).unwrap();
                assert!(r.pass, "{scheme} seed {seed}: {r:?}");
            }
        }
    }

    #[test]
    fn compare_self_and_perturbed() {
        let (cfg, path) = random_case(Scheme::ZakOtfs, 4, 4, 3);
        let a = Scheme::ZakOtfs.channel(&cfg, &path).unwrap().entries;
        let r = compare(&a, &a, 0.0).unwrap();
        assert_eq!(r.max_abs_error, 0.0);
        assert_eq!(r.relative_frobenius_error, 0.0);
        assert!(r.pass);
        let mut b = a.clone();
        b[(5, 9)] += C64::new(1e-3, 0.0);
        let r = compare(&b, &a, 1e-6).unwrap();
        assert!(!r.pass);
        assert_eq!(r.worst_entry_index, (5, 9));
        assert!(compare(&a, &DMatrix::zeros(3, 3), 1.0).is_err());
    }

    #[test]
    fn phase_fd_matches_rotation() {
        for scheme in Scheme::ALL {
            let (cfg, path) = random_case(scheme, 6, 4, 11);
            let fd = fd_derivative(scheme, &cfg, &path, Param::Phase, 1e-6).unwrap();
            let exact = scheme
                .channel(&cfg, &path)
                .unwrap()
                .entries
                .map(|z| z * C64::new(0.0, 1.0));
            assert!(compare(&fd.entries, &exact, 1e-8).unwrap().pass);
        }
    }

    #[test]
    fn refuses_branch_crossing() {
        let cfg = SystemConfig::new(8, 4, 15e3);
        let on_boundary = PathParams::new(1.0, 0.0, 3.0 / (8.0 * 15e3), 100.0);
        for scheme in [Scheme::CpFreeOfdm, Scheme::ZakOtfs, Scheme::TwoStepOtfs] {
            let step = default_step(&cfg, &on_boundary, Param::Delay);
            assert!(matches!(
                fd_derivative(scheme, &cfg, &on_boundary, Param::Delay, step),
                Err(Error::BranchCrossing { lo: 3, hi: 4, .. })
            ));
        }
        assert!(matches!(
            fd_derivative(Scheme::ZakOtfs, &cfg, &on_boundary, Param::Delay, 0.0),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn second_order_convergence() {
        for scheme in Scheme::ALL {
            let (cfg, path) = random_case(scheme, 6, 6, 5);
            for param in [Param::Delay, Param::Doppler] {
                let exact = scheme.derivative(&cfg, &path, param).unwrap().entries;
                let h = 100.0 * default_step(&cfg, &path, param);
                let e1 = compare(
                    &fd_derivative(scheme, &cfg, &path, param, h)
                        .unwrap()
                        .entries,
                    &exact,
                    1.0,
                )
                .unwrap()
                .relative_frobenius_error;
                let e2 = compare(
                    &fd_derivative(scheme, &cfg, &path, param, h / 2.0)
                        .unwrap()
                        .entries,
                    &exact,
                    1.0,
                )
                .unwrap()
                .relative_frobenius_error;
                let ratio = e1 / e2;
                assert!(
                    (3.0..=5.0).contains(&ratio),
                    "{scheme} {param}: {e1:e} / {e2:e} = {ratio}"
                );
            }
        }
    }

    #[test]
    fn numeric_fim_properties() {
        let cfg = SystemConfig::new(6, 6, 15e3);
        let pilots = generate_pilots(6, 6, 42);
        let mut rng = SplitMix64::new(77);
        for scheme in Scheme::ALL {
            let paths = PathSet::new(vec![
                random_path(&mut rng, scheme, &cfg),
                random_path(&mut rng, scheme, &cfg),
            ])
            .unwrap();
            let a = numeric_fim(
                scheme,
                &cfg,
                &paths,
                &pilots,
                &NoiseModel::new(0.5).unwrap(),
            )
            .unwrap();
            let b = numeric_fim(
                scheme,
                &cfg,
                &paths,
                &pilots,
                &NoiseModel::new(0.25).unwrap(),
            )
            .unwrap();
            assert_eq!(a.matrix, a.matrix.transpose());
            assert_eq!(b.matrix, a.matrix.map(|v| 2.0 * v));
            let analytic = assemble_fim(
                scheme,
                &cfg,
                &paths,
                &pilots,
                &NoiseModel::new(0.5).unwrap(),
            )
            .unwrap();
            let r = compare_real(&analytic.matrix, &a.matrix, FIM_TOL).unwrap();
            assert!(r.pass, "{scheme}: {r:?}");
        }
    }

    #[test]
    fn random_cases_validate() {
        for scheme in Scheme::ALL {
            for seed in 0..50 {
                let (cfg, path) = random_case(scheme, 8, 8, seed);
                let v = crate::config::validate_config(&cfg, &PathSet::single(path), scheme);
                assert!(v.is_empty(), "{scheme} {seed}: {v:?}");
                let bins = cfg.delay_bins(path.delay);
                let frac = bins - bins.floor();
                assert!((0.2..=0.8).contains(&frac));
            }
        }
    }
}
