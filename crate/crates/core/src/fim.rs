//! Fisher information and Cramér–Rao bounds under white Gaussian noise.
//!
//! For `y ~ CN(Σ_p Ψᵖx, σ²I)` with known pilots `x`, the Fisher matrix over
//! `θ = [a_1, φ_1, τ_1, ν_1, …]` is
//! `J_ij = (2/σ²) Re{ (∂Ψ/∂θ_j x)ᴴ (∂Ψ/∂θ_i x) }`.

use nalgebra::{DMatrix, DVector};

use crate::config::{PathSet, SystemConfig};
use crate::error::{Error, Result};
use crate::params::Param;
use crate::pilots::PilotGrid;
use crate::scheme::Scheme;
use crate::C64;

/// Eigenvalues of the diagonally scaled Fisher matrix below this fraction of
/// the largest one are treated as zero.
pub const SINGULAR_RCOND: f64 = 1e-12;

/// Negative eigenvalues beyond `-INDEFINITE_TOL · trace` are rejected as indefinite.
pub const INDEFINITE_TOL: f64 = 1e-9;

/// Circular white noise with per-sample variance `sigma2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma2: f64,
}

impl NoiseModel {
    pub fn new(sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidNoise(sigma2));
        }
        Ok(Self { sigma2 })
    }
}

/// Real symmetric `4P × 4P` Fisher information matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    pub matrix: DMatrix<f64>,
    pub scheme: Option<Scheme>,
    pub snr_db: Option<f64>,
    pub config: Option<SystemConfig>,
}

impl FisherMatrix {
    /// Wrap a raw matrix; its side must be a positive multiple of four.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || !n.is_multiple_of(4) || matrix.ncols() != n {
            return Err(Error::ParamLength(n));
        }
        Ok(Self {
            matrix,
            scheme: None,
            snr_db: None,
            config: None,
        })
    }

    pub fn num_paths(&self) -> usize {
        self.matrix.nrows() / 4
    }

    pub fn index(path: usize, param: Param) -> usize {
        4 * path + param.offset()
    }

    pub fn get(&self, path_i: usize, pi: Param, path_j: usize, pj: Param) -> f64 {
        self.matrix[(Self::index(path_i, pi), Self::index(path_j, pj))]
    }
}

/// Bounds for one path, in the units of the parameter squared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCrlb {
    pub amp: f64,
    /// rad².
    pub phase: f64,
    /// s².
    pub tau: f64,
    /// Hz².
    pub nu: f64,
}

impl PathCrlb {
    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::Amplitude => self.amp,
            Param::Phase => self.phase,
            Param::Delay => self.tau,
            Param::Doppler => self.nu,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrlbReport {
    pub scheme: Option<Scheme>,
    pub snr_db: Option<f64>,
    pub config: Option<SystemConfig>,
    /// Condition number of the Fisher matrix after unit-diagonal scaling.
    pub condition: f64,
    pub paths: Vec<PathCrlb>,
}

impl CrlbReport {
    fn from_diagonal(fim: &FisherMatrix, diag: &[f64], condition: f64) -> Self {
        let paths = diag
            .chunks_exact(4)
            .map(|c| PathCrlb {
                amp: c[Param::Amplitude.offset()],
                phase: c[Param::Phase.offset()],
                tau: c[Param::Delay.offset()],
                nu: c[Param::Doppler.offset()],
            })
            .collect();
        Self {
            scheme: fim.scheme,
            snr_db: fim.snr_db,
            config: fim.config,
            condition,
            paths,
        }
    }
}

fn check_pilots(cfg: &SystemConfig, pilots: &PilotGrid) -> Result<()> {
    if pilots.len() != cfg.dim() {
        return Err(Error::PilotLength {
            got: pilots.len(),
            expected: cfg.dim(),
        });
    }
    Ok(())
}

/// Noiseless received vector `Σ_p Ψᵖ x`.
pub fn received_signal(
    scheme: Scheme,
    cfg: &SystemConfig,
    paths: &PathSet,
    pilots: &PilotGrid,
) -> Result<DVector<C64>> {
    check_pilots(cfg, pilots)?;
    let x = pilots.as_vector();
    let mut y = DVector::<C64>::zeros(cfg.dim());
    for path in paths {
        y += scheme.channel(cfg, path)?.entries * &x;
    }
    Ok(y)
}

fn received_power(
    scheme: Scheme,
    cfg: &SystemConfig,
    paths: &PathSet,
    pilots: &PilotGrid,
) -> Result<f64> {
    let y = received_signal(scheme, cfg, paths, pilots)?;
    let power: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    if power <= 0.0 || !power.is_finite() {
        return Err(Error::ZeroReceivedPower);
    }
    Ok(power)
}

/// Mean received power per sample over the noise variance, in dB.
pub fn snr_db(
    scheme: Scheme,
    cfg: &SystemConfig,
    paths: &PathSet,
    pilots: &PilotGrid,
    noise: &NoiseModel,
) -> Result<f64> {
    let power = received_power(scheme, cfg, paths, pilots)?;
    Ok(10.0 * (power / (cfg.dim() as f64 * noise.sigma2)).log10())
}

/// Noise variance that places the received signal at `snr_db`.
pub fn sigma2_for_snr(
    scheme: Scheme,
    cfg: &SystemConfig,
    paths: &PathSet,
    pilots: &PilotGrid,
    snr_db: f64,
) -> Result<NoiseModel> {
    let power = received_power(scheme, cfg, paths, pilots)?;
    NoiseModel::new(power / (cfg.dim() as f64 * 10f64.powf(snr_db / 10.0)))
}

/// Analytic Fisher matrix.
pub fn assemble_fim(
    scheme: Scheme,
    cfg: &SystemConfig,
    paths: &PathSet,
    pilots: &PilotGrid,
    noise: &NoiseModel,
) -> Result<FisherMatrix> {
    check_pilots(cfg, pilots)?;
    NoiseModel::new(noise.sigma2)?;
    let x = pilots.as_vector();
    let mut grads = Vec::with_capacity(4 * paths.len());
    for path in paths {
        for param in Param::ALL {
            grads.push(scheme.derivative(cfg, path, param)?.entries * &x);
        }
    }
    let mut fim = FisherMatrix::from_matrix(gram(&grads, noise.sigma2))?;
    fim.scheme = Some(scheme);
    fim.config = Some(*cfg);
    fim.snr_db = snr_db(scheme, cfg, paths, pilots, noise).ok();
    Ok(fim)
}

/// `(2/σ²) Re{u_jᴴ u_i}`, each unordered pair evaluated once.
fn gram(grads: &[DVector<C64>], sigma2: f64) -> DMatrix<f64> {
    let n = grads.len();
    let c = 2.0 / sigma2;
    let mut out = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let re: f64 = grads[j]
                .iter()
                .zip(grads[i].iter())
                .map(|(a, b)| a.re * b.re + a.im * b.im)
                .sum();
            out[(i, j)] = c * re;
            out[(j, i)] = out[(i, j)];
        }
    }
    out
}

fn check_symmetric(j: &DMatrix<f64>) -> Result<()> {
    let scale = j.amax();
    let n = j.nrows();
    for r in 0..n {
        for c in r + 1..n {
            if (j[(r, c)] - j[(c, r)]).abs() > 1e-12 * scale {
                return Err(Error::AsymmetricFim);
            }
        }
    }
    Ok(())
}

/// Diagonal of `J⁻¹`, computed on `Ĵ = DJD` with `D = diag(1/√J_ii)` and
/// mapped back as `(Ĵ⁻¹)_ii / J_ii`.
///
/// Fails if `Ĵ` has an eigenvalue below `-1e-9·trace` (indefinite) or below
/// `1e-12` of its largest eigenvalue (singular).
pub fn crlb(fim: &FisherMatrix) -> Result<CrlbReport> {
    let j = &fim.matrix;
    check_symmetric(j)?;
    let n = j.nrows();
    for i in 0..n {
        let d = j[(i, i)];
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::SingularFim {
                condition: f64::INFINITY,
                eigenvalue: d,
            });
        }
    }
    let d: Vec<f64> = (0..n).map(|i| 1.0 / j[(i, i)].sqrt()).collect();
    let scaled = DMatrix::from_fn(n, n, |r, c| d[r] * j[(r, c)] * d[c]);

    let eig = scaled.clone().symmetric_eigen();
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if lo < -INDEFINITE_TOL * scaled.trace() {
        return Err(Error::IndefiniteFim {
            condition,
            eigenvalue: lo,
        });
    }
    if lo <= SINGULAR_RCOND * hi {
        return Err(Error::SingularFim {
            condition,
            eigenvalue: lo,
        });
    }
    let inv = scaled
        .cholesky()
        .ok_or(Error::SingularFim {
            condition,
            eigenvalue: lo,
        })?
        .inverse();
    let diag: Vec<f64> = (0..n).map(|i| inv[(i, i)] / j[(i, i)]).collect();
    Ok(CrlbReport::from_diagonal(fim, &diag, condition))
}

/// Diagonal of `J⁻¹` by a Cholesky factorization of `J` itself, without the
/// diagonal scaling. Kept for cross-checking [`crlb`].
pub fn crlb_unpreconditioned(fim: &FisherMatrix) -> Result<CrlbReport> {
    let j = &fim.matrix;
    check_symmetric(j)?;
    let eig = j.clone().symmetric_eigen();
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let inv = j
        .clone()
        .cholesky()
        .ok_or(Error::SingularFim {
            condition,
            eigenvalue: lo,
        })?
        .inverse();
    let diag: Vec<f64> = (0..j.nrows()).map(|i| inv[(i, i)]).collect();
    Ok(CrlbReport::from_diagonal(fim, &diag, condition))
}
