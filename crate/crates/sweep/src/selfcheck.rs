//! Built-in consistency checks: fast builders against the element-wise
//! oracle, analytic derivatives against central differences, and the
//! analytic Fisher matrix against the finite-difference one.

use ddsense_core::oracle::{
    compare, compare_real, default_step, elementwise_channel, fd_derivative, numeric_fim,
    random_case, EQUIVALENCE_TOL, FD_TOL, FIM_TOL,
};
use ddsense_core::{assemble_fim, generate_pilots, NoiseModel, Param, PathSet, Scheme};

const EQUIVALENCE_SEEDS: u64 = 20;
const FD_SEEDS: u64 = 10;
const GRID: usize = 8;

/// Outcome of one suite for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub suite: &'static str,
    pub scheme: Scheme,
    pub cases: usize,
    /// Largest relative Frobenius error seen (infinite if a case errored).
    pub worst: f64,
    pub tol: f64,
    pub pass: bool,
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<12} {:<14} cases={:<3} worst={:.3e} tol={:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.scheme.name(),
            self.cases,
            self.worst,
            self.tol
        )
    }
}

fn line(suite: &'static str, scheme: Scheme, errors: Vec<f64>, tol: f64) -> CheckLine {
    let worst = errors.iter().copied().fold(0.0, f64::max);
    CheckLine {
        suite,
        scheme,
        cases: errors.len(),
        worst,
        tol,
        pass: worst <= tol,
    }
}

pub fn equivalence(scheme: Scheme) -> CheckLine {
    let errors = (0..EQUIVALENCE_SEEDS)
        .map(|seed| {
            let (cfg, path) = random_case(scheme, GRID, GRID, 1000 + seed);
            let fast = scheme.channel(&cfg, &path);
            let slow = elementwise_channel(scheme, &cfg, &path);
            match (fast, slow) {
                (Ok(a), Ok(b)) => compare(&a.entries, &b.entries, EQUIVALENCE_TOL)
                    .map_or(f64::INFINITY, |r| r.relative_frobenius_error),
                _ => f64::INFINITY,
            }
        })
        .collect();
    line("equivalence", scheme, errors, EQUIVALENCE_TOL)
}

pub fn derivatives(scheme: Scheme) -> CheckLine {
    let mut errors = Vec::new();
    for seed in 0..FD_SEEDS {
        let (cfg, path) = random_case(scheme, GRID, GRID, 2000 + seed);
        for param in Param::ALL {
            let analytic = scheme.derivative(&cfg, &path, param);
            let numeric =
                fd_derivative(scheme, &cfg, &path, param, default_step(&cfg, &path, param));
            errors.push(match (analytic, numeric) {
                (Ok(a), Ok(b)) => compare(&a.entries, &b.entries, FD_TOL)
                    .map_or(f64::INFINITY, |r| r.relative_frobenius_error),
                _ => f64::INFINITY,
            });
        }
    }
    line("derivatives", scheme, errors, FD_TOL)
}

pub fn fisher(scheme: Scheme) -> CheckLine {
    let errors = (0..FD_SEEDS)
        .map(|seed| {
            let (cfg, path) = random_case(scheme, GRID, GRID, 3000 + seed);
            let paths = PathSet::single(path);
            let pilots = generate_pilots(cfg.m, cfg.n, seed);
            let noise = NoiseModel::new(1.0).expect("positive");
            let a = assemble_fim(scheme, &cfg, &paths, &pilots, &noise);
            let b = numeric_fim(scheme, &cfg, &paths, &pilots, &noise);
            match (a, b) {
                (Ok(a), Ok(b)) => compare_real(&a.matrix, &b.matrix, FIM_TOL)
                    .map_or(f64::INFINITY, |r| r.relative_frobenius_error),
                _ => f64::INFINITY,
            }
        })
        .collect();
    line("fisher", scheme, errors, FIM_TOL)
}

/// Every suite for every scheme.
pub fn run_all() -> Vec<CheckLine> {
    Scheme::ALL
        .into_iter()
        .flat_map(|s| [equivalence(s), derivatives(s), fisher(s)])
        .collect()
}
