//! Cramér–Rao lower bounds for multipath delay and Doppler estimation under
//! four multicarrier modem models: CP-free OFDM, CP-OFDM, Zak-OTFS and
//! two-step OTFS.
//!
//! Every scheme is reduced to the same linear observation model
//! `y = Σ_p Ψᵖ x + n`, where `Ψᵖ` is a dense `MN × MN` complex matrix for
//! path `p` and `x` is a known pilot grid. The crate builds `Ψᵖ` and its
//! analytic derivatives with respect to amplitude, phase, delay and Doppler,
//! assembles the Fisher information matrix and inverts it.
//!
//! ```
//! use ddsense_core::{
//!     assemble_fim, crlb, generate_pilots, sigma2_for_snr, PathParams, PathSet, Scheme,
//!     SystemConfig,
//! };
//!
//! let cfg = SystemConfig::new(12, 12, 15e3);
//! let paths = PathSet::new(vec![PathParams::new(1.0, 0.0, 3.33e-6, 500.0)]).unwrap();
//! let pilots = generate_pilots(12, 12, 42);
//! let noise = sigma2_for_snr(Scheme::ZakOtfs, &cfg, &paths, &pilots, 10.0).unwrap();
//! let fim = assemble_fim(Scheme::ZakOtfs, &cfg, &paths, &pilots, &noise).unwrap();
//! let report = crlb(&fim).unwrap();
//! assert!(report.paths[0].tau > 0.0);
//! ```

pub mod config;
pub mod error;
pub mod fim;
pub mod kernels;
pub mod ofdm;
pub mod oracle;
pub mod otfs;
pub mod params;
pub mod pilots;
pub mod scheme;

pub use config::{validate_config, PathParams, PathSet, SystemConfig, Violation};
pub use error::{Error, Result};
pub use fim::{
    assemble_fim, crlb, crlb_unpreconditioned, received_signal, sigma2_for_snr, snr_db, CrlbReport,
    FisherMatrix, NoiseModel, PathCrlb,
};
pub use params::{pack_params, unpack_params, Param, ParamVector};
pub use pilots::{generate_pilots, PilotGrid, SplitMix64};
pub use scheme::{ChannelMatrix, Scheme};

/// Complex sample type used throughout the crate.
pub type C64 = nalgebra::Complex<f64>;
