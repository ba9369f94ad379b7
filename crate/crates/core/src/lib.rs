//! Entanglement monogamy between two spatially superposed particles and the
//! field that couples them.
//!
//! The state of two particles, each in a superposition of two trajectories,
//! is fixed by five coherence functionals ([`state::CoherenceParams`]).
//! [`regimes`] maps physical inputs to those functionals, [`measures`] and
//! [`discord`] evaluate entanglement and correlation measures on the state,
//! [`worldline`] checks the electromagnetic functionals against direct
//! quadrature and [`sweep`] runs parameter grids.
//!
//! ```
//! use monogamy::measures::{conditional_entropy, negativity, EntropyConfig};
//! use monogamy::regimes::{params_near, RegimeInput};
//!
//! let out = params_near(&RegimeInput::near(3.0, 0.3, 0.8)).unwrap();
//! let s = conditional_entropy(&out.params, EntropyConfig::NATS).unwrap();
//! assert!(s < 0.0);
//! assert!(negativity(&out.params) > 0.29);
//! ```

pub mod discord;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod regimes;
pub mod state;
pub mod sweep;
pub mod worldline;

pub use error::{Error, Result};
pub use measures::{CorrelationClass, EntropyConfig, LogBase, MeasureReport};
pub use regimes::{Regime, RegimeInput, RegimeOutput};
pub use state::{build_rho_ab, CoherenceParams, DensityMatrix4, Subsystem};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// The guide's chapters, compiled so that every snippet in them runs as a doctest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/state.md")]
    mod state {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/regimes.md")]
    mod regimes {}
    #[doc = include_str!("../../../book/src/worldline.md")]
    mod worldline {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
