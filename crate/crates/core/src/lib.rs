//! Identification of linear time-invariant plants with a memory regressor
//! extension and a forgetting-factor least-squares estimator.
//!
//! The pipeline is: a [`plant::PlantModel`] driven by an input produces `y`;
//! a [`regressor::LambdaFilter`] bank turns `(u, y)` into the regressor `ω`;
//! [`mre::ExtendedRegression`] accumulates `(Ω, Υ)`; [`estimator::RlsMre`]
//! drives `θ̂` toward the true parameters once `Ω` becomes positive definite.
//!
//! ```
//! use mre_id::harness::{preset, run};
//!
//! let mut cfg = preset("exp1").unwrap();
//! cfg.t_end = 2.0;
//! let result = run(&cfg).unwrap();
//! assert!(result.excitation.t_detect.unwrap() < 1.0);
//! ```

pub mod bounds;
pub mod error;
pub mod estimator;
pub mod excitation;
pub mod harness;
pub mod linalg;
pub mod mre;
pub mod plant;
pub mod regressor;

pub use error::{Error, Result};
pub use estimator::{BaselineState, RlsMre};
pub use mre::ExtendedRegression;
pub use plant::{Multisine, NoiseSpec, PlantModel};
pub use regressor::{LambdaFilter, RegressorState, TrueTheta};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/regression.md")]
    mod regression {}
    #[doc = include_str!("../../../book/src/extension.md")]
    mod extension {}
    #[doc = include_str!("../../../book/src/estimator.md")]
    mod estimator {}
    #[doc = include_str!("../../../book/src/excitation.md")]
    mod excitation {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
