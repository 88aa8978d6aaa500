//! Weighted log-rank tests of the G-rho family for right-censored two-sample
//! data, with tools built around one structural fact: exchanging an adjacent
//! G0 member with the G1 member right after it never decreases Z.
//!
//! - [`survival`]: data model, risk tables, pooled Kaplan-Meier estimate
//! - [`grho`]: weighted O, E, V and the Z statistic
//! - [`chain`]: the adjacent-swap chain from "all G0 first" to "all G1 first"
//!   and its monotonicity checks
//! - [`bounds`]: min/max of Z over interleavings consistent with interval data
//! - [`oracle`]: exhaustive reference used by tests and `verify`
//!
//! ```
//! use grho_core::{chain::generate_chain, grho::GrhoConfig, survival::Status::*};
//!
//! let chain = generate_chain(&[Failure, Censored], &[Failure, Failure], &GrhoConfig::new(0.5)?)?;
//! let z = chain.z_values();
//! assert_eq!(z.len(), 5);
//! assert!(z.windows(2).all(|w| w[0] <= w[1]));
//! # Ok::<(), grho_core::Error>(())
//! ```

pub mod bounds;
pub mod chain;
pub mod error;
pub mod exec;
pub mod grho;
pub mod oracle;
pub mod survival;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
