//! Achievable rate regions of the two-pair pairwise collaborative network.
//!
//! User 1 sends to user 4 (the source pair) while user 2 sends to user 3
//! (the relay pair). Under partial decode-and-forward, user 1 splits its
//! message; user 2 decodes one part and re-encodes it together with its own
//! message, and user 3 forwards it to user 4.
//!
//! The crate evaluates that region for Gaussian channels in closed form
//! ([`gaussian`]), checks every closed form against exact Gaussian
//! log-determinant mutual information ([`oracle`]), compares it with the
//! interference-channel baseline ([`ifc`]), evaluates the general region on
//! finite alphabets ([`discrete`]) and reproduces the Fourier–Motzkin
//! reduction of the general region in exact arithmetic ([`fme`]).
//!
//! ```
//! use pcn_region::{equal_rate_point, ifc_frontier, ifc_region, sweep_region, ChannelConfig, Gains, Grid};
//!
//! let ch = ChannelConfig::unit_power(Gains::uniform(10.0)).validate()?;
//! let pdf = sweep_region(&ch, &Grid::uniform(5))?;
//! let ifc = ifc_frontier(&ifc_region(&ch)?);
//! assert!(equal_rate_point(&pdf)? > equal_rate_point(&ifc)?);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod channel;
pub mod discrete;
pub mod error;
pub mod fme;
pub mod gaussian;
pub mod ifc;
pub mod io;
pub mod oracle;
pub mod region;
pub mod scenario;
pub mod verify;

pub use channel::{capacity_fn, validate_config, Channel, ChannelConfig, Gains, Link, RatePair, RateTriple, SplitParams};
pub use error::{Error, Result};
pub use gaussian::{compute_phis, pdf_region_slice, sweep_region, Grid, PdfRegionSlice, PhiTriple};
pub use ifc::{ifc_frontier, ifc_region, IfcRegion};
pub use region::{equal_rate_point, pareto_extract, Provenance, RateRegion};
