//! Entanglement of two static qubits by a spin-1/2 mediator scattered off
//! both of them in one dimension.
//!
//! The mediator X starts in `|↓⟩`, the qubits A (at `x = −d/2`) and B (at
//! `x = +d/2`) in `|↑↑⟩`. When X is later found in `|↑⟩`, exactly one qubit
//! has been flipped and A, B share an entangled state whose quality depends
//! on how X bounced between the sites.
//!
//! - [`closed_form`]: analytic amplitudes for both interaction models.
//! - [`oracle`]: the same amplitudes from a brute-force matching solve.
//! - [`observables`]: concurrence, ratio and detection probability.
//! - [`optimizer`]: resonance, unit-concurrence region and the global optimum.

pub mod closed_form;
pub mod error;
pub mod observables;
pub mod optimizer;
pub mod oracle;
pub mod search;
pub mod types;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use types::{
    AmplitudeSet, Channel, DimensionlessPoint, ModelKind, ObservableSet, PhysicalPoint, Side,
    SideObservables, SiteCoefficients,
};
