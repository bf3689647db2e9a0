//! Phase-space models of microwave-optical quantum transduction.
//!
//! Two schemes are compared throughout: *direct conversion*, where the
//! transducer implements a frequency-domain beamsplitter, and
//! *teleportation-based transduction*, where it generates microwave-optical
//! two-mode squeezing that is consumed by continuous-variable teleportation.
//! Both reduce to phase-insensitive Gaussian channels; the crate computes
//! the channels, quantum-capacity bounds, coherent/cat-state transfer
//! fidelities, and GKP error-correction success probabilities, with
//! independent numerical oracles (a Langevin input-output model and direct
//! Wigner-grid quadrature) for every closed form.
//!
//! # Conventions
//!
//! * ħ = 1, q = (a + a†)/√2, p = i(a† − a)/√2; vacuum variance 1/2.
//! * Quadrature ordering (q₁, p₁, …, qₙ, pₙ).
//! * A coherent state |α⟩ has mean (√2 Re α, √2 Im α).
//! * Channel noise parameters `n_th`/`n_add` are photon numbers; additive
//!   variances σ² per quadrature appear only through
//!   [`channels::reduce_to_additive`] and the transfer-layer formulas,
//!   which is the single bridge between the two unit systems.

pub mod capacity;
pub mod channels;
pub mod dd;
pub mod device;
pub mod error;
pub mod gaussian;
pub mod special;
pub mod teleport;
pub mod transfer;

mod kernel;
mod opt;

pub use channels::{AdditiveReduction, PhaseInsensitiveChannel};
pub use device::{DeviceParams, EntanglementCM, LangevinParams};
pub use error::{Error, Result};
pub use gaussian::{GaussianState, GridSpec, Parity, SymplecticOp, WignerGrid};
pub use teleport::HomodyneOutcome;
pub use transfer::{GkpSpec, SchemeNoiseParams};
