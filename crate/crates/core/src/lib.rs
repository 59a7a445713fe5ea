//! Simulation of a single-photon two-qubit processor that encodes one qubit
//! in the photon's path and one in its polarization.
//!
//! The crate models the waveplate optics, groups Hamiltonian terms into
//! measurement settings (including a Bell-basis setting), samples detector
//! counts, and drives a variational eigensolver over the preparation angles.
//! [`noise`] adds waveplate miscalibration and parameter sweeps, and
//! [`formats`] reads and writes the text and CSV files used by the command
//! line tool.

pub mod eigen;
pub mod error;
pub mod formats;
pub mod grouping;
pub mod measurement;
pub mod noise;
pub mod optics;
pub mod optimize;
pub mod pauli;
pub mod rng;
pub mod vqe;
