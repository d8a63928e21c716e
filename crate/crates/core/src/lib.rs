//! Perturbative simulation of noisy encoded T-gate constructions on the
//! seven-qubit CSS code.

pub mod errpoly;
pub mod noise;
pub mod pauli;
pub mod protocols;
pub mod statevec;
pub mod steane;
pub mod tomography;
pub mod reference;
pub mod tables;
pub mod cli;
