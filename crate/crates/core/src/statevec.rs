//! Dense pure-state simulation.
//!
//! Qubit 0 is the most significant bit of the amplitude index, so
//! `|q0 q1 ... q(n-1)>` has index `q0·2^(n-1) + ... + q(n-1)`. Circuit
//! figures are transcribed top to bottom as qubits `0..n`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{Pauli, PauliString};

pub const MAX_QUBITS: usize = 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("gate {gate} acts on {expected} qubits, got {got}")]
    ArityMismatch {
        gate: Gate,
        expected: usize,
        got: usize,
    },
    #[error("repeated target qubit {0}")]
    RepeatedTarget(usize),
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
    #[error("{0} qubits exceeds the {MAX_QUBITS}-qubit limit")]
    TooManyQubits(usize),
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
}

/// Measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

/// The gate set used by every circuit in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H,
    X,
    Y,
    Z,
    /// `diag(1, e^{iπ/4})`.
    T,
    /// Control first, target second.
    Cnot,
    /// Controlled-M: on control 1 the target maps `|0> -> e^{-iπ/4}|1>`,
    /// `|1> -> e^{iπ/4}|0>`.
    Cm,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::Cnot | Gate::Cm => 2,
            _ => 1,
        }
    }

    /// Row-major unitary matrix (2×2 or 4×4). For two-qubit gates the first
    /// target is the more significant index bit.
    pub fn matrix(self) -> Vec<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let w = Complex64::from_polar(1.0, FRAC_PI_4);
        let h = FRAC_1_SQRT_2;
        match self {
            Gate::H => vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
            Gate::X => vec![ZERO, ONE, ONE, ZERO],
            Gate::Y => vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO],
            Gate::Z => vec![ONE, ZERO, ZERO, c(-1.0, 0.0)],
            Gate::T => vec![ONE, ZERO, ZERO, w],
            Gate::Cnot => {
                let mut m = vec![ZERO; 16];
                m[0] = ONE;
                m[5] = ONE;
                m[2 * 4 + 3] = ONE;
                m[3 * 4 + 2] = ONE;
                m
            }
            Gate::Cm => {
                let mut m = vec![ZERO; 16];
                m[0] = ONE;
                m[5] = ONE;
                m[2 * 4 + 3] = w;
                m[3 * 4 + 2] = w.conj();
                m
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::H => "H",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::T => "T",
            Gate::Cnot => "CNOT",
            Gate::Cm => "CM",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A state vector over `n_qubits`. Branch states produced by projections are
/// left unnormalized; `normalized` records which kind this is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
    normalized: bool,
}

impl PureState {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "too many qubits");
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        PureState {
            n_qubits,
            amps,
            normalized: true,
        }
    }

    /// Basis state from a bit string, qubit 0 first, e.g. `"1000000"`.
    pub fn from_bits(bits: &str) -> Self {
        let n = bits.len();
        let index = bits
            .chars()
            .fold(0usize, |acc, b| (acc << 1) | usize::from(b == '1'));
        Self::basis(n, index)
    }

    /// Wraps raw amplitudes; the normalized flag is set when the norm is 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(StateError::BadLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(StateError::TooManyQubits(n_qubits));
        }
        let mut s = PureState {
            n_qubits,
            amps,
            normalized: false,
        };
        s.normalized = (s.norm_sqr() - 1.0).abs() < 1e-10;
        Ok(s)
    }

    /// `cos(alpha)|0> + e^{i beta} sin(alpha)|1>` on one qubit.
    pub fn qubit(alpha: f64, beta: f64) -> Self {
        let amps = vec![
            Complex64::new(alpha.cos(), 0.0),
            Complex64::from_polar(alpha.sin(), beta),
        ];
        Self::from_amplitudes(amps).expect("two amplitudes")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        self.normalized = false;
        &mut self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm; a zero vector is left untouched.
    pub fn normalize(&mut self) -> f64 {
        let n2 = self.norm_sqr();
        if n2 > 0.0 {
            let s = 1.0 / n2.sqrt();
            self.amps.iter_mut().for_each(|a| *a *= s);
            self.normalized = true;
        }
        n2
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
        self.normalized = self.normalized && (factor.norm_sqr() - 1.0).abs() < 1e-12;
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64, StateError> {
        if self.n_qubits != other.n_qubits {
            return Err(StateError::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<target|self>|^2`. For an unnormalized branch this is its
    /// probability-weighted overlap.
    pub fn overlap_fidelity(&self, target: &PureState) -> Result<f64, StateError> {
        Ok(target.inner(self)?.norm_sqr())
    }

    /// `self ⊗ other`, with `other`'s qubits appended after this state's.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let n = self.n_qubits + other.n_qubits;
        assert!(n <= MAX_QUBITS, "too many qubits");
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState {
            n_qubits: n,
            amps,
            normalized: self.normalized && other.normalized,
        }
    }

    /// Appends a fresh `|0>` qubit as the new last (least significant) qubit.
    pub fn push_zero(&mut self) {
        assert!(self.n_qubits < MAX_QUBITS, "too many qubits");
        let mut amps = vec![ZERO; self.amps.len() * 2];
        for (i, a) in self.amps.iter().enumerate() {
            amps[2 * i] = *a;
        }
        self.amps = amps;
        self.n_qubits += 1;
    }

    fn check(&self, targets: &[usize]) -> Result<(), StateError> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n_qubits {
                return Err(StateError::IndexOutOfRange {
                    index: t,
                    n_qubits: self.n_qubits,
                });
            }
            if targets[..i].contains(&t) {
                return Err(StateError::RepeatedTarget(t));
            }
        }
        Ok(())
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    pub fn apply_gate(&mut self, gate: Gate, targets: &[usize]) -> Result<(), StateError> {
        if targets.len() != gate.arity() {
            return Err(StateError::ArityMismatch {
                gate,
                expected: gate.arity(),
                got: targets.len(),
            });
        }
        self.check(targets)?;
        match gate {
            Gate::X => self.apply_pauli(Pauli::X, targets[0]),
            Gate::Y => self.apply_pauli(Pauli::Y, targets[0]),
            Gate::Z => self.apply_pauli(Pauli::Z, targets[0]),
            Gate::Cnot => {
                let (mc, mt) = (self.mask(targets[0]), self.mask(targets[1]));
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::H | Gate::T => {
                let m = gate.matrix();
                self.apply_1q(&m, targets[0]);
            }
            Gate::Cm => {
                let m = gate.matrix();
                self.apply_2q(&m, targets[0], targets[1]);
            }
        }
        Ok(())
    }

    fn apply_1q(&mut self, m: &[Complex64], qubit: usize) {
        let mask = self.mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = m[0] * a0 + m[1] * a1;
                self.amps[i | mask] = m[2] * a0 + m[3] * a1;
            }
        }
    }

    fn apply_2q(&mut self, m: &[Complex64], q0: usize, q1: usize) {
        let (m0, m1) = (self.mask(q0), self.mask(q1));
        for i in 0..self.amps.len() {
            if i & (m0 | m1) == 0 {
                let idx = [i, i | m1, i | m0, i | m0 | m1];
                let a = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|c| m[r * 4 + c] * a[c]).sum();
                }
            }
        }
    }

    /// Applies a Pauli to one qubit. Panics on a bad index.
    pub fn apply_pauli(&mut self, p: Pauli, qubit: usize) {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range");
        let mask = self.mask(qubit);
        match p {
            Pauli::I => {}
            Pauli::X => {
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Pauli::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
            Pauli::Y => {
                let im = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                        self.amps[i] = -im * a1;
                        self.amps[i | mask] = im * a0;
                    }
                }
            }
        }
    }

    /// Applies a Pauli string whose qubit `k` acts on `qubits[k]`.
    pub fn apply_pauli_string(&mut self, s: &PauliString, qubits: &[usize]) {
        for (p, &q) in s.0.iter().zip(qubits) {
            self.apply_pauli(*p, q);
        }
    }

    /// Projects `qubit` onto `outcome` in `basis`, keeping the qubit.
    /// Returns the unnormalized branch and its probability (squared norm).
    pub fn measure_project(
        &self,
        qubit: usize,
        basis: Basis,
        outcome: bool,
    ) -> Result<(PureState, f64), StateError> {
        self.check(&[qubit])?;
        let mut s = self.clone();
        s.normalized = false;
        if basis == Basis::X {
            s.apply_gate(Gate::H, &[qubit])?;
        }
        let mask = s.mask(qubit);
        for (i, a) in s.amps.iter_mut().enumerate() {
            if (i & mask != 0) != outcome {
                *a = ZERO;
            }
        }
        if basis == Basis::X {
            s.apply_gate(Gate::H, &[qubit])?;
        }
        let p = s.norm_sqr();
        Ok((s, p))
    }

    /// Projects `qubit` onto `outcome` in `basis` and removes it from the
    /// register. The result is unnormalized.
    pub fn project_out(&self, qubit: usize, basis: Basis, outcome: bool) -> PureState {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range");
        let mask = self.mask(qubit);
        let low = mask - 1;
        let half = self.amps.len() / 2;
        let mut amps = Vec::with_capacity(half);
        let h = FRAC_1_SQRT_2;
        for j in 0..half {
            let i0 = ((j & !low) << 1) | (j & low);
            let i1 = i0 | mask;
            let a = match (basis, outcome) {
                (Basis::Z, false) => self.amps[i0],
                (Basis::Z, true) => self.amps[i1],
                (Basis::X, false) => (self.amps[i0] + self.amps[i1]) * h,
                (Basis::X, true) => (self.amps[i0] - self.amps[i1]) * h,
            };
            amps.push(a);
        }
        PureState {
            n_qubits: self.n_qubits - 1,
            amps,
            normalized: false,
        }
    }

    /// Expectation value `<self|P|self>` of a Pauli string on `qubits`.
    pub fn pauli_expectation(&self, s: &PauliString, qubits: &[usize]) -> Complex64 {
        let mut t = self.clone();
        t.apply_pauli_string(s, qubits);
        self.inner(&t).expect("same register")
    }
}
