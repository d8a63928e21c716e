//! The seven-qubit CSS code: logical states, the gate encoder, Shor-state
//! ancillas, syndrome fragments, perfect correction and perfect decoding.
//!
//! Qubits of a block are indexed `0..7`. The three parity checks have
//! supports [`SUPPORTS`]; each gives one X-type and one Z-type generator.

use std::sync::OnceLock;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::noise::{CircuitBuilder, NoisyCircuit, Op, Record, Recovery, Target, Wire};
use crate::pauli::{Pauli, PauliString};
use crate::statevec::{Basis, Gate, PureState};

pub const BLOCK: usize = 7;

/// Parity-check supports, shared by the X-type and Z-type generators.
pub const SUPPORTS: [[usize; 4]; 3] = [[3, 4, 5, 6], [1, 2, 5, 6], [0, 2, 4, 6]];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteaneError {
    #[error("Shor states are built with 4 or 7 qubits, not {0}")]
    UnsupportedShorSize(usize),
    #[error("generator index {0} is out of range 1..=3")]
    InvalidGenerator(usize),
}

/// Which error type a syndrome fragment detects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyndromeKind {
    /// Z-type generator, detects `X` errors.
    BitFlip,
    /// X-type generator, detects `Z` errors.
    PhaseFlip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub x_generators: Vec<PauliString>,
    pub z_generators: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub zero: PureState,
    pub one: PureState,
}

impl CodeSpec {
    fn build() -> Self {
        let x_generators: Vec<_> = SUPPORTS
            .iter()
            .map(|s| PauliString::on(BLOCK, Pauli::X, s))
            .collect();
        let z_generators: Vec<_> = SUPPORTS
            .iter()
            .map(|s| PauliString::on(BLOCK, Pauli::Z, s))
            .collect();
        let all: Vec<usize> = (0..BLOCK).collect();
        let logical_x = PauliString::on(BLOCK, Pauli::X, &all);
        let logical_z = PauliString::on(BLOCK, Pauli::Z, &all);

        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << BLOCK];
        let rows: Vec<usize> = SUPPORTS
            .iter()
            .map(|s| s.iter().map(|q| 1usize << (BLOCK - 1 - q)).sum())
            .collect();
        for mask in 0..8usize {
            let word = (0..3)
                .filter(|k| mask >> k & 1 == 1)
                .fold(0, |acc, k| acc ^ rows[k]);
            amps[word] = Complex64::new(1.0 / 8f64.sqrt(), 0.0);
        }
        let zero = PureState::from_amplitudes(amps).expect("128 amplitudes");
        let mut one = zero.clone();
        one.apply_pauli_string(&logical_x, &all);
        CodeSpec {
            x_generators,
            z_generators,
            logical_x,
            logical_z,
            zero,
            one,
        }
    }

    /// Z-type generators first, then X-type; this is the check order used by
    /// [`perfect_ec`] and [`CodeSpec::syndrome`].
    pub fn generators(&self) -> Vec<PauliString> {
        self.z_generators
            .iter()
            .chain(&self.x_generators)
            .cloned()
            .collect()
    }

    /// Bit `k` is set when error `e` anticommutes with generator `k`.
    pub fn syndrome(&self, e: &PauliString) -> usize {
        self.generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.commutes_with(e))
            .map(|(k, _)| 1 << k)
            .sum()
    }

    /// `a|0_L> + b|1_L>`.
    pub fn encode(&self, a: Complex64, b: Complex64) -> PureState {
        let amps = self
            .zero
            .amplitudes()
            .iter()
            .zip(self.one.amplitudes())
            .map(|(z, o)| a * z + b * o)
            .collect();
        PureState::from_amplitudes(amps).expect("same length")
    }

    /// `(|0_L> + e^{iπ/4}|1_L>)/√2`.
    pub fn theta(&self) -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        self.encode(
            Complex64::new(h, 0.0),
            Complex64::from_polar(h, std::f64::consts::FRAC_PI_4),
        )
    }
}

/// The shared code description.
pub fn code() -> &'static CodeSpec {
    static CODE: OnceLock<CodeSpec> = OnceLock::new();
    CODE.get_or_init(CodeSpec::build)
}

pub fn logical_basis() -> (PureState, PureState) {
    (code().zero.clone(), code().one.clone())
}

/// `(|0> + e^{iπ/4}|1>)/√2`.
pub fn theta_qubit() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_amplitudes(vec![
        Complex64::new(h, 0.0),
        Complex64::from_polar(h, std::f64::consts::FRAC_PI_4),
    ])
    .expect("two amplitudes")
}

/// Gate sequence of the encoder: the information qubit is copied onto a
/// weight-3 logical-X support, then each pivot is put in `|+>` and fanned out
/// over the rest of its stabilizer row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderLayout {
    pub info: usize,
    pub info_targets: Vec<usize>,
    pub pivots: Vec<usize>,
    /// `(control, target)` pairs in circuit order.
    pub fanout: Vec<(usize, usize)>,
}

impl EncoderLayout {
    /// The layout used throughout the crate.
    pub fn standard() -> Self {
        EncoderLayout {
            info: 0,
            info_targets: vec![5, 6],
            pivots: vec![1, 2, 3],
            fanout: vec![
                (3, 4),
                (3, 5),
                (3, 6),
                (1, 4),
                (1, 5),
                (1, 0),
                (2, 4),
                (2, 6),
                (2, 0),
            ],
        }
    }

    /// Noiseless gate list, in order.
    pub fn gates(&self) -> Vec<(Gate, Vec<usize>)> {
        let mut out = Vec::new();
        for &t in &self.info_targets {
            out.push((Gate::Cnot, vec![self.info, t]));
        }
        for &p in &self.pivots {
            out.push((Gate::H, vec![p]));
        }
        for &(c, t) in &self.fanout {
            out.push((Gate::Cnot, vec![c, t]));
        }
        out
    }

    /// Applies the noiseless encoder to a 7-qubit state.
    pub fn encode_state(&self, s: &mut PureState) {
        for (g, q) in self.gates() {
            s.apply_gate(g, &q).expect("encoder gate");
        }
    }

    /// Applies the noiseless inverse encoder to a 7-qubit state.
    pub fn decode_state(&self, s: &mut PureState) {
        for (g, q) in self.gates().into_iter().rev() {
            s.apply_gate(g, &q).expect("encoder gate");
        }
    }
}

/// Appends noisy `|0>` initialisations and the encoder gates onto a fresh
/// block. `prep` runs on the information qubit between initialisation and
/// encoding and counts as a single noisy location.
pub fn append_gate_encoder(b: &mut CircuitBuilder, prep: &[Gate]) -> Vec<Wire> {
    let layout = EncoderLayout::standard();
    let block = b.wires(BLOCK);
    for &w in &block {
        b.init(w);
    }
    if let Some((last, rest)) = prep.split_last() {
        for &g in rest {
            b.ideal_gate(g, &[block[layout.info]]);
        }
        b.gate(*last, &[block[layout.info]]);
    }
    for (g, q) in layout.gates() {
        let ws: Vec<Wire> = q.iter().map(|i| block[*i]).collect();
        b.gate(g, &ws);
    }
    block
}

/// The encoder on its own, with `|0_L>` as target.
pub fn build_gate_encoder() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let block = append_gate_encoder(&mut b, &[]);
    b.finish(Some(Target {
        wires: block,
        state: code().zero.clone(),
    }))
}

/// Noisy Shor-state preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct ShorStateSpec {
    pub size: usize,
    /// Qubit pairs whose parity is checked against an ancilla.
    pub verifications: Vec<(usize, usize)>,
    pub hadamards: bool,
}

impl ShorStateSpec {
    pub fn new(size: usize, hadamards: bool) -> Result<Self, SteaneError> {
        let verifications = match size {
            4 => vec![(0, 1)],
            7 => vec![(0, 1), (2, 3), (4, 5)],
            n => return Err(SteaneError::UnsupportedShorSize(n)),
        };
        Ok(ShorStateSpec {
            size,
            verifications,
            hadamards,
        })
    }

    /// Appends the preparation and returns the ancilla wires.
    ///
    /// A cat state is grown along a CNOT chain, each verification pair is
    /// copied onto a fresh qubit that must read `0`, and with `hadamards`
    /// every qubit finally gets an `H`.
    pub fn append(&self, b: &mut CircuitBuilder) -> Vec<Wire> {
        let qs = b.wires(self.size);
        for &q in &qs {
            b.init(q);
        }
        b.gate(Gate::H, &[qs[0]]);
        for k in 1..self.size {
            b.gate(Gate::Cnot, &[qs[k - 1], qs[k]]);
        }
        for &(i, j) in &self.verifications {
            let v = b.wire();
            b.init(v)
                .gate(Gate::Cnot, &[qs[i], v])
                .gate(Gate::Cnot, &[qs[j], v])
                .measure(v, Basis::Z, Record::PostSelect { outcome: false });
        }
        if self.hadamards {
            for &q in &qs {
                b.gate(Gate::H, &[q]);
            }
        }
        qs
    }

    /// Ideal output on the ancilla qubits.
    pub fn ideal_state(&self) -> PureState {
        let n = self.size;
        let mut s = PureState::zero(n);
        s.apply_gate(Gate::H, &[0]).expect("qubit 0");
        for k in 1..n {
            s.apply_gate(Gate::Cnot, &[k - 1, k]).expect("chain");
        }
        if self.hadamards {
            for k in 0..n {
                s.apply_gate(Gate::H, &[k]).expect("qubit");
            }
        }
        s
    }

    /// The preparation as a standalone circuit targeting its ideal state.
    pub fn circuit(&self) -> NoisyCircuit {
        let mut b = CircuitBuilder::new();
        let qs = self.append(&mut b);
        b.finish(Some(Target {
            wires: qs,
            state: self.ideal_state(),
        }))
    }
}

pub fn build_shor_state(size: usize) -> Result<ShorStateSpec, SteaneError> {
    ShorStateSpec::new(size, true)
}

fn generator_support(index: usize) -> Result<[usize; 4], SteaneError> {
    if (1..=3).contains(&index) {
        Ok(SUPPORTS[index - 1])
    } else {
        Err(SteaneError::InvalidGenerator(index))
    }
}

/// Appends one syndrome extraction for generator `index` (1-based) on
/// `block`, post-selected on even parity.
///
/// Bit-flip checks use a Shor state as CNOT targets read in the z basis;
/// phase-flip checks use a bare cat state as CNOT controls read in the x
/// basis.
pub fn append_syndrome(
    b: &mut CircuitBuilder,
    block: &[Wire],
    kind: SyndromeKind,
    index: usize,
) -> Result<(), SteaneError> {
    let support = generator_support(index)?;
    let reg = b.register();
    let hadamards = kind == SyndromeKind::BitFlip;
    let anc = ShorStateSpec::new(4, hadamards)?.append(b);
    for (a, q) in anc.iter().zip(support) {
        match kind {
            SyndromeKind::BitFlip => b.gate(Gate::Cnot, &[block[q], *a]),
            SyndromeKind::PhaseFlip => b.gate(Gate::Cnot, &[*a, block[q]]),
        };
    }
    let basis = match kind {
        SyndromeKind::BitFlip => Basis::Z,
        SyndromeKind::PhaseFlip => Basis::X,
    };
    for a in anc {
        b.measure(a, basis, Record::Parity { register: reg });
    }
    b.post_select_parity(reg, false);
    Ok(())
}

/// One syndrome fragment acting on a noiselessly prepared `|0_L>`.
pub fn build_syndrome_measurement(
    kind: SyndromeKind,
    index: usize,
) -> Result<NoisyCircuit, SteaneError> {
    let mut b = CircuitBuilder::new();
    let block = b.wires(BLOCK);
    b.prepare(&block, code().zero.clone());
    append_syndrome(&mut b, &block, kind, index)?;
    Ok(b.finish(Some(Target {
        wires: block,
        state: code().zero.clone(),
    })))
}

/// Appends every check of `kind`, each extracted twice in a row.
fn append_repeated_checks(b: &mut CircuitBuilder, block: &[Wire], kind: SyndromeKind) {
    for index in 1..=3 {
        for _ in 0..2 {
            append_syndrome(b, block, kind, index).expect("valid generator");
        }
    }
}

/// Seven noisy `|0>` preparations projected onto `|0_L>` by the phase-flip
/// checks.
pub fn append_ft_zero_encoder(b: &mut CircuitBuilder) -> Vec<Wire> {
    let block = b.wires(BLOCK);
    for &w in &block {
        b.init(w);
    }
    append_repeated_checks(b, &block, SyndromeKind::PhaseFlip);
    block
}

pub fn build_ft_zero_encoder() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let block = append_ft_zero_encoder(&mut b);
    b.finish(Some(Target {
        wires: block,
        state: code().zero.clone(),
    }))
}

/// Noisy error correction in the all-zero-syndrome branch: bit-flip checks,
/// then phase-flip checks, each extracted twice.
pub fn append_noisy_ec(b: &mut CircuitBuilder, block: &[Wire]) {
    append_repeated_checks(b, block, SyndromeKind::BitFlip);
    append_repeated_checks(b, block, SyndromeKind::PhaseFlip);
}

pub fn build_noisy_ec() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let block = b.wires(BLOCK);
    b.prepare(&block, code().zero.clone());
    append_noisy_ec(&mut b, &block);
    b.finish(Some(Target {
        wires: block,
        state: code().zero.clone(),
    }))
}

/// Minimal-weight correction for every six-bit syndrome, in the check order
/// of [`CodeSpec::generators`].
pub fn correction_table() -> Vec<PauliString> {
    let c = code();
    let mut table = vec![PauliString::identity(BLOCK); 64];
    for q in 0..BLOCK {
        for p in Pauli::ERRORS {
            let e = PauliString::single(BLOCK, p, q);
            let s = c.syndrome(&e);
            table[s] = e;
        }
    }
    // X and Z errors on different qubits
    for qx in 0..BLOCK {
        for qz in 0..BLOCK {
            if qx == qz {
                continue;
            }
            let mut e = PauliString::identity(BLOCK);
            e.0[qx] = Pauli::X;
            e.0[qz] = Pauli::Z;
            let s = c.syndrome(&e);
            if table[s].weight() == 0 && s != 0 {
                table[s] = e;
            }
        }
    }
    table
}

/// Ideal syndrome extraction and correction on `block`.
pub fn perfect_ec(block: &[Wire]) -> Recovery {
    Recovery {
        wires: block.to_vec(),
        checks: code().generators(),
        corrections: correction_table(),
    }
}

/// Appends [`perfect_ec`] as a noiseless location.
pub fn append_perfect_ec(b: &mut CircuitBuilder, block: &[Wire]) {
    b.push(Op::Recover(perfect_ec(block)), false);
}

/// `Tr_rest[D|a><b|D†]` on the information qubit, where `D` is the inverse
/// encoder.
pub fn decoded_cross(a: &PureState, b: &PureState) -> Matrix2<Complex64> {
    let layout = EncoderLayout::standard();
    let mut da = a.clone();
    let mut db = b.clone();
    layout.decode_state(&mut da);
    layout.decode_state(&mut db);
    let shift = BLOCK - 1 - layout.info;
    let (xa, xb) = (da.amplitudes(), db.amplitudes());
    let mut m = Matrix2::zeros();
    for i in (0..xa.len()).filter(|i| i >> shift & 1 == 0) {
        let pair = [i, i | 1 << shift];
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] += xa[pair[r]] * xb[pair[c]].conj();
            }
        }
    }
    m
}

/// Perfectly decodes a mixture of (unnormalized) block states into an
/// unnormalized single-qubit density matrix.
pub fn perfect_decode(states: &[PureState]) -> Matrix2<Complex64> {
    states.iter().map(|s| decoded_cross(s, s)).sum()
}
