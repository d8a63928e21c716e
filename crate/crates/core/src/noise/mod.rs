//! Noisy circuits under the independent, non-equiprobable Pauli error model
//! and their perturbative expansion.
//!
//! A [`NoisyCircuit`] is an ordered list of [`Location`]s on abstract wires.
//! Every noisy location carries an independent Pauli channel on each qubit it
//! touches: `X`, `Y`, `Z` with probabilities `px`, `py`, `pz`, identity with
//! `p0 = 1 - px - py - pz`. Errors follow the ideal gate, follow an ideal
//! `|0>` preparation, and precede an ideal measurement projector.
//!
//! [`expand`] sums the circuit over every error insertion up to a given order
//! and returns polynomial-valued observables; [`fidelity_polynomial`] is the
//! common special case of a post-selected target overlap. [`oracle`] holds an
//! exact density-matrix evaluator used to validate the expansion.

mod engine;
mod ensemble;

pub mod corpus;
pub mod oracle;

pub use engine::{
    branch_weight, enumerate_branches, expand, fidelity_polynomial, run_branch, BranchInsertion,
    BranchMasses, Expansion, Fault, PostSelectedResult, RunStats,
};
pub use ensemble::{Component, Ensemble};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::errpoly::PolyError;
use crate::pauli::PauliString;
use crate::statevec::{Basis, Gate, PureState, StateError, MAX_QUBITS};

/// Abstract qubit label. Wires are mapped onto state-vector positions only
/// while they are live.
pub type Wire = usize;

/// Highest supported expansion order.
pub const MAX_ORDER: u8 = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("expansion order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u8),
    #[error("the noiseless run is never accepted (acceptance polynomial vanishes at p = 0)")]
    InvalidPostSelection,
    #[error("invalid circuit at location {index}: {reason}")]
    InvalidCircuit { index: usize, reason: String },
    #[error("circuit has no target state")]
    MissingTarget,
    #[error("insertion does not fit the circuit: {0}")]
    InvalidInsertion(String),
    #[error("oracle is limited to {limit} live qubits, circuit needs {needed}")]
    OracleTooLarge { limit: usize, needed: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// What happens to a measurement outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    /// Keep only the branch with this outcome.
    PostSelect { outcome: bool },
    /// XOR the outcome into a classical parity register.
    Parity { register: usize },
    /// XOR the outcome into several parity registers at once.
    Parities { registers: Vec<usize> },
    /// Trace the outcome out.
    Discard,
}

impl Record {
    /// Registers flipped by a 1 outcome, or `None` if the outcome is not
    /// recorded in any register.
    pub fn register_mask(&self) -> Option<u64> {
        match self {
            Record::Parity { register } => Some(1u64 << register),
            Record::Parities { registers } => {
                Some(registers.iter().fold(0, |m, r| m ^ 1u64 << r))
            }
            _ => None,
        }
    }
}

/// Ideal syndrome extraction followed by a lookup-table correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub wires: Vec<Wire>,
    pub checks: Vec<PauliString>,
    /// Indexed by syndrome; bit `k` is set when check `k` reads `-1`.
    pub corrections: Vec<PauliString>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    /// Fresh `|0>` on a wire that is not live.
    Init { wire: Wire },
    Gate { gate: Gate, wires: Vec<Wire> },
    /// Measures and releases a wire.
    Measure {
        wire: Wire,
        basis: Basis,
        record: Record,
    },
    /// Keeps branches whose parity register equals `odd`, then clears it.
    PostSelectParity { register: usize, odd: bool },
    /// Noiselessly loads a state onto wires that are not live.
    Prepare { wires: Vec<Wire>, state: PureState },
    Recover(Recovery),
}

impl Op {
    /// Wires the operation touches.
    pub fn wires(&self) -> Vec<Wire> {
        match self {
            Op::Init { wire } | Op::Measure { wire, .. } => vec![*wire],
            Op::Gate { wires, .. } | Op::Prepare { wires, .. } => wires.clone(),
            Op::Recover(r) => r.wires.clone(),
            Op::PostSelectParity { .. } => Vec::new(),
        }
    }

    fn can_be_noisy(&self) -> bool {
        matches!(self, Op::Init { .. } | Op::Gate { .. } | Op::Measure { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub op: Op,
    pub noisy: bool,
}

impl Location {
    /// Number of qubits carrying an error channel at this location.
    pub fn noise_arity(&self) -> usize {
        if self.noisy {
            self.op.wires().len()
        } else {
            0
        }
    }
}

/// Ideal state expected on a subset of the surviving wires.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub wires: Vec<Wire>,
    pub state: PureState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyCircuit {
    pub n_wires: usize,
    pub locations: Vec<Location>,
    pub target: Option<Target>,
}

impl NoisyCircuit {
    /// Total number of noisy qubit slots.
    pub fn noisy_slots(&self) -> usize {
        self.locations.iter().map(Location::noise_arity).sum()
    }

    pub fn noisy_locations(&self) -> usize {
        self.locations.iter().filter(|l| l.noise_arity() > 0).count()
    }

    /// Checks wire liveness, register use, and the live-qubit limit. Returns
    /// the largest number of simultaneously live wires.
    pub fn validate(&self) -> Result<usize, EngineError> {
        let mut live = vec![false; self.n_wires];
        let mut peak = 0;
        let bad = |index: usize, reason: String| EngineError::InvalidCircuit { index, reason };
        for (index, loc) in self.locations.iter().enumerate() {
            if loc.noisy && !loc.op.can_be_noisy() {
                return Err(bad(index, "operation cannot carry noise".into()));
            }
            for &w in &loc.op.wires() {
                if w >= self.n_wires {
                    return Err(bad(index, format!("wire {w} out of range")));
                }
            }
            match &loc.op {
                Op::Init { wire } => {
                    if live[*wire] {
                        return Err(bad(index, format!("wire {wire} reused before measurement")));
                    }
                    live[*wire] = true;
                }
                Op::Prepare { wires, state } => {
                    if state.n_qubits() != wires.len() {
                        return Err(bad(index, "prepared state size mismatch".into()));
                    }
                    for &w in wires {
                        if live[w] {
                            return Err(bad(index, format!("wire {w} reused before measurement")));
                        }
                        live[w] = true;
                    }
                }
                Op::Gate { gate, wires } => {
                    if wires.len() != gate.arity() {
                        return Err(bad(index, format!("{gate} arity mismatch")));
                    }
                    if wires.len() == 2 && wires[0] == wires[1] {
                        return Err(bad(index, "repeated gate wire".into()));
                    }
                    if let Some(w) = wires.iter().find(|w| !live[**w]) {
                        return Err(bad(index, format!("wire {w} is not live")));
                    }
                }
                Op::Measure { wire, record, .. } => {
                    if !live[*wire] {
                        return Err(bad(index, format!("wire {wire} is not live")));
                    }
                    let registers = match record {
                        Record::Parity { register } => vec![*register],
                        Record::Parities { registers } => registers.clone(),
                        _ => Vec::new(),
                    };
                    if registers.iter().any(|r| *r >= 64) {
                        return Err(bad(index, "parity register index above 63".into()));
                    }
                    live[*wire] = false;
                }
                Op::PostSelectParity { register, .. } => {
                    if *register >= 64 {
                        return Err(bad(index, "parity register index above 63".into()));
                    }
                }
                Op::Recover(r) => {
                    if let Some(w) = r.wires.iter().find(|w| !live[**w]) {
                        return Err(bad(index, format!("wire {w} is not live")));
                    }
                    if r.corrections.len() != 1 << r.checks.len() {
                        return Err(bad(index, "correction table size mismatch".into()));
                    }
                }
            }
            peak = peak.max(live.iter().filter(|l| **l).count());
            if peak > MAX_QUBITS {
                return Err(bad(index, format!("more than {MAX_QUBITS} live wires")));
            }
        }
        if let Some(t) = &self.target {
            if t.state.n_qubits() != t.wires.len() {
                return Err(bad(self.locations.len(), "target size mismatch".into()));
            }
            if let Some(w) = t.wires.iter().find(|w| !live[**w]) {
                return Err(bad(self.locations.len(), format!("target wire {w} is not live at the end")));
            }
        }
        Ok(peak)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

/// Incremental circuit construction with wire and register allocation.
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    n_wires: usize,
    n_registers: usize,
    locations: Vec<Location>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn wire(&mut self) -> Wire {
        self.n_wires += 1;
        self.n_wires - 1
    }

    pub fn wires(&mut self, n: usize) -> Vec<Wire> {
        (0..n).map(|_| self.wire()).collect()
    }

    /// A classical parity register. Registers are recycled by
    /// post-selection, so the index is only meaningful until then.
    pub fn register(&mut self) -> usize {
        self.n_registers += 1;
        self.n_registers - 1
    }

    pub fn push(&mut self, op: Op, noisy: bool) -> &mut Self {
        self.locations.push(Location { op, noisy });
        self
    }

    pub fn init(&mut self, wire: Wire) -> &mut Self {
        self.push(Op::Init { wire }, true)
    }

    pub fn gate(&mut self, gate: Gate, wires: &[Wire]) -> &mut Self {
        self.push(
            Op::Gate {
                gate,
                wires: wires.to_vec(),
            },
            true,
        )
    }

    pub fn ideal_gate(&mut self, gate: Gate, wires: &[Wire]) -> &mut Self {
        self.push(
            Op::Gate {
                gate,
                wires: wires.to_vec(),
            },
            false,
        )
    }

    pub fn measure(&mut self, wire: Wire, basis: Basis, record: Record) -> &mut Self {
        self.push(
            Op::Measure {
                wire,
                basis,
                record,
            },
            true,
        )
    }

    pub fn post_select_parity(&mut self, register: usize, odd: bool) -> &mut Self {
        self.push(Op::PostSelectParity { register, odd }, false)
    }

    pub fn prepare(&mut self, wires: &[Wire], state: PureState) -> &mut Self {
        self.push(
            Op::Prepare {
                wires: wires.to_vec(),
                state,
            },
            false,
        )
    }

    pub fn recover(&mut self, recovery: Recovery) -> &mut Self {
        self.push(Op::Recover(recovery), false)
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn finish(self, target: Option<Target>) -> NoisyCircuit {
        NoisyCircuit {
            n_wires: self.n_wires,
            locations: self.locations,
            target,
        }
    }
}
