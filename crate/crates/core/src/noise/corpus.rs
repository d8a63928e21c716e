//! Small circuits for cross-checking the expansion against the dense oracle.

use num_complex::Complex64;

use super::{CircuitBuilder, NoisyCircuit, Op, Record, Recovery, Target};
use crate::pauli::PauliString;
use crate::statevec::{Basis, Gate, PureState};

/// A named toy circuit.
#[derive(Debug, Clone)]
pub struct ToyCircuit {
    pub name: &'static str,
    pub circuit: NoisyCircuit,
}

fn state(gates: &[(Gate, &[usize])], n: usize) -> PureState {
    let mut s = PureState::zero(n);
    for (g, q) in gates {
        s.apply_gate(*g, q).expect("valid toy gate");
    }
    s
}

fn target(wires: Vec<usize>, state: PureState) -> Option<Target> {
    Some(Target { wires, state })
}

fn noisy_identity() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let w = b.wire();
    b.prepare(&[w], PureState::zero(1)).gate(Gate::Z, &[w]);
    b.finish(target(vec![w], PureState::zero(1)))
}

fn plus_state() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let w = b.wire();
    b.init(w).gate(Gate::H, &[w]);
    b.finish(target(vec![w], state(&[(Gate::H, &[0])], 1)))
}

fn t_phase() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let w = b.wire();
    b.init(w).gate(Gate::H, &[w]).gate(Gate::T, &[w]);
    b.finish(target(vec![w], state(&[(Gate::H, &[0]), (Gate::T, &[0])], 1)))
}

fn bell_pair() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let ws = b.wires(2);
    b.init(ws[0]).prepare(&[ws[1]], PureState::zero(1));
    b.ideal_gate(Gate::H, &[ws[0]]).gate(Gate::Cnot, &ws);
    b.finish(target(ws, state(&[(Gate::H, &[0]), (Gate::Cnot, &[0, 1])], 2)))
}

fn ghz3() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let ws = b.wires(3);
    b.prepare(&ws, PureState::zero(3));
    b.ideal_gate(Gate::H, &[ws[0]])
        .gate(Gate::Cnot, &[ws[0], ws[1]])
        .ideal_gate(Gate::Cnot, &[ws[1], ws[2]])
        .gate(Gate::X, &[ws[2]])
        .ideal_gate(Gate::X, &[ws[2]]);
    let s = state(
        &[(Gate::H, &[0]), (Gate::Cnot, &[0, 1]), (Gate::Cnot, &[1, 2])],
        3,
    );
    b.finish(target(ws, s))
}

/// Parity check of a Bell pair onto an ancilla, post-selected even.
fn bell_parity_check() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let ws = b.wires(2);
    let a = b.wire();
    b.prepare(&ws, state(&[(Gate::H, &[0]), (Gate::Cnot, &[0, 1])], 2));
    b.init(a)
        .gate(Gate::Cnot, &[ws[0], a])
        .ideal_gate(Gate::Cnot, &[ws[1], a])
        .measure(a, Basis::Z, Record::PostSelect { outcome: false });
    b.finish(target(
        ws,
        state(&[(Gate::H, &[0]), (Gate::Cnot, &[0, 1])], 2),
    ))
}

/// Cat state verified by a parity register, then one qubit measured in x.
fn verified_cat() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let ws = b.wires(3);
    let v = b.wire();
    let reg = b.register();
    b.prepare(&ws, PureState::zero(3));
    b.ideal_gate(Gate::H, &[ws[0]])
        .gate(Gate::Cnot, &[ws[0], ws[1]])
        .ideal_gate(Gate::Cnot, &[ws[1], ws[2]]);
    b.init(v)
        .ideal_gate(Gate::Cnot, &[ws[0], v])
        .ideal_gate(Gate::Cnot, &[ws[2], v])
        .measure(v, Basis::Z, Record::Parity { register: reg })
        .post_select_parity(reg, false);
    b.measure(ws[2], Basis::X, Record::PostSelect { outcome: false });
    let bell = state(&[(Gate::H, &[0]), (Gate::Cnot, &[0, 1])], 2);
    b.finish(target(vec![ws[0], ws[1]], bell))
}

/// Teleports |+> through a Bell pair with post-selection on the zero
/// outcomes, so no classical correction is needed.
fn teleport_postselected() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let src = b.wire();
    let ws = b.wires(2);
    b.prepare(&[src], state(&[(Gate::H, &[0])], 1));
    b.prepare(&ws, state(&[(Gate::H, &[0]), (Gate::Cnot, &[0, 1])], 2));
    b.ideal_gate(Gate::Cnot, &[src, ws[0]]).gate(Gate::H, &[src]);
    b.measure(ws[0], Basis::Z, Record::PostSelect { outcome: false })
        .measure(src, Basis::Z, Record::PostSelect { outcome: false });
    b.finish(target(vec![ws[1]], state(&[(Gate::H, &[0])], 1)))
}

/// Controlled-M from a |+> control onto |0>, then x-basis readout of the
/// control, keeping the +1 outcome: projects onto the +1 eigenspace of M.
fn cm_projection() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let c = b.wire();
    let t = b.wire();
    b.init(c).prepare(&[t], PureState::zero(1));
    b.ideal_gate(Gate::H, &[c]).gate(Gate::Cm, &[c, t]);
    b.push(
        Op::Measure {
            wire: c,
            basis: Basis::X,
            record: Record::PostSelect { outcome: false },
        },
        false,
    );
    // +1 eigenvector of (X - Y)/sqrt2 is (|0> + e^{-i pi/4}|1>)/sqrt2
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let eig = PureState::from_amplitudes(vec![
        Complex64::new(h, 0.0),
        Complex64::from_polar(h, -std::f64::consts::FRAC_PI_4),
    ])
    .expect("two amplitudes");
    b.finish(target(vec![t], eig))
}

/// Three-qubit repetition code with an ideal recovery after noisy X gates.
fn repetition_recovery() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let ws = b.wires(3);
    let plus_l = state(
        &[(Gate::H, &[0]), (Gate::Cnot, &[0, 1]), (Gate::Cnot, &[0, 2])],
        3,
    );
    b.prepare(&ws, plus_l.clone());
    for w in &ws {
        b.gate(Gate::X, &[*w]);
    }
    let checks: Vec<PauliString> = vec!["ZZI".parse().unwrap(), "IZZ".parse().unwrap()];
    let corrections: Vec<PauliString> = ["III", "XII", "IIX", "IXI"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    b.recover(Recovery {
        wires: ws.clone(),
        checks,
        corrections,
    });
    b.finish(target(ws, plus_l))
}

/// Two-qubit circuit whose second wire is measured and discarded.
fn discarded_ancilla() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let d = b.wire();
    let a = b.wire();
    b.prepare(&[d], state(&[(Gate::H, &[0])], 1));
    b.init(a).gate(Gate::Cnot, &[a, d]).measure(a, Basis::Z, Record::Discard);
    b.finish(target(vec![d], state(&[(Gate::H, &[0])], 1)))
}

/// Wire reuse: an ancilla is measured, reinitialised and used again.
fn reused_ancilla() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let d = b.wire();
    let a = b.wire();
    b.prepare(&[d], PureState::zero(1));
    for _ in 0..2 {
        b.init(a)
            .ideal_gate(Gate::Cnot, &[d, a])
            .measure(a, Basis::Z, Record::PostSelect { outcome: false });
    }
    b.finish(target(vec![d], PureState::zero(1)))
}

/// Two parity registers post-selected together. A phase error on the kept
/// qubit is copied onto the x-measured pair and rejected.
fn double_parity() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let k = b.wire();
    let ws = b.wires(4);
    let (r0, r1) = (b.register(), b.register());
    let plus = state(&[(Gate::H, &[0])], 1);
    b.prepare(&[k], plus.clone());
    b.init(ws[0]).init(ws[1]).ideal_gate(Gate::Cnot, &[ws[0], ws[1]]);
    b.prepare(&ws[2..], state(&[(Gate::H, &[0]), (Gate::H, &[1])], 2));
    b.gate(Gate::X, &[k]).ideal_gate(Gate::Cnot, &[ws[2], k]);
    let quiet = |wire, basis, register| Op::Measure {
        wire,
        basis,
        record: Record::Parity { register },
    };
    b.push(quiet(ws[0], Basis::Z, r0), false)
        .push(quiet(ws[1], Basis::Z, r0), false)
        .measure(ws[2], Basis::X, Record::Parity { register: r1 })
        .push(quiet(ws[3], Basis::X, r1), false)
        .post_select_parity(r0, false)
        .post_select_parity(r1, false);
    b.finish(target(vec![k], plus))
}

/// A six-qubit state with a handful of noisy gates.
fn six_qubit_fanout() -> NoisyCircuit {
    let mut b = CircuitBuilder::new();
    let ws = b.wires(6);
    b.prepare(&ws, PureState::zero(6));
    b.ideal_gate(Gate::H, &[ws[0]])
        .gate(Gate::Cnot, &[ws[0], ws[3]])
        .ideal_gate(Gate::Cnot, &[ws[0], ws[5]])
        .ideal_gate(Gate::Cnot, &[ws[3], ws[5]]);
    b.measure(ws[5], Basis::Z, Record::PostSelect { outcome: false });
    let s = state(&[(Gate::H, &[0]), (Gate::Cnot, &[0, 3])], 5);
    b.finish(target(ws[..5].to_vec(), s))
}

/// The bundled corpus.
pub fn toy_corpus() -> Vec<ToyCircuit> {
    vec![
        ToyCircuit { name: "noisy_identity", circuit: noisy_identity() },
        ToyCircuit { name: "plus_state", circuit: plus_state() },
        ToyCircuit { name: "t_phase", circuit: t_phase() },
        ToyCircuit { name: "bell_pair", circuit: bell_pair() },
        ToyCircuit { name: "ghz3", circuit: ghz3() },
        ToyCircuit { name: "bell_parity_check", circuit: bell_parity_check() },
        ToyCircuit { name: "verified_cat", circuit: verified_cat() },
        ToyCircuit { name: "teleport_postselected", circuit: teleport_postselected() },
        ToyCircuit { name: "cm_projection", circuit: cm_projection() },
        ToyCircuit { name: "repetition_recovery", circuit: repetition_recovery() },
        ToyCircuit { name: "discarded_ancilla", circuit: discarded_ancilla() },
        ToyCircuit { name: "reused_ancilla", circuit: reused_ancilla() },
        ToyCircuit { name: "double_parity", circuit: double_parity() },
        ToyCircuit { name: "six_qubit_fanout", circuit: six_qubit_fanout() },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let corpus = toy_corpus();
        assert!(corpus.len() >= 12);
        for t in &corpus {
            let peak = t.circuit.validate().unwrap();
            assert!(peak <= 6, "{} uses {peak} qubits", t.name);
            assert!(t.circuit.locations.len() <= 16, "{}", t.name);
        }
    }
}
