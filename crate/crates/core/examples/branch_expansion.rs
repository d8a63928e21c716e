//! Branch enumeration on a small post-selected circuit, checked against the
//! exact density-matrix evaluation.

use steane_tgate::noise::oracle::dense_channel_oracle;
use steane_tgate::noise::{enumerate_branches, fidelity_polynomial, CircuitBuilder, Record, Target};
use steane_tgate::statevec::{Basis, Gate, PureState};

fn main() {
    // Bell pair, parity-checked through an ancilla that must read 0
    let mut b = CircuitBuilder::new();
    let [q0, q1, anc] = [b.wire(), b.wire(), b.wire()];
    b.init(q0).init(q1).init(anc);
    b.gate(Gate::H, &[q0]).gate(Gate::Cnot, &[q0, q1]);
    b.gate(Gate::Cnot, &[q0, anc]).gate(Gate::Cnot, &[q1, anc]);
    b.measure(anc, Basis::Z, Record::PostSelect { outcome: false });
    let mut bell = PureState::zero(2);
    bell.apply_gate(Gate::H, &[0]).unwrap();
    bell.apply_gate(Gate::Cnot, &[0, 1]).unwrap();
    let circuit = b.finish(Some(Target { wires: vec![q0, q1], state: bell }));

    for order in [1u8, 2] {
        let branches = enumerate_branches(&circuit, order).unwrap();
        let r = fidelity_polynomial(&circuit, order).unwrap();
        println!("K = {order}: {} branches", branches.len());
        println!("  acceptance {}", r.denominator.pretty());
        println!("  fidelity   {}", r.fidelity.pretty());
        for p in [1e-2, 1e-3] {
            let (_, exact) = dense_channel_oracle(&circuit, p, p, p).unwrap();
            println!("  p = {p:e}: series {:.10}  exact {exact:.10}", r.fidelity.eval(p, p, p));
        }
    }
}
