//! Unnormalized mixtures of pure branch states keyed by classical parity
//! registers.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{EngineError, Op, Record, Recovery, Wire};
use crate::pauli::{Pauli, PauliString};
use crate::statevec::{Basis, PureState};

/// Components with squared norm below this are dropped.
const PRUNE_NORM: f64 = 1e-22;
/// Relative eigenvalue floor used when compressing a mixture.
const RANK_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// Bit `k` is parity register `k`.
    pub regs: u64,
    pub state: PureState,
}

/// The mixed state `Σ |φ><φ|` over live wires, split by classical record.
/// Components are unnormalized; their total squared norm is the acceptance
/// mass of the branch so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    wires: Vec<Wire>,
    comps: Vec<Component>,
}

impl Default for Ensemble {
    fn default() -> Self {
        Self::new()
    }
}

impl Ensemble {
    /// No live wires, unit weight.
    pub fn new() -> Self {
        Ensemble {
            wires: Vec::new(),
            comps: vec![Component {
                regs: 0,
                state: PureState::zero(0),
            }],
        }
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn accept_mass(&self) -> f64 {
        self.comps.iter().map(|c| c.state.norm_sqr()).sum()
    }

    pub fn position(&self, wire: Wire) -> usize {
        self.wires
            .iter()
            .position(|w| *w == wire)
            .unwrap_or_else(|| panic!("wire {wire} is not live"))
    }

    fn positions(&self, wires: &[Wire]) -> Vec<usize> {
        wires.iter().map(|w| self.position(*w)).collect()
    }

    pub fn apply_pauli(&mut self, wire: Wire, p: Pauli) {
        if p == Pauli::I {
            return;
        }
        let q = self.position(wire);
        for c in &mut self.comps {
            c.state.apply_pauli(p, q);
        }
    }

    /// Applies one ideal operation.
    pub fn apply(&mut self, op: &Op) -> Result<(), EngineError> {
        match op {
            Op::Init { wire } => {
                self.wires.push(*wire);
                for c in &mut self.comps {
                    c.state.push_zero();
                }
            }
            Op::Prepare { wires, state } => {
                self.wires.extend_from_slice(wires);
                for c in &mut self.comps {
                    c.state = c.state.tensor(state);
                }
            }
            Op::Gate { gate, wires } => {
                let pos = self.positions(wires);
                for c in &mut self.comps {
                    c.state.apply_gate(*gate, &pos)?;
                }
            }
            Op::Measure {
                wire,
                basis,
                record,
            } => self.measure(*wire, *basis, record),
            Op::PostSelectParity { register, odd } => {
                let bit = 1u64 << register;
                self.comps.retain(|c| (c.regs & bit != 0) == *odd);
                for c in &mut self.comps {
                    c.regs &= !bit;
                }
                self.compress();
            }
            Op::Recover(r) => self.recover(r),
        }
        Ok(())
    }

    fn measure(&mut self, wire: Wire, basis: Basis, record: &Record) {
        let q = self.position(wire);
        self.wires.remove(q);
        let mut out = Vec::with_capacity(self.comps.len() * 2);
        for c in &self.comps {
            match record {
                Record::PostSelect { outcome } => out.push(Component {
                    regs: c.regs,
                    state: c.state.project_out(q, basis, *outcome),
                }),
                Record::Parity { .. } | Record::Parities { .. } => {
                    let mask = record.register_mask().unwrap_or(0);
                    for outcome in [false, true] {
                        out.push(Component {
                            regs: if outcome { c.regs ^ mask } else { c.regs },
                            state: c.state.project_out(q, basis, outcome),
                        });
                    }
                }
                Record::Discard => {
                    for outcome in [false, true] {
                        out.push(Component {
                            regs: c.regs,
                            state: c.state.project_out(q, basis, outcome),
                        });
                    }
                }
            }
        }
        out.retain(|c| c.state.norm_sqr() > PRUNE_NORM);
        let split = !matches!(record, Record::PostSelect { .. });
        self.comps = out;
        if split {
            self.compress();
        }
    }

    fn recover(&mut self, r: &Recovery) {
        let pos = self.positions(&r.wires);
        let mut out = Vec::new();
        for c in &self.comps {
            // (syndrome, projected state) after each check in turn
            let mut parts = vec![(0usize, c.state.clone())];
            for (k, check) in r.checks.iter().enumerate() {
                let mut next = Vec::with_capacity(parts.len() * 2);
                for (syn, s) in parts {
                    let mut flipped = s.clone();
                    flipped.apply_pauli_string(check, &pos);
                    let half = Complex64::new(0.5, 0.0);
                    let plus: Vec<Complex64> = s
                        .amplitudes()
                        .iter()
                        .zip(flipped.amplitudes())
                        .map(|(a, b)| (a + b) * half)
                        .collect();
                    let minus: Vec<Complex64> = s
                        .amplitudes()
                        .iter()
                        .zip(flipped.amplitudes())
                        .map(|(a, b)| (a - b) * half)
                        .collect();
                    for (bit, amps) in [(0, plus), (1, minus)] {
                        let st = PureState::from_amplitudes(amps).expect("same length");
                        if st.norm_sqr() > PRUNE_NORM {
                            next.push((syn | (bit << k), st));
                        }
                    }
                }
                parts = next;
            }
            for (syn, mut s) in parts {
                s.apply_pauli_string(&r.corrections[syn], &pos);
                out.push(Component {
                    regs: c.regs,
                    state: s,
                });
            }
        }
        self.comps = out;
        self.compress();
    }

    /// Rewrites every group of components sharing a classical record as the
    /// minimal number of pure components with the same density matrix.
    pub fn compress(&mut self) {
        let mut groups: BTreeMap<u64, Vec<PureState>> = BTreeMap::new();
        for c in self.comps.drain(..) {
            groups.entry(c.regs).or_default().push(c.state);
        }
        for (regs, states) in groups {
            if states.len() == 1 {
                self.comps.push(Component {
                    regs,
                    state: states.into_iter().next().expect("one state"),
                });
                continue;
            }
            for state in reduce_rank(&states) {
                self.comps.push(Component { regs, state });
            }
        }
    }

    /// Squared norm of `(<target| ⊗ I) φ` summed over components, where the
    /// target lives on `wires`.
    pub fn target_mass(&self, wires: &[Wire], target: &PureState) -> f64 {
        self.project_onto(wires, std::slice::from_ref(target))
            .iter()
            .map(|per_comp| per_comp[0].iter().map(|a| a.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// For each component and each reference state `t_k` on `wires`, the
    /// partial inner product `(<t_k| ⊗ I) φ` as a vector over the remaining
    /// live wires (in their current order).
    pub fn project_onto(&self, wires: &[Wire], refs: &[PureState]) -> Vec<Vec<Vec<Complex64>>> {
        let n = self.wires.len();
        let pos = self.positions(wires);
        let rest: Vec<usize> = (0..n).filter(|q| !pos.contains(q)).collect();
        let k = pos.len();
        let r = rest.len();
        // full index from (sub-index over `pos`, sub-index over `rest`)
        let spread = |sub: usize, qubits: &[usize]| -> usize {
            let m = qubits.len();
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| sub >> (m - 1 - i) & 1 == 1)
                .map(|(_, q)| 1usize << (n - 1 - q))
                .sum()
        };
        let pos_idx: Vec<usize> = (0..1usize << k).map(|s| spread(s, &pos)).collect();
        let rest_idx: Vec<usize> = (0..1usize << r).map(|s| spread(s, &rest)).collect();
        self.comps
            .iter()
            .map(|c| {
                let amps = c.state.amplitudes();
                refs.iter()
                    .map(|t| {
                        let ta = t.amplitudes();
                        rest_idx
                            .iter()
                            .map(|&ri| {
                                pos_idx
                                    .iter()
                                    .zip(ta)
                                    .map(|(&pi, tv)| tv.conj() * amps[pi | ri])
                                    .sum()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

fn reduce_rank(states: &[PureState]) -> Vec<PureState> {
    let n = states.len();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        states[i].inner(&states[j]).expect("same register")
    });
    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut out = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= PRUNE_NORM || lambda <= RANK_TOL * lmax {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let len = states[0].amplitudes().len();
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        for (i, s) in states.iter().enumerate() {
            let coef = v[i];
            for (a, b) in amps.iter_mut().zip(s.amplitudes()) {
                *a += coef * b;
            }
        }
        out.push(PureState::from_amplitudes(amps).expect("same length"));
    }
    out
}

/// Applies a Pauli string given as `(wire, label)` pairs.
pub(crate) fn apply_paulis(e: &mut Ensemble, wires: &[Wire], paulis: &PauliString) {
    for (w, p) in wires.iter().zip(&paulis.0) {
        e.apply_pauli(*w, *p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::Gate;

    fn density(e: &Ensemble) -> DMatrix<Complex64> {
        let d = e.comps[0].state.amplitudes().len();
        let mut rho = DMatrix::zeros(d, d);
        for c in &e.comps {
            let v = nalgebra::DVector::from_column_slice(c.state.amplitudes());
            rho += &v * v.adjoint();
        }
        rho
    }

    #[test]
    fn compression_preserves_the_mixture() {
        let mut e = Ensemble::new();
        for w in 0..3 {
            e.apply(&Op::Init { wire: w }).unwrap();
        }
        e.apply(&Op::Gate { gate: Gate::H, wires: vec![0] }).unwrap();
        e.apply(&Op::Gate { gate: Gate::Cnot, wires: vec![0, 1] }).unwrap();
        e.apply(&Op::Gate { gate: Gate::T, wires: vec![1] }).unwrap();
        e.apply(&Op::Gate { gate: Gate::H, wires: vec![2] }).unwrap();
        e.apply(&Op::Gate { gate: Gate::Cm, wires: vec![2, 1] }).unwrap();
        // duplicate components by splitting on a discarded outcome, then compare
        let before = {
            let mut raw = e.clone();
            let q = raw.position(0);
            raw.wires.remove(q);
            raw.comps = raw
                .comps
                .iter()
                .flat_map(|c| {
                    [false, true].map(|o| Component {
                        regs: 0,
                        state: c.state.project_out(q, Basis::X, o),
                    })
                })
                .collect();
            density(&raw)
        };
        e.apply(&Op::Measure {
            wire: 0,
            basis: Basis::X,
            record: Record::Discard,
        })
        .unwrap();
        let after = density(&e);
        assert!((before - after).norm() < 1e-12);
        assert!((e.accept_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_post_selection() {
        // Bell pair measured in Z: outcomes always agree
        let mut e = Ensemble::new();
        e.apply(&Op::Init { wire: 0 }).unwrap();
        e.apply(&Op::Init { wire: 1 }).unwrap();
        e.apply(&Op::Gate { gate: Gate::H, wires: vec![0] }).unwrap();
        e.apply(&Op::Gate { gate: Gate::Cnot, wires: vec![0, 1] }).unwrap();
        for w in [0, 1] {
            e.apply(&Op::Measure {
                wire: w,
                basis: Basis::Z,
                record: Record::Parity { register: 3 },
            })
            .unwrap();
        }
        let mut odd = e.clone();
        odd.apply(&Op::PostSelectParity { register: 3, odd: true }).unwrap();
        assert!(odd.is_empty());
        e.apply(&Op::PostSelectParity { register: 3, odd: false }).unwrap();
        assert!((e.accept_mass() - 1.0).abs() < 1e-12);
        assert_eq!(e.components().len(), 1);
    }

    #[test]
    fn target_mass_on_a_subsystem() {
        let mut e = Ensemble::new();
        e.apply(&Op::Prepare {
            wires: vec![5, 2],
            state: PureState::from_bits("10"),
        })
        .unwrap();
        e.apply(&Op::Gate { gate: Gate::H, wires: vec![2] }).unwrap();
        assert!((e.target_mass(&[5], &PureState::from_bits("1")) - 1.0).abs() < 1e-12);
        assert!((e.target_mass(&[2], &PureState::from_bits("0")) - 0.5).abs() < 1e-12);
    }
}
