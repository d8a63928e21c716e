//! Exact density-matrix evaluation of small noisy circuits.
//!
//! Every location applies its full Kraus sum with no truncation, and one
//! density matrix is kept per classical register value. This shares no code
//! with the branch engine beyond the circuit description and the ideal gate
//! matrices, so the two can be checked against each other.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{EngineError, NoisyCircuit, Op, Record, Recovery, Wire};
use crate::pauli::Pauli;
use crate::statevec::{Basis, PureState};

/// Largest number of simultaneously live qubits the oracle accepts.
pub const ORACLE_MAX_QUBITS: usize = 8;

type Mat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_matrix(p: Pauli) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => Mat::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => Mat::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => Mat::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => Mat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Lifts an operator on the qubits at `pos` (first listed = most
/// significant local bit) to the full `n`-qubit space.
fn embed(local: &Mat, pos: &[usize], n: usize) -> Mat {
    let dim = 1usize << n;
    let k = pos.len();
    let masks: Vec<usize> = pos.iter().map(|q| 1usize << (n - 1 - q)).collect();
    let all: usize = masks.iter().sum();
    let sub = |i: usize| -> usize {
        masks
            .iter()
            .enumerate()
            .filter(|(_, m)| i & **m != 0)
            .map(|(j, _)| 1usize << (k - 1 - j))
            .sum()
    };
    let subs: Vec<usize> = (0..dim).map(sub).collect();
    Mat::from_fn(dim, dim, |i, j| {
        if i & !all == j & !all {
            local[(subs[i], subs[j])]
        } else {
            c(0.0, 0.0)
        }
    })
}

fn outer(s: &PureState) -> Mat {
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    &v * v.adjoint()
}

struct Dense {
    wires: Vec<Wire>,
    rho: BTreeMap<u64, Mat>,
}

impl Dense {
    fn n(&self) -> usize {
        self.wires.len()
    }

    fn pos(&self, w: Wire) -> usize {
        self.wires.iter().position(|x| *x == w).expect("live wire")
    }

    fn conjugate(&mut self, u: &Mat) {
        for r in self.rho.values_mut() {
            *r = u * &*r * u.adjoint();
        }
    }

    fn append(&mut self, wires: &[Wire], block: &Mat) {
        self.wires.extend_from_slice(wires);
        for r in self.rho.values_mut() {
            *r = r.kronecker(block);
        }
    }

    fn depolarize(&mut self, q: usize, probs: [f64; 3]) {
        let n = self.n();
        let ps: Vec<Mat> = Pauli::ERRORS
            .iter()
            .map(|p| embed(&pauli_matrix(*p), &[q], n))
            .collect();
        let p0 = 1.0 - probs.iter().sum::<f64>();
        for r in self.rho.values_mut() {
            let mut out = r.scale(p0);
            for (p, &w) in ps.iter().zip(&probs) {
                out += (p * &*r * p).scale(w);
            }
            *r = out;
        }
    }

    /// `<o| rho |o'>` on qubit `q`, with that qubit removed.
    fn measure(&mut self, w: Wire, basis: Basis, record: &Record) {
        let q = self.pos(w);
        let n = self.n();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bra = |outcome: bool| -> [Complex64; 2] {
            match (basis, outcome) {
                (Basis::Z, false) => [c(1.0, 0.0), c(0.0, 0.0)],
                (Basis::Z, true) => [c(0.0, 0.0), c(1.0, 0.0)],
                (Basis::X, false) => [c(h, 0.0), c(h, 0.0)],
                (Basis::X, true) => [c(h, 0.0), c(-h, 0.0)],
            }
        };
        let bit = n - 1 - q;
        let small = 1usize << (n - 1);
        let widen = |i: usize, b: usize| -> usize {
            let hi = (i >> bit) << (bit + 1);
            let lo = i & ((1usize << bit) - 1);
            hi | (b << bit) | lo
        };
        let reduce = |r: &Mat, outcome: bool| -> Mat {
            let v = bra(outcome);
            Mat::from_fn(small, small, |i, j| {
                let mut s = c(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        s += v[a].conj() * r[(widen(i, a), widen(j, b))] * v[b];
                    }
                }
                s
            })
        };
        let mut out: BTreeMap<u64, Mat> = BTreeMap::new();
        for (regs, r) in &self.rho {
            let mut add = |key: u64, m: Mat| {
                out.entry(key)
                    .and_modify(|x| *x += &m)
                    .or_insert(m);
            };
            match record {
                Record::PostSelect { outcome } => add(*regs, reduce(r, *outcome)),
                Record::Parity { .. } | Record::Parities { .. } => {
                    let mask = record.register_mask().unwrap_or(0);
                    add(*regs, reduce(r, false));
                    add(*regs ^ mask, reduce(r, true));
                }
                Record::Discard => {
                    add(*regs, reduce(r, false) + reduce(r, true));
                }
            }
        }
        self.wires.remove(q);
        self.rho = out;
    }

    fn recover(&mut self, rec: &Recovery) {
        let n = self.n();
        let pos: Vec<usize> = rec.wires.iter().map(|w| self.pos(*w)).collect();
        let string_op = |s: &crate::pauli::PauliString| -> Mat {
            s.0.iter()
                .map(|p| pauli_matrix(*p))
                .reduce(|a, b| a.kronecker(&b))
                .expect("nonempty string")
        };
        let id = Mat::identity(1 << n, 1 << n);
        let checks: Vec<Mat> = rec
            .checks
            .iter()
            .map(|s| embed(&string_op(s), &pos, n))
            .collect();
        let half = c(0.5, 0.0);
        let mut kraus = Vec::new();
        for (syn, corr) in rec.corrections.iter().enumerate() {
            let mut proj = id.clone();
            for (k, g) in checks.iter().enumerate() {
                let sign = if syn >> k & 1 == 1 { -1.0 } else { 1.0 };
                proj = proj * (&id + g.scale(sign)) * half;
            }
            kraus.push(embed(&string_op(corr), &pos, n) * proj);
        }
        for r in self.rho.values_mut() {
            let mut out = Mat::zeros(1 << n, 1 << n);
            for k in &kraus {
                out += k * &*r * k.adjoint();
            }
            *r = out;
        }
    }
}

/// Exact acceptance probability and normalized target fidelity at the given
/// error rates.
pub fn dense_channel_oracle(
    circuit: &NoisyCircuit,
    px: f64,
    py: f64,
    pz: f64,
) -> Result<(f64, f64), EngineError> {
    let peak = circuit.validate()?;
    if peak > ORACLE_MAX_QUBITS {
        return Err(EngineError::OracleTooLarge {
            limit: ORACLE_MAX_QUBITS,
            needed: peak,
        });
    }
    let target = circuit.target.as_ref().ok_or(EngineError::MissingTarget)?;
    let probs = [px, py, pz];
    let mut d = Dense {
        wires: Vec::new(),
        rho: BTreeMap::from([(0u64, Mat::from_element(1, 1, c(1.0, 0.0)))]),
    };
    for loc in &circuit.locations {
        match &loc.op {
            Op::Init { wire } => {
                d.append(&[*wire], &outer(&PureState::zero(1)));
                if loc.noisy {
                    d.depolarize(d.n() - 1, probs);
                }
            }
            Op::Prepare { wires, state } => d.append(wires, &outer(state)),
            Op::Gate { gate, wires } => {
                let n = d.n();
                let pos: Vec<usize> = wires.iter().map(|w| d.pos(*w)).collect();
                let k = 1usize << gate.arity();
                let local = Mat::from_row_slice(k, k, &gate.matrix());
                d.conjugate(&embed(&local, &pos, n));
                if loc.noisy {
                    for q in pos {
                        d.depolarize(q, probs);
                    }
                }
            }
            Op::Measure {
                wire,
                basis,
                record,
            } => {
                if loc.noisy {
                    d.depolarize(d.pos(*wire), probs);
                }
                d.measure(*wire, *basis, record);
            }
            Op::PostSelectParity { register, odd } => {
                let bit = 1u64 << register;
                let old = std::mem::take(&mut d.rho);
                for (regs, r) in old {
                    if (regs & bit != 0) == *odd {
                        d.rho
                            .entry(regs & !bit)
                            .and_modify(|x| *x += &r)
                            .or_insert(r);
                    }
                }
            }
            Op::Recover(rec) => d.recover(rec),
        }
    }
    let n = d.n();
    let pos: Vec<usize> = target.wires.iter().map(|w| d.pos(*w)).collect();
    let proj = embed(&outer(&target.state), &pos, n);
    let mut accept = 0.0;
    let mut overlap = 0.0;
    for r in d.rho.values() {
        accept += r.trace().re;
        overlap += (&proj * r).trace().re;
    }
    if accept <= 0.0 {
        return Err(EngineError::InvalidPostSelection);
    }
    Ok((accept, overlap / accept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{CircuitBuilder, Target};
    use crate::statevec::Gate;

    #[test]
    fn trivial_cases() {
        let mut b = CircuitBuilder::new();
        let w = b.wire();
        b.init(w).gate(Gate::H, &[w]).gate(Gate::H, &[w]);
        let c = b.finish(Some(Target {
            wires: vec![w],
            state: PureState::zero(1),
        }));
        let (a, f) = dense_channel_oracle(&c, 0.0, 0.0, 0.0).unwrap();
        assert!((a - 1.0).abs() < 1e-14 && (f - 1.0).abs() < 1e-14);

        let mut b = CircuitBuilder::new();
        let w = b.wire();
        b.prepare(&[w], PureState::zero(1)).gate(Gate::Z, &[w]);
        let c = b.finish(Some(Target {
            wires: vec![w],
            state: PureState::zero(1),
        }));
        let (_, f) = dense_channel_oracle(&c, 0.1, 0.0, 0.0).unwrap();
        assert!((f - 0.9).abs() < 1e-14);
    }

    #[test]
    fn size_cap() {
        let mut b = CircuitBuilder::new();
        let ws = b.wires(9);
        for w in &ws {
            b.init(*w);
        }
        let c = b.finish(Some(Target {
            wires: vec![ws[0]],
            state: PureState::zero(1),
        }));
        assert!(matches!(
            dense_channel_oracle(&c, 0.0, 0.0, 0.0),
            Err(EngineError::OracleTooLarge { needed: 9, .. })
        ));
    }
}
