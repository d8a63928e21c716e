//! Perturbative expansion over error insertions.
//!
//! A branch with Pauli factors of total weight `w` and label monomial
//! `px^a py^b pz^c` carries weight `px^a py^b pz^c · p0^(S - w)`, where `S` is
//! the number of noisy qubit slots in the circuit. The engine accumulates raw
//! branch observables per label monomial and applies the `p0` powers once at
//! the end.
//!
//! Branches share prefixes: the noiseless run is checkpointed, each noisy
//! location is expanded in parallel from the nearest checkpoint, and deeper
//! insertions recurse from the branch state. The reduction runs in location
//! order, so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ensemble::{apply_paulis, Ensemble};
use super::{EngineError, Location, NoisyCircuit, Op, MAX_ORDER};
use crate::errpoly::{ErrorPoly, Monomial};
use crate::pauli::{Pauli, PauliString};

/// Target number of stored checkpoints along the noiseless run.
const CHECKPOINTS: usize = 48;

/// A Pauli insertion at one location; `paulis[k]` acts on the location's
/// `k`-th wire.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fault {
    pub location: usize,
    pub paulis: PauliString,
}

impl Fault {
    pub fn weight(&self) -> usize {
        self.paulis.weight()
    }

    pub fn monomial(&self) -> Monomial {
        self.paulis
            .0
            .iter()
            .fold(Monomial::ONE, |m, p| m.times(p.monomial()))
    }
}

/// A set of faults at distinct locations, sorted by location.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BranchInsertion {
    pub faults: Vec<Fault>,
}

impl BranchInsertion {
    pub fn weight(&self) -> usize {
        self.faults.iter().map(Fault::weight).sum()
    }

    pub fn monomial(&self) -> Monomial {
        self.faults
            .iter()
            .fold(Monomial::ONE, |m, f| m.times(f.monomial()))
    }
}

/// All non-identity Pauli patterns on `arity` qubits with weight at most
/// `budget`, in a fixed order.
fn fault_patterns(arity: usize, budget: usize) -> Vec<PauliString> {
    match arity {
        0 => Vec::new(),
        1 => Pauli::ERRORS
            .iter()
            .map(|p| PauliString(vec![*p]))
            .collect(),
        2 => {
            let mut out = Vec::new();
            for a in Pauli::ALL {
                for b in Pauli::ALL {
                    let s = PauliString(vec![a, b]);
                    let w = s.weight();
                    if w > 0 && w <= budget {
                        out.push(s);
                    }
                }
            }
            out
        }
        _ => unreachable!("locations touch at most two qubits"),
    }
    .into_iter()
    .filter(|s| s.weight() <= budget)
    .collect()
}

/// Every insertion of total Pauli weight at most `order`, starting with the
/// empty insertion.
pub fn enumerate_branches(
    circuit: &NoisyCircuit,
    order: u8,
) -> Result<Vec<BranchInsertion>, EngineError> {
    if order > MAX_ORDER {
        return Err(EngineError::OrderTooLarge(order));
    }
    let mut out = vec![BranchInsertion::default()];
    let mut frontier = vec![(BranchInsertion::default(), 0usize)];
    while let Some((ins, start)) = frontier.pop() {
        let budget = order as usize - ins.weight();
        if budget == 0 {
            continue;
        }
        for (i, loc) in circuit.locations.iter().enumerate().skip(start) {
            for paulis in fault_patterns(loc.noise_arity(), budget) {
                let mut next = ins.clone();
                next.faults.push(Fault { location: i, paulis });
                out.push(next.clone());
                frontier.push((next, i + 1));
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |x: &BranchInsertion| {
            x.faults
                .iter()
                .map(|f| (f.location, f.paulis.0.clone()))
                .collect::<Vec<_>>()
        };
        (a.weight(), key(a)).cmp(&(b.weight(), key(b)))
    });
    Ok(out)
}

fn p0_power(order: u8, exponent: usize) -> ErrorPoly {
    ErrorPoly::no_error(order).powi(exponent as u32)
}

/// Probability weight of one insertion, truncated at `order`.
pub fn branch_weight(insertion: &BranchInsertion, circuit: &NoisyCircuit, order: u8) -> ErrorPoly {
    let slots = circuit.noisy_slots();
    let w = insertion.weight();
    if w > slots {
        return ErrorPoly::zero(order);
    }
    let label = ErrorPoly::monomial(order, insertion.monomial(), 1.0);
    &label * &p0_power(order, slots - w)
}

fn apply_location(
    e: &mut Ensemble,
    loc: &Location,
    fault: Option<&PauliString>,
) -> Result<(), EngineError> {
    let wires = loc.op.wires();
    match (fault, &loc.op) {
        (Some(p), Op::Measure { .. }) => {
            apply_paulis(e, &wires, p);
            e.apply(&loc.op)
        }
        (Some(p), _) => {
            e.apply(&loc.op)?;
            apply_paulis(e, &wires, p);
            Ok(())
        }
        (None, _) => e.apply(&loc.op),
    }
}

/// Squared norm and target overlap of one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchMasses {
    pub accept: f64,
    pub target: f64,
}

/// Simulates one insertion from scratch.
pub fn run_branch(
    circuit: &NoisyCircuit,
    insertion: &BranchInsertion,
) -> Result<BranchMasses, EngineError> {
    let target = circuit.target.as_ref().ok_or(EngineError::MissingTarget)?;
    let mut faults: BTreeMap<usize, &PauliString> = BTreeMap::new();
    for f in &insertion.faults {
        let loc = circuit
            .locations
            .get(f.location)
            .ok_or_else(|| EngineError::InvalidInsertion(format!("no location {}", f.location)))?;
        if f.paulis.len() != loc.noise_arity() {
            return Err(EngineError::InvalidInsertion(format!(
                "location {} has noise arity {}",
                f.location,
                loc.noise_arity()
            )));
        }
        if faults.insert(f.location, &f.paulis).is_some() {
            return Err(EngineError::InvalidInsertion(format!(
                "two faults at location {}",
                f.location
            )));
        }
    }
    let mut e = Ensemble::new();
    for (i, loc) in circuit.locations.iter().enumerate() {
        apply_location(&mut e, loc, faults.get(&i).copied())?;
        if e.is_empty() {
            return Ok(BranchMasses {
                accept: 0.0,
                target: 0.0,
            });
        }
    }
    Ok(BranchMasses {
        accept: e.accept_mass(),
        target: e.target_mass(&target.wires, &target.state),
    })
}

/// Bookkeeping emitted alongside every expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub order: u8,
    pub locations: usize,
    pub noisy_locations: usize,
    pub noisy_slots: usize,
    pub peak_live_qubits: usize,
    /// Branches simulated to the end of the circuit.
    pub branches_completed: usize,
    /// Branches discarded early because post-selection removed everything.
    pub branches_rejected: usize,
    pub wall_time_ms: f64,
}

/// Polynomial-valued observables of a circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub values: Vec<ErrorPoly>,
    pub stats: RunStats,
}

type Partial = BTreeMap<Monomial, Vec<f64>>;

struct Walker<'a, F> {
    circuit: &'a NoisyCircuit,
    probe: &'a F,
    width: usize,
    partial: Partial,
    completed: usize,
    rejected: usize,
}

impl<'a, F> Walker<'a, F>
where
    F: Fn(&Ensemble) -> Vec<f64> + Sync,
{
    fn new(circuit: &'a NoisyCircuit, probe: &'a F, width: usize) -> Self {
        Walker {
            circuit,
            probe,
            width,
            partial: Partial::new(),
            completed: 0,
            rejected: 0,
        }
    }

    fn record(&mut self, e: &Ensemble, label: Monomial) {
        let values = (self.probe)(e);
        assert_eq!(values.len(), self.width, "probe returned a varying width");
        let acc = self
            .partial
            .entry(label)
            .or_insert_with(|| vec![0.0; self.width]);
        for (a, v) in acc.iter_mut().zip(values) {
            *a += v;
        }
        self.completed += 1;
    }

    /// Expands every fault at location `i`, given the state just before it.
    fn branch_at(
        &mut self,
        i: usize,
        before: &Ensemble,
        budget: usize,
        label: Monomial,
    ) -> Result<(), EngineError> {
        let loc = &self.circuit.locations[i];
        for paulis in fault_patterns(loc.noise_arity(), budget) {
            let mut e = before.clone();
            apply_location(&mut e, loc, Some(&paulis))?;
            let w = paulis.weight();
            let fault_label = paulis
                .0
                .iter()
                .fold(label, |m, p| m.times(p.monomial()));
            if e.is_empty() {
                self.rejected += 1;
                continue;
            }
            self.descend(i + 1, e, budget - w, fault_label)?;
        }
        Ok(())
    }

    /// Runs the rest of the circuit from location `start`, branching on
    /// further faults while budget remains.
    fn descend(
        &mut self,
        start: usize,
        mut e: Ensemble,
        budget: usize,
        label: Monomial,
    ) -> Result<(), EngineError> {
        for i in start..self.circuit.locations.len() {
            let loc = &self.circuit.locations[i];
            if budget > 0 && loc.noise_arity() > 0 {
                self.branch_at(i, &e, budget, label)?;
            }
            apply_location(&mut e, loc, None)?;
            if e.is_empty() {
                self.rejected += 1;
                return Ok(());
            }
        }
        self.record(&e, label);
        Ok(())
    }
}

/// Sums `probe` over every branch with total Pauli weight at most `order`,
/// weighting each by its probability polynomial.
///
/// `probe` maps the final (unnormalized) ensemble of a branch to a fixed
/// number of reals; branches rejected by post-selection contribute nothing.
pub fn expand<F>(circuit: &NoisyCircuit, order: u8, probe: F) -> Result<Expansion, EngineError>
where
    F: Fn(&Ensemble) -> Vec<f64> + Sync,
{
    if order > MAX_ORDER {
        return Err(EngineError::OrderTooLarge(order));
    }
    let started = Instant::now();
    let peak = circuit.validate()?;
    let locs = &circuit.locations;
    let stride = locs.len().div_ceil(CHECKPOINTS).max(1);

    // noiseless pass with checkpoints
    let mut checkpoints = Vec::new();
    let mut e = Ensemble::new();
    let mut noiseless_alive = true;
    for (i, loc) in locs.iter().enumerate() {
        if i % stride == 0 {
            checkpoints.push(e.clone());
        }
        if noiseless_alive {
            apply_location(&mut e, loc, None)?;
            noiseless_alive = !e.is_empty();
        }
    }
    if !noiseless_alive {
        return Err(EngineError::InvalidPostSelection);
    }
    let width = probe(&e).len();
    let mut root = Walker::new(circuit, &probe, width);
    root.record(&e, Monomial::ONE);

    let noisy: Vec<usize> = (0..locs.len())
        .filter(|i| locs[*i].noise_arity() > 0)
        .collect();
    let tasks: Vec<Result<(Partial, usize, usize), EngineError>> = if order == 0 {
        Vec::new()
    } else {
        noisy
            .par_iter()
            .map(|&i| {
                let mut walker = Walker::new(circuit, &probe, width);
                let mut e = checkpoints[i / stride].clone();
                for loc in &locs[(i / stride) * stride..i] {
                    apply_location(&mut e, loc, None)?;
                }
                walker.branch_at(i, &e, order as usize, Monomial::ONE)?;
                Ok((walker.partial, walker.completed, walker.rejected))
            })
            .collect()
    };

    let mut total = root.partial;
    let mut completed = root.completed;
    let mut rejected = 0;
    for t in tasks {
        let (partial, c, r) = t?;
        completed += c;
        rejected += r;
        for (m, vals) in partial {
            let acc = total.entry(m).or_insert_with(|| vec![0.0; width]);
            for (a, v) in acc.iter_mut().zip(vals) {
                *a += v;
            }
        }
    }

    let slots = circuit.noisy_slots();
    let mut values = vec![ErrorPoly::zero(order); width];
    for (m, vals) in &total {
        let w = m.degree() as usize;
        let weight = &ErrorPoly::monomial(order, *m, 1.0) * &p0_power(order, slots - w);
        for (v, raw) in values.iter_mut().zip(vals) {
            v.add_scaled(&weight, *raw);
        }
    }

    Ok(Expansion {
        values,
        stats: RunStats {
            order,
            locations: locs.len(),
            noisy_locations: noisy.len(),
            noisy_slots: slots,
            peak_live_qubits: peak,
            branches_completed: completed,
            branches_rejected: rejected,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// Post-selected target fidelity as a ratio of polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostSelectedResult {
    /// Target-overlap mass of accepted branches.
    pub numerator: ErrorPoly,
    /// Acceptance probability.
    pub denominator: ErrorPoly,
    pub fidelity: ErrorPoly,
    pub stats: RunStats,
}

/// Fidelity of the circuit's output with its target, conditioned on
/// acceptance, to the given order.
pub fn fidelity_polynomial(
    circuit: &NoisyCircuit,
    order: u8,
) -> Result<PostSelectedResult, EngineError> {
    let target = circuit.target.as_ref().ok_or(EngineError::MissingTarget)?;
    let exp = expand(circuit, order, |e| {
        vec![e.accept_mass(), e.target_mass(&target.wires, &target.state)]
    })?;
    let [denominator, numerator]: [ErrorPoly; 2] =
        exp.values.try_into().expect("two observables");
    if denominator.constant_term().abs() < 1e-14 {
        return Err(EngineError::InvalidPostSelection);
    }
    let fidelity = numerator.div_series(&denominator)?;
    Ok(PostSelectedResult {
        numerator,
        denominator,
        fidelity,
        stats: exp.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{CircuitBuilder, Record, Target};
    use crate::statevec::{Basis, Gate, PureState};

    fn one_qubit_circuit(gates: &[Gate], target: PureState) -> NoisyCircuit {
        let mut b = CircuitBuilder::new();
        let w = b.wire();
        b.prepare(&[w], PureState::zero(1));
        for g in gates {
            b.gate(*g, &[w]);
        }
        b.finish(Some(Target {
            wires: vec![w],
            state: target,
        }))
    }

    fn identity_gate_circuit() -> NoisyCircuit {
        // a noisy identity: X·X as one noisy location would be two, so use
        // a noiseless prep followed by one noisy Z (which is the identity on |0>)
        one_qubit_circuit(&[Gate::Z], PureState::zero(1))
    }

    #[test]
    fn branch_counts() {
        let c = one_qubit_circuit(&[Gate::H], PureState::zero(1));
        assert_eq!(enumerate_branches(&c, 1).unwrap().len(), 4);

        let mut b = CircuitBuilder::new();
        let ws = b.wires(2);
        b.prepare(&ws, PureState::zero(2)).gate(Gate::Cnot, &ws);
        assert_eq!(enumerate_branches(&b.finish(None), 2).unwrap().len(), 16);

        let c = one_qubit_circuit(&[Gate::H, Gate::H], PureState::zero(1));
        let branches = enumerate_branches(&c, 2).unwrap();
        // exhaustive count: at most one Pauli per location, total weight <= 2
        let mut brute = 0;
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let w = usize::from(a != Pauli::I) + usize::from(b != Pauli::I);
                if w <= 2 {
                    brute += 1;
                }
            }
        }
        assert_eq!(branches.len(), brute);
        assert_eq!(brute, 16);

        assert_eq!(
            enumerate_branches(&c, 3),
            Err(EngineError::OrderTooLarge(3))
        );
    }

    #[test]
    fn weights() {
        let c = one_qubit_circuit(&[Gate::H], PureState::zero(1));
        let empty = BranchInsertion::default();
        assert_eq!(branch_weight(&empty, &c, 1), ErrorPoly::no_error(1));
        let x = BranchInsertion {
            faults: vec![Fault {
                location: 1,
                paulis: PauliString(vec![Pauli::X]),
            }],
        };
        assert_eq!(branch_weight(&x, &c, 2), ErrorPoly::px(2));

        let c2 = one_qubit_circuit(&[Gate::H, Gate::H], PureState::zero(1));
        let q = ErrorPoly::from_terms(
            2,
            [(Monomial::PX, 1.0), (Monomial::PY, 1.0), (Monomial::PZ, 1.0)],
        );
        let expected = &(&ErrorPoly::one(2) - &q.scale(2.0)) + &(&q * &q);
        assert!(branch_weight(&empty, &c2, 2).max_abs_diff(&expected) < 1e-14);
        let (px, py, pz) = (0.01, 0.02, 0.03);
        let exact = (1.0f64 - px - py - pz).powi(2);
        assert!((branch_weight(&empty, &c2, 2).eval(px, py, pz) - exact).abs() < 1e-14);
    }

    #[test]
    fn single_branch_simulation() {
        let mut b = CircuitBuilder::new();
        let w = b.wire();
        let keep = b.wire();
        b.prepare(&[keep], PureState::zero(1));
        b.init(w).measure(w, Basis::Z, Record::PostSelect { outcome: false });
        let c = b.finish(Some(Target {
            wires: vec![keep],
            state: PureState::zero(1),
        }));
        let x_before_measure = BranchInsertion {
            faults: vec![Fault {
                location: 2,
                paulis: PauliString(vec![Pauli::X]),
            }],
        };
        assert_eq!(run_branch(&c, &x_before_measure).unwrap().accept, 0.0);
        let z_on_init = BranchInsertion {
            faults: vec![Fault {
                location: 1,
                paulis: PauliString(vec![Pauli::Z]),
            }],
        };
        let clean = run_branch(&c, &BranchInsertion::default()).unwrap();
        assert_eq!(run_branch(&c, &z_on_init).unwrap(), clean);
        assert_eq!(clean.accept, 1.0);
    }

    #[test]
    fn simple_fidelities() {
        let r = fidelity_polynomial(&identity_gate_circuit(), 1).unwrap();
        let expected = ErrorPoly::from_terms(
            1,
            [(Monomial::ONE, 1.0), (Monomial::PX, -1.0), (Monomial::PY, -1.0)],
        );
        assert!(r.fidelity.max_abs_diff(&expected) < 1e-12);
        assert!(r.denominator.max_abs_diff(&ErrorPoly::one(1)) < 1e-12);

        let mut plus = PureState::zero(1);
        plus.apply_gate(Gate::H, &[0]).unwrap();
        let r = fidelity_polynomial(&one_qubit_circuit(&[Gate::H], plus), 1).unwrap();
        let expected = ErrorPoly::from_terms(
            1,
            [(Monomial::ONE, 1.0), (Monomial::PY, -1.0), (Monomial::PZ, -1.0)],
        );
        assert!(r.fidelity.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn order_zero_is_exact_for_correct_circuits() {
        let mut plus = PureState::zero(1);
        plus.apply_gate(Gate::H, &[0]).unwrap();
        let r = fidelity_polynomial(&one_qubit_circuit(&[Gate::H, Gate::T, Gate::T, Gate::T, Gate::T, Gate::Z], plus), 0)
            .unwrap();
        assert!(r.fidelity.max_abs_diff(&ErrorPoly::one(0)) < 1e-12);
    }

    #[test]
    fn engine_matches_explicit_branch_sum() {
        let mut b = CircuitBuilder::new();
        let ws = b.wires(3);
        b.init(ws[0]).init(ws[1]).gate(Gate::H, &[ws[0]]).gate(Gate::Cnot, &[ws[0], ws[1]]);
        b.init(ws[2]).gate(Gate::Cnot, &[ws[1], ws[2]]);
        b.measure(ws[2], Basis::Z, Record::Parity { register: 0 });
        b.post_select_parity(0, false);
        let mut ghz = PureState::zero(2);
        ghz.apply_gate(Gate::H, &[0]).unwrap();
        ghz.apply_gate(Gate::Cnot, &[0, 1]).unwrap();
        let c = b.finish(Some(Target {
            wires: vec![ws[0], ws[1]],
            state: ghz,
        }));
        for order in 0..=2u8 {
            let engine = fidelity_polynomial(&c, order).unwrap();
            let mut num = ErrorPoly::zero(order);
            let mut den = ErrorPoly::zero(order);
            for ins in enumerate_branches(&c, order).unwrap() {
                let w = branch_weight(&ins, &c, order);
                let m = run_branch(&c, &ins).unwrap();
                num.add_scaled(&w, m.target);
                den.add_scaled(&w, m.accept);
            }
            assert!(engine.numerator.max_abs_diff(&num) < 1e-10);
            assert!(engine.denominator.max_abs_diff(&den) < 1e-10);
        }
    }

    #[test]
    fn rejected_noiseless_run_is_an_error() {
        let mut b = CircuitBuilder::new();
        let w = b.wire();
        let k = b.wire();
        b.prepare(&[k], PureState::zero(1));
        b.init(w).measure(w, Basis::Z, Record::PostSelect { outcome: true });
        let c = b.finish(Some(Target {
            wires: vec![k],
            state: PureState::zero(1),
        }));
        assert_eq!(
            fidelity_polynomial(&c, 1).unwrap_err(),
            EngineError::InvalidPostSelection
        );
    }
}
