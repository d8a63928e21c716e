//! Single-qubit Pauli labels and sparse Pauli strings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::errpoly::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ERRORS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Exponent vector this label contributes to a branch weight.
    pub fn monomial(self) -> Monomial {
        match self {
            Pauli::I => Monomial::ONE,
            Pauli::X => Monomial::PX,
            Pauli::Y => Monomial::PY,
            Pauli::Z => Monomial::PZ,
        }
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A Pauli operator on a fixed number of qubits, without phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    /// `kind` on each listed qubit, identity elsewhere.
    pub fn on(n: usize, kind: Pauli, qubits: &[usize]) -> Self {
        let mut s = Self::identity(n);
        for &q in qubits {
            s.0[q] = kind;
        }
        s
    }

    pub fn single(n: usize, kind: Pauli, qubit: usize) -> Self {
        Self::on(n, kind, &[qubit])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| a.anticommutes(**b))
            .count();
        anti % 2 == 0
    }

    /// Product up to phase.
    pub fn times(&self, other: &PauliString) -> PauliString {
        PauliString(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| Pauli::from_bits(a.has_x() ^ b.has_x(), a.has_z() ^ b.has_z()))
                .collect(),
        )
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(format!("not a Pauli label: {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PauliString)
    }
}
