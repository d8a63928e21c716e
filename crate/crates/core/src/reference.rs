//! Bundled first-order coefficients of the three reference fidelity tables
//! and pointwise comparison against computed polynomials.
//!
//! Every coefficient is stored on the basis `1, cos 4a, sin²2a · sin 2b`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocols::{trig_basis, MethodId, Stage};

/// The bundled reference file.
pub const BUNDLED: &str = include_str!("../data/reference_tables.json");

/// Per-coefficient tolerance for table comparisons.
pub const TABLE_TOLERANCE: f64 = 1e-6;

pub const SCHEMA: u32 = 1;

/// Coefficients of `1, cos 4a, sin²2a · sin 2b`.
pub type TrigCoeffs = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReferenceError {
    #[error("reference file does not parse: {0}")]
    Parse(String),
    #[error("reference file has schema {0}, expected {SCHEMA}")]
    Schema(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    SevenQubit,
    OneQubit,
    GateFidelity,
}

impl Measure {
    pub fn label(self) -> &'static str {
        match self {
            Measure::SevenQubit => "7-qubit",
            Measure::OneQubit => "logical qubit",
            Measure::GateFidelity => "gate fidelity",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::SevenQubit => "seven_qubit",
            Measure::OneQubit => "one_qubit",
            Measure::GateFidelity => "gate_fidelity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCell {
    pub method: MethodId,
    pub measure: Measure,
    pub stage: Stage,
    pub px: TrigCoeffs,
    pub py: TrigCoeffs,
    pub pz: TrigCoeffs,
    /// The cell as typeset.
    pub printed: String,
}

impl ReferenceCell {
    pub fn coeffs(&self) -> [TrigCoeffs; 3] {
        [self.px, self.py, self.pz]
    }

    /// `px, py, pz` coefficients at the input angles.
    pub fn linear_at(&self, alpha: f64, beta: f64) -> [f64; 3] {
        let basis = trig_basis(alpha, beta);
        self.coeffs()
            .map(|c| c.iter().zip(basis).map(|(a, b)| a * b).sum())
    }

    pub fn is_angle_free(&self) -> bool {
        self.coeffs().iter().all(|c| c[1] == 0.0 && c[2] == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub schema: u32,
    pub basis: Vec<String>,
    pub provenance: String,
    pub table1: Vec<ReferenceCell>,
    pub table2: Vec<ReferenceCell>,
    pub table3: Vec<ReferenceCell>,
}

impl ReferenceTables {
    pub fn from_json(text: &str) -> Result<Self, ReferenceError> {
        let t: ReferenceTables =
            serde_json::from_str(text).map_err(|e| ReferenceError::Parse(e.to_string()))?;
        if t.schema != SCHEMA {
            return Err(ReferenceError::Schema(t.schema));
        }
        Ok(t)
    }

    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled reference file is valid")
    }

    /// Cells of table 1, 2 or 3.
    pub fn table(&self, number: u8) -> &[ReferenceCell] {
        match number {
            1 => &self.table1,
            2 => &self.table2,
            3 => &self.table3,
            _ => &[],
        }
    }

    pub fn lookup(
        &self,
        table: u8,
        method: MethodId,
        stage: Stage,
        measure: Measure,
    ) -> Option<&ReferenceCell> {
        self.table(table)
            .iter()
            .find(|c| c.method == method && c.stage == stage && c.measure == measure)
    }
}

/// Computed first-order coefficients at one input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub alpha: f64,
    pub beta: f64,
    pub linear: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellComparison {
    pub printed: String,
    pub reference: [TrigCoeffs; 3],
    /// Largest coefficient deviation over all samples.
    pub max_deviation: f64,
    /// The sample where the largest deviation occurs.
    pub worst: Option<Sample>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares samples against the reference cell evaluated at each sample's
/// angles. Angle-free cells ignore the angles.
pub fn compare_samples(cell: &ReferenceCell, samples: &[Sample], tolerance: f64) -> CellComparison {
    let mut max_deviation = 0.0;
    let mut worst = None;
    for s in samples {
        let want = if cell.is_angle_free() {
            cell.coeffs().map(|c| c[0])
        } else {
            cell.linear_at(s.alpha, s.beta)
        };
        let dev = s
            .linear
            .iter()
            .zip(want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if worst.is_none() || dev > max_deviation {
            max_deviation = dev;
            worst = Some(*s);
        }
    }
    CellComparison {
        printed: cell.printed.clone(),
        reference: cell.coeffs(),
        max_deviation,
        worst,
        tolerance,
        pass: !samples.is_empty() && max_deviation <= tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bundled_tables_are_complete() {
        let t = ReferenceTables::bundled();
        assert_eq!(t.table1.len(), 6);
        assert_eq!(t.table2.len(), 18);
        assert_eq!(t.table3.len(), 9);
        for m in MethodId::ALL {
            for measure in [Measure::SevenQubit, Measure::OneQubit] {
                assert!(t.lookup(1, m, Stage::StateOnly, measure).is_some());
                for s in Stage::GATE_STAGES {
                    assert!(t.lookup(2, m, s, measure).is_some());
                }
            }
            for s in Stage::GATE_STAGES {
                assert!(t.lookup(3, m, s, Measure::GateFidelity).is_some());
            }
        }
    }

    #[test]
    fn closed_forms_evaluate() {
        let t = ReferenceTables::bundled();
        let c = t
            .lookup(2, MethodId::Get, Stage::TGateNoisyEc, Measure::OneQubit)
            .unwrap();
        // 1 - px(15 - 4cos4a) + (19px/2) sin²2a sin2b at a = π/8, b = π/4
        let l = c.linear_at(PI / 8.0, PI / 4.0);
        assert!((l[0] - (-15.0 + 9.5 / 2.0)).abs() < 1e-12);
        let l = c.linear_at(PI / 4.0, PI / 4.0);
        assert!((l[0] - (-15.0 - 4.0 + 9.5)).abs() < 1e-12);
        let ft = t.lookup(1, MethodId::Ft, Stage::StateOnly, Measure::SevenQubit).unwrap();
        assert_eq!(ft.coeffs().map(|c| c[0]), [-83.5, -35.5, -19.0]);
    }

    #[test]
    fn comparison_flags_deviation() {
        let t = ReferenceTables::bundled();
        let c = t.lookup(3, MethodId::Ft, Stage::TGate, Measure::GateFidelity).unwrap();
        let good = Sample { alpha: 0.3, beta: 0.1, linear: [-3.0, -5.0, -14.0] };
        assert!(compare_samples(c, &[good], TABLE_TOLERANCE).pass);
        let bad = Sample { linear: [-3.0, -5.0, -14.1], ..good };
        let r = compare_samples(c, &[good, bad], TABLE_TOLERANCE);
        assert!(!r.pass && (r.max_deviation - 0.1).abs() < 1e-9);
        assert!(!compare_samples(c, &[], TABLE_TOLERANCE).pass);
    }

    #[test]
    fn schema_is_checked() {
        let text = BUNDLED.replacen("\"schema\": 1", "\"schema\": 7", 1);
        assert_eq!(ReferenceTables::from_json(&text), Err(ReferenceError::Schema(7)));
    }
}
