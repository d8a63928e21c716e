//! Single logical qubit process tomography: χ-matrices from four decoded
//! outputs, gate fidelity and Kraus extraction.
//!
//! The Pauli basis is ordered `(I, X, Y, Z)` and
//! `E(ρ) = Σ χ_mn σ_m ρ σ_n`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::errpoly::{ComplexPoly, ErrorPoly};
use crate::protocols::{logical_process, LogicalProcess, PipelineConfig, ProtocolError, Stage};
use crate::statevec::PureState;
use crate::steane::code;

/// Eigenvalues of χ below this are treated as a non-physical map.
pub const EIGEN_FLOOR: f64 = -1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomographyError {
    #[error("tomography outputs mix polynomial orders {0} and {1}")]
    InconsistentOrder(u8, u8),
    #[error("expected a 2x2 density matrix with 4 entries, got {0}")]
    BadShape(usize),
    #[error("chi has eigenvalue {0:e} below the floor {EIGEN_FLOOR:e}")]
    NonPhysical(f64),
    #[error("the state-only stage has no process")]
    NoProcess,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli matrices in the order `I, X, Y, Z`.
pub fn pauli_basis() -> [Matrix2<Complex64>; 4] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    [
        Matrix2::new(o, z, z, o),
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

/// Amplitudes of `|0>, |1>, |+>, |+i>`.
pub fn qpt_input_amplitudes() -> [[Complex64; 2]; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
    ]
}

/// The four tomography inputs encoded in the seven-qubit code.
pub fn qpt_input_states() -> [PureState; 4] {
    qpt_input_amplitudes().map(|[a, b]| code().encode(a, b))
}

/// A 4×4 process matrix with polynomial entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiMatrix {
    pub order: u8,
    /// Row-major, 16 entries.
    pub entries: Vec<ComplexPoly>,
}

impl ChiMatrix {
    pub fn get(&self, m: usize, n: usize) -> &ComplexPoly {
        &self.entries[m * 4 + n]
    }

    pub fn eval(&self, px: f64, py: f64, pz: f64) -> Matrix4<Complex64> {
        Matrix4::from_fn(|m, n| self.get(m, n).eval(px, py, pz))
    }

    pub fn constant(&self) -> Matrix4<Complex64> {
        Matrix4::from_fn(|m, n| self.get(m, n).constant_term())
    }

    pub fn trace(&self) -> ErrorPoly {
        let mut t = ErrorPoly::zero(self.order);
        for m in 0..4 {
            t.add_scaled(&self.get(m, m).re, 1.0);
        }
        t
    }

    /// Largest entry of `χ - χ†` at the given rates.
    pub fn hermiticity_defect(&self, px: f64, py: f64, pz: f64) -> f64 {
        let x = self.eval(px, py, pz);
        (x - x.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Linear inversion from the outputs of `|0>, |1>, |+>, |+i>`, each a
/// row-major 2×2 density matrix.
pub fn chi_from_runs(outputs: &[Vec<ComplexPoly>; 4]) -> Result<ChiMatrix, TomographyError> {
    let order = outputs[0].first().map(|z| z.order()).unwrap_or(0);
    for o in outputs {
        if o.len() != 4 {
            return Err(TomographyError::BadShape(o.len()));
        }
        for z in o {
            if z.order() != order {
                return Err(TomographyError::InconsistentOrder(order, z.order()));
            }
        }
    }
    let combine = |w: [Complex64; 4]| -> Vec<ComplexPoly> {
        (0..4)
            .map(|e| {
                let mut acc = ComplexPoly::zero(order);
                for (k, wk) in w.iter().enumerate() {
                    acc.add_scaled(&outputs[k][e], *wk);
                }
                acc
            })
            .collect()
    };
    // images[a][b] = E(|a><b|)
    let images = [
        [
            combine([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            combine([c(-0.5, -0.5), c(-0.5, -0.5), c(1.0, 0.0), c(0.0, 1.0)]),
        ],
        [
            combine([c(-0.5, 0.5), c(-0.5, 0.5), c(1.0, 0.0), c(0.0, -1.0)]),
            combine([c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        ],
    ];
    let sigma = pauli_basis();
    let mut entries = Vec::with_capacity(16);
    for m in 0..4 {
        for n in 0..4 {
            let mut acc = ComplexPoly::zero(order);
            for a in 0..2 {
                for b in 0..2 {
                    for ap in 0..2 {
                        for bp in 0..2 {
                            let w = sigma[m][(ap, a)].conj() * sigma[n][(bp, b)] * 0.25;
                            if w.norm() > 0.0 {
                                acc.add_scaled(&images[a][b][ap * 2 + bp], w);
                            }
                        }
                    }
                }
            }
            entries.push(acc);
        }
    }
    Ok(ChiMatrix { order, entries })
}

/// χ of a unitary channel `ρ -> UρU†`.
pub fn unitary_chi(order: u8, u: Matrix2<Complex64>) -> ChiMatrix {
    let outputs = qpt_input_amplitudes().map(|[a, b]| {
        let psi = u * nalgebra::Vector2::new(a, b);
        let mut rho = Vec::with_capacity(4);
        for r in 0..2 {
            for col in 0..2 {
                rho.push(ComplexPoly::constant(order, psi[r] * psi[col].conj()));
            }
        }
        rho
    });
    chi_from_runs(&outputs).expect("uniform order")
}

/// χ of the ideal T gate.
pub fn ideal_t_chi(order: u8) -> ChiMatrix {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    unitary_chi(
        order,
        Matrix2::new(o, z, z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
    )
}

/// χ of an expanded T-gate pipeline, normalized per input.
pub fn process_chi(process: &LogicalProcess) -> Result<ChiMatrix, TomographyError> {
    let amps = qpt_input_amplitudes();
    let outputs = [
        process.decoded_output(amps[0])?,
        process.decoded_output(amps[1])?,
        process.decoded_output(amps[2])?,
        process.decoded_output(amps[3])?,
    ];
    chi_from_runs(&outputs)
}

/// `Tr[χ(p) χ(0)]`, truncated at the order of `chi_p`.
pub fn gate_fidelity(chi_p: &ChiMatrix, chi_0: &ChiMatrix) -> ErrorPoly {
    let mut acc = ComplexPoly::zero(chi_p.order);
    for m in 0..4 {
        for n in 0..4 {
            let w = chi_0.get(n, m).constant_term();
            acc.add_scaled(chi_p.get(m, n), w);
        }
    }
    acc.re
}

/// Kraus operators of χ evaluated at the given rates.
///
/// Slightly negative eigenvalues above [`EIGEN_FLOOR`] are clipped to zero.
pub fn chi_to_kraus(
    chi: &ChiMatrix,
    px: f64,
    py: f64,
    pz: f64,
) -> Result<Vec<Matrix2<Complex64>>, TomographyError> {
    let x = chi.eval(px, py, pz);
    let x = (x + x.adjoint()) * c(0.5, 0.0);
    let eig = x.symmetric_eigen();
    let sigma = pauli_basis();
    let mut ops = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < EIGEN_FLOOR {
            return Err(TomographyError::NonPhysical(lambda));
        }
        if lambda < 0.0 {
            log::warn!("clipping chi eigenvalue {lambda:e}");
            continue;
        }
        if lambda < 1e-14 {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let mut op = Matrix2::zeros();
        for i in 0..4 {
            op += sigma[i] * v[i];
        }
        ops.push(op * c(lambda.sqrt(), 0.0));
    }
    Ok(ops)
}

/// Largest entry of `Σ K†K - I`.
pub fn completeness_defect(kraus: &[Matrix2<Complex64>]) -> f64 {
    let sum = kraus
        .iter()
        .fold(Matrix2::zeros(), |acc, k| acc + k.adjoint() * k);
    (sum - Matrix2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateFidelityReport {
    pub config: PipelineConfig,
    pub chi: ChiMatrix,
    pub gate_fidelity: ErrorPoly,
}

/// Expands the pipeline and reports its logical gate fidelity.
pub fn run_gate_fidelity(config: &PipelineConfig) -> Result<GateFidelityReport, TomographyError> {
    if config.stage == Stage::StateOnly {
        return Err(TomographyError::NoProcess);
    }
    config.validate()?;
    let process = logical_process(config)?;
    gate_fidelity_from_process(&process, config)
}

pub fn gate_fidelity_from_process(
    process: &LogicalProcess,
    config: &PipelineConfig,
) -> Result<GateFidelityReport, TomographyError> {
    let chi = process_chi(process)?;
    let ideal = ideal_t_chi(process.order);
    Ok(GateFidelityReport {
        config: *config,
        gate_fidelity: gate_fidelity(&chi, &ideal),
        chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ideal_t_decomposition() {
        let chi = ideal_t_chi(1).constant();
        let (s, co) = ((PI / 8.0).sin(), (PI / 8.0).cos());
        for m in 0..4 {
            for n in 0..4 {
                let want = match (m, n) {
                    (0, 0) => c(co * co, 0.0),
                    (3, 3) => c(s * s, 0.0),
                    (0, 3) => c(0.0, s * co),
                    (3, 0) => c(0.0, -s * co),
                    _ => c(0.0, 0.0),
                };
                assert!((chi[(m, n)] - want).norm() < 1e-12, "{m}{n}");
            }
        }
    }

    #[test]
    fn identity_process() {
        let chi = unitary_chi(1, Matrix2::identity());
        assert!((chi.constant() - {
            let mut d = Matrix4::zeros();
            d[(0, 0)] = c(1.0, 0.0);
            d
        })
        .norm()
            < 1e-12);
        let k = chi_to_kraus(&chi, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(k.len(), 1);
        assert!((k[0] - Matrix2::identity()).norm() < 1e-12 || (k[0] + Matrix2::identity()).norm() < 1e-12);
    }

    #[test]
    fn ideal_fidelity_is_one() {
        let chi = ideal_t_chi(2);
        assert!((gate_fidelity(&chi, &chi).constant_term() - 1.0).abs() < 1e-12);
        let k = chi_to_kraus(&chi, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(k.len(), 1);
        let ratio = k[0][(1, 1)] / k[0][(0, 0)];
        assert!((ratio - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-12);
        assert!(k[0][(0, 1)].norm() < 1e-12 && k[0][(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn inputs_are_complete() {
        let sigma = pauli_basis();
        let bloch: Vec<[f64; 3]> = qpt_input_amplitudes()
            .iter()
            .map(|[a, b]| {
                let v = nalgebra::Vector2::new(*a, *b);
                let r = v * v.adjoint();
                [1, 2, 3].map(|k| (sigma[k] * r).trace().re)
            })
            .collect();
        let m = nalgebra::Matrix3::from_fn(|i, j| bloch[i + 1][j] - bloch[0][j]);
        assert!(m.determinant().abs() > 0.1);
        let s = &qpt_input_states()[3];
        let want = code().encode(c(std::f64::consts::FRAC_1_SQRT_2, 0.0), c(0.0, std::f64::consts::FRAC_1_SQRT_2));
        assert!((s.inner(&want).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_orders_rejected() {
        let a = vec![ComplexPoly::zero(1); 4];
        let b = vec![ComplexPoly::zero(2); 4];
        let r = chi_from_runs(&[a.clone(), a.clone(), a, b]);
        assert_eq!(r, Err(TomographyError::InconsistentOrder(1, 2)));
    }
}
