//! The three ways of building `|Θ>`, the teleported T-gate that consumes it,
//! and the staged pipelines whose fidelities are reported.
//!
//! A T-gate pipeline is expanded once for all inputs. The data block is
//! prepared noiselessly entangled with a reference qubit `R`,
//! `(|0>_R|0_L> + |1>_R|1_L>)/√2`, so every branch leaves the ancilla block
//! in `|0>_R φ0 + |1>_R φ1` and the output for an input `c0|0_L> + c1|1_L>`
//! is `√2 (c0 φ0 + c1 φ1)`. The engine accumulates the sesquilinear pieces
//! of `φ0, φ1` as polynomials; fidelities for any input angles and the
//! tomography inputs follow by polynomial arithmetic.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::errpoly::{ComplexPoly, ErrorPoly, PolyError};
use crate::noise::{
    expand, CircuitBuilder, EngineError, Ensemble, Expansion, NoisyCircuit, RunStats, Target, Wire,
};
use crate::statevec::{Basis, Gate, PureState};
use crate::steane::{
    append_ft_zero_encoder, append_gate_encoder, append_noisy_ec, append_perfect_ec, code,
    decoded_cross, theta_qubit, ShorStateSpec, BLOCK, SUPPORTS,
};
use crate::noise::Record;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("projection_rounds must be 1 or 2, got {0}")]
    InvalidRounds(u8),
    #[error("unknown method {0:?}; expected ft, ge0 or get")]
    UnknownMethod(String),
    #[error("unknown stage {0:?}; expected state, t-gate, perfect-ec or noisy-ec")]
    UnknownStage(String),
    #[error("the fit grid is rank deficient for the trigonometric basis")]
    RankDeficientGrid,
    #[error("empty angle grid")]
    EmptyGrid,
    #[error("stage {0} has no logical process")]
    NotAProcess(Stage),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// How the `|Θ>` ancilla is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodId {
    /// `|0_L>` from phase-flip checks on seven `|0>`s, then projection.
    Ft,
    /// `|0_L>` from the gate encoder, then projection.
    Ge0,
    /// `H` and `T` on the information qubit, then the gate encoder.
    Get,
}

impl MethodId {
    pub const ALL: [MethodId; 3] = [MethodId::Ft, MethodId::Ge0, MethodId::Get];

    pub fn label(self) -> &'static str {
        match self {
            MethodId::Ft => "fault tolerant",
            MethodId::Ge0 => "gate encoded |0>",
            MethodId::Get => "gate encoded |Θ>",
        }
    }

    pub fn uses_projection(self) -> bool {
        self != MethodId::Get
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodId::Ft => "ft",
            MethodId::Ge0 => "ge0",
            MethodId::Get => "get",
        })
    }
}

impl FromStr for MethodId {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ft" | "fault-tolerant" => Ok(MethodId::Ft),
            "ge0" => Ok(MethodId::Ge0),
            "get" => Ok(MethodId::Get),
            _ => Err(ProtocolError::UnknownMethod(s.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// The `|Θ>` ancilla alone.
    #[serde(rename = "state")]
    StateOnly,
    TGate,
    #[serde(rename = "perfect-ec")]
    TGatePerfectEc,
    #[serde(rename = "noisy-ec")]
    TGateNoisyEc,
}

impl Stage {
    pub const GATE_STAGES: [Stage; 3] = [Stage::TGate, Stage::TGatePerfectEc, Stage::TGateNoisyEc];

    pub fn label(self) -> &'static str {
        match self {
            Stage::StateOnly => "|Θ> state",
            Stage::TGate => "T-gate",
            Stage::TGatePerfectEc => "T + perfect QEC",
            Stage::TGateNoisyEc => "T + noisy QEC",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::StateOnly => "state",
            Stage::TGate => "t-gate",
            Stage::TGatePerfectEc => "perfect-ec",
            Stage::TGateNoisyEc => "noisy-ec",
        })
    }
}

impl FromStr for Stage {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "state" | "state-only" => Ok(Stage::StateOnly),
            "t-gate" | "t" => Ok(Stage::TGate),
            "perfect-ec" | "t-gate+perfect-ec" => Ok(Stage::TGatePerfectEc),
            "noisy-ec" | "t-gate+noisy-ec" => Ok(Stage::TGateNoisyEc),
            _ => Err(ProtocolError::UnknownStage(s.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub method: MethodId,
    pub stage: Stage,
    /// Ignored by [`MethodId::Get`].
    pub projection_rounds: u8,
    pub alpha: f64,
    pub beta: f64,
    pub order: u8,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            method: MethodId::Ft,
            stage: Stage::TGate,
            projection_rounds: 2,
            alpha: PI / 5.0,
            beta: PI / 7.0,
            order: 1,
        }
    }
}

impl PipelineConfig {
    pub fn new(method: MethodId, stage: Stage) -> Self {
        PipelineConfig {
            method,
            stage,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if !(1..=2).contains(&self.projection_rounds) {
            return Err(ProtocolError::InvalidRounds(self.projection_rounds));
        }
        if self.order > crate::noise::MAX_ORDER {
            return Err(EngineError::OrderTooLarge(self.order).into());
        }
        Ok(())
    }
}

/// Projects `block` (ideally `|0_L>`) onto `|Θ>` with a verified seven-qubit
/// cat state controlling transversal CM gates, read in the x basis and
/// post-selected on even parity, `rounds` times.
pub fn append_projection(b: &mut CircuitBuilder, block: &[Wire], rounds: u8) {
    let cat = ShorStateSpec::new(7, false).expect("size 7");
    for _ in 0..rounds {
        let reg = b.register();
        let anc = cat.append(b);
        for (a, q) in anc.iter().zip(block) {
            b.gate(Gate::Cm, &[*a, *q]);
        }
        for a in anc {
            b.measure(a, Basis::X, Record::Parity { register: reg });
        }
        b.post_select_parity(reg, false);
    }
}

/// Appends a `|Θ>` construction and returns the block.
pub fn append_theta_construction(
    b: &mut CircuitBuilder,
    method: MethodId,
    rounds: u8,
) -> Vec<Wire> {
    match method {
        MethodId::Ft => {
            let block = append_ft_zero_encoder(b);
            append_projection(b, &block, rounds);
            block
        }
        MethodId::Ge0 => {
            let block = append_gate_encoder(b, &[]);
            append_projection(b, &block, rounds);
            block
        }
        MethodId::Get => append_gate_encoder(b, &[Gate::H, Gate::T]),
    }
}

pub fn build_theta_construction(method: MethodId, rounds: u8) -> Result<NoisyCircuit, ProtocolError> {
    if !(1..=2).contains(&rounds) {
        return Err(ProtocolError::InvalidRounds(rounds));
    }
    let mut b = CircuitBuilder::new();
    let block = append_theta_construction(&mut b, method, rounds);
    Ok(b.finish(Some(Target {
        wires: block,
        state: code().theta(),
    })))
}

/// Measures `block` in the z basis and keeps only outcomes in the support of
/// `|0_L>`: every parity check and the overall parity even.
pub fn append_zero_readout(b: &mut CircuitBuilder, block: &[Wire]) {
    let total = b.register();
    let checks: Vec<usize> = SUPPORTS.iter().map(|_| b.register()).collect();
    for (k, d) in block.iter().enumerate() {
        let mut registers = vec![total];
        registers.extend(
            SUPPORTS
                .iter()
                .zip(&checks)
                .filter(|(s, _)| s.contains(&k))
                .map(|(_, r)| *r),
        );
        b.measure(*d, Basis::Z, Record::Parities { registers });
    }
    b.post_select_parity(total, false);
    for r in checks {
        b.post_select_parity(r, false);
    }
}

/// `(|0>|0_L> + |1>|1_L>)/√2` with the reference qubit first.
fn reference_pair() -> PureState {
    let (zero, one) = (&code().zero, &code().one);
    let half = 1usize << BLOCK;
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * half];
    for i in 0..half {
        amps[i] = zero.amplitudes()[i] * FRAC_1_SQRT_2;
        amps[half + i] = one.amplitudes()[i] * FRAC_1_SQRT_2;
    }
    PureState::from_amplitudes(amps).expect("256 amplitudes")
}

/// A built T-gate pipeline: the circuit plus the wires the output lives on.
#[derive(Debug, Clone)]
pub struct TGatePipeline {
    pub circuit: NoisyCircuit,
    pub block: Vec<Wire>,
    pub reference: Wire,
}

/// The T-gate pipeline for `config`, with the data block entangled with a
/// reference qubit. The circuit has no target; use [`logical_process`] to
/// read the output.
pub fn build_t_gate_pipeline(config: &PipelineConfig) -> Result<TGatePipeline, ProtocolError> {
    config.validate()?;
    if config.stage == Stage::StateOnly {
        return Err(ProtocolError::NotAProcess(config.stage));
    }
    let mut b = CircuitBuilder::new();
    let block = append_theta_construction(&mut b, config.method, config.projection_rounds);
    let reference = b.wire();
    let data = b.wires(BLOCK);
    let mut pair_wires = vec![reference];
    pair_wires.extend(&data);
    b.prepare(&pair_wires, reference_pair());
    for (a, d) in block.iter().zip(&data) {
        b.gate(Gate::Cnot, &[*a, *d]);
    }
    append_zero_readout(&mut b, &data);
    match config.stage {
        Stage::TGatePerfectEc => append_perfect_ec(&mut b, &block),
        Stage::TGateNoisyEc => append_noisy_ec(&mut b, &block),
        _ => {}
    }
    let circuit = b.finish(None);
    Ok(TGatePipeline {
        circuit,
        block,
        reference,
    })
}

/// Input amplitudes `(cos α, e^{-iβ} sin α)`.
pub fn input_amplitudes(alpha: f64, beta: f64) -> [Complex64; 2] {
    [
        Complex64::new(alpha.cos(), 0.0),
        Complex64::from_polar(alpha.sin(), -beta),
    ]
}

/// Amplitudes of `T(c0|0> + c1|1>)`.
pub fn t_applied(c: [Complex64; 2]) -> [Complex64; 2] {
    [c[0], c[1] * Complex64::from_polar(1.0, FRAC_PI_4)]
}

fn cpoly_from(order: u8, re: &ErrorPoly, im: &ErrorPoly) -> ComplexPoly {
    let mut z = ComplexPoly::zero(order);
    z.re = re.clone();
    z.im = im.clone();
    z
}

/// Polynomial description of a post-selected logical channel, independent of
/// the input state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalProcess {
    pub order: u8,
    /// `gram[i][j] = Σ <φj|φi>`.
    pub gram: Vec<Vec<ComplexPoly>>,
    /// `code[k*2+i][k'*2+j] = Σ <τk|φi> conj(<τk'|φj>)` with `τ0 = |0_L>`,
    /// `τ1 = e^{iπ/4}|1_L>`.
    pub code: Vec<Vec<ComplexPoly>>,
    /// `decoded[i][j]` is the 2×2 matrix `Σ Tr_rest[D φi φj† D†]`, row-major.
    pub decoded: Vec<Vec<Vec<ComplexPoly>>>,
    pub stats: RunStats,
}

const PROCESS_WIDTH: usize = 2 * (4 + 16 + 16);

pub fn process_probe(e: &Ensemble, pipeline: &TGatePipeline) -> Vec<f64> {
    let refs = [PureState::zero(1), PureState::basis(1, 1)];
    let live: Vec<Wire> = e
        .wires()
        .iter()
        .copied()
        .filter(|w| *w != pipeline.reference)
        .collect();
    assert_eq!(live, pipeline.block, "output block must be the only other live register");
    let tau = [code().zero.clone(), {
        let mut t = code().one.clone();
        t.scale(Complex64::from_polar(1.0, FRAC_PI_4));
        t
    }];
    let mut out = vec![Complex64::new(0.0, 0.0); PROCESS_WIDTH / 2];
    for comp in e.project_onto(&[pipeline.reference], &refs) {
        let phi: Vec<PureState> = comp
            .into_iter()
            .map(|v| PureState::from_amplitudes(v).expect("block state"))
            .collect();
        let mut k = 0;
        for i in 0..2 {
            for j in 0..2 {
                out[k] += phi[j].inner(&phi[i]).expect("same size");
                k += 1;
            }
        }
        let ov: Vec<Complex64> = (0..4)
            .map(|ki| tau[ki / 2].inner(&phi[ki % 2]).expect("same size"))
            .collect();
        for a in 0..4 {
            for b in 0..4 {
                out[k] += ov[a] * ov[b].conj();
                k += 1;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let m = decoded_cross(&phi[i], &phi[j]);
                for r in 0..2 {
                    for c in 0..2 {
                        out[k] += m[(r, c)];
                        k += 1;
                    }
                }
            }
        }
    }
    out.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Expands a T-gate pipeline into its [`LogicalProcess`].
pub fn logical_process(config: &PipelineConfig) -> Result<LogicalProcess, ProtocolError> {
    let pipeline = build_t_gate_pipeline(config)?;
    let exp = expand(&pipeline.circuit, config.order, |e| process_probe(e, &pipeline))?;
    Ok(LogicalProcess::from_expansion(exp))
}

impl LogicalProcess {
    /// Unpacks the values produced by [`process_probe`].
    pub fn from_expansion(exp: Expansion) -> Self {
        let order = exp.stats.order;
        let vals: Vec<ComplexPoly> = exp
            .values
            .chunks(2)
            .map(|p| cpoly_from(order, &p[0], &p[1]))
            .collect();
        let mut it = vals.into_iter();
        let mut take = |n: usize| -> Vec<ComplexPoly> { it.by_ref().take(n).collect() };
        let gram = take(4).chunks(2).map(|c| c.to_vec()).collect();
        let code = take(16).chunks(4).map(|c| c.to_vec()).collect();
        let decoded = (0..4)
            .map(|_| take(4))
            .collect::<Vec<_>>()
            .chunks(2)
            .map(|c| c.to_vec())
            .collect();
        LogicalProcess {
            order,
            gram,
            code,
            decoded,
            stats: exp.stats,
        }
    }
}

impl LogicalProcess {
    /// Acceptance probability for input `c0|0_L> + c1|1_L>`.
    pub fn acceptance(&self, c: [Complex64; 2]) -> ErrorPoly {
        let mut acc = ComplexPoly::zero(self.order);
        for i in 0..2 {
            for j in 0..2 {
                acc.add_scaled(&self.gram[i][j], c[i] * c[j].conj() * 2.0);
            }
        }
        acc.re
    }

    /// Unnormalized decoded output, row-major 2×2.
    fn decoded_unnormalized(&self, c: [Complex64; 2]) -> Vec<ComplexPoly> {
        let mut rho = vec![ComplexPoly::zero(self.order); 4];
        for i in 0..2 {
            for j in 0..2 {
                let w = c[i] * c[j].conj() * 2.0;
                for (r, m) in rho.iter_mut().zip(&self.decoded[i][j]) {
                    r.add_scaled(m, w);
                }
            }
        }
        rho
    }

    /// Decoded single-qubit output normalized by its acceptance.
    pub fn decoded_output(&self, c: [Complex64; 2]) -> Result<Vec<ComplexPoly>, ProtocolError> {
        let acc = self.acceptance(c);
        self.decoded_unnormalized(c)
            .iter()
            .map(|z| z.div_real(&acc).map_err(Into::into))
            .collect()
    }

    /// Fidelity of the seven-qubit output with the encoded `T|ψ>`.
    pub fn seven_qubit_fidelity(&self, c: [Complex64; 2]) -> Result<ErrorPoly, ProtocolError> {
        let mut num = ComplexPoly::zero(self.order);
        for k in 0..2 {
            for i in 0..2 {
                for kp in 0..2 {
                    for j in 0..2 {
                        let w = c[k].conj() * c[i] * c[kp] * c[j].conj() * 2.0;
                        num.add_scaled(&self.code[k * 2 + i][kp * 2 + j], w);
                    }
                }
            }
        }
        Ok(num.re.div_series(&self.acceptance(c))?)
    }

    /// Fidelity of the decoded output with `T|ψ>`.
    pub fn one_qubit_fidelity(&self, c: [Complex64; 2]) -> Result<ErrorPoly, ProtocolError> {
        let t = t_applied(c);
        let rho = self.decoded_unnormalized(c);
        let mut num = ComplexPoly::zero(self.order);
        for r in 0..2 {
            for col in 0..2 {
                num.add_scaled(&rho[r * 2 + col], t[r].conj() * t[col]);
            }
        }
        Ok(num.re.div_series(&self.acceptance(c))?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub method: MethodId,
    pub stage: Stage,
    pub projection_rounds: u8,
    pub alpha: f64,
    pub beta: f64,
    pub order: u8,
    pub stats: RunStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub seven_qubit: ErrorPoly,
    pub one_qubit_decoded: ErrorPoly,
    pub meta: ReportMeta,
}

fn meta(config: &PipelineConfig, stats: RunStats) -> ReportMeta {
    ReportMeta {
        method: config.method,
        stage: config.stage,
        projection_rounds: config.projection_rounds,
        alpha: config.alpha,
        beta: config.beta,
        order: config.order,
        stats,
    }
}

fn state_report(config: &PipelineConfig) -> Result<FidelityReport, ProtocolError> {
    let circuit = build_theta_construction(config.method, config.projection_rounds)?;
    let block = circuit.target.as_ref().expect("target").wires.clone();
    let theta = code().theta();
    let theta1 = theta_qubit();
    let t1 = theta1.amplitudes();
    let exp = expand(&circuit, config.order, |e| {
        assert_eq!(e.wires(), &block[..], "block must be the only live register");
        let mut acc = 0.0;
        let mut f7 = 0.0;
        let mut f1 = 0.0;
        for c in e.components() {
            acc += c.state.norm_sqr();
            f7 += theta.inner(&c.state).expect("block").norm_sqr();
            let m = decoded_cross(&c.state, &c.state);
            for r in 0..2 {
                for col in 0..2 {
                    f1 += (t1[r].conj() * m[(r, col)] * t1[col]).re;
                }
            }
        }
        vec![acc, f7, f1]
    })?;
    let [acc, f7, f1]: [ErrorPoly; 3] = exp.values.try_into().expect("three observables");
    Ok(FidelityReport {
        seven_qubit: f7.div_series(&acc)?,
        one_qubit_decoded: f1.div_series(&acc)?,
        meta: meta(config, exp.stats),
    })
}

/// Both fidelities for one configuration.
pub fn run_fidelity_report(config: &PipelineConfig) -> Result<FidelityReport, ProtocolError> {
    config.validate()?;
    if config.stage == Stage::StateOnly {
        return state_report(config);
    }
    let process = logical_process(config)?;
    report_from_process(&process, config)
}

/// Evaluates an already expanded process at the configured angles.
pub fn report_from_process(
    process: &LogicalProcess,
    config: &PipelineConfig,
) -> Result<FidelityReport, ProtocolError> {
    let c = input_amplitudes(config.alpha, config.beta);
    Ok(FidelityReport {
        seven_qubit: process.seven_qubit_fidelity(c)?,
        one_qubit_decoded: process.one_qubit_fidelity(c)?,
        meta: meta(config, process.stats.clone()),
    })
}

/// Basis functions used to fit angle dependence.
pub fn trig_basis(alpha: f64, beta: f64) -> [f64; 3] {
    [
        1.0,
        (4.0 * alpha).cos(),
        (2.0 * alpha).sin().powi(2) * (2.0 * beta).sin(),
    ]
}

/// Least-squares fit of one first-order coefficient over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigFit {
    /// Coefficients of `1`, `cos 4a`, `sin²2a · sin 2b`.
    pub coeffs: [f64; 3],
    /// Largest absolute residual over the grid.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub beta: f64,
    pub seven_qubit: ErrorPoly,
    pub one_qubit_decoded: ErrorPoly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub method: MethodId,
    pub stage: Stage,
    pub points: Vec<SweepPoint>,
    /// Fits of the `px`, `py`, `pz` coefficients of the seven-qubit fidelity.
    pub seven_qubit_fits: Vec<TrigFit>,
    pub one_qubit_fits: Vec<TrigFit>,
    pub stats: RunStats,
}

/// The default grid: `n` points on `[0, π)` for α and on `[0, 2π)` for β.
pub fn uniform_grid(n: usize) -> (Vec<f64>, Vec<f64>) {
    let a = (0..n).map(|k| PI * k as f64 / n as f64).collect();
    let b = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    (a, b)
}

/// Fits samples `(α, β, y)` to [`trig_basis`].
pub fn fit_trig(samples: &[(f64, f64, f64)]) -> Result<TrigFit, ProtocolError> {
    if samples.is_empty() {
        return Err(ProtocolError::EmptyGrid);
    }
    let a = DMatrix::from_fn(samples.len(), 3, |r, c| {
        trig_basis(samples[r].0, samples[r].1)[c]
    });
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.2));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-9 * smax.max(1.0) {
        return Err(ProtocolError::RankDeficientGrid);
    }
    let x = svd.solve(&y, 1e-12).map_err(|_| ProtocolError::RankDeficientGrid)?;
    let residual = (&a * &x - &y).amax();
    Ok(TrigFit {
        coeffs: [x[0], x[1], x[2]],
        residual,
    })
}

/// Evaluates the configuration over a grid of input angles and fits every
/// first-order coefficient.
pub fn angle_sweep(
    config: &PipelineConfig,
    alphas: &[f64],
    betas: &[f64],
) -> Result<SweepReport, ProtocolError> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(ProtocolError::EmptyGrid);
    }
    let process = logical_process(config)?;
    sweep_process(&process, config, alphas, betas)
}

/// [`angle_sweep`] on an already expanded process.
pub fn sweep_process(
    process: &LogicalProcess,
    config: &PipelineConfig,
    alphas: &[f64],
    betas: &[f64],
) -> Result<SweepReport, ProtocolError> {
    let mut points = Vec::new();
    for &alpha in alphas {
        for &beta in betas {
            let c = input_amplitudes(alpha, beta);
            points.push(SweepPoint {
                alpha,
                beta,
                seven_qubit: process.seven_qubit_fidelity(c)?,
                one_qubit_decoded: process.one_qubit_fidelity(c)?,
            });
        }
    }
    let fits = |pick: &dyn Fn(&SweepPoint) -> &ErrorPoly| -> Result<Vec<TrigFit>, ProtocolError> {
        (0..3)
            .map(|v| {
                let samples: Vec<_> = points
                    .iter()
                    .map(|p| (p.alpha, p.beta, pick(p).linear()[v]))
                    .collect();
                fit_trig(&samples)
            })
            .collect()
    };
    Ok(SweepReport {
        method: config.method,
        stage: config.stage,
        seven_qubit_fits: fits(&|p| &p.seven_qubit)?,
        one_qubit_fits: fits(&|p| &p.one_qubit_decoded)?,
        points,
        stats: process.stats.clone(),
    })
}
