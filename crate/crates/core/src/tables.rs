//! Regenerates the three fidelity tables and optionally compares each cell
//! with the bundled reference.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::errpoly::ErrorPoly;
use crate::protocols::{
    logical_process, run_fidelity_report, sweep_process, uniform_grid, MethodId, PipelineConfig,
    ProtocolError, Stage, TrigFit,
};
use crate::reference::{compare_samples, CellComparison, Measure, ReferenceTables, Sample, TABLE_TOLERANCE};
use crate::tomography::{gate_fidelity_from_process, TomographyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("{method} {stage}: {source}")]
    Protocol {
        method: MethodId,
        stage: Stage,
        source: ProtocolError,
    },
    #[error("{method} {stage}: {source}")]
    Tomography {
        method: MethodId,
        stage: Stage,
        source: TomographyError,
    },
}

/// Input angles at which angle-dependent cells are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleGrid {
    /// `n × n` points, α on `[0, π)` and β on `[0, 2π)`.
    Uniform(usize),
    Point { alpha: f64, beta: f64 },
}

impl AngleGrid {
    pub fn axes(self) -> (Vec<f64>, Vec<f64>) {
        match self {
            AngleGrid::Uniform(n) => uniform_grid(n),
            AngleGrid::Point { alpha, beta } => (vec![alpha], vec![beta]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableOptions {
    pub methods: Vec<MethodId>,
    pub stages: Vec<Stage>,
    pub order: u8,
    pub projection_rounds: u8,
    pub grid: AngleGrid,
    /// Angles of the reported polynomial for angle-dependent cells.
    pub alpha: f64,
    pub beta: f64,
    pub compare: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        let d = PipelineConfig::default();
        TableOptions {
            methods: MethodId::ALL.to_vec(),
            stages: Stage::GATE_STAGES.to_vec(),
            order: 1,
            projection_rounds: d.projection_rounds,
            grid: AngleGrid::Uniform(8),
            alpha: d.alpha,
            beta: d.beta,
            compare: false,
        }
    }
}

impl TableOptions {
    fn config(&self, method: MethodId, stage: Stage) -> PipelineConfig {
        PipelineConfig {
            method,
            stage,
            projection_rounds: self.projection_rounds,
            alpha: self.alpha,
            beta: self.beta,
            order: self.order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub table: u8,
    pub method: MethodId,
    pub stage: Stage,
    pub measure: Measure,
    /// The full polynomial, at the configured angles where relevant.
    pub polynomial: ErrorPoly,
    /// Trig-basis fits of the `px, py, pz` coefficients over the grid.
    pub fit: Option<Vec<TrigFit>>,
    pub samples: Vec<Sample>,
    pub comparison: Option<CellComparison>,
}

impl TableCell {
    fn new(table: u8, config: &PipelineConfig, measure: Measure, polynomial: ErrorPoly) -> Self {
        let samples = vec![Sample {
            alpha: config.alpha,
            beta: config.beta,
            linear: polynomial.linear(),
        }];
        TableCell {
            table,
            method: config.method,
            stage: config.stage,
            measure,
            polynomial,
            fit: None,
            samples,
            comparison: None,
        }
    }

    fn compare(&mut self, refs: &ReferenceTables) {
        self.comparison = refs
            .lookup(self.table, self.method, self.stage, self.measure)
            .map(|cell| compare_samples(cell, &self.samples, TABLE_TOLERANCE));
    }
}

/// `true` when every compared cell passes; `None` without comparisons.
pub fn all_pass(cells: &[TableCell]) -> Option<bool> {
    let compared: Vec<bool> = cells
        .iter()
        .filter_map(|c| c.comparison.as_ref().map(|x| x.pass))
        .collect();
    (!compared.is_empty()).then(|| compared.iter().all(|p| *p))
}

fn finish(mut cells: Vec<TableCell>, opts: &TableOptions) -> Vec<TableCell> {
    if opts.compare {
        let refs = ReferenceTables::bundled();
        for c in &mut cells {
            c.compare(&refs);
        }
    }
    cells
}

/// Seven- and one-qubit fidelities of the `|Θ>` constructions.
pub fn table1(opts: &TableOptions) -> Result<Vec<TableCell>, TableError> {
    let per_method: Vec<Vec<TableCell>> = opts
        .methods
        .par_iter()
        .map(|&m| {
            let config = opts.config(m, Stage::StateOnly);
            let r = run_fidelity_report(&config).map_err(|source| TableError::Protocol {
                method: m,
                stage: Stage::StateOnly,
                source,
            })?;
            Ok(vec![
                TableCell::new(1, &config, Measure::SevenQubit, r.seven_qubit),
                TableCell::new(1, &config, Measure::OneQubit, r.one_qubit_decoded),
            ])
        })
        .collect::<Result<_, TableError>>()?;
    let mut cells: Vec<TableCell> = per_method.into_iter().flatten().collect();
    cells.sort_by_key(|c| (c.measure as u8, c.method as u8));
    Ok(finish(cells, opts))
}

fn gate_configs(opts: &TableOptions) -> Vec<PipelineConfig> {
    let mut out = Vec::new();
    for &s in &opts.stages {
        if s == Stage::StateOnly {
            continue;
        }
        for &m in &opts.methods {
            out.push(opts.config(m, s));
        }
    }
    out
}

/// Output-state fidelities after the T-gate stages, sampled over the grid.
pub fn table2(opts: &TableOptions) -> Result<Vec<TableCell>, TableError> {
    let (alphas, betas) = opts.grid.axes();
    let per_config: Vec<Vec<TableCell>> = gate_configs(opts)
        .par_iter()
        .map(|config| {
            let err = |source| TableError::Protocol {
                method: config.method,
                stage: config.stage,
                source,
            };
            let process = logical_process(config).map_err(err)?;
            let at = crate::protocols::report_from_process(&process, config).map_err(err)?;
            let sweep = sweep_process(&process, config, &alphas, &betas);
            let (points, fits) = match sweep {
                Ok(s) => (s.points, Some((s.seven_qubit_fits, s.one_qubit_fits))),
                Err(ProtocolError::RankDeficientGrid) => {
                    let mut points = Vec::new();
                    for &alpha in &alphas {
                        for &beta in &betas {
                            let c = PipelineConfig { alpha, beta, ..*config };
                            let r = crate::protocols::report_from_process(&process, &c)
                                .map_err(err)?;
                            points.push(crate::protocols::SweepPoint {
                                alpha,
                                beta,
                                seven_qubit: r.seven_qubit,
                                one_qubit_decoded: r.one_qubit_decoded,
                            });
                        }
                    }
                    (points, None)
                }
                Err(e) => return Err(err(e)),
            };
            let mut seven = TableCell::new(2, config, Measure::SevenQubit, at.seven_qubit);
            let mut one = TableCell::new(2, config, Measure::OneQubit, at.one_qubit_decoded);
            seven.samples = points
                .iter()
                .map(|p| Sample { alpha: p.alpha, beta: p.beta, linear: p.seven_qubit.linear() })
                .collect();
            one.samples = points
                .iter()
                .map(|p| Sample { alpha: p.alpha, beta: p.beta, linear: p.one_qubit_decoded.linear() })
                .collect();
            if let Some((f7, f1)) = fits {
                seven.fit = Some(f7);
                one.fit = Some(f1);
            }
            Ok(vec![seven, one])
        })
        .collect::<Result<_, TableError>>()?;
    let mut cells: Vec<TableCell> = per_config.into_iter().flatten().collect();
    cells.sort_by_key(|c| (c.measure as u8, c.stage as u8, c.method as u8));
    Ok(finish(cells, opts))
}

/// Logical gate fidelities from process tomography.
pub fn table3(opts: &TableOptions) -> Result<Vec<TableCell>, TableError> {
    let mut cells: Vec<TableCell> = gate_configs(opts)
        .par_iter()
        .map(|config| {
            let process = logical_process(config).map_err(|source| TableError::Protocol {
                method: config.method,
                stage: config.stage,
                source,
            })?;
            let g = gate_fidelity_from_process(&process, config).map_err(|source| {
                TableError::Tomography {
                    method: config.method,
                    stage: config.stage,
                    source,
                }
            })?;
            Ok(TableCell::new(3, config, Measure::GateFidelity, g.gate_fidelity))
        })
        .collect::<Result<_, TableError>>()?;
    cells.sort_by_key(|c| (c.stage as u8, c.method as u8));
    Ok(finish(cells, opts))
}
