//! Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;

use num_complex::Complex64;
use steane_tgate::cli::{cell_text, oracle_rows};
use steane_tgate::noise::corpus::toy_corpus;
use steane_tgate::noise::{run_branch, BranchInsertion, CircuitBuilder, Op, Record, Target};
use steane_tgate::pauli::{Pauli, PauliString};
use steane_tgate::protocols::{
    logical_process, report_from_process, MethodId, PipelineConfig, Stage,
};
use steane_tgate::reference::Measure;
use steane_tgate::statevec::PureState;
use steane_tgate::steane::{
    append_perfect_ec, append_syndrome, code, correction_table, perfect_decode, EncoderLayout,
    SyndromeKind, BLOCK,
};
use steane_tgate::tables::{table1, table2, table3, AngleGrid, TableCell, TableOptions};
use steane_tgate::tomography::{
    chi_to_kraus, completeness_defect, gate_fidelity_from_process, ideal_t_chi, run_gate_fidelity,
};

const ZERO_TOL: f64 = 1e-9;
const ALGEBRA_TOL: f64 = 1e-10;
const CHI_TOL: f64 = 1e-10;
const KRAUS_TOL: f64 = 1e-6;
const ORACLE_SCALE: f64 = 100.0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn report_cells(cells: &[TableCell]) -> (usize, usize) {
    let mut passed = 0;
    for c in cells {
        let cmp = c.comparison.as_ref().expect("compared");
        if cmp.pass {
            passed += 1;
        }
        println!(
            "    table {} {:<4} {:<11} {:<13} {}  computed {}  reference {}  max dev {:.3e}",
            c.table,
            c.method.to_string(),
            c.stage.to_string(),
            c.measure.to_string(),
            if cmp.pass { "ok  " } else { "MISS" },
            cell_text(c),
            cmp.printed,
            cmp.max_deviation
        );
    }
    (passed, cells.len())
}

fn grid_options(stages: Vec<Stage>) -> TableOptions {
    TableOptions {
        stages,
        grid: AngleGrid::Uniform(8),
        compare: true,
        ..TableOptions::default()
    }
}

fn criterion_1() -> Verdict {
    let cells = table1(&grid_options(vec![Stage::StateOnly])).expect("table 1 runs");
    let (ok, n) = report_cells(&cells);
    verdict(ok == n, format!("{ok}/{n} cells within 1e-6"))
}

fn criterion_2() -> Verdict {
    let opts = grid_options(Stage::GATE_STAGES.to_vec());
    let mut cells = table2(&opts).expect("table 2 runs");
    cells.extend(table3(&opts).expect("table 3 runs"));
    let (ok, n) = report_cells(&cells);
    verdict(ok == n, format!("{ok}/{n} cells within 1e-6 on the 8x8 grid"))
}

fn linear_of_measures(config: &PipelineConfig, grid: &[(f64, f64)]) -> Vec<(Measure, [f64; 3])> {
    let process = logical_process(config).expect("pipeline runs");
    let mut out = Vec::new();
    for &(alpha, beta) in grid {
        let c = PipelineConfig { alpha, beta, ..*config };
        let r = report_from_process(&process, &c).expect("report");
        out.push((Measure::SevenQubit, r.seven_qubit.linear()));
        out.push((Measure::OneQubit, r.one_qubit_decoded.linear()));
    }
    let g = gate_fidelity_from_process(&process, config).expect("tomography");
    out.push((Measure::GateFidelity, g.gate_fidelity.linear()));
    out
}

fn grid_points() -> Vec<(f64, f64)> {
    let (a, b) = steane_tgate::protocols::uniform_grid(8);
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn criterion_3() -> Verdict {
    let grid = grid_points();
    let mut pass = true;
    let mut parts = Vec::new();
    for method in [MethodId::Ft, MethodId::Ge0] {
        let config = PipelineConfig::new(method, Stage::TGatePerfectEc);
        for measure in [Measure::SevenQubit, Measure::OneQubit, Measure::GateFidelity] {
            let worst = linear_of_measures(&config, &grid)
                .iter()
                .filter(|(m, _)| *m == measure)
                .map(|(_, l)| max_abs(l))
                .fold(0.0, f64::max);
            let ok = worst <= ZERO_TOL;
            pass &= ok;
            println!("    {method} perfect-ec {measure:<13} max |first-order coeff| {worst:.4}  {}", if ok { "ok" } else { "MISS" });
        }
        parts.push(method.to_string());
    }
    let config = PipelineConfig {
        alpha: PI / 5.0,
        ..PipelineConfig::new(MethodId::Get, Stage::TGatePerfectEc)
    };
    let get = linear_of_measures(&config, &[(config.alpha, config.beta)]);
    let largest = get.iter().map(|(_, l)| max_abs(l)).fold(0.0, f64::max);
    let get_ok = largest > 0.5;
    println!("    get perfect-ec largest |first-order coeff| at a = pi/5: {largest:.4}  {}", if get_ok { "ok" } else { "MISS" });
    pass &= get_ok;
    verdict(pass, format!("ft/ge0 zero within 1e-9, get > 0.5 ({largest:.3})"))
}

fn criterion_4() -> Verdict {
    let config = PipelineConfig {
        projection_rounds: 1,
        ..PipelineConfig::new(MethodId::Ft, Stage::TGatePerfectEc)
    };
    let g = run_gate_fidelity(&config).expect("tomography");
    let l = g.gate_fidelity.linear();
    let m = max_abs(&l);
    verdict(m > ZERO_TOL, format!("rounds=1 ft perfect-ec gate fidelity linear terms {l:?}, max magnitude {m}"))
}

fn criterion_5() -> Verdict {
    let grid = grid_points();
    let ft = linear_of_measures(&PipelineConfig::new(MethodId::Ft, Stage::TGateNoisyEc), &grid);
    let ge0 = linear_of_measures(&PipelineConfig::new(MethodId::Ge0, Stage::TGateNoisyEc), &grid);
    let dev = ft
        .iter()
        .zip(&ge0)
        .map(|((_, a), (_, b))| max_abs(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]]))
        .fold(0.0, f64::max);
    let d = PipelineConfig::default();
    let at_default = linear_of_measures(&PipelineConfig::new(MethodId::Ft, Stage::TGateNoisyEc), &[(d.alpha, d.beta)]);
    let mut dominant = true;
    for (m, l) in &at_default {
        let ok = l[0].abs() > l[1].abs() && l[0].abs() > l[2].abs();
        println!("    ft noisy-ec {m:<13} at (a, b) = (pi/5, pi/7): {l:?}  px dominant: {ok}");
        dominant &= ok;
    }
    verdict(
        dev <= ZERO_TOL && dominant,
        format!("ft vs ge0 max deviation {dev:.2e}, px dominant: {dominant}"),
    )
}

fn criterion_6() -> Verdict {
    let corpus = toy_corpus();
    let has = |f: &dyn Fn(&Op, bool) -> bool| {
        corpus
            .iter()
            .filter(|t| t.circuit.locations.iter().any(|l| f(&l.op, l.noisy)))
            .count()
    };
    let post = has(&|op, _| {
        matches!(op, Op::PostSelectParity { .. } | Op::Measure { record: Record::PostSelect { .. }, .. })
    });
    let init = has(&|op, noisy| noisy && matches!(op, Op::Init { .. }));
    let meas = has(&|op, noisy| noisy && matches!(op, Op::Measure { .. }));
    let widest = corpus.iter().map(|t| t.circuit.validate().expect("valid")).max().unwrap_or(0);
    let shape_ok = corpus.len() >= 12 && widest <= 6 && post > 0 && init > 0 && meas > 0;
    let mut worst: f64 = 0.0;
    let mut rows_ok = true;
    for order in [1u8, 2] {
        for r in oracle_rows(order).expect("oracle runs") {
            worst = worst.max(r.deviation / r.p.powi(order as i32 + 1));
            rows_ok &= r.pass;
        }
    }
    verdict(
        shape_ok && rows_ok && worst <= ORACLE_SCALE,
        format!(
            "{} circuits (max {widest} qubits; {post} post-select, {init} noisy init, {meas} noisy measure), worst |dev|/p^(K+1) = {worst:.3}",
            corpus.len()
        ),
    )
}

fn criterion_7() -> Verdict {
    let c = code();
    let all: Vec<usize> = (0..BLOCK).collect();
    let gens = c.generators();
    let mut failures = Vec::new();

    let commute = gens.iter().all(|a| {
        gens.iter().all(|b| a.commutes_with(b)) && a.commutes_with(&c.logical_x) && a.commutes_with(&c.logical_z)
    }) && !c.logical_x.commutes_with(&c.logical_z);
    let stabilized = gens.iter().all(|g| {
        [&c.zero, &c.one].iter().all(|s| (s.pauli_expectation(g, &all) - 1.0).norm() <= ALGEBRA_TOL)
    });
    if !(commute && stabilized) {
        failures.push("stabilizers");
    }

    let layout = EncoderLayout::standard();
    let mut z = PureState::zero(BLOCK);
    layout.encode_state(&mut z);
    let mut o = PureState::from_bits("1000000");
    layout.encode_state(&mut o);
    let mut round_trip = (z.inner(&c.zero).unwrap() - 1.0).norm() <= ALGEBRA_TOL
        && (o.inner(&c.one).unwrap() - 1.0).norm() <= ALGEBRA_TOL;
    for (alpha, beta) in [(0.3, 1.1), (PI / 5.0, PI / 7.0), (1.2, -0.4)] {
        let psi = PureState::qubit(alpha, beta);
        let a = psi.amplitudes();
        let rho = perfect_decode(&[c.encode(a[0], a[1])]);
        for i in 0..2 {
            for j in 0..2 {
                round_trip &= (rho[(i, j)] - a[i] * a[j].conj()).norm() <= ALGEBRA_TOL;
            }
        }
    }
    if !round_trip {
        failures.push("encoder round trip");
    }

    let table = correction_table();
    let mut corrected = 0;
    let mut cases = 0;
    for s in [c.zero.clone(), c.one.clone(), c.theta()] {
        for q in 0..BLOCK {
            for p in Pauli::ERRORS {
                let e = PauliString::single(BLOCK, p, q);
                let mut b = CircuitBuilder::new();
                let block = b.wires(BLOCK);
                let mut bad = s.clone();
                bad.apply_pauli_string(&e, &all);
                b.prepare(&block, bad);
                append_perfect_ec(&mut b, &block);
                let circ = b.finish(Some(Target { wires: block, state: s.clone() }));
                let m = run_branch(&circ, &BranchInsertion::default()).unwrap();
                cases += 1;
                if (m.target - 1.0).abs() <= ALGEBRA_TOL && table[c.syndrome(&e)] == e {
                    corrected += 1;
                }
            }
        }
    }
    if corrected != 63 || cases != 63 {
        failures.push("weight-1 corrections");
    }

    let mut indicators = true;
    for kind in [SyndromeKind::BitFlip, SyndromeKind::PhaseFlip] {
        for index in 1..=3 {
            let g = match kind {
                SyndromeKind::BitFlip => &c.z_generators[index - 1],
                SyndromeKind::PhaseFlip => &c.x_generators[index - 1],
            };
            for q in 0..BLOCK {
                for p in Pauli::ERRORS {
                    let e = PauliString::single(BLOCK, p, q);
                    let mut b = CircuitBuilder::new();
                    let block = b.wires(BLOCK);
                    let mut s = c.zero.clone();
                    s.apply_pauli_string(&e, &all);
                    b.prepare(&block, s);
                    append_syndrome(&mut b, &block, kind, index).unwrap();
                    let circ = b.finish(Some(Target { wires: block, state: c.zero.clone() }));
                    let m = run_branch(&circ, &BranchInsertion::default()).unwrap();
                    let expected = if g.commutes_with(&e) { 1.0 } else { 0.0 };
                    indicators &= (m.accept - expected).abs() <= ALGEBRA_TOL;
                }
            }
        }
    }
    if !indicators {
        failures.push("syndrome indicators");
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("stabilizers, round trip, {corrected}/63 corrections, 126 syndrome indicators")
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn criterion_8() -> Verdict {
    let (s, co) = ((PI / 8.0).sin(), (PI / 8.0).cos());
    let want = |m: usize, n: usize| match (m, n) {
        (0, 0) => Complex64::new(co * co, 0.0),
        (3, 3) => Complex64::new(s * s, 0.0),
        (0, 3) => Complex64::new(0.0, s * co),
        (3, 0) => Complex64::new(0.0, -s * co),
        _ => Complex64::new(0.0, 0.0),
    };
    let analytic = ideal_t_chi(1).constant();
    let measured = run_gate_fidelity(&PipelineConfig::new(MethodId::Ft, Stage::TGate)).expect("tomography");
    let noiseless = measured.chi.constant();
    let mut chi_dev: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            chi_dev = chi_dev
                .max((analytic[(m, n)] - want(m, n)).norm())
                .max((noiseless[(m, n)] - want(m, n)).norm());
        }
    }
    let p = 1e-3;
    let mut kraus_defect: f64 = 0.0;
    for stage in Stage::GATE_STAGES {
        for method in MethodId::ALL {
            let g = run_gate_fidelity(&PipelineConfig::new(method, stage)).expect("tomography");
            let k = chi_to_kraus(&g.chi, p, p, p).expect("kraus");
            kraus_defect = kraus_defect.max(completeness_defect(&k));
        }
    }
    verdict(
        chi_dev <= CHI_TOL && kraus_defect < KRAUS_TOL,
        format!("chi deviation {chi_dev:.2e}, worst Kraus completeness defect {kraus_defect:.2e} at p = 1e-3"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("table 1 reproduction", criterion_1),
        ("table 2 and 3 reproduction", criterion_2),
        ("usability after perfect EC", criterion_3),
        ("single-round projection", criterion_4),
        ("noisy-EC equality", criterion_5),
        ("oracle equivalence", criterion_6),
        ("code algebra", criterion_7),
        ("tomography", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {} {:<28} {}  {}",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
