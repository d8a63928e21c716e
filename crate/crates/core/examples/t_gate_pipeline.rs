//! Output fidelity of the encoded T-gate at one input, for every method and
//! stage. Pass `alpha beta` to pick the input.

use steane_tgate::protocols::{logical_process, report_from_process, MethodId, PipelineConfig, Stage};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let d = PipelineConfig::default();
    let (alpha, beta) = match args.as_slice() {
        [a, b, ..] => (*a, *b),
        _ => (d.alpha, d.beta),
    };
    println!("input cos({alpha:.4})|0> + exp(-i {beta:.4}) sin({alpha:.4})|1>");
    for stage in Stage::GATE_STAGES {
        for method in MethodId::ALL {
            let config = PipelineConfig { alpha, beta, ..PipelineConfig::new(method, stage) };
            let process = logical_process(&config).unwrap();
            let r = report_from_process(&process, &config).unwrap();
            let label = format!("{method} {stage}");
            println!("{label:<15} 7q {}", r.seven_qubit.pretty());
            println!("{:<15} 1q {}", "", r.one_qubit_decoded.pretty());
        }
    }
}
