//! Process tomography of the encoded T-gate: χ matrix, gate fidelity and a
//! Kraus decomposition at a fixed error rate.

use steane_tgate::protocols::{MethodId, PipelineConfig, Stage};
use steane_tgate::tomography::{chi_to_kraus, completeness_defect, run_gate_fidelity};

fn main() {
    let config = PipelineConfig::new(MethodId::Ft, Stage::TGateNoisyEc);
    let report = run_gate_fidelity(&config).unwrap();
    println!("{} {}: gate fidelity {}", config.method, config.stage, report.gate_fidelity.pretty());

    let p = 1e-3;
    let chi = report.chi.eval(p, p, p);
    println!("χ at p = {p}:");
    for m in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|n| format!("{:+.5}{:+.5}i", chi[(m, n)].re, chi[(m, n)].im))
            .collect();
        println!("  {}", row.join("  "));
    }
    let kraus = chi_to_kraus(&report.chi, p, p, p).unwrap();
    println!("{} Kraus operators, completeness defect {:.2e}", kraus.len(), completeness_defect(&kraus));
}
