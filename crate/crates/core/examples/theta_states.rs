//! Fidelities of the three |Θ> constructions and their circuit sizes.

use steane_tgate::protocols::{build_theta_construction, run_fidelity_report, MethodId, PipelineConfig, Stage};

fn main() {
    for method in MethodId::ALL {
        let circuit = build_theta_construction(method, 2).unwrap();
        let r = run_fidelity_report(&PipelineConfig::new(method, Stage::StateOnly)).unwrap();
        println!("{}", method.label());
        println!("  {} locations, {} noisy slots", circuit.locations.len(), circuit.noisy_slots());
        println!("  7-qubit fidelity       {}", r.seven_qubit.pretty());
        println!("  decoded qubit fidelity {}", r.one_qubit_decoded.pretty());
    }
}
