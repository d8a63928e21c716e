//! Writes the noisy-EC gadget as JSON and summarizes its locations.

use steane_tgate::cli::describe;
use steane_tgate::steane::build_noisy_ec;

fn main() {
    let circuit = build_noisy_ec();
    let peak = circuit.validate().unwrap();
    eprintln!(
        "{} locations, {} noisy, {} noise slots, {peak} live qubits at peak",
        circuit.locations.len(),
        circuit.noisy_locations(),
        circuit.noisy_slots()
    );
    for (i, l) in circuit.locations.iter().take(12).enumerate() {
        eprintln!("  {i:>3} {}", describe(&l.op));
    }
    println!("{}", circuit.to_json());
}
