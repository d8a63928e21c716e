//! Stabilizers, logical states and the single-error correction table.

use steane_tgate::pauli::{Pauli, PauliString};
use steane_tgate::steane::{code, correction_table, BLOCK};

fn main() {
    let c = code();
    println!("stabilizer generators:");
    for g in c.generators() {
        println!("  {g}");
    }
    println!("logical X {}  logical Z {}", c.logical_x, c.logical_z);
    let support: Vec<usize> = c
        .zero
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-9)
        .map(|(i, _)| i)
        .collect();
    println!("|0_L> is a uniform superposition of {} codewords:", support.len());
    for i in support {
        println!("  {i:07b}");
    }

    let table = correction_table();
    println!("single-qubit errors and their syndromes:");
    for q in 0..BLOCK {
        for p in Pauli::ERRORS {
            let e = PauliString::single(BLOCK, p, q);
            let s = c.syndrome(&e);
            println!("  {e}  syndrome {s:06b}  corrected by {}", table[s]);
        }
    }
}
