//! Truncated polynomial arithmetic and post-selection by series division.

use steane_tgate::errpoly::ErrorPoly;

fn main() {
    let order = 2;
    // two noisy one-qubit locations, nothing else
    let p0 = ErrorPoly::no_error(order);
    let both_clean = p0.powi(2);
    println!("(1 - px - py - pz)^2 = {}", both_clean.pretty());

    // accepted with probability 1 - 2px, of which 1 - 3px - pz lands on target
    let accept = ErrorPoly::one(order).checked_sub(&ErrorPoly::px(order).scale(2.0)).unwrap();
    let hit = ErrorPoly::one(order)
        .checked_sub(&ErrorPoly::px(order).scale(3.0))
        .unwrap()
        .checked_sub(&ErrorPoly::pz(order))
        .unwrap();
    let fidelity = hit.div_series(&accept).unwrap();
    println!("fidelity = {}", fidelity.pretty());
    let p = 1e-3;
    println!(
        "at p = {p}: series {:.9}, exact ratio {:.9}",
        fidelity.eval(p, 0.0, p),
        hit.eval(p, 0.0, p) / accept.eval(p, 0.0, p)
    );
}
