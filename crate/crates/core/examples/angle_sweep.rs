//! Samples the decoded output fidelity over input angles and fits each
//! first-order coefficient to `c0 + c1 cos4a + c2 sin²2a sin2b`.

use steane_tgate::protocols::{angle_sweep, uniform_grid, MethodId, PipelineConfig, Stage};

fn main() {
    let (alphas, betas) = uniform_grid(8);
    let config = PipelineConfig::new(MethodId::Get, Stage::TGateNoisyEc);
    let sweep = angle_sweep(&config, &alphas, &betas).unwrap();
    println!("{} points", sweep.points.len());
    for (name, fits) in [("7-qubit", &sweep.seven_qubit_fits), ("decoded", &sweep.one_qubit_fits)] {
        for (fit, v) in fits.iter().zip(["px", "py", "pz"]) {
            let [c0, c1, c2] = fit.coeffs;
            println!("{name:<8} {v}: {c0:+.4} {c1:+.4} cos4a {c2:+.4} sin²2a sin2b   residual {:.1e}", fit.residual);
        }
    }
}
