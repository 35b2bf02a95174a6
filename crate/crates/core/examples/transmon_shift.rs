//! Qubit-frequency redshift of a transmon with 2.5×10⁸ Cooper pairs per
//! island when the offset charge is pushed to 10⁶. Only a narrow charge
//! window around `n_g` is diagonalized; the window doubles until the result
//! stops changing.

use std::time::Instant;

use finite_jj::observables::solve_levels;
use finite_jj::perturbation::transmon_frequency;
use finite_jj::{CircuitParams, WindowPolicy};

fn main() -> finite_jj::Result<()> {
    // GHz units: E_J/h = 10 GHz, E_C/h = 0.2 GHz.
    let params = CircuitParams::new(10.0, 0.2, 0.0, 500_000_000)?;
    let policy = WindowPolicy::default();
    let start = Instant::now();

    let mut freq = Vec::new();
    for ng in [0.0, 1e6] {
        let sol = solve_levels(&params.with_ng(ng), &policy, 2, false)?;
        let e = sol.energies();
        println!(
            "n_g = {ng:e}: omega_q/2pi = {:.9} GHz, window {} states, last change {:.1e}",
            e[1] - e[0],
            sol.window.dim(),
            sol.last_change
        );
        freq.push(e[1] - e[0]);
    }

    let numeric = (freq[1] - freq[0]) * 1e6;
    let analytic = (transmon_frequency(&params.with_ng(1e6))? - transmon_frequency(&params)?) * 1e6;
    println!("shift: {numeric:.4} kHz numerically, {analytic:.4} kHz first-order");
    println!("elapsed {:?}", start.elapsed());
    Ok(())
}
