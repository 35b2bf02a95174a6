//! Ground-state population imbalance and charge susceptibility across the
//! Cooper-pair-box staircase, compared with the two-level predictions at the
//! degeneracy points.

use finite_jj::observables::{band_sweep, charge_susceptibility, linspace, qubit_frequency, SweepRequest};
use finite_jj::perturbation::{cpb_gap, cpb_susceptibility};
use finite_jj::{CircuitParams, WindowPolicy};

fn main() -> finite_jj::Result<()> {
    let params = CircuitParams::from_ratio(0.2, 0.0, 10)?;
    let policy = WindowPolicy::full();

    let req = SweepRequest {
        levels: 1,
        imbalance: true,
        susceptibility: true,
        frequency: false,
        subtract_e0: false,
    };
    let table = band_sweep(&params, &linspace(-8.0, 8.0, 65), &req, &policy)?;
    let n = table.column("n_expect").unwrap();
    let chi = table.column("chi").unwrap();
    println!("{:>6} {:>10} {:>10}", "n_g", "<n>", "dn/dn_g");
    for (i, g) in table.grid.iter().enumerate().step_by(4) {
        println!("{g:>6.2} {:>10.5} {:>10.4}", n[i], chi[i]);
    }

    println!("\ndegeneracy points:");
    for k in 0..10 {
        let p = params.with_ng(-4.5 + k as f64);
        let numeric = charge_susceptibility(&p, &policy, None)?;
        println!(
            "n_g = {:>4}: peak {:.5} (two-level {:.5}), gap {:.5} (two-level {:.5})",
            p.n_g,
            numeric.value,
            cpb_susceptibility(&p)?,
            qubit_frequency(&p, &policy)?,
            cpb_gap(&p)?
        );
    }
    Ok(())
}
