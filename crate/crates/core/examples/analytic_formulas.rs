//! Closed-form results next to exact diagonalization: the two-level
//! Cooper-pair box, the Bogoliubov quasiparticle frame and the first-order
//! transmon frequency and susceptibility.

use finite_jj::observables::{charge_susceptibility, qubit_frequency};
use finite_jj::perturbation::{
    bogoliubov, cpb_effective, cpb_gap, level_spacing, transmon_first_order_numeric, transmon_frequency,
    transmon_susceptibility,
};
use finite_jj::{CircuitParams, WindowPolicy};

fn main() -> finite_jj::Result<()> {
    let policy = WindowPolicy::full();

    let cpb = CircuitParams::from_ratio(0.01, 1.5, 10)?;
    let eff = cpb_effective(&cpb)?;
    println!(
        "Cooper-pair box at n_g = {}: states {}/{}, gap {:.6e} (exact {:.6e})",
        cpb.n_g,
        eff.floor_n,
        eff.ceil_n,
        cpb_gap(&cpb)?,
        qubit_frequency(&cpb, &policy)?
    );

    let transmon = CircuitParams::from_ratio(50.0, 40.0, 400)?;
    let c = bogoliubov(&transmon)?;
    println!(
        "Bogoliubov: u+ = {:.6}, u- = {:.6}, u0 = {:.6}, epsilon = {:.6} (= {:.6})",
        c.u_plus,
        c.u_minus,
        c.u_0,
        c.epsilon,
        level_spacing(&transmon)
    );
    let first = transmon_first_order_numeric(&transmon)?;
    println!(
        "transmon frequency: closed form {:.6}, operator engine {:.6}, exact {:.6}",
        transmon_frequency(&transmon)?,
        first.freq,
        qubit_frequency(&transmon, &policy)?
    );
    println!(
        "transmon susceptibility: closed form {:.6}, exact {:.6}",
        transmon_susceptibility(&transmon)?,
        charge_susceptibility(&transmon, &policy, None)?.value
    );
    Ok(())
}
