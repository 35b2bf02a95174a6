//! Smallest island that still behaves as a superconductor, for the built-in
//! aluminum preset, and the gate voltage needed to reach a large offset charge.

use finite_jj::model::{two_e_per, validity_min_pairs};
use finite_jj::MaterialProps;

fn main() -> finite_jj::Result<()> {
    let al = MaterialProps::aluminum();
    let pairs = 2.5e8;
    let report = validity_min_pairs(&al)?
        .with_island(pairs)
        .with_gate(1e6, two_e_per(1e-3))?;
    println!("{}:", al.name);
    println!("  Cooper-pair density  {:.4e} m^-3", report.n_s);
    println!("  minimum island       {:.4e} pairs", report.n_min);
    println!(
        "  volume at N = {pairs:e}  {:.4e} um^3",
        report.island_volume.unwrap() * 1e18
    );
    println!(
        "  gate voltage for n_g = 1e6 with C_g = 2e/mV: {} V",
        report.gate_voltage.unwrap()
    );
    println!("  admits N = {pairs:e}: {}", report.admits(pairs));
    println!("\npreset file:\n{}", al.to_preset());
    Ok(())
}
