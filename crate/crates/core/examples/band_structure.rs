//! Lowest three bands versus offset charge for a small island, with the
//! charging parabola `E_C(n − n_g)²` shown for comparison at large `|n_g|`.
//!
//! ```text
//! cargo run --example band_structure [-- out.csv]
//! ```

use finite_jj::observables::{band_sweep, linspace, SweepRequest};
use finite_jj::table::Format;
use finite_jj::{CircuitParams, WindowPolicy};

fn main() -> finite_jj::Result<()> {
    let params = CircuitParams::from_ratio(1.0, 0.0, 10)?;
    let grid = linspace(-20.0, 20.0, 161);
    let mut req = SweepRequest::bands(3);
    req.frequency = true;
    let table = band_sweep(&params, &grid, &req, &WindowPolicy::full())?;

    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "n_g", "E0", "E1", "E2", "omega_q");
    for i in (0..table.len()).step_by(10) {
        let col = |name: &str| table.column(name).unwrap()[i];
        println!(
            "{:>8.2} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            table.grid[i],
            col("E0"),
            col("E1"),
            col("E2"),
            col("omega_q")
        );
    }

    // Far outside the island's charge range the levels are bare charge states.
    let ng = 50.0;
    let far = band_sweep(&params, &[ng], &SweepRequest::bands(3), &WindowPolicy::full())?;
    let e = |k: &str| far.column(k).unwrap()[0];
    println!(
        "n_g = {ng}: spacings {:.2}, {:.2}; 2E_C|n_g| = {:.2}",
        e("E1") - e("E0"),
        e("E2") - e("E1"),
        2.0 * params.e_c * ng
    );

    if let Some(path) = std::env::args().nth(1) {
        table.write(&path, Format::Csv)?;
        println!("wrote {path}");
    }
    Ok(())
}
