//! Zero-offset curvatures of the qubit frequency and of the charge
//! susceptibility for islands of 60 and 61 pairs, relative to their
//! large-island transmon values.

use finite_jj::observables::{curvature_scan, CurvatureKind};
use finite_jj::WindowPolicy;

fn main() -> finite_jj::Result<()> {
    let ratios = [10.0, 20.0, 50.0, 100.0];
    for kind in [CurvatureKind::Dispersion, CurvatureKind::Susceptibility] {
        println!("{kind:?}");
        for pairs in [60, 61] {
            let t = curvature_scan(kind, 1.0, pairs, &ratios, &WindowPolicy::full(), None)?;
            let ratio = t.column("ratio").unwrap();
            let row: Vec<String> = ratio.iter().map(|r| format!("{r:>9.4}")).collect();
            println!("  2N = {pairs}: {}", row.join(" "));
        }
    }
    println!("(columns: E_J/E_C = {ratios:?})");
    Ok(())
}
