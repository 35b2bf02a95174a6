//! The banded charge-basis Hamiltonian solved three ways: Sturm bisection
//! with inverse iteration, a dense QL sweep, and a windowed solve that never
//! touches most of a very large basis.

use finite_jj::eigensolve::{lowest_eigenpairs, DenseEigen};
use finite_jj::hamiltonian::{build, DENSE_LIMIT};
use finite_jj::observables::solve_levels;
use finite_jj::{CircuitParams, SymTridiagonal, WindowPolicy};

fn main() -> finite_jj::Result<()> {
    let params = CircuitParams::from_ratio(20.0, 3.3, 400)?;
    let h = build(&params)?;
    let fast = lowest_eigenpairs(&h, 4, 1e-13)?;
    let dense = DenseEigen::compute(&h, true, DENSE_LIMIT)?;
    println!("dimension {}", h.dim());
    for (k, (pair, d)) in fast.pairs.iter().zip(dense.values()).enumerate() {
        println!(
            "E{k}: bisection {:.14} dense {:.14} residual {:.1e}",
            pair.value,
            d,
            pair.residual.unwrap_or(f64::NAN)
        );
    }
    let v = fast.pairs[0].vector.as_ref().unwrap();
    let w = dense.vector(0).unwrap();
    let overlap: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    println!("ground-state overlap 1 - {:.1e}", 1.0 - overlap);

    let huge = CircuitParams::from_ratio(50.0, 1234.5, 1_000_000_000)?;
    let sol = solve_levels(&huge, &WindowPolicy::default(), 3, true)?;
    println!(
        "2N = 1e9: basis {} states, window {} states, E = {:?}, <n> = {:.6}",
        huge.dim(),
        sol.window.dim(),
        sol.energies(),
        sol.imbalance.unwrap()
    );
    Ok(())
}
