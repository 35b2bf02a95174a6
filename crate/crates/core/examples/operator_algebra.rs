//! Normal ordering and vacuum expectation values of ladder-operator
//! polynomials, checked against truncated Fock-space matrices.

use finite_jj::wick::{fock_oracle, random_polynomial, substitute_affine};
use finite_jj::{BogoliubovCoeffs, OperatorPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> finite_jj::Result<()> {
    let (b, bd) = (OperatorPoly::lower(), OperatorPoly::raise());
    let word = &(&(&b * &b) * &bd) * &bd;
    println!("b b b† b† = {}", word.normal_order()?);
    println!("[b, b†]   = {}", b.commutator(&bd).normal_order()?);
    let x4 = OperatorPoly::position().pow(4);
    println!("<x^4>     = {}", x4.vacuum_expectation()?);

    // A squeezed and displaced frame: <0_b| a† a |0_b> = u₋² + u₀²(u₊ + u₋)².
    let c = BogoliubovCoeffs {
        u_plus: 1.25,
        u_minus: 0.75,
        u_0: 0.3,
        epsilon: 1.0,
    };
    let number = &bd * &b;
    let moved = substitute_affine(&number, &c)?;
    println!(
        "<a†a> in the b vacuum = {:.6} (expected {:.6})",
        moved.vacuum_expectation()?.re,
        c.u_minus * c.u_minus + (c.u_0 * (c.u_plus + c.u_minus)).powi(2)
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = random_polynomial(&mut rng, 6, 8);
        worst = worst.max((p.vacuum_expectation()? - fock_oracle(&p, 8)?).norm());
    }
    println!("50 random polynomials: worst disagreement with Fock matrices {worst:.1e}");
    Ok(())
}
