//! Coefficients of the wave-channel decomposition for each registered
//! symbol, with the residual and X-norm of a sample stress potential.

use evenscalar::multiplier::OddSymbol;
use evenscalar::torus::{SpectralField, TorusGrid};
use evenscalar::wave::{apply_r, decomposition_residual, solve_coeffs, x_norm};

fn main() -> evenscalar::Result<()> {
    let grid = TorusGrid::new(128)?;
    let g = &(&SpectralField::cosine(&grid, [3, 1], 1.0) + &SpectralField::sine(&grid, [-2, 7], 0.5))
        + &SpectralField::cosine(&grid, [10, -4], 0.2);
    for sym in OddSymbol::registry() {
        let k = solve_coeffs(&sym)?;
        println!("{}: A = {:.4}, B = {:.4}, C = {:.4}, D = {:.4}", sym.name(), k.a, k.b, k.c, k.d);
        println!(
            "  equation residuals {:?}, decomposition residual {:.1e}",
            k.residuals(),
            decomposition_residual(&k, &g)
        );
        println!(
            "  |G| = {:.3}, |R1 G| = {:.3}, |R2 G| = {:.3}, X-norm {:.3}",
            g.sup_norm(),
            apply_r(0, &k, &g).sup_norm(),
            apply_r(1, &k, &g).sup_norm(),
            x_norm(&k, &g)
        );
    }
    match OddSymbol::by_name("k1k2_over_absk") {
        Ok(_) => println!("even symbol accepted"),
        Err(e) => println!("k1k2_over_absk: {e}"),
    }
    Ok(())
}
