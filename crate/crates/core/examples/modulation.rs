//! The three-term identity for an odd multiplier acting on a modulated
//! amplitude: `Gamma(a cos) = i m(c) a sin + T1[a] cos + T2[a] sin`.

use evenscalar::multiplier::{apply_gamma, apply_t1, apply_t2, OddSymbol};
use evenscalar::torus::{modulate, Phase, SpectralField, TorusGrid};
use evenscalar::wave::DirectionFrame;
use num_complex::Complex64;

fn main() -> evenscalar::Result<()> {
    let grid = TorusGrid::new(256)?;
    let a = SpectralField::from_modes(
        &grid,
        &[
            ([0, 0], Complex64::new(1.0, 0.0)),
            ([2, -1], Complex64::new(0.2, 0.1)),
            ([0, 5], Complex64::new(-0.1, 0.3)),
        ],
    );
    for sym in OddSymbol::registry() {
        for lambda in [4u64, 8] {
            for j in 0..2 {
                let c = DirectionFrame::carrier(lambda, j);
                let direct = apply_gamma(&sym, &modulate(&a, c, Phase::Cos)?);
                let t1 = apply_t1(&sym, &a, c)?;
                let t2 = apply_t2(&sym, &a, c)?;
                let rebuilt = &(&modulate(&a, c, Phase::Sin)?.scale(-sym.sigma(c)) + &modulate(&t1, c, Phase::Cos)?)
                    + &modulate(&t2, c, Phase::Sin)?;
                println!(
                    "{:<16} carrier {:?}: |T1| {:.3e} |T2| {:.3e} mismatch {:.1e}",
                    sym.name(),
                    c,
                    t1.sup_norm(),
                    t2.sup_norm(),
                    (&direct - &rebuilt).max_coeff() / direct.max_coeff()
                );
            }
        }
    }
    Ok(())
}
