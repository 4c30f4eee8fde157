//! Fields on the torus: transforms, exact products, the Helmholtz split
//! and the dyadic Hölder proxy.

use evenscalar::multiplier::{gradient, perp_gradient};
use evenscalar::torus::{besov_holder_norm, dyadic_block_sups, exact_product, helmholtz_split, SpectralField, TorusGrid};

fn main() -> evenscalar::Result<()> {
    let grid = TorusGrid::new(64)?;
    let f = SpectralField::from_fn(&grid, |x1, x2| (3.0 * x1).cos() + 0.5 * (x1 - 2.0 * x2).sin())?;
    println!("support radius {:.3}, sup {:.4}, L2 {:.4}", f.support_radius(), f.sup_norm(), f.l2_norm());
    println!("coefficient at (3,0): {}", f.coeff([3, 0]));

    let sq = exact_product(&f, &f)?;
    println!("f^2 has mean {:.4} and support radius {:.3}", sq.mean(), sq.support_radius());
    match exact_product(&SpectralField::cosine(&grid, [20, 0], 1.0), &SpectralField::cosine(&grid, [20, 0], 1.0)) {
        Ok(_) => println!("unexpected: aliased product accepted"),
        Err(e) => println!("aliased product rejected: {e}"),
    }

    let a = SpectralField::cosine(&grid, [2, 1], 1.0);
    let b = SpectralField::sine(&grid, [0, 3], 0.3);
    let s = gradient(&a).axpy(1.0, &perp_gradient(&b));
    let h = helmholtz_split(&s);
    println!(
        "Helmholtz: |G - a| = {:.2e}, |V - b| = {:.2e}",
        (&h.gradient - &a).max_coeff(),
        (&h.rotational - &b).max_coeff()
    );

    let g = &SpectralField::cosine(&grid, [1, 0], 1.0) + &SpectralField::cosine(&grid, [12, 5], 0.1);
    println!("dyadic block sups {:?}", dyadic_block_sups(&g));
    for s in [0.0, 0.4, 1.0] {
        println!("C^{s} proxy {:.4}", besov_holder_norm(&g, s));
    }
    Ok(())
}
