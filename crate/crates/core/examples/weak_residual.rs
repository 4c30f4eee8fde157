//! Weak residuals of an iterate against the low-frequency test basis,
//! after a round trip through the field file format.

use evenscalar::multiplier::apply_gamma;
use evenscalar::params::ParamSet;
use evenscalar::torus::io::{read_field, write_field};
use evenscalar::unforced::run;
use evenscalar::verify::{residual_table, TestBasis};

fn main() -> evenscalar::Result<()> {
    let mut p = ParamSet::new(4, 1.5, 0.5, 0.4, 0.5, 2)?;
    p.n = 1024;
    let (state, reports) = run(&p).into_result()?;
    let theta = apply_gamma(&p.symbol, &state.f);

    let dir = std::env::temp_dir().join("evenscalar-weak-residual");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("theta.bin");
    write_field(&path, &theta, serde_json::Map::new())?;
    let (back, header) = read_field(&path)?;
    println!("stored n = {}, round-trip error {:.1e}", header.n, (&back - &theta).max_coeff());

    let basis = TestBasis::new(4.0);
    let table = residual_table(&back, None, &p.symbol, p.gamma, &basis)?;
    let (max, arg) = table.max();
    println!("{} test functions, max residual {max:.3e} at {}", basis.functions.len(), arg.map_or("-".into(), |t| t.to_string()));
    println!("|G|_X at the last level {:.3e}, leakage {:.1e}, div ratio {:.1e}", reports.last().map_or(0.0, |r| r.xnorm_g), table.leakage, table.divergence);
    let mut worst: Vec<_> = table.values.iter().collect();
    worst.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    for (t, v) in worst.iter().take(5) {
        println!("  {t:<10} {v:+.3e}");
    }
    Ok(())
}
