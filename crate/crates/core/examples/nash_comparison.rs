//! Nash-term norms of the unforced and forced schemes at matched parameters.
//!
//! `cargo run --release --example nash_comparison -- [q_max] [b]`

use evenscalar::forced::run_forced;
use evenscalar::params::{C0Policy, ParamSet};
use evenscalar::unforced::run;

fn main() -> evenscalar::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let q_max: usize = args.get(1).map_or(3, |s| s.parse().expect("q_max"));
    let b: f64 = args.get(2).map_or(1.3, |s| s.parse().expect("b"));

    let mut p = ParamSet::new(4, b, 0.5, 0.4, 0.5, q_max)?;
    p.c0 = C0Policy::Adaptive { c_min: 100.0 };
    let (_, unforced) = run(&p).into_result()?;
    let (_, forced) = run_forced(&p, 0).into_result()?;

    println!("n = {}", p.n);
    println!("{:>3} {:>7} {:>12} {:>12} {:>8}", "q", "lambda", "nash", "nash_forced", "ratio");
    for (u, f) in unforced.iter().zip(&forced) {
        println!(
            "{:>3} {:>7} {:>12.4e} {:>12.4e} {:>8.3}",
            u.q,
            u.lambda,
            u.nash,
            f.nash,
            f.nash / u.nash
        );
    }
    Ok(())
}
