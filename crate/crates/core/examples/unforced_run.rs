//! Unforced iteration from the zero state, printing one line per level.
//!
//! `cargo run --release --example unforced_run -- [q_max]`

use evenscalar::params::ParamSet;
use evenscalar::unforced::run;

fn main() -> evenscalar::Result<()> {
    env_logger::init();
    let q_max = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("q_max must be an integer"))
        .unwrap_or(2);
    let p = ParamSet::new(4, 1.5, 0.5, 0.4, 0.5, q_max)?;
    println!("grid n = {}", p.n);
    let (_, reports) = run(&p).into_result()?;
    println!("q  lambda  |G|_X       |W|_inf     |W|_2       besov(f)    nash        dissip      oscill      cancel");
    for r in &reports {
        let j = r.j.unwrap_or_default();
        println!(
            "{}  {:>6}  {:.3e}  {:.3e}  {:.3e}  {:.3e}  {:.3e}  {:.3e}  {:.3e}  {:.3e}",
            r.q, r.lambda, r.xnorm_g, r.sup_w, r.l2_w, r.besov_f, r.nash, r.dissipation, r.oscillation, j.cancellation
        );
    }
    Ok(())
}
