//! Exponent inequalities: single verdicts, the admissible window for beta
//! and a coarse map of the (b, beta) plane.
//!
//! `cargo run --example feasibility_scan -- [alpha] [gamma]`

use evenscalar::feasibility::{check_forced, check_beta_window, check_unforced, scan_region, beta_window};

fn main() -> evenscalar::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(0.95, |s| s.parse().expect("alpha"));
    let gamma: f64 = args.next().map_or(0.5, |s| s.parse().expect("gamma"));

    for (b, beta) in [(1.05, 0.9), (1.5, 0.5), (1.1, 0.95)] {
        let u = check_unforced(b, beta, alpha, gamma)?;
        let f = check_forced(b, beta, alpha, gamma)?;
        let t = check_beta_window(b, beta, alpha, gamma)?;
        println!(
            "b={b} beta={beta}: unforced {} {:?}, forced {} (s1 {:+.4}), window {}",
            u.feasible, u.slacks, f.feasible, f.slacks[0], t.feasible
        );
    }
    let (lo, u1, u2) = beta_window(1.05, alpha, gamma);
    println!("beta window at b = 1.05: ({lo:.4}, min({u1:.4}, {u2:.4}))");

    let steps = 20;
    let rows = scan_region(alpha, gamma, (1.01, 1.2), (0.8, 0.99), steps);
    println!("\nbeta down, b across; 'F' both feasible, 'f' forced only, '.' neither, '!' unforced only");
    for i in (0..steps).rev() {
        let line: String = (0..steps)
            .map(|j| {
                let r = &rows[j * steps + i];
                match (r.feasible_unforced, r.feasible_forced) {
                    (true, true) => 'F',
                    (false, true) => 'f',
                    (true, false) => '!',
                    (false, false) => '.',
                }
            })
            .collect();
        println!("{:.3} {line}", rows[i].beta);
    }
    Ok(())
}
