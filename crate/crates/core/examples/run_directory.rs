//! Drive the batch commands from code: parse a config, run it into a
//! directory, then verify the stored snapshot.

use evenscalar::harness::{cmd_run_unforced, cmd_verify, CliOptions, RunConfig};

const CONFIG: &str = r#"{
  "scheme": "unforced",
  "lambda0": 4, "b": 1.5, "beta": 0.5, "alpha": 0.4, "gamma": 0.5,
  "c0_min": 1, "annulus_lo": 4, "annulus_hi": 6,
  "grid_n": "auto", "q_max": 2, "symbol": "k1", "seed": 0, "lambda0_test": 4,
  "flags": { "force_infeasible": true, "emit_fields": false, "emit_spectra": false }
}"#;

fn main() -> evenscalar::Result<()> {
    let cfg = RunConfig::from_json(CONFIG)?;
    let out = std::env::temp_dir().join("evenscalar-run");
    let mut opts = CliOptions::new(&out);
    opts.quiet = false;
    cmd_run_unforced(&cfg, &opts)?;
    cmd_verify(&out.join("theta.bin"), None, &cfg, &CliOptions { out: out.join("verify"), ..opts })?;
    for entry in std::fs::read_dir(&out)? {
        println!("{}", entry?.path().display());
    }
    Ok(())
}
