//! Drives a command from an in-memory configuration, as the CLI does.

use cgconvex::cli::{cmd_check, json, RunConfig};

fn main() -> cgconvex::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "model": {"name": "neo_hooke", "mu": 1.0, "alpha": 0.25},
            "seed": 4,
            "samples": 200
        }"#,
    )?;
    let bundle = cmd_check(&cfg)?;
    for r in &bundle.reports {
        println!(
            "{:?}: {:?} [{:?}] {}",
            r.property, r.verdict, r.basis, r.label
        );
    }
    println!(
        "overall {:?}, exit code {}",
        bundle.overall, bundle.exit_code
    );
    print!("{}", json::to_string(&bundle.capabilities)?);
    Ok(())
}
