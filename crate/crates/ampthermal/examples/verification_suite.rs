//! Run the full cross-check battery in-process and print the report —
//! the same checks behind `ampthermal verify` and the acceptance test.
//!
//! Pass a relative perturbation as the first argument to run the
//! negative control (the suite must then fail):
//!
//! ```text
//! cargo run --example verification_suite -- 1e-6
//! ```

use ampthermal::{run_verification, VerifyConfig};

fn main() -> ampthermal::Result<()> {
    let fuzz = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("fuzz is a float"));
    let report = run_verification(&VerifyConfig { fuzz })?;
    for c in &report.checks {
        println!(
            "{} {:<28} max residual {:>10.3e}  tolerance {:>8.1e}  [{}]",
            if c.pass { "PASS" } else { "FAIL" },
            c.check_name,
            c.max_residual,
            c.tolerance,
            c.parameters,
        );
    }
    println!(
        "\n{} of {} checks passed",
        report.checks.iter().filter(|c| c.pass).count(),
        report.checks.len()
    );
    std::process::exit(i32::from(!report.all_pass()));
}
