//! Where the amplifier is physical, and what it does to the mean
//! photon number.
//!
//! `g^n` applied to a thermal state with mean photon number `nbar`
//! yields another thermal state with
//! `Nbar = g^2 nbar / (1 - nbar (g^2 - 1))` — but only while
//! `g^2 nbar / (nbar + 1) < 1`. This example
//! walks a gain sweep across that boundary and prints the critical
//! values on both axes.

use ampthermal::{
    amplified_params, classify_region, critical_gain, critical_nbar, ModelParams, RegionClass,
};

fn main() -> ampthermal::Result<()> {
    let nbar = 1.5;
    println!("input thermal state: nbar = {nbar}");
    println!("critical gain g_c = {:.6}", critical_gain(nbar)?);
    println!();

    println!("{:>6} {:>12} {:>12}", "gain", "class", "Nbar");
    for i in 0..=14 {
        let gain = 1.0 + 0.025 * f64::from(i);
        let params = ModelParams::new(nbar, gain)?;
        let class = classify_region(&params);
        match class {
            RegionClass::Physical => {
                let amp = amplified_params(&params)?;
                println!("{gain:>6.3} {:>12} {:>12.6}", "physical", amp.nbar_amp);
            }
            _ => println!("{gain:>6.3} {:>12} {:>12}", format!("{class}"), "-"),
        }
    }
    println!();

    // The inverse view: at fixed gain, the largest physical nbar.
    for gain in [1.06, 1.08, 1.2] {
        println!(
            "gain = {gain}: amplification is physical for nbar < {:.6}",
            critical_nbar(gain)?
        );
    }
    Ok(())
}
