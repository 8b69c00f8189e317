//! Purity of the added/subtracted states, two ways.
//!
//! The closed form is a terminating hypergeometric polynomial; the
//! numeric value is the plain sum of squared diagonal weights of a
//! truncated state. The two variants share the same purity at every
//! mean photon number, even though their distributions differ.

use ampthermal::{
    build_state, mean_photon_number, purity_analytic, purity_numeric, ModelParams, StateSpec,
    Variant,
};

fn main() -> ampthermal::Result<()> {
    let params = ModelParams::new(1.5, 1.2)?;

    println!(
        "{:>2} {:>14} {:>14} {:>10} {:>10}",
        "m", "analytic(add)", "numeric(add)", "sub=add?", "mpn shift"
    );
    for m in [0u32, 1, 3, 5, 10] {
        let add = StateSpec::new(params, m, Variant::Added)?;
        let sub = StateSpec::new(params, m, Variant::Subtracted)?;
        let analytic = purity_analytic(&add)?;
        let add_state = build_state(&add, 1e-13)?;
        let numeric = purity_numeric(&add_state)?;
        let identity = (purity_analytic(&sub)? - analytic).abs() / analytic;
        // Mean photon numbers differ by exactly m between the variants.
        let shift =
            mean_photon_number(&add_state)? - mean_photon_number(&build_state(&sub, 1e-13)?)?;
        println!("{m:>2} {analytic:>14.10} {numeric:>14.10} {identity:>10.1e} {shift:>10.6}");
        assert!((analytic - numeric).abs() < 1e-9);
        assert!(identity < 1e-12);
    }
    println!();

    // m = 0 reduces to the thermal value 1/(2 Nbar + 1).
    let thermal = StateSpec::new(params, 0, Variant::Added)?;
    let nbar_amp = thermal.amplified()?.nbar_amp;
    println!(
        "m = 0: purity {} vs 1/(2 Nbar + 1) = {}",
        purity_analytic(&thermal)?,
        1.0 / (2.0 * nbar_amp + 1.0)
    );
    Ok(())
}
