//! The reference photon-number table: input thermal state, its
//! amplified image, and the 3-photon added/subtracted variants, all at
//! `nbar = 1.5`, `g = 1.2`.
//!
//! The added distribution vanishes for `k < m`, and the two variants
//! are the same sequence shifted by `m`:
//! `rho_{(k+m)(k+m)}^{(m+)} = rho_{kk}^{(m-)}`.

use ampthermal::{pnd_value, ModelParams, StateSpec, Variant};

fn main() -> ampthermal::Result<()> {
    let input = StateSpec::new(ModelParams::new(1.5, 1.0)?, 0, Variant::Added)?;
    let base = ModelParams::new(1.5, 1.2)?;
    let amplified = StateSpec::new(base, 0, Variant::Added)?;
    let added = StateSpec::new(base, 3, Variant::Added)?;
    let subtracted = StateSpec::new(base, 3, Variant::Subtracted)?;

    println!(
        "{:>2} {:>12} {:>12} {:>12} {:>12}",
        "k", "thermal", "amplified", "added m=3", "subtr m=3"
    );
    for k in 0..=8 {
        println!(
            "{k:>2} {:>12.6} {:>12.6} {:>12.6e} {:>12.6e}",
            pnd_value(&input, k)?,
            pnd_value(&amplified, k)?,
            pnd_value(&added, k)?,
            pnd_value(&subtracted, k)?,
        );
    }
    println!();

    // The shift identity, checked at a few indices.
    for k in [0usize, 5, 40] {
        let a = pnd_value(&added, k + 3)?;
        let s = pnd_value(&subtracted, k)?;
        println!("k = {k:>2}: added[k+3] = {a:.12e}, subtracted[k] = {s:.12e}");
        assert_eq!(a, s);
    }
    Ok(())
}
