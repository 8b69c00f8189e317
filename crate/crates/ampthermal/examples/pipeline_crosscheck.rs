//! Closed forms against the brute-force operator pipeline.
//!
//! The pipeline builds the state the long way: bare thermal weights,
//! amplifier scaling `g^{2n}`, the factorial-weighted addition or
//! subtraction shift, renormalization. It never touches the amplified
//! mean photon number or the closed-form distribution, so agreement is
//! a genuine cross-check — and both operator orderings must coincide
//! after normalization.

use ampthermal::fock::{oracle_cutoff, OperatorOrder};
use ampthermal::{oracle_pipeline, pnd_value, ModelParams, StateSpec, Variant};

fn main() -> ampthermal::Result<()> {
    let params = ModelParams::new(1.5, 1.2)?;
    for variant in [Variant::Added, Variant::Subtracted] {
        for m in [0u32, 1, 3, 8] {
            let spec = StateSpec::new(params, m, variant)?;
            let cutoff = oracle_cutoff(&params, m, 1e-16);
            let first = oracle_pipeline(&params, m, variant, OperatorOrder::AmplifyFirst, cutoff)?;
            let second = oracle_pipeline(&params, m, variant, OperatorOrder::VaryFirst, cutoff)?;

            let mut max_closed = 0.0f64;
            let mut max_order = 0.0f64;
            for k in 0..=200usize {
                let closed = pnd_value(&spec, k)?;
                if closed > 0.0 {
                    max_closed = max_closed.max((first.weight(k) - closed).abs() / closed);
                    max_order = max_order.max((first.weight(k) - second.weight(k)).abs() / closed);
                }
            }
            println!(
                "{} m={m}: max rel deviation closed-form {max_closed:.2e}, \
                 between orderings {max_order:.2e}",
                variant.label()
            );
            assert!(max_closed < 1e-11);
        }
    }
    Ok(())
}
