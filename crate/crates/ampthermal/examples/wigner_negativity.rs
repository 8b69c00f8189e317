//! Phase-space structure: where the added states go negative and how
//! deep, and why the subtracted ones never do.
//!
//! For single-photon addition the zero crossing sits on a circle of
//! radius `sqrt(2 Nbar + 1) / (2 sqrt(Nbar + 1))`, independent of the
//! angle. Higher `m` keeps a negative dip at the origin whose magnitude
//! shrinks fast with `m`.

use ampthermal::wigner::GridAxis;
use ampthermal::{
    build_state, min_section, negativity_radius_m1, wigner_grid, wigner_oracle, wigner_value,
    ModelParams, PhasePoint, StateSpec, Variant,
};

fn main() -> ampthermal::Result<()> {
    let params = ModelParams::new(1.5, 1.2)?;

    // m = 1 added: value at the origin, analytic zero radius, and the
    // sign flip across it.
    let spec = StateSpec::new(params, 1, Variant::Added)?;
    let r = negativity_radius_m1(spec.amplified()?.nbar_amp);
    println!("m = 1 added:");
    println!(
        "  W(0,0)              = {:.8}",
        wigner_value(&spec, &PhasePoint::new(0.0, 0.0))?
    );
    println!("  zero-crossing radius = {r:.8}");
    for x in [0.9 * r, 1.1 * r] {
        println!(
            "  W({x:.4}, 0)       = {:+.3e}",
            wigner_value(&spec, &PhasePoint::new(x, 0.0))?
        );
    }
    println!();

    // Section minima for the added family, with the Laguerre-series
    // witness evaluated at the same point.
    println!(
        "{:>2} {:>14} {:>10} {:>14}",
        "m", "w_min", "x_min", "oracle at min"
    );
    for m in [1u32, 3, 5] {
        let spec = StateSpec::new(params, m, Variant::Added)?;
        let min = min_section(&spec)?;
        let state = build_state(&spec, 1e-14)?;
        let witness = wigner_oracle(&state, &PhasePoint::new(min.x_min, 0.0))?;
        println!(
            "{m:>2} {:>14.6e} {:>10.6} {:>14.6e}",
            min.w_min, min.x_min, witness
        );
        assert!(min.w_min < 0.0);
        assert!((min.w_min - witness).abs() < 1e-9);
    }
    println!();

    // Subtraction keeps the Wigner function non-negative everywhere.
    let spec = StateSpec::new(params, 3, Variant::Subtracted)?;
    let min = min_section(&spec)?;
    println!(
        "m = 3 subtracted: section minimum {:.3e} (non-negative)",
        min.w_min
    );

    // And the grid integrates to one (the trapezoid rule over a window
    // wide enough for the Gaussian envelope).
    let narrow = StateSpec::new(ModelParams::new(1.5, 1.0)?, 1, Variant::Added)?;
    let ax = GridAxis::new(-6.0, 6.0, 241)?;
    let grid = wigner_grid(&narrow, ax, ax)?;
    println!(
        "grid integral (nbar = 1.5, g = 1, m = 1 added): {:.6}",
        grid.integral()
    );
    Ok(())
}
