//! Command-line interface: reproduces the published table and figure
//! data as CSV/JSON and runs the verification suite.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::fock::{build_state, pnd_value};
use crate::output::{write_table, Cell, DataTable, Meta, OutputFormat};
use crate::params::{
    amplified_params, classify_region, formal_nbar_amp, ModelParams, RegionClass, StateSpec,
    Variant,
};
use crate::purity::{purity_analytic, purity_numeric};
use crate::verify::{run_verification, VerifyConfig};
use crate::wigner::{
    min_section, negativity_radius_m1, wigner_grid, wigner_value, GridAxis, PhasePoint,
};

/// Fixed parameter sets behind the published figures:
/// `nbar = 1.5`, `g in {1.05, 1.1, 1.2}`, `m in {0, 1, 3, 5}`.
pub const PRESET_NBAR: f64 = 1.5;
pub const PRESET_GAINS: [f64; 3] = [1.05, 1.1, 1.2];
pub const PRESET_MS: [u32; 4] = [0, 1, 3, 5];
pub const PRESET_SECTION_MS: [u32; 3] = [1, 3, 5];

#[derive(Debug, Parser)]
#[command(
    name = "ampthermal",
    version,
    about = "Amplified thermal states and their photon-added/subtracted variants: \
             photon-number distributions, purities, Wigner functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-number distribution of one state, or the published table
    Pnd(PndArgs),
    /// Physicality region map and amplified-MPN curves
    Region(RegionArgs),
    /// Purity curves, analytic and numeric
    Purity(PurityArgs),
    /// Wigner function grids and sections
    Wigner(WignerArgs),
    /// Run the full cross-check suite
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Add,
    Sub,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Add => Variant::Added,
            VariantArg::Sub => Variant::Subtracted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PndArgs {
    #[arg(long, default_value_t = 1.5)]
    pub nbar: f64,
    #[arg(long, default_value_t = 1.2)]
    pub gain: f64,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_enum, default_value = "add")]
    pub variant: VariantArg,
    /// Largest photon number to emit; defaults to the certified cutoff
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    pub tail_eps: f64,
    /// Emit the six-row published probability table (nbar=1.5, g=1.2)
    #[arg(long)]
    pub table1: bool,
    /// Figure preset (fig3: added PNDs, fig4: subtracted PNDs)
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, default_value_t = 0.0)]
    pub nbar_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub nbar_max: f64,
    #[arg(long, default_value_t = 101)]
    pub nbar_steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gain_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub gain_max: f64,
    #[arg(long, default_value_t = 101)]
    pub gain_steps: usize,
    /// Sweep gain at this fixed nbar (curve mode)
    #[arg(long)]
    pub fixed_nbar: Option<f64>,
    /// Sweep nbar at this fixed gain (curve mode)
    #[arg(long)]
    pub fixed_gain: Option<f64>,
    /// Evaluate the algebraic Nbar beyond the critical boundary as well
    #[arg(long)]
    pub allow_formal: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PurityArgs {
    /// Photon counts to tabulate
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 1, 3, 5])]
    pub m: Vec<u32>,
    /// Evaluate a single (nbar, gain) point instead of an Nbar sweep
    #[arg(long)]
    pub nbar: Option<f64>,
    #[arg(long)]
    pub gain: Option<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub nbar_amp_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub nbar_amp_max: f64,
    #[arg(long, default_value_t = 100)]
    pub nbar_amp_steps: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tail_eps: f64,
    /// Figure preset (fig5: purity curves for m = 0,1,3,5)
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[arg(long, default_value_t = 1.5)]
    pub nbar: f64,
    #[arg(long, default_value_t = 1.2)]
    pub gain: f64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, value_enum, default_value = "add")]
    pub variant: VariantArg,
    /// Emit the y = 0 section instead of the full grid
    #[arg(long)]
    pub section: bool,
    #[arg(long, default_value_t = -4.0)]
    pub xmin: f64,
    #[arg(long, default_value_t = 4.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = -4.0)]
    pub ymin: f64,
    #[arg(long, default_value_t = 4.0)]
    pub ymax: f64,
    #[arg(long, default_value_t = 161)]
    pub nx: usize,
    #[arg(long, default_value_t = 161)]
    pub ny: usize,
    /// Figure preset (fig6: added grids, fig7: subtracted grids,
    /// fig8: added sections for m = 1,3,5)
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Perturb the analytic side by this relative amount (negative control)
    #[arg(long)]
    pub fuzz: Option<f64>,
    /// Shorthand for --format json
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Process exit codes: 0 success, 1 verification failure,
/// 2 invalid or unphysical parameters.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Pnd(args) => cmd_pnd(&args),
        Command::Region(args) => cmd_region(&args),
        Command::Purity(args) => cmd_purity(&args),
        Command::Wigner(args) => cmd_wigner(&args),
        Command::Verify(args) => return cmd_verify(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(CmdError::Params(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(CmdError::Io(e)) => {
            eprintln!("i/o error: {e}");
            2
        }
    }
}

#[derive(Debug)]
enum CmdError {
    Params(Error),
    Io(io::Error),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Params(e)
    }
}

impl From<io::Error> for CmdError {
    fn from(e: io::Error) -> Self {
        CmdError::Io(e)
    }
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_pnd(args: &PndArgs) -> Result<(), CmdError> {
    let meta = Meta::new("pnd")
        .param("nbar", args.nbar)
        .param("gain", args.gain)
        .param("m", args.m)
        .param("variant", Variant::from(args.variant).label())
        .param("tail_eps", args.tail_eps);
    let mut out = open_out(&args.output.out)?;

    if args.table1 {
        let base = ModelParams::new(1.5, 1.2)?;
        let specs = [
            StateSpec::new(ModelParams::new(1.5, 1.0)?, 0, Variant::Added)?,
            StateSpec::new(base, 0, Variant::Added)?,
            StateSpec::new(base, 3, Variant::Added)?,
            StateSpec::new(base, 3, Variant::Subtracted)?,
        ];
        let mut table = DataTable::new(&[
            "k",
            "thermal_input",
            "thermal_amplified",
            "added_m3",
            "subtracted_m3",
        ]);
        for k in 0..=5usize {
            let mut row: Vec<Cell> = vec![k.into()];
            for s in &specs {
                row.push(pnd_value(s, k)?.into());
            }
            table.push(row);
        }
        write_table(&mut *out, args.output.format, &meta, &table)?;
        return Ok(());
    }

    if let Some(preset) = args.preset {
        let variant = match preset {
            Preset::Fig3 => Variant::Added,
            Preset::Fig4 => Variant::Subtracted,
            other => {
                return Err(CmdError::Params(Error::InvalidParams(format!(
                    "pnd accepts presets fig3/fig4, got {other:?}"
                ))))
            }
        };
        let kmax = args.kmax.unwrap_or(30);
        let mut table = DataTable::new(&["gain", "m", "k", "rho_kk"]);
        for &gain in &PRESET_GAINS {
            for &m in &PRESET_MS {
                let s = StateSpec::new(ModelParams::new(PRESET_NBAR, gain)?, m, variant)?;
                for k in 0..=kmax {
                    table.push(vec![
                        gain.into(),
                        m.into(),
                        k.into(),
                        pnd_value(&s, k)?.into(),
                    ]);
                }
            }
        }
        write_table(&mut *out, args.output.format, &meta, &table)?;
        return Ok(());
    }

    let params = ModelParams::new(args.nbar, args.gain)?;
    let spec = StateSpec::new(params, args.m, args.variant.into())?;
    let state = build_state(&spec, args.tail_eps)?;
    let kmax = args.kmax.unwrap_or_else(|| state.cutoff());
    let mut table = DataTable::new(&["k", "rho_kk"]);
    for k in 0..=kmax {
        table.push(vec![k.into(), pnd_value(&spec, k)?.into()]);
    }
    write_table(&mut *out, args.output.format, &meta, &table)?;
    Ok(())
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![min];
    }
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn region_row(nbar: f64, gain: f64, allow_formal: bool) -> Result<Vec<Cell>, CmdError> {
    let params = ModelParams::new(nbar, gain)?;
    let class = classify_region(&params);
    let nbar_amp = match class {
        RegionClass::Physical => amplified_params(&params)?.nbar_amp,
        // The divergence marker: NaN exactly on the boundary, and beyond
        // it unless the formal branch was requested.
        RegionClass::Boundary => f64::NAN,
        RegionClass::Unphysical => {
            if allow_formal {
                formal_nbar_amp(&params)
            } else {
                f64::NAN
            }
        }
    };
    Ok(vec![
        nbar.into(),
        gain.into(),
        class.to_string().into(),
        nbar_amp.into(),
    ])
}

fn cmd_region(args: &RegionArgs) -> Result<(), CmdError> {
    let meta = Meta::new("region").param("allow_formal", args.allow_formal);
    let mut out = open_out(&args.output.out)?;
    let mut table = DataTable::new(&["nbar", "gain", "class", "nbar_amp"]);
    match (args.fixed_nbar, args.fixed_gain) {
        (Some(nbar), _) => {
            for gain in linspace(args.gain_min, args.gain_max, args.gain_steps) {
                table.push(region_row(nbar, gain, args.allow_formal)?);
            }
        }
        (None, Some(gain)) => {
            for nbar in linspace(args.nbar_min, args.nbar_max, args.nbar_steps) {
                table.push(region_row(nbar, gain, args.allow_formal)?);
            }
        }
        (None, None) => {
            for nbar in linspace(args.nbar_min, args.nbar_max, args.nbar_steps) {
                for gain in linspace(args.gain_min, args.gain_max, args.gain_steps) {
                    table.push(region_row(nbar, gain, args.allow_formal)?);
                }
            }
        }
    }
    write_table(&mut *out, args.output.format, &meta, &table)?;
    Ok(())
}

fn cmd_purity(args: &PurityArgs) -> Result<(), CmdError> {
    if let Some(p) = args.preset {
        if p != Preset::Fig5 {
            return Err(CmdError::Params(Error::InvalidParams(format!(
                "purity accepts preset fig5, got {p:?}"
            ))));
        }
    }
    let ms: Vec<u32> = if args.preset == Some(Preset::Fig5) {
        PRESET_MS.to_vec()
    } else {
        args.m.clone()
    };
    let meta = Meta::new("purity").param("tail_eps", args.tail_eps);
    let mut out = open_out(&args.output.out)?;
    let mut table = DataTable::new(&["nbar_amp", "m", "variant", "analytic", "numeric"]);

    // Either one (nbar, gain) point, or an Nbar sweep realized through
    // unit gain (the amplified MPN is the effective parameter).
    let points: Vec<ModelParams> = match (args.nbar, args.gain) {
        (Some(nbar), Some(gain)) => vec![ModelParams::new(nbar, gain)?],
        (None, None) => linspace(args.nbar_amp_min, args.nbar_amp_max, args.nbar_amp_steps)
            .into_iter()
            .map(|n| ModelParams::new(n, 1.0))
            .collect::<Result<_, _>>()?,
        _ => {
            return Err(CmdError::Params(Error::InvalidParams(
                "--nbar and --gain must be given together".into(),
            )))
        }
    };
    for params in points {
        let nbar_amp = amplified_params(&params)?.nbar_amp;
        for &m in &ms {
            for variant in [Variant::Added, Variant::Subtracted] {
                if variant == Variant::Subtracted && m > 0 && nbar_amp == 0.0 {
                    continue;
                }
                let s = StateSpec::new(params, m, variant)?;
                let analytic = purity_analytic(&s)?;
                let numeric = purity_numeric(&build_state(&s, args.tail_eps)?)?;
                table.push(vec![
                    nbar_amp.into(),
                    m.into(),
                    variant.label().into(),
                    analytic.into(),
                    numeric.into(),
                ]);
            }
        }
    }
    write_table(&mut *out, args.output.format, &meta, &table)?;
    Ok(())
}

fn section_summary(spec: &StateSpec) -> Result<serde_json::Value, Error> {
    let min = min_section(spec)?;
    let mut doc = json!({
        "w_min": min.w_min,
        "x_min": min.x_min,
    });
    if spec.m == 1 && spec.variant == Variant::Added {
        let amp = amplified_params(&spec.params)?;
        doc["negativity_radius"] = json!(negativity_radius_m1(amp.nbar_amp));
    }
    Ok(doc)
}

fn write_sidecar(out_path: &Option<PathBuf>, doc: &serde_json::Value) -> io::Result<()> {
    match out_path {
        Some(p) => {
            let side = sidecar_path(p);
            let mut f = File::create(side)?;
            writeln!(f, "{}", serde_json::to_string_pretty(doc)?)
        }
        None => {
            eprintln!("{}", serde_json::to_string_pretty(doc)?);
            Ok(())
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_owned();
    os.push(".summary.json");
    PathBuf::from(os)
}

fn cmd_wigner(args: &WignerArgs) -> Result<(), CmdError> {
    let meta = Meta::new("wigner")
        .param("nbar", args.nbar)
        .param("gain", args.gain)
        .param("m", args.m);
    let mut out = open_out(&args.output.out)?;

    if let Some(preset) = args.preset {
        match preset {
            Preset::Fig6 | Preset::Fig7 => {
                let variant = if preset == Preset::Fig6 {
                    Variant::Added
                } else {
                    Variant::Subtracted
                };
                let x_axis = GridAxis::new(args.xmin, args.xmax, args.nx)?;
                let y_axis = GridAxis::new(args.ymin, args.ymax, args.ny)?;
                let mut table = DataTable::new(&["gain", "m", "x", "y", "w"]);
                for &gain in &PRESET_GAINS {
                    for &m in &PRESET_MS {
                        let s = StateSpec::new(ModelParams::new(PRESET_NBAR, gain)?, m, variant)?;
                        let grid = wigner_grid(&s, x_axis, y_axis)?;
                        for (j, row) in grid.values.iter().enumerate() {
                            for (i, w) in row.iter().enumerate() {
                                table.push(vec![
                                    gain.into(),
                                    m.into(),
                                    x_axis.value(i).into(),
                                    y_axis.value(j).into(),
                                    (*w).into(),
                                ]);
                            }
                        }
                    }
                }
                write_table(&mut *out, args.output.format, &meta, &table)?;
                return Ok(());
            }
            Preset::Fig8 => {
                let mut table = DataTable::new(&["gain", "m", "x", "w"]);
                let mut summaries = Vec::new();
                for &gain in &PRESET_GAINS {
                    for &m in &PRESET_SECTION_MS {
                        let s = StateSpec::new(
                            ModelParams::new(PRESET_NBAR, gain)?,
                            m,
                            Variant::Added,
                        )?;
                        for x in linspace(args.xmin, args.xmax, args.nx) {
                            let w = wigner_value(&s, &PhasePoint::new(x, 0.0))?;
                            table.push(vec![gain.into(), m.into(), x.into(), w.into()]);
                        }
                        let mut summary = section_summary(&s)?;
                        summary["gain"] = json!(gain);
                        summary["m"] = json!(m);
                        summaries.push(summary);
                    }
                }
                write_table(&mut *out, args.output.format, &meta, &table)?;
                write_sidecar(&args.output.out, &json!({ "sections": summaries }))?;
                return Ok(());
            }
            other => {
                return Err(CmdError::Params(Error::InvalidParams(format!(
                    "wigner accepts presets fig6/fig7/fig8, got {other:?}"
                ))))
            }
        }
    }

    let params = ModelParams::new(args.nbar, args.gain)?;
    let spec = StateSpec::new(params, args.m, args.variant.into())?;
    if args.section {
        let mut table = DataTable::new(&["x", "w"]);
        for x in linspace(args.xmin, args.xmax, args.nx) {
            table.push(vec![
                x.into(),
                wigner_value(&spec, &PhasePoint::new(x, 0.0))?.into(),
            ]);
        }
        write_table(&mut *out, args.output.format, &meta, &table)?;
    } else {
        let x_axis = GridAxis::new(args.xmin, args.xmax, args.nx)?;
        let y_axis = GridAxis::new(args.ymin, args.ymax, args.ny)?;
        let grid = wigner_grid(&spec, x_axis, y_axis)?;
        let mut table = DataTable::new(&["x", "y", "w"]);
        for (j, row) in grid.values.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                table.push(vec![
                    x_axis.value(i).into(),
                    y_axis.value(j).into(),
                    (*w).into(),
                ]);
            }
        }
        write_table(&mut *out, args.output.format, &meta, &table)?;
    }
    write_sidecar(&args.output.out, &section_summary(&spec)?)?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let config = VerifyConfig { fuzz: args.fuzz };
    let report = match run_verification(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    for c in &report.checks {
        eprintln!(
            "{} {} (max residual {:e}, tolerance {:e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.check_name,
            c.max_residual,
            c.tolerance,
        );
    }
    let format = if args.json {
        OutputFormat::Json
    } else {
        args.output.format
    };
    let emit = || -> Result<(), CmdError> {
        let mut out = open_out(&args.output.out)?;
        match format {
            OutputFormat::Json => {
                let doc = json!({
                    "meta": Meta::new("verify").param("fuzz", json!(args.fuzz)),
                    "data": report,
                });
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&doc).map_err(io::Error::from)?
                )?;
            }
            OutputFormat::Csv => {
                let mut table = DataTable::new(&[
                    "check_name",
                    "parameters",
                    "max_residual",
                    "tolerance",
                    "pass",
                ]);
                for c in &report.checks {
                    table.push(vec![
                        c.check_name.clone().into(),
                        c.parameters.clone().into(),
                        c.max_residual.into(),
                        c.tolerance.into(),
                        c.pass.to_string().into(),
                    ]);
                }
                write_table(&mut *out, OutputFormat::Csv, &Meta::new("verify"), &table)?;
            }
        }
        Ok(())
    };
    if let Err(e) = emit() {
        match e {
            CmdError::Params(e) => eprintln!("error: {e}"),
            CmdError::Io(e) => eprintln!("i/o error: {e}"),
        }
        return 2;
    }
    if report.all_pass() {
        0
    } else {
        1
    }
}
