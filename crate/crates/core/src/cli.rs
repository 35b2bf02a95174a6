//! The `finite-jj` command line.
//!
//! Every subcommand writes a CSV or JSON artifact (to `--output` or stdout)
//! and prints a one-line summary. Exit status is 0 on success, 1 for invalid
//! parameters and 2 when a numerical procedure fails to converge.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{two_e_per, validity_min_pairs, CircuitParams, MaterialProps};
use crate::observables::{
    band_sweep, curvature_scan, linspace, params_meta, solve_levels, CurvatureKind, SweepRequest, WindowPolicy,
};
use crate::perturbation::{
    bogoliubov, cpb_gap, cpb_susceptibility, is_degeneracy_point, transmon_first_order_numeric, transmon_frequency,
    transmon_regime_warnings, transmon_susceptibility,
};
use crate::table::{Format, SweepTable};
use crate::wick::{fock_oracle, random_polynomial};

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "finite-jj",
    version,
    about = "Josephson junctions between finite superconducting islands"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest energy bands versus offset charge.
    Bands(BandsArgs),
    /// Ground-state population imbalance ⟨n⟩ versus offset charge.
    Imbalance(SweepArgs),
    /// Charge susceptibility d⟨n⟩/dn_g versus offset charge.
    Susceptibility(SweepArgs),
    /// Zero-offset curvature of ω_q or of the susceptibility over a scan of E_J/E_C.
    Curvature(CurvatureArgs),
    /// Qubit frequency shift ω_q(n_g) − ω_q(0) for a large transmon.
    TransmonShift(ShiftArgs),
    /// Closed-form results for both regimes at one parameter point.
    Analytic(PointArgs),
    /// Minimum island size and device scales for a material.
    Validity(ValidityArgs),
    /// Check the operator engine against truncated Fock matrices.
    WickVerify(WickArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    /// Total number of Cooper pairs 2N (scientific notation accepted).
    #[arg(long, value_parser = parse_count)]
    pub pairs: u64,
    /// E_J/E_C; energies are then in units of E_C unless --ec is given.
    #[arg(long)]
    pub ejec: Option<f64>,
    /// Josephson energy.
    #[arg(long)]
    pub ej: Option<f64>,
    /// Charging energy.
    #[arg(long)]
    pub ec: Option<f64>,
    /// Josephson energy E_J/h in GHz.
    #[arg(long)]
    pub ej_ghz: Option<f64>,
    /// Charging energy E_C/h in GHz.
    #[arg(long)]
    pub ec_ghz: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// `adaptive`, `full`, or a fixed half-width in charge states.
    #[arg(long, default_value = "adaptive")]
    pub window: String,
    /// Relative tolerance of the adaptive window.
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    /// Largest half-width the adaptive window may reach.
    #[arg(long, value_parser = parse_count, default_value = "4194304")]
    pub w_max: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, value_parser = parse_count)]
    pub steps: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of bands E_0, …, E_{k−1}.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Subtract the smallest E_0 on the grid from every band.
    #[arg(long)]
    pub subtract_e0: bool,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Dispersion,
    Susceptibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanArg {
    Ejec,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Scanned variable.
    #[arg(long, value_enum, default_value_t = ScanArg::Ejec)]
    pub scan: ScanArg,
    /// Values of the scanned variable.
    #[arg(long, value_delimiter = ',', default_value = "10,20,50,100")]
    pub values: Vec<f64>,
    /// Total number of Cooper pairs 2N.
    #[arg(long, value_parser = parse_count)]
    pub pairs: u64,
    /// Stencil step in units of n_g.
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ShiftArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// Offset charge at which the shift is evaluated.
    #[arg(long, allow_hyphen_values = true)]
    pub ng: f64,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub ng: f64,
    /// Also evaluate the first-order transmon corrections with the operator engine.
    #[arg(long)]
    pub first_order: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidityArgs {
    /// Built-in material preset.
    #[arg(long, conflicts_with = "preset_file")]
    pub material: Option<String>,
    /// Material preset file (`key = value` lines).
    #[arg(long)]
    pub preset_file: Option<PathBuf>,
    /// Cooper pairs per island N for the island-volume estimate.
    #[arg(long, value_parser = parse_count, default_value = "2.5e8")]
    pub island_pairs: u64,
    /// Offset charge for the gate-voltage estimate.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e6)]
    pub ng: f64,
    /// Gate capacitance in farads.
    #[arg(long, conflicts_with = "cg_mv")]
    pub cg: Option<f64>,
    /// Gate capacitance given as 2e per this many millivolts.
    #[arg(long)]
    pub cg_mv: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WickArgs {
    /// Number of random polynomials.
    #[arg(long, value_parser = parse_count, default_value = "200")]
    pub count: u64,
    /// Maximum word length.
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    /// Maximum number of terms per polynomial.
    #[arg(long, default_value_t = 8)]
    pub terms: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Absolute tolerance for agreement.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses a non-negative integer count, accepting forms like `5e8`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(x >= 0.0) || x.fract() != 0.0 || x > 9.007_199_254_740_992e15 {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(x as u64)
}

/// Energy unit of the resolved parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    ChargingEnergy,
    Ghz,
    User,
}

impl Unit {
    fn label(self) -> &'static str {
        match self {
            Unit::ChargingEnergy => "E_C",
            Unit::Ghz => "GHz",
            Unit::User => "user",
        }
    }
}

fn flag_error(flag: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        name: flag,
        reason: reason.into(),
    }
}

fn resolve(c: &CircuitArgs, n_g: f64) -> Result<(CircuitParams, Unit)> {
    let ghz = c.ej_ghz.is_some() || c.ec_ghz.is_some();
    let plain = c.ej.is_some() || c.ec.is_some();
    if ghz && (plain || c.ejec.is_some()) {
        return Err(flag_error("--ej-ghz", "cannot be combined with --ej, --ec or --ejec"));
    }
    let (e_j, e_c, unit) = if ghz {
        let ej = c
            .ej_ghz
            .ok_or_else(|| flag_error("--ej-ghz", "required together with --ec-ghz"))?;
        let ec = c
            .ec_ghz
            .ok_or_else(|| flag_error("--ec-ghz", "required together with --ej-ghz"))?;
        (ej, ec, Unit::Ghz)
    } else if let Some(ratio) = c.ejec {
        if c.ej.is_some() {
            return Err(flag_error("--ejec", "cannot be combined with --ej"));
        }
        match c.ec {
            Some(ec) => (ratio * ec, ec, Unit::User),
            None => (ratio, 1.0, Unit::ChargingEnergy),
        }
    } else {
        let ej =
            c.ej.ok_or_else(|| flag_error("--ej", "give --ejec, --ej/--ec or --ej-ghz/--ec-ghz"))?;
        let ec = c.ec.ok_or_else(|| flag_error("--ec", "required together with --ej"))?;
        (ej, ec, Unit::User)
    };
    let params = CircuitParams::new(e_j, e_c, n_g, c.pairs).map_err(|e| match e {
        Error::Domain { name: "e_j", reason } => flag_error("--ej", reason),
        Error::Domain { name: "e_c", reason } => flag_error("--ec", reason),
        Error::Domain { name: "n_g", reason } => flag_error("--ng", reason),
        Error::Domain {
            name: "pairs_total",
            reason,
        } => flag_error("--pairs", reason),
        other => other,
    })?;
    Ok((params, unit))
}

fn policy(w: &WindowArgs) -> Result<WindowPolicy> {
    let p = match w.window.as_str() {
        "adaptive" => WindowPolicy {
            w_max: w.w_max,
            ..WindowPolicy::adaptive(w.rtol)
        },
        "full" => WindowPolicy::full(),
        other => {
            let hw = parse_count(other).map_err(|e| flag_error("--window", e))?;
            WindowPolicy::fixed(hw)
        }
    };
    p.validate().map_err(|e| flag_error("--window", e.to_string()))?;
    Ok(p)
}

fn grid(g: &GridArgs) -> Result<Vec<f64>> {
    if g.steps < 1 {
        return Err(flag_error("--steps", "must be at least 1"));
    }
    if g.steps > 1 && !(g.from < g.to) {
        return Err(flag_error("--from", "must be smaller than --to"));
    }
    Ok(linspace(g.from, g.to, g.steps as usize))
}

fn emit(out: &OutputArgs, body: &str, summary: &str) -> Result<()> {
    match &out.output {
        Some(path) => {
            std::fs::write(path, body)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn stamp(table: &mut SweepTable, command: &str, unit: Unit) {
    let mut meta = IndexMap::new();
    meta.insert("command".to_string(), json!(command));
    meta.insert("energy_unit".to_string(), json!(unit.label()));
    for (k, v) in table.meta.drain(..) {
        meta.insert(k, v);
    }
    table.meta = meta;
}

fn run_sweep(
    name: &str,
    circuit: &CircuitArgs,
    grid_args: &GridArgs,
    window: &WindowArgs,
    output: &OutputArgs,
    req: SweepRequest,
) -> Result<()> {
    let (params, unit) = resolve(circuit, 0.0)?;
    if req.levels as u64 > params.dim() {
        return Err(flag_error(
            "--levels",
            format!("at most 2N + 1 = {} levels exist", params.dim()),
        ));
    }
    let g = grid(grid_args)?;
    let policy = policy(window)?;
    let mut table = band_sweep(&params, &g, &req, &policy)?;
    stamp(&mut table, name, unit);
    let failed = table.meta["failed_points"].as_array().map_or(0, Vec::len);
    let summary = format!(
        "{name}: {} points, columns {}, {} failed ({params})",
        table.len(),
        table.columns.keys().cloned().collect::<Vec<_>>().join(","),
        failed
    );
    emit(output, &table.render(output.format.into()), &summary)
}

fn run_curvature(a: &CurvatureArgs) -> Result<()> {
    if a.values.is_empty() {
        return Err(flag_error("--values", "at least one value is required"));
    }
    if a.values.iter().any(|v| !(*v > 0.0)) {
        return Err(flag_error("--values", "E_J/E_C values must be positive"));
    }
    let mut values = a.values.clone();
    values.sort_by(f64::total_cmp);
    values.dedup();
    if a.pairs == 0 {
        return Err(flag_error("--pairs", "2N must be at least 1"));
    }
    let kind = match a.kind {
        KindArg::Dispersion => CurvatureKind::Dispersion,
        KindArg::Susceptibility => CurvatureKind::Susceptibility,
    };
    let policy = policy(&a.window)?;
    let mut table = curvature_scan(kind, 1.0, a.pairs, &values, &policy, a.step)?;
    stamp(&mut table, "curvature", Unit::ChargingEnergy);
    let ratios = table.column("ratio").expect("ratio column");
    let summary = format!(
        "curvature ({:?}): 2N={} ratio to analytic {}",
        kind,
        a.pairs,
        values
            .iter()
            .zip(ratios)
            .map(|(v, r)| format!("{v}:{r:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    emit(&a.output, &table.render(a.output.format.into()), &summary)
}

fn run_shift(a: &ShiftArgs) -> Result<()> {
    let (params, unit) = resolve(&a.circuit, a.ng)?;
    let policy = policy(&a.window)?;
    let mut points = vec![0.0, a.ng];
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut numeric = Vec::new();
    let mut analytic = Vec::new();
    for &ng in &points {
        let s = solve_levels(&params.with_ng(ng), &policy, 2, false)?;
        let e = s.energies();
        numeric.push(e[1] - e[0]);
        analytic.push(transmon_frequency(&params.with_ng(ng))?);
    }
    let at = |v: &[f64], ng: f64| v[points.iter().position(|p| *p == ng).expect("grid point")];
    let shift_num = at(&numeric, a.ng) - at(&numeric, 0.0);
    let shift_an = at(&analytic, a.ng) - at(&analytic, 0.0);

    let mut table = SweepTable::new("n_g", points.clone())?;
    table.push_column("omega_q", numeric)?;
    table.push_column("omega_q_analytic", analytic)?;
    for (k, v) in params_meta(&params) {
        table.set_meta(k, v);
    }
    table.set_meta("n_g_target", a.ng);
    table.set_meta("shift", shift_num);
    table.set_meta("shift_analytic", shift_an);
    table.set_meta("window_policy", policy.to_json());
    stamp(&mut table, "transmon-shift", unit);

    let summary = match unit {
        Unit::Ghz => format!(
            "transmon-shift: omega_q(n_g={}) - omega_q(0) = {:.4} kHz (closed form {:.4} kHz)",
            a.ng,
            shift_num * 1e6,
            shift_an * 1e6
        ),
        _ => format!(
            "transmon-shift: omega_q(n_g={}) - omega_q(0) = {:.6e} {} (closed form {:.6e})",
            a.ng,
            shift_num,
            unit.label(),
            shift_an
        ),
    };
    emit(&a.output, &table.render(a.output.format.into()), &summary)
}

fn run_analytic(a: &PointArgs) -> Result<()> {
    let (params, unit) = resolve(&a.circuit, a.ng)?;
    let b = bogoliubov(&params)?;
    let degenerate = is_degeneracy_point(&params);
    let (gap, chi_cpb) = if degenerate {
        (cpb_gap(&params)?, cpb_susceptibility(&params)?)
    } else {
        (f64::NAN, f64::NAN)
    };
    let mut table = SweepTable::new("n_g", vec![params.n_g])?;
    let mut push = |name: &str, v: f64| table.push_column(name, vec![v]);
    push("cpb_gap", gap)?;
    push("cpb_susceptibility", chi_cpb)?;
    push("epsilon", b.epsilon)?;
    push("u_plus", b.u_plus)?;
    push("u_minus", b.u_minus)?;
    push("u_0", b.u_0)?;
    push("transmon_frequency", transmon_frequency(&params)?)?;
    push("transmon_susceptibility", transmon_susceptibility(&params)?)?;
    if a.first_order {
        let fo = transmon_first_order_numeric(&params)?;
        push("first_order_frequency", fo.freq)?;
        push("first_order_imbalance", fo.imbalance)?;
    }
    for (k, v) in params_meta(&params) {
        table.set_meta(k, v);
    }
    table.set_meta("degeneracy_point", degenerate);
    let warnings: Vec<Value> = transmon_regime_warnings(&params).into_iter().map(Value::from).collect();
    table.set_meta("transmon_warnings", Value::Array(warnings));
    stamp(&mut table, "analytic", unit);
    let summary = format!(
        "analytic: epsilon={:.10e} transmon omega_q={:.10e} chi={:.10e} cpb gap={} ({params})",
        b.epsilon,
        transmon_frequency(&params)?,
        transmon_susceptibility(&params)?,
        if degenerate {
            format!("{gap:.10e}")
        } else {
            "n/a".into()
        }
    );
    emit(&a.output, &table.render(a.output.format.into()), &summary)
}

fn run_validity(a: &ValidityArgs) -> Result<()> {
    let material = match (&a.material, &a.preset_file) {
        (_, Some(path)) => MaterialProps::load_preset(path).map_err(|e| flag_error("--preset-file", e.to_string()))?,
        (Some(name), None) => {
            MaterialProps::preset(name).ok_or_else(|| flag_error("--material", format!("unknown preset `{name}`")))?
        }
        (None, None) => MaterialProps::aluminum(),
    };
    let c_g = match (a.cg, a.cg_mv) {
        (Some(c), _) => c,
        (None, Some(mv)) => two_e_per(mv * 1e-3),
        (None, None) => two_e_per(1e-3),
    };
    if !(c_g > 0.0 && c_g.is_finite()) {
        return Err(flag_error("--cg", "gate capacitance must be positive"));
    }
    let report = validity_min_pairs(&material)?
        .with_island(a.island_pairs as f64)
        .with_gate(a.ng, c_g)?;
    let volume_um3 = report.island_volume.expect("set") * 1e18;
    let voltage = report.gate_voltage.expect("set");
    let rows = [
        ("n_min", report.n_min),
        ("n_s_per_m3", report.n_s),
        ("island_pairs", a.island_pairs as f64),
        ("island_volume_um3", volume_um3),
        ("n_g", a.ng),
        ("gate_capacitance_F", c_g),
        ("gate_voltage_V", voltage),
    ];
    let meta = json!({
        "command": "validity",
        "material": material.name,
        "gap_J": material.gap,
        "fermi_energy_J": material.fermi_energy,
        "electron_density_per_m3": material.electron_density,
        "london_depth_m": material.london_depth,
    });
    let body = match a.output.format {
        FormatArg::Csv => {
            let mut s = String::new();
            for (k, v) in meta.as_object().expect("object") {
                s.push_str(&format!("# {k} = {v}\n"));
            }
            s.push_str("quantity,value\n");
            for (k, v) in rows {
                s.push_str(&format!("{k},{v:.16e}\n"));
            }
            s
        }
        FormatArg::Json => {
            let report: serde_json::Map<String, Value> = rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            let mut s = serde_json::to_string_pretty(&json!({"meta": meta, "report": report})).expect("serializable");
            s.push('\n');
            s
        }
    };
    let summary = format!(
        "validity ({}): N_min = {:.4e}, island volume = {:.4e} um^3 for N = {:e}, V_g = {:.6e} V",
        material.name, report.n_min, volume_um3, a.island_pairs as f64, voltage
    );
    emit(&a.output, &body, &summary)
}

fn run_wick(a: &WickArgs) -> Result<bool> {
    if a.count == 0 {
        return Err(flag_error("--count", "must be at least 1"));
    }
    if !(a.tol > 0.0) {
        return Err(flag_error("--tol", "must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut cols: [Vec<f64>; 5] = Default::default();
    for _ in 0..a.count {
        let p = random_polynomial(&mut rng, a.degree, a.terms.max(1));
        let fast = p.vacuum_expectation()?;
        let slow = fock_oracle(&p, a.degree + 2)?;
        cols[0].push(fast.re);
        cols[1].push(fast.im);
        cols[2].push(slow.re);
        cols[3].push(slow.im);
        cols[4].push((fast - slow).norm());
    }
    let worst = cols[4].iter().cloned().fold(0.0, f64::max);
    let pass = worst <= a.tol;
    let mut table = SweepTable::new("index", (0..a.count).map(|i| i as f64).collect())?;
    for (name, col) in ["vev_re", "vev_im", "oracle_re", "oracle_im", "abs_error"]
        .iter()
        .zip(cols)
    {
        table.push_column(*name, col)?;
    }
    table.set_meta("seed", a.seed);
    table.set_meta("max_degree", a.degree);
    table.set_meta("max_terms", a.terms);
    table.set_meta("tolerance", a.tol);
    table.set_meta("max_abs_error", worst);
    table.set_meta("pass", pass);
    stamp(&mut table, "wick-verify", Unit::User);
    table.meta.shift_remove("energy_unit");
    let summary = format!(
        "wick-verify: {} polynomials, max |vev - oracle| = {worst:.3e}, {}",
        a.count,
        if pass { "PASS" } else { "FAIL" }
    );
    emit(&a.output, &table.render(a.output.format.into()), &summary)?;
    Ok(pass)
}

fn dispatch(cfg: &RunConfig) -> Result<i32> {
    match &cfg.command {
        Command::Bands(a) => {
            let mut req = SweepRequest::bands(a.levels);
            req.subtract_e0 = a.subtract_e0;
            if a.levels == 0 {
                return Err(flag_error("--levels", "must be at least 1"));
            }
            run_sweep("bands", &a.circuit, &a.grid, &a.window, &a.output, req)?;
        }
        Command::Imbalance(a) => {
            let mut req = SweepRequest::bands(1);
            req.imbalance = true;
            run_sweep("imbalance", &a.circuit, &a.grid, &a.window, &a.output, req)?;
        }
        Command::Susceptibility(a) => {
            let mut req = SweepRequest::bands(1);
            req.imbalance = true;
            req.susceptibility = true;
            run_sweep("susceptibility", &a.circuit, &a.grid, &a.window, &a.output, req)?;
        }
        Command::Curvature(a) => run_curvature(a)?,
        Command::TransmonShift(a) => run_shift(a)?,
        Command::Analytic(a) => run_analytic(a)?,
        Command::Validity(a) => run_validity(a)?,
        Command::WickVerify(a) => {
            if !run_wick(a)? {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

/// Window policy from its command-line spelling, for use in examples.
pub fn parse_window(spec: &str, rtol: f64) -> Result<WindowPolicy> {
    policy(&WindowArgs {
        window: spec.to_string(),
        rtol,
        w_max: WindowPolicy::default().w_max,
    })
}
