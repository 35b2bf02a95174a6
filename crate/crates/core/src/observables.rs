//! Measurable quantities from numerical eigenpairs.
//!
//! Every function takes a [`WindowPolicy`]. For `2N` up to a few thousand the
//! full basis is cheap; for islands with 10⁸ pairs the low-lying states live
//! within a few dozen charge states of `n_g`, and the adaptive policy grows a
//! window around it until the result stops changing.

use log::{debug, warn};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::eigensolve::{lowest_eigenpairs, lowest_eigenvalues, Spectrum, SymTridiagonal};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_windowed, ChargeWindow, TridiagonalHamiltonian};
use crate::model::CircuitParams;
use crate::table::SweepTable;

/// How much of the charge basis to diagonalize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum WindowMode {
    Full,
    /// Fixed half-width around `n_g`.
    Fixed {
        half_width: u64,
    },
    /// Double the half-width until the relative change drops below `rtol`.
    Adaptive {
        rtol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowPolicy {
    #[serde(flatten)]
    pub mode: WindowMode,
    /// Starting half-width; `None` picks one from `E_J/E_C`.
    pub w_initial: Option<u64>,
    pub w_max: u64,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy::adaptive(1e-9)
    }
}

impl WindowPolicy {
    pub fn full() -> Self {
        WindowPolicy {
            mode: WindowMode::Full,
            w_initial: None,
            w_max: u64::MAX,
        }
    }

    pub fn fixed(half_width: u64) -> Self {
        WindowPolicy {
            mode: WindowMode::Fixed { half_width },
            w_initial: None,
            w_max: half_width,
        }
    }

    pub fn adaptive(rtol: f64) -> Self {
        WindowPolicy {
            mode: WindowMode::Adaptive { rtol },
            w_initial: None,
            w_max: 1 << 22,
        }
    }

    /// `max(16, ⌈8(E_J/8E_C)^{1/4}⌉)`: four standard deviations of the
    /// harmonic ground state in charge.
    pub fn default_initial(params: &CircuitParams) -> u64 {
        let sigma4 = (8.0 * (params.ej_over_ec() / 8.0).powf(0.25)).ceil();
        (sigma4 as u64).max(16)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.w_initial {
            if w < 4 {
                return Err(Error::domain("w_initial", format!("must be at least 4, got {w}")));
            }
        }
        match self.mode {
            WindowMode::Fixed { half_width } if half_width < 1 => {
                Err(Error::domain("window", "half-width must be at least 1"))
            }
            WindowMode::Adaptive { rtol } if !(rtol > 0.0) => {
                Err(Error::domain("rtol", format!("must be positive, got {rtol}")))
            }
            _ => Ok(()),
        }
    }

    /// Short description used in summaries.
    pub fn label(&self) -> String {
        match self.mode {
            WindowMode::Full => "full".into(),
            WindowMode::Fixed { half_width } => format!("fixed({half_width})"),
            WindowMode::Adaptive { rtol } => format!("adaptive({rtol:e})"),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Low-lying levels and, optionally, `⟨n⟩` in the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolution {
    pub spectrum: Spectrum,
    pub window: ChargeWindow,
    pub imbalance: Option<f64>,
    /// Relative change at the last window doubling (zero if none was needed).
    pub last_change: f64,
}

impl LevelSolution {
    pub fn energies(&self) -> Vec<f64> {
        self.spectrum.values()
    }
}

fn eigen_tol(h: &TridiagonalHamiltonian) -> f64 {
    let (lo, hi) = h.gershgorin();
    4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
}

fn solve_window(params: &CircuitParams, window: ChargeWindow, levels: usize, vectors: bool) -> Result<LevelSolution> {
    let h = build_windowed(params, window)?;
    if levels as u64 > window.dim() {
        return Err(Error::domain(
            "levels",
            format!("{levels} levels requested from a basis of dimension {}", window.dim()),
        ));
    }
    let tol = eigen_tol(&h);
    let spectrum = lowest_eigenvalues(&h, levels, tol)?;
    let imbalance = if vectors {
        let ground = lowest_eigenpairs(&h, 1, tol)?;
        let v = ground.pairs[0].vector.as_ref().expect("vector requested");
        Some(v.iter().enumerate().map(|(j, x)| window.charge(j) * x * x).sum())
    } else {
        None
    };
    Ok(LevelSolution {
        spectrum,
        window,
        imbalance,
        last_change: 0.0,
    })
}

/// Largest relative change between two solutions; gaps are compared for two
/// or more levels, `E_0` alone otherwise.
fn relative_change(a: &LevelSolution, b: &LevelSolution, e_c: f64) -> f64 {
    let (ea, eb) = (a.energies(), b.energies());
    let mut change: f64 = if ea.len() >= 2 {
        (1..ea.len())
            .map(|k| {
                let (ga, gb) = (ea[k] - ea[0], eb[k] - eb[0]);
                (ga - gb).abs() / gb.abs().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    } else {
        (ea[0] - eb[0]).abs() / eb[0].abs().max(e_c)
    };
    if let (Some(na), Some(nb)) = (a.imbalance, b.imbalance) {
        change = change.max((na - nb).abs() / nb.abs().max(1.0));
    }
    change
}

/// Lowest `levels` energies under `policy`, plus `⟨n⟩` when `vectors` is set.
pub fn solve_levels(
    params: &CircuitParams,
    policy: &WindowPolicy,
    levels: usize,
    vectors: bool,
) -> Result<LevelSolution> {
    params.validate()?;
    policy.validate()?;
    if levels == 0 {
        return Err(Error::domain("levels", "must be at least 1"));
    }
    let pairs = params.pairs_total;
    match policy.mode {
        WindowMode::Full => solve_window(params, ChargeWindow::full(pairs), levels, vectors),
        WindowMode::Fixed { half_width } => solve_window(
            params,
            ChargeWindow::around(pairs, params.n_g, half_width),
            levels,
            vectors,
        ),
        WindowMode::Adaptive { rtol } => {
            let mut w = policy
                .w_initial
                .unwrap_or_else(|| WindowPolicy::default_initial(params));
            let mut window = ChargeWindow::around(pairs, params.n_g, w);
            let mut prev = solve_window(params, window, levels.min(window.dim() as usize).max(1), vectors)?;
            if window.is_full() {
                return if prev.spectrum.len() == levels {
                    Ok(prev)
                } else {
                    solve_window(params, window, levels, vectors)
                };
            }
            let mut change = f64::INFINITY;
            loop {
                if w >= policy.w_max {
                    return Err(Error::WindowNotConverged {
                        half_width: w,
                        change,
                        rtol,
                    });
                }
                w = w.saturating_mul(2).min(policy.w_max);
                window = ChargeWindow::around(pairs, params.n_g, w);
                let mut next = solve_window(params, window, levels, vectors)?;
                if prev.spectrum.len() < levels {
                    prev = next;
                    continue;
                }
                change = relative_change(&prev, &next, params.e_c);
                debug!("window half-width {w}: relative change {change:e}");
                if change < rtol || window.is_full() {
                    next.last_change = change;
                    return Ok(next);
                }
                prev = next;
            }
        }
    }
}

/// `ħω_q = E_1 − E_0`.
pub fn qubit_frequency(params: &CircuitParams, policy: &WindowPolicy) -> Result<f64> {
    let s = solve_levels(params, policy, 2, false)?;
    let e = s.energies();
    Ok(e[1] - e[0])
}

/// `⟨ψ₀|n̂|ψ₀⟩`.
pub fn expected_imbalance(params: &CircuitParams, policy: &WindowPolicy) -> Result<f64> {
    Ok(solve_levels(params, policy, 1, true)?
        .imbalance
        .expect("vector requested"))
}

/// Ground-state energy alone.
pub fn ground_energy(params: &CircuitParams, policy: &WindowPolicy) -> Result<f64> {
    Ok(solve_levels(params, policy, 1, false)?.energies()[0])
}

/// Default finite-difference step `1e−4·max(1, |n_g|)`.
pub fn default_step(n_g: f64) -> f64 {
    1e-4 * n_g.abs().max(1.0)
}

/// `d⟨n⟩/dn_g` with an error estimate and an independent cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Susceptibility {
    /// Richardson extrapolation of central differences at `h` and `h/2`.
    pub value: f64,
    /// `|value − D(h/2)|`.
    pub error_estimate: f64,
    /// Plain central difference at step `h`.
    pub central: f64,
    /// `1 − E₀''/(2E_C)`, from energies only.
    pub hellmann_feynman: f64,
    pub step: f64,
}

pub fn charge_susceptibility(params: &CircuitParams, policy: &WindowPolicy, h: Option<f64>) -> Result<Susceptibility> {
    params.validate()?;
    let h = h.unwrap_or_else(|| default_step(params.n_g));
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain("h", format!("step must be positive, got {h}")));
    }
    let ng = params.n_g;
    let offsets = [-h, -0.5 * h, 0.0, 0.5 * h, h];
    let points = offsets
        .iter()
        .map(|d| solve_levels(&params.with_ng(ng + d), policy, 1, *d != 0.0))
        .collect::<Result<Vec<_>>>()?;
    let n = |i: usize| points[i].imbalance.expect("vector requested");
    let e = |i: usize| points[i].energies()[0];
    let d_full = (n(4) - n(0)) / (2.0 * h);
    let d_half = (n(3) - n(1)) / h;
    let value = (4.0 * d_half - d_full) / 3.0;
    let second = |hh: f64, lo: usize, hi: usize| (e(lo) - 2.0 * e(2) + e(hi)) / (hh * hh);
    let e2 = (4.0 * second(0.5 * h, 1, 3) - second(h, 0, 4)) / 3.0;
    Ok(Susceptibility {
        value,
        error_estimate: (value - d_half).abs(),
        central: d_full,
        hellmann_feynman: 1.0 - e2 / (2.0 * params.e_c),
        step: h,
    })
}

/// Columns to compute in [`band_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRequest {
    pub levels: usize,
    pub imbalance: bool,
    pub susceptibility: bool,
    pub frequency: bool,
    /// Subtract the grid minimum of `E_0` from every energy column.
    pub subtract_e0: bool,
}

impl SweepRequest {
    pub fn bands(levels: usize) -> Self {
        SweepRequest {
            levels,
            imbalance: false,
            susceptibility: false,
            frequency: false,
            subtract_e0: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct SweepRow {
    energies: Vec<f64>,
    imbalance: f64,
    chi: f64,
}

fn sweep_point(params: &CircuitParams, req: &SweepRequest, policy: &WindowPolicy) -> Result<SweepRow> {
    let levels = req.levels.max(if req.frequency { 2 } else { 1 });
    let sol = solve_levels(params, policy, levels, req.imbalance)?;
    let chi = if req.susceptibility {
        charge_susceptibility(params, policy, None)?.value
    } else {
        f64::NAN
    };
    Ok(SweepRow {
        energies: sol.energies(),
        imbalance: sol.imbalance.unwrap_or(f64::NAN),
        chi,
    })
}

/// Parameter block written into every table's metadata.
pub fn params_meta(params: &CircuitParams) -> Vec<(&'static str, Value)> {
    vec![
        ("e_j", json!(params.e_j)),
        ("e_c", json!(params.e_c)),
        ("pairs_total", json!(params.pairs_total)),
        ("n_half", json!(params.n_half())),
    ]
}

/// Evaluates the requested observables at every grid point. `params.n_g` is
/// ignored. Points that fail are filled with NaN and listed in the
/// `failed_points` metadata entry.
pub fn band_sweep(
    params: &CircuitParams,
    grid: &[f64],
    req: &SweepRequest,
    policy: &WindowPolicy,
) -> Result<SweepTable> {
    params.validate()?;
    policy.validate()?;
    if req.levels == 0 {
        return Err(Error::domain("levels", "must be at least 1"));
    }
    if req.levels as u64 > params.dim() {
        return Err(Error::domain(
            "levels",
            format!("{} levels exceed the basis dimension {}", req.levels, params.dim()),
        ));
    }
    let mut table = SweepTable::new("n_g", grid.to_vec())?;
    let rows: Vec<Result<SweepRow>> = grid
        .par_iter()
        .map(|&ng| sweep_point(&params.with_ng(ng), req, policy))
        .collect();

    let mut failed = Vec::new();
    let mut numeric_failure = None;
    let rows: Vec<SweepRow> = rows
        .into_iter()
        .zip(grid)
        .map(|(r, &ng)| match r {
            Ok(row) => row,
            Err(e) => {
                warn!("sweep point n_g = {ng} failed: {e}");
                if e.is_numerical() {
                    numeric_failure.get_or_insert(e.clone());
                }
                failed.push(json!({"n_g": ng, "error": e.to_string()}));
                SweepRow::default()
            }
        })
        .collect();
    if failed.len() == grid.len() {
        if let Some(e) = numeric_failure {
            return Err(e);
        }
    }

    let offset = if req.subtract_e0 {
        rows.iter()
            .filter_map(|r| r.energies.first().copied())
            .fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    for k in 0..req.levels {
        let col = rows
            .iter()
            .map(|r| r.energies.get(k).map_or(f64::NAN, |e| e - offset))
            .collect();
        table.push_column(format!("E{k}"), col)?;
    }
    if req.frequency {
        let col = rows
            .iter()
            .map(|r| {
                if r.energies.len() >= 2 {
                    r.energies[1] - r.energies[0]
                } else {
                    f64::NAN
                }
            })
            .collect();
        table.push_column("omega_q", col)?;
    }
    if req.imbalance {
        table.push_column("n_expect", rows.iter().map(|r| r.imbalance).collect())?;
    }
    if req.susceptibility {
        table.push_column("chi", rows.iter().map(|r| r.chi).collect())?;
    }

    for (k, v) in params_meta(params) {
        table.set_meta(k, v);
    }
    table.set_meta("window_policy", policy.to_json());
    if req.subtract_e0 {
        table.set_meta("energy_offset", offset);
    }
    if req.susceptibility {
        table.set_meta("susceptibility_step", "1e-4*max(1,|n_g|), Richardson");
    }
    table.set_meta("failed_points", Value::Array(failed));
    Ok(table)
}

/// Curvature at `n_g = 0` from a five-point stencil.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Curvature {
    /// Richardson extrapolation from steps `h_c` and `h_c/2`.
    pub value: f64,
    pub at_step: f64,
    pub at_half_step: f64,
    pub step: f64,
    /// Asymptotic transmon value.
    pub analytic: f64,
    /// `|at_step − at_half_step| / |at_half_step| > 0.1`.
    pub unstable: bool,
}

impl Curvature {
    pub fn ratio(&self) -> f64 {
        self.value / self.analytic
    }
}

/// Default stencil step in units of `n_g`.
pub const CURVATURE_STEP: f64 = 0.125;

fn five_point(f: &dyn Fn(f64) -> Result<f64>, h: f64) -> Result<(f64, f64)> {
    let samples = [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|k| f(k * h))
        .collect::<Result<Vec<_>>>()?;
    let d = |s: &[f64], hh: f64| (-s[0] + 16.0 * s[1] - 30.0 * s[2] + 16.0 * s[3] - s[4]) / (12.0 * hh * hh);
    let coarse = d(&samples, h);
    let inner = [samples[1], f(-0.5 * h)?, samples[2], f(0.5 * h)?, samples[3]];
    Ok((coarse, d(&inner, 0.5 * h)))
}

fn curvature(f: &dyn Fn(f64) -> Result<f64>, h: Option<f64>, analytic: f64) -> Result<Curvature> {
    let h = h.unwrap_or(CURVATURE_STEP);
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain("h_c", format!("step must be positive, got {h}")));
    }
    let (coarse, fine) = five_point(f, h)?;
    // the five-point stencil is fourth order
    let value = (16.0 * fine - coarse) / 15.0;
    let unstable = (coarse - fine).abs() > 0.1 * fine.abs();
    if unstable {
        warn!("curvature estimates at h = {h} and h/2 differ by more than 10%: {coarse:e} vs {fine:e}");
    }
    Ok(Curvature {
        value,
        at_step: coarse,
        at_half_step: fine,
        step: h,
        analytic,
        unstable,
    })
}

/// `d²ħω_q/dn_g²` at `n_g = 0`, compared with `−√(2E_C E_J)/(2N²)`.
pub fn dispersion_curvature(params: &CircuitParams, policy: &WindowPolicy, h: Option<f64>) -> Result<Curvature> {
    params.validate()?;
    if params.ej_over_ec() <= 10.0 {
        warn!(
            "dispersion curvature outside the transmon regime (E_J/E_C = {})",
            params.ej_over_ec()
        );
    }
    let n = params.n_half();
    let analytic = -(2.0 * params.e_c * params.e_j).sqrt() / (2.0 * n * n);
    curvature(&|ng| qubit_frequency(&params.with_ng(ng), policy), h, analytic)
}

/// `d²χ/dn_g²` at `n_g = 0`, compared with `−3E_J/(2E_C N⁴)`.
pub fn susceptibility_curvature(params: &CircuitParams, policy: &WindowPolicy, h: Option<f64>) -> Result<Curvature> {
    params.validate()?;
    if params.ej_over_ec() <= 10.0 {
        warn!(
            "susceptibility curvature outside the transmon regime (E_J/E_C = {})",
            params.ej_over_ec()
        );
    }
    let n = params.n_half();
    let analytic = -3.0 * params.e_j / (2.0 * params.e_c * n.powi(4));
    curvature(
        &|ng| Ok(charge_susceptibility(&params.with_ng(ng), policy, None)?.value),
        h,
        analytic,
    )
}

/// Which zero-offset curvature to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureKind {
    Dispersion,
    Susceptibility,
}

/// Curvature at each `E_J/E_C` in `ratios` (with `E_C` fixed), as a table with
/// columns `numeric`, `analytic`, `ratio`, `at_step`, `at_half_step`.
pub fn curvature_scan(
    kind: CurvatureKind,
    e_c: f64,
    pairs_total: u64,
    ratios: &[f64],
    policy: &WindowPolicy,
    h: Option<f64>,
) -> Result<SweepTable> {
    let mut table = SweepTable::new("ej_over_ec", ratios.to_vec())?;
    let results = ratios
        .par_iter()
        .map(|&r| {
            let p = CircuitParams::new(r * e_c, e_c, 0.0, pairs_total)?;
            match kind {
                CurvatureKind::Dispersion => dispersion_curvature(&p, policy, h),
                CurvatureKind::Susceptibility => susceptibility_curvature(&p, policy, h),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |f: &dyn Fn(&Curvature) -> f64| results.iter().map(f).collect::<Vec<_>>();
    table.push_column("numeric", col(&|c| c.value))?;
    table.push_column("analytic", col(&|c| c.analytic))?;
    table.push_column("ratio", col(&|c| c.ratio()))?;
    table.push_column("at_step", col(&|c| c.at_step))?;
    table.push_column("at_half_step", col(&|c| c.at_half_step))?;
    table.set_meta("kind", serde_json::to_value(kind).expect("serializable"));
    table.set_meta("e_c", e_c);
    table.set_meta("pairs_total", pairs_total);
    table.set_meta("n_g", 0.0);
    table.set_meta("step", h.unwrap_or(CURVATURE_STEP));
    table.set_meta("window_policy", policy.to_json());
    let unstable: Vec<f64> = ratios
        .iter()
        .zip(&results)
        .filter(|(_, c)| c.unstable)
        .map(|(r, _)| *r)
        .collect();
    table.set_meta("unstable", json!(unstable));
    Ok(table)
}

/// `n` evenly spaced points from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let span = to - from;
            (0..n).map(|i| from + span * i as f64 / (n - 1) as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{dense_all, DenseEigen};
    use crate::hamiltonian::build;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn two_level_imbalance(e_c: f64, e_j: f64, ng: f64) -> f64 {
        0.5 * e_c * ng / (e_c * e_c * ng * ng + e_j * e_j).sqrt()
    }

    #[test]
    fn minimal_box_frequency() {
        let p = CircuitParams::new(1.0, 1.0, 0.0, 1).unwrap();
        for policy in [WindowPolicy::full(), WindowPolicy::default(), WindowPolicy::fixed(3)] {
            assert!((qubit_frequency(&p, &policy).unwrap() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn minimal_box_imbalance() {
        for ng in [-3.0, -0.4, 0.0, 0.25, 1.7] {
            let p = CircuitParams::new(1.0, 1.0, ng, 1).unwrap();
            let n = expected_imbalance(&p, &WindowPolicy::full()).unwrap();
            assert!((n - two_level_imbalance(1.0, 1.0, ng)).abs() < 1e-13);
        }
    }

    #[test]
    fn minimal_box_susceptibility() {
        let p = CircuitParams::new(1.0, 1.0, 0.0, 1).unwrap();
        let s = charge_susceptibility(&p, &WindowPolicy::full(), None).unwrap();
        assert!((s.value - 0.5).abs() < 1e-9);
        assert!((s.hellmann_feynman - 0.5).abs() < 1e-5);
        assert!(s.error_estimate < 1e-8);
    }

    #[test]
    fn adaptive_matches_dense_full_basis() {
        let p = CircuitParams::new(50.0, 1.0, 0.0, 400).unwrap();
        let adaptive = qubit_frequency(&p, &WindowPolicy::default()).unwrap();
        let dense = dense_all(&build(&p).unwrap()).unwrap().values();
        assert!(rel(adaptive, dense[1] - dense[0]) < 1e-9);
    }

    #[test]
    fn windowed_equals_full_when_full_is_feasible() {
        for &(ratio, ng, pairs) in &[(50.0, 3.3, 400u64), (5.0, -12.0, 300), (200.0, 0.5, 1001)] {
            let p = CircuitParams::from_ratio(ratio, ng, pairs).unwrap();
            let full = solve_levels(&p, &WindowPolicy::full(), 3, true).unwrap();
            let win = solve_levels(&p, &WindowPolicy::default(), 3, true).unwrap();
            assert!(!win.window.is_full());
            for (a, b) in win.energies().iter().zip(full.energies()) {
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
            assert!((win.imbalance.unwrap() - full.imbalance.unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn imbalance_vanishes_at_zero_offset() {
        for &(ratio, pairs) in &[(0.2, 10u64), (0.2, 11), (50.0, 60), (3.0, 1)] {
            let p = CircuitParams::from_ratio(ratio, 0.0, pairs).unwrap();
            assert!(expected_imbalance(&p, &WindowPolicy::default()).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn saturated_staircase() {
        let p = CircuitParams::from_ratio(0.2, 20.0, 10).unwrap();
        let n = expected_imbalance(&p, &WindowPolicy::default()).unwrap();
        assert!((n - 5.0).abs() < 1e-3);
        let s = charge_susceptibility(&p, &WindowPolicy::default(), None).unwrap();
        assert!(s.value.abs() < 1e-6);
    }

    #[test]
    fn imbalance_is_odd_and_bounded() {
        for pairs in [10u64, 11] {
            for ng in [0.3, 2.5, 4.9, 7.0] {
                let p = CircuitParams::from_ratio(0.2, ng, pairs).unwrap();
                let a = expected_imbalance(&p, &WindowPolicy::full()).unwrap();
                let b = expected_imbalance(&p.with_ng(-ng), &WindowPolicy::full()).unwrap();
                assert!((a + b).abs() < 1e-10);
                assert!(a.abs() <= p.n_half());
            }
        }
    }

    #[test]
    fn hellmann_feynman_slope() {
        for &(ratio, ng, pairs) in &[(0.2, 0.3, 10u64), (1.0, 2.2, 11), (30.0, 1.1, 60), (0.05, 4.7, 10)] {
            let p = CircuitParams::from_ratio(ratio, ng, pairs).unwrap();
            let policy = WindowPolicy::full();
            let h = 1e-4;
            let e = |x: f64| ground_energy(&p.with_ng(x), &policy).unwrap();
            let slope = (e(ng + h) - e(ng - h)) / (2.0 * h);
            let n = expected_imbalance(&p, &policy).unwrap();
            assert!((slope + 2.0 * p.e_c * (n - ng)).abs() < 1e-7 * p.e_c);
        }
    }

    #[test]
    fn susceptibility_cross_check_agrees() {
        let p = CircuitParams::from_ratio(2.0, 0.37, 12).unwrap();
        let s = charge_susceptibility(&p, &WindowPolicy::full(), None).unwrap();
        assert!((s.value - s.hellmann_feynman).abs() < 1e-4);
    }

    #[test]
    fn sweep_table_shape_and_symmetry() {
        let p = CircuitParams::from_ratio(0.2, 0.0, 10).unwrap();
        let grid = linspace(-11.0, 11.0, 441);
        let mut req = SweepRequest::bands(3);
        req.imbalance = true;
        let t = band_sweep(&p, &grid, &req, &WindowPolicy::default()).unwrap();
        assert_eq!(t.columns.keys().collect::<Vec<_>>(), ["E0", "E1", "E2", "n_expect"]);
        assert_eq!(t.len(), 441);
        for name in ["E0", "E1", "E2"] {
            let c = t.column(name).unwrap();
            for i in 0..c.len() {
                assert!((c[i] - c[c.len() - 1 - i]).abs() < 1e-10 * c[i].abs().max(1.0));
            }
        }
        let n = t.column("n_expect").unwrap();
        assert!((n[0] + 5.0).abs() < 1e-3 && (n[440] - 5.0).abs() < 1e-3);
        assert_eq!(t.meta["failed_points"], json!([]));
    }

    fn local_minima(grid: &[f64], values: &[f64]) -> Vec<f64> {
        (1..values.len() - 1)
            .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
            .map(|i| grid[i])
            .collect()
    }

    #[test]
    fn ground_band_minima_shift_with_parity() {
        let grid = linspace(-3.0, 3.0, 121);
        for (pairs, frac) in [(10u64, 0.0), (11, 0.5)] {
            let p = CircuitParams::from_ratio(0.2, 0.0, pairs).unwrap();
            let t = band_sweep(&p, &grid, &SweepRequest::bands(1), &WindowPolicy::full()).unwrap();
            let minima = local_minima(&grid, t.column("E0").unwrap());
            assert!(!minima.is_empty());
            for m in minima {
                assert!(
                    ((m - frac).rem_euclid(1.0)).min(1.0 - (m - frac).rem_euclid(1.0)) < 1e-9,
                    "{m}"
                );
            }
        }
    }

    #[test]
    fn large_offset_level_spacing() {
        let p = CircuitParams::from_ratio(1.0, 50.0, 10).unwrap();
        let e = solve_levels(&p, &WindowPolicy::full(), 4, false).unwrap().energies();
        for k in 1..4 {
            let spacing = e[k] - e[k - 1];
            assert!(rel(spacing, 100.0) < 0.1, "{spacing}");
        }
        // saturated ladder: exact spacing E_C(2|n_g| − 2N + 2k − 1) up to E_J corrections
        let p = CircuitParams::from_ratio(1e-3, 20.0, 10).unwrap();
        let e = solve_levels(&p, &WindowPolicy::full(), 4, false).unwrap().energies();
        for k in 1..4 {
            let exact = 2.0 * 20.0 - 10.0 + 2.0 * k as f64 - 1.0;
            assert!(rel(e[k] - e[k - 1], exact) < 1e-3);
        }
    }

    #[test]
    fn subtract_e0_and_failures() {
        let p = CircuitParams::from_ratio(0.2, 0.0, 10).unwrap();
        let mut req = SweepRequest::bands(2);
        req.subtract_e0 = true;
        let t = band_sweep(&p, &linspace(-1.0, 1.0, 21), &req, &WindowPolicy::full()).unwrap();
        let e0 = t.column("E0").unwrap();
        assert_eq!(e0.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
        assert!(band_sweep(&p, &[0.0], &SweepRequest::bands(12), &WindowPolicy::full()).is_err());
    }

    #[test]
    fn window_not_converged_is_reported() {
        let p = CircuitParams::from_ratio(50.0, 0.0, 100_000).unwrap();
        let policy = WindowPolicy {
            mode: WindowMode::Adaptive { rtol: 1e-14 },
            w_initial: Some(4),
            w_max: 8,
        };
        assert!(matches!(
            qubit_frequency(&p, &policy),
            Err(Error::WindowNotConverged { .. })
        ));
        let bad = WindowPolicy {
            w_initial: Some(2),
            ..WindowPolicy::default()
        };
        assert!(qubit_frequency(&p, &bad).is_err());
    }

    #[test]
    fn minimal_box_gap_curvature() {
        // gap 2√(E_C² n_g² + E_J²) has second derivative 2E_C²/E_J at 0
        let (e_c, e_j) = (1.0, 0.7);
        let p = CircuitParams::new(e_j, e_c, 0.0, 1).unwrap();
        let c = dispersion_curvature(&p, &WindowPolicy::full(), Some(1.0 / 64.0)).unwrap();
        assert!((c.value - 2.0 * e_c * e_c / e_j).abs() < 1e-6);
        assert!(!c.unstable);
    }

    #[test]
    fn box_susceptibility_curvature_between_peaks() {
        // n_g = 0 is mid-plateau for even 2N, so χ has a local minimum there
        let p = CircuitParams::from_ratio(0.2, 0.0, 10).unwrap();
        let c = susceptibility_curvature(&p, &WindowPolicy::full(), None).unwrap();
        assert!(c.value > 0.0 && !c.unstable, "{c:?}");

        let dense_n = |ng: f64| {
            let q = p.with_ng(ng);
            let h = build(&q).unwrap();
            let v = DenseEigen::compute(&h, true, 4001).unwrap().vector(0).unwrap();
            v.iter().enumerate().map(|(j, x)| h.charge(j) * x * x).sum::<f64>()
        };
        let d = 1e-4;
        let chi = |ng: f64| (dense_n(ng + d) - dense_n(ng - d)) / (2.0 * d);
        let s = 1.0 / 16.0;
        let oracle = (chi(s) - 2.0 * chi(0.0) + chi(-s)) / (s * s);
        assert!(rel(c.value, oracle) < 0.05, "{} vs {oracle}", c.value);
    }

    #[test]
    fn curvature_deviation_flips_with_parity() {
        let policy = WindowPolicy::full();
        let even = CircuitParams::from_ratio(10.0, 0.0, 60).unwrap();
        let odd = CircuitParams::from_ratio(10.0, 0.0, 61).unwrap();
        let d = |p: &CircuitParams| dispersion_curvature(p, &policy, None).unwrap().ratio() - 1.0;
        let s = |p: &CircuitParams| susceptibility_curvature(p, &policy, None).unwrap().ratio() - 1.0;
        assert!(d(&even) * d(&odd) < 0.0);
        assert!(s(&even) * s(&odd) < 0.0);
    }

    #[test]
    fn dense_ground_vector_gives_same_imbalance() {
        let p = CircuitParams::from_ratio(3.0, 1.3, 40).unwrap();
        let h = build(&p).unwrap();
        let d = DenseEigen::compute(&h, true, 4001).unwrap();
        let v = d.vector(0).unwrap();
        let n: f64 = v.iter().enumerate().map(|(j, x)| h.charge(j) * x * x).sum();
        assert!((n - expected_imbalance(&p, &WindowPolicy::full()).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-11.0, 11.0, 441);
        assert_eq!((g[0], g[220], g[440]), (-11.0, 0.0, 11.0));
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
