//! Closed-form approximations in the two limiting regimes.
//!
//! Cooper-pair-box side (`E_J ≪ E_C`): at a degeneracy point the two charge
//! states adjacent to `n_g` are coupled by a single off-diagonal element,
//! which yields the gap and the peak susceptibility.
//!
//! Transmon side (`E_J ≫ E_C`): Holstein-Primakoff bosonization around the
//! `S_x = N` state, a Bogoliubov rotation that diagonalizes the quadratic
//! part, and first-order corrections evaluated either by the closed forms or
//! numerically with the [`wick`](crate::wick) engine.

use log::warn;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::CircuitParams;
use crate::wick::{substitute_affine, OperatorPoly};

/// Tolerance for recognizing a degeneracy point.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Effective two-level Hamiltonian on the charge states adjacent to `n_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelEffective {
    pub floor_n: f64,
    pub ceil_n: f64,
    /// Coefficient of `σ_x`: `−(E_J/2N)√(N(N+1) − floor·ceil)`.
    pub sigma_x_coeff: f64,
    /// `E_C(n − n_g)²` for `n = floor_n, ceil_n`.
    pub diag: [f64; 2],
}

impl TwoLevelEffective {
    /// Eigenvalues of the 2×2 block, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.diag[0] + self.diag[1]);
        let half = 0.5 * (self.diag[0] - self.diag[1]);
        let r = half.hypot(self.sigma_x_coeff);
        [mean - r, mean + r]
    }

    pub fn gap(&self) -> f64 {
        let [e0, e1] = self.eigenvalues();
        e1 - e0
    }
}

/// Two-level reduction around a non-basis `n_g` strictly inside `(−N, N)`.
pub fn cpb_effective(params: &CircuitParams) -> Result<TwoLevelEffective> {
    params.validate()?;
    let n = params.n_half();
    let ng = params.n_g;
    if !(ng > -n && ng < n) {
        return Err(Error::domain(
            "n_g",
            format!("must lie strictly inside (-{n}, {n}), got {ng}"),
        ));
    }
    // basis charges are -N + k
    let offset = ng + n;
    let k = offset.floor();
    if (offset - k).abs() <= DEGENERACY_TOL || (offset - k - 1.0).abs() <= DEGENERACY_TOL {
        return Err(Error::NotDegeneracyPoint { n_g: ng });
    }
    let floor_n = k - n;
    let ceil_n = floor_n + 1.0;
    let sigma_x_coeff = -(params.e_j / params.pairs_total as f64) * (n * (n + 1.0) - floor_n * ceil_n).sqrt();
    Ok(TwoLevelEffective {
        floor_n,
        ceil_n,
        sigma_x_coeff,
        diag: [params.e_c * (floor_n - ng).powi(2), params.e_c * (ceil_n - ng).powi(2)],
    })
}

/// True when `n_g` sits halfway between two basis charges.
pub fn is_degeneracy_point(params: &CircuitParams) -> bool {
    let n = params.n_half();
    let offset = params.n_g + n - 0.5;
    let k = offset.round();
    (offset - k).abs() <= DEGENERACY_TOL && k >= 0.0 && k < params.pairs_total as f64
}

fn check_cpb(params: &CircuitParams) -> Result<()> {
    params.validate()?;
    if !is_degeneracy_point(params) {
        return Err(Error::NotDegeneracyPoint { n_g: params.n_g });
    }
    if params.ej_over_ec() >= 0.1 {
        warn!("E_J/E_C = {} is outside the charge regime (< 0.1)", params.ej_over_ec());
    }
    Ok(())
}

fn cpb_root(params: &CircuitParams) -> f64 {
    let two_n = params.pairs_total as f64;
    ((1.0 + two_n).powi(2) - 4.0 * params.n_g * params.n_g).sqrt()
}

/// Qubit gap at a degeneracy point, `(E_J/2N)√((1+2N)² − 4n_g²)`.
pub fn cpb_gap(params: &CircuitParams) -> Result<f64> {
    check_cpb(params)?;
    Ok(params.e_j / params.pairs_total as f64 * cpb_root(params))
}

/// Peak susceptibility at a degeneracy point, `2N E_C / (E_J√((1+2N)² − 4n_g²))`.
pub fn cpb_susceptibility(params: &CircuitParams) -> Result<f64> {
    check_cpb(params)?;
    Ok(params.pairs_total as f64 * params.e_c / (params.e_j * cpb_root(params)))
}

/// Coefficients of `b = u₊a + u₋a† − iu₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovCoeffs {
    pub u_plus: f64,
    pub u_minus: f64,
    pub u_0: f64,
    /// Level spacing `ε`.
    pub epsilon: f64,
}

/// Level spacing `ε = √(2E_C E_J + E_J²/N²)`.
pub fn level_spacing(params: &CircuitParams) -> f64 {
    let n = params.n_half();
    (2.0 * params.e_c * params.e_j + (params.e_j / n).powi(2)).sqrt()
}

pub fn bogoliubov(params: &CircuitParams) -> Result<BogoliubovCoeffs> {
    params.validate()?;
    let n = params.n_half();
    let eps = level_spacing(params);
    // (E_J ± Nε)/√(4NεE_J) written as (1/ℓ ± ℓ)/2 with ℓ² = Nε/E_J
    let ell = (n * eps / params.e_j).sqrt();
    Ok(BogoliubovCoeffs {
        u_plus: 0.5 * (1.0 / ell + ell),
        u_minus: 0.5 * (1.0 / ell - ell),
        u_0: params.n_g * (2.0 * params.e_c * params.e_c * params.e_j / eps.powi(3)).sqrt(),
        epsilon: eps,
    })
}

/// Warnings for use of the transmon formulas outside `10 < E_J/E_C < N²/100`.
pub fn transmon_regime_warnings(params: &CircuitParams) -> Vec<String> {
    let ratio = params.ej_over_ec();
    let n = params.n_half();
    let mut out = Vec::new();
    if ratio <= 10.0 {
        out.push(format!("E_J/E_C = {ratio} is not in the transmon regime (> 10)"));
    }
    if ratio >= n * n / 100.0 {
        out.push(format!("E_J/E_C = {ratio} is not small against N^2 = {}", n * n));
    }
    for w in &out {
        warn!("{w}");
    }
    out
}

/// `√(2E_C E_J)[1 − (n_g/2N)²]`.
pub fn transmon_frequency(params: &CircuitParams) -> Result<f64> {
    params.validate()?;
    transmon_regime_warnings(params);
    let x = params.n_g / params.pairs_total as f64;
    Ok((2.0 * params.e_c * params.e_j).sqrt() * (1.0 - x * x))
}

/// `1 − 3E_J n_g²/(4E_C N⁴)`.
pub fn transmon_susceptibility(params: &CircuitParams) -> Result<f64> {
    params.validate()?;
    transmon_regime_warnings(params);
    let n = params.n_half();
    Ok(1.0 - 3.0 * params.e_j * params.n_g * params.n_g / (4.0 * params.e_c * n.powi(4)))
}

/// First-order transmon results from explicit vacuum expectation values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstOrder {
    /// `ħω_q` to first order in the square-root expansion.
    pub freq: f64,
    /// `⟨n̂⟩` to first order.
    pub imbalance: f64,
}

/// Highest quasiparticle number reached by the first-order perturbation.
const MAX_EXCITATION: u32 = 4;

/// Evaluates the first-order frequency and imbalance with the operator engine.
///
/// With `p = i(a†−a)/√2`, `p′ = p − n_g/√N` and `δS_z ≈ −a†pa/(4√N)`:
///
/// * `ħω_q ≈ ε − (E_C/2) Re⟨0|b[p′a†pa, b†]|0⟩`
/// * `⟨n⟩ ≈ ⟨√N p⟩ + ⟨δS_z⟩ + 2Re⟨√N p|δψ₀⟩`, where
///   `|δψ₀⟩ = (E_C/4ε) Σ_{k=1..4} (b†)^k|0⟩⟨0|b^k(p′a†pa + h.c.)|0⟩/(k!k)`.
pub fn transmon_first_order_numeric(params: &CircuitParams) -> Result<FirstOrder> {
    params.validate()?;
    transmon_regime_warnings(params);
    let coeffs = bogoliubov(params)?;
    let sqrt_n = params.n_half().sqrt();
    let (a, ad) = (OperatorPoly::lower(), OperatorPoly::raise());
    let p = OperatorPoly::momentum();
    let p_shift = &p - &OperatorPoly::scalar(Complex64::from(params.n_g / sqrt_n));

    let apa = &(&ad * &p) * &a;
    let z = substitute_affine(&(&p_shift * &apa), &coeffs)?;
    let (b, bd) = (OperatorPoly::lower(), OperatorPoly::raise());

    let shift = (&(&b * &z) * &bd).vacuum_expectation()? - (&(&b * &bd) * &z).vacuum_expectation()?;
    let freq = coeffs.epsilon - 0.5 * params.e_c * shift.re;

    let p_b = substitute_affine(&p, &coeffs)?;
    let leading = sqrt_n * p_b.vacuum_expectation()?.re;
    let ds_z = -substitute_affine(&apa, &coeffs)?.vacuum_expectation()?.re / (4.0 * sqrt_n);
    let source = &z + &z.adjoint();
    let mut overlap = Complex64::new(0.0, 0.0);
    let mut k_fact = 1.0;
    for k in 1..=MAX_EXCITATION {
        k_fact *= k as f64;
        let amp = (&b.pow(k) * &source).vacuum_expectation()?;
        let proj = (&p_b * &bd.pow(k)).vacuum_expectation()?;
        overlap += proj * amp / (k_fact * k as f64);
    }
    let correction = 2.0 * sqrt_n * (params.e_c / (4.0 * coeffs.epsilon)) * overlap.re;
    Ok(FirstOrder {
        freq,
        imbalance: leading + ds_z + correction,
    })
}
