//! Physical parameters of the junction and device-scale estimates.
//!
//! [`BoseHubbardParams`] is the two-site Bose-Hubbard form
//! `λ(c_L†c_L†c_Lc_L + c_R†c_R†c_Rc_R) + μ(c_L†c_L − c_R†c_R) − ν(c_L†c_R + h.c.)`
//! and [`CircuitParams`] is the equivalent circuit-QED description used by every
//! solver in the crate. Energies are in whatever unit the caller picks; only
//! ratios such as `E_J/E_C` enter the spectrum.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{ELECTRON_MASS, ELECTRON_VOLT, ELEMENTARY_CHARGE, VACUUM_PERMEABILITY};
use crate::error::{Error, Result};

/// Two-site Bose-Hubbard parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoseHubbardParams {
    /// On-site interaction λ.
    pub lambda: f64,
    /// Chemical-potential bias μ.
    pub mu: f64,
    /// Tunneling amplitude ν.
    pub nu: f64,
    /// Total number of bosons 2N.
    pub pairs_total: u64,
}

/// Circuit parameters `(E_J, E_C, n_g, N)`.
///
/// `pairs_total` is `2N`, the total number of Cooper pairs on both islands, so
/// that half-integer `N` is represented exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub e_j: f64,
    pub e_c: f64,
    pub n_g: f64,
    pub pairs_total: u64,
}

impl CircuitParams {
    pub fn new(e_j: f64, e_c: f64, n_g: f64, pairs_total: u64) -> Result<Self> {
        let p = CircuitParams {
            e_j,
            e_c,
            n_g,
            pairs_total,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in units of the charging energy (`E_C = 1`).
    pub fn from_ratio(ej_over_ec: f64, n_g: f64, pairs_total: u64) -> Result<Self> {
        Self::new(ej_over_ec, 1.0, n_g, pairs_total)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_j > 0.0 && self.e_j.is_finite()) {
            return Err(Error::domain("e_j", format!("must be positive, got {}", self.e_j)));
        }
        if !(self.e_c > 0.0 && self.e_c.is_finite()) {
            return Err(Error::domain("e_c", format!("must be positive, got {}", self.e_c)));
        }
        if !self.n_g.is_finite() {
            return Err(Error::domain("n_g", "must be finite"));
        }
        if self.pairs_total == 0 {
            return Err(Error::domain("pairs_total", "2N must be at least 1"));
        }
        Ok(())
    }

    /// `N`, the number of Cooper pairs per island (possibly half-integer).
    pub fn n_half(&self) -> f64 {
        self.pairs_total as f64 / 2.0
    }

    pub fn ej_over_ec(&self) -> f64 {
        self.e_j / self.e_c
    }

    /// Dimension of the charge basis, `2N + 1`.
    pub fn dim(&self) -> u64 {
        self.pairs_total + 1
    }

    pub fn with_ng(&self, n_g: f64) -> Self {
        CircuitParams { n_g, ..*self }
    }

    /// Inverse of [`map_bose_hubbard`].
    pub fn to_bose_hubbard(&self) -> BoseHubbardParams {
        let lambda = self.e_c / 2.0;
        BoseHubbardParams {
            lambda,
            mu: -2.0 * lambda * self.n_g,
            nu: self.e_j / self.pairs_total as f64,
            pairs_total: self.pairs_total,
        }
    }
}

impl fmt::Display for CircuitParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E_J={} E_C={} n_g={} 2N={}",
            self.e_j, self.e_c, self.n_g, self.pairs_total
        )
    }
}

/// Maps Bose-Hubbard parameters to `E_J = 2Nν`, `E_C = 2λ`, `n_g = −μ/(2λ)`.
pub fn map_bose_hubbard(bh: &BoseHubbardParams) -> Result<CircuitParams> {
    if !(bh.lambda > 0.0) {
        return Err(Error::domain("lambda", format!("must be positive, got {}", bh.lambda)));
    }
    if !(bh.nu > 0.0) {
        return Err(Error::domain("nu", format!("must be positive, got {}", bh.nu)));
    }
    if !bh.mu.is_finite() {
        return Err(Error::domain("mu", "must be finite"));
    }
    CircuitParams::new(
        bh.pairs_total as f64 * bh.nu,
        2.0 * bh.lambda,
        -bh.mu / (2.0 * bh.lambda),
        bh.pairs_total,
    )
}

/// Bulk material properties in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialProps {
    pub name: String,
    /// Superconducting gap Δ, J.
    pub gap: f64,
    /// Fermi energy ε_F, J.
    pub fermi_energy: f64,
    /// Electron density n_e, m⁻³.
    pub electron_density: f64,
    /// London penetration depth λ_L, m.
    pub london_depth: f64,
}

impl MaterialProps {
    /// Builds a material from the customary laboratory units.
    pub fn from_lab_units(
        name: impl Into<String>,
        gap_mev: f64,
        fermi_ev: f64,
        n_e_per_cm3: f64,
        lambda_l_nm: f64,
    ) -> Result<Self> {
        let m = MaterialProps {
            name: name.into(),
            gap: gap_mev * 1e-3 * ELECTRON_VOLT,
            fermi_energy: fermi_ev * ELECTRON_VOLT,
            electron_density: n_e_per_cm3 * 1e6,
            london_depth: lambda_l_nm * 1e-9,
        };
        m.validate()?;
        Ok(m)
    }

    /// Aluminum: Δ = 0.34 meV, ε_F = 11.63 eV, n_e = 18.06×10²² cm⁻³, λ_L = 16 nm.
    pub fn aluminum() -> Self {
        Self::from_lab_units("aluminum", 0.34, 11.63, 18.06e22, 16.0).expect("aluminum preset is valid")
    }

    /// Looks up a built-in preset by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "aluminum" | "aluminium" | "al" => Some(Self::aluminum()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gap", self.gap),
            ("fermi_energy", self.fermi_energy),
            ("electron_density", self.electron_density),
            ("london_depth", self.london_depth),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Parses a preset file of `key = value` lines.
    ///
    /// Recognized keys: `name`, `gap_meV`, `fermi_eV`, `n_e_per_cm3`,
    /// `lambdaL_nm`. Blank lines and `#` comments are ignored; `:` is accepted
    /// in place of `=`.
    pub fn parse_preset(text: &str) -> Result<Self> {
        let mut name = None;
        let mut gap = None;
        let mut fermi = None;
        let mut n_e = None;
        let mut lambda_l = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let number = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: `{key}` is not a number", lineno + 1)))
            };
            match key {
                "name" => name = Some(value.trim_matches('"').to_string()),
                "gap_meV" => gap = Some(number()?),
                "fermi_eV" => fermi = Some(number()?),
                "n_e_per_cm3" => n_e = Some(number()?),
                "lambdaL_nm" => lambda_l = Some(number()?),
                other => return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("missing key `{k}`"));
        Self::from_lab_units(
            name.ok_or_else(|| missing("name"))?,
            gap.ok_or_else(|| missing("gap_meV"))?,
            fermi.ok_or_else(|| missing("fermi_eV"))?,
            n_e.ok_or_else(|| missing("n_e_per_cm3"))?,
            lambda_l.ok_or_else(|| missing("lambdaL_nm"))?,
        )
    }

    pub fn load_preset(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_preset(&std::fs::read_to_string(path)?)
    }

    /// Renders the material in the preset file format.
    pub fn to_preset(&self) -> String {
        format!(
            "name = {}\ngap_meV = {}\nfermi_eV = {}\nn_e_per_cm3 = {:e}\nlambdaL_nm = {}\n",
            self.name,
            self.gap / (1e-3 * ELECTRON_VOLT),
            self.fermi_energy / ELECTRON_VOLT,
            self.electron_density * 1e-6,
            self.london_depth * 1e9
        )
    }
}

/// Zero-temperature Cooper-pair density `n_s = m_e / (2 μ₀ e² λ_L²)`, in m⁻³.
pub fn cooper_pair_density(m: &MaterialProps) -> f64 {
    ELECTRON_MASS
        / (2.0 * VACUUM_PERMEABILITY * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * m.london_depth * m.london_depth)
}

/// Lower bound on the pairs per island and derived device scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `(ε_F/Δ)(n_s/n_e)`: islands with fewer pairs lose superconductivity.
    pub n_min: f64,
    /// Cooper-pair density, m⁻³.
    pub n_s: f64,
    /// Island volume `N/n_s` in m³, when a pair count was supplied.
    pub island_volume: Option<f64>,
    /// Gate voltage in V, when an offset charge and gate capacitance were supplied.
    pub gate_voltage: Option<f64>,
}

impl ValidityReport {
    pub fn with_island(mut self, pairs_per_island: f64) -> Self {
        self.island_volume = Some(island_volume(pairs_per_island, self.n_s));
        self
    }

    pub fn with_gate(mut self, n_g: f64, c_g: f64) -> Result<Self> {
        self.gate_voltage = Some(gate_voltage(n_g, c_g)?);
        Ok(self)
    }

    /// Whether `pairs_per_island` clears the bound (equality counts as valid).
    pub fn admits(&self, pairs_per_island: f64) -> bool {
        pairs_per_island >= self.n_min
    }
}

/// Minimum island size for which the level spacing stays below the gap.
///
/// The equality value is reported; any safety factor is the caller's choice.
pub fn validity_min_pairs(m: &MaterialProps) -> Result<ValidityReport> {
    m.validate()?;
    let n_s = cooper_pair_density(m);
    Ok(ValidityReport {
        n_min: (m.fermi_energy / m.gap) * (n_s / m.electron_density),
        n_s,
        island_volume: None,
        gate_voltage: None,
    })
}

/// Island volume `N/n_s`.
pub fn island_volume(pairs_per_island: f64, n_s: f64) -> f64 {
    pairs_per_island / n_s
}

/// Gate voltage `V_g = n_g · 2e / C_g`.
pub fn gate_voltage(n_g: f64, c_g: f64) -> Result<f64> {
    if !(c_g > 0.0) {
        return Err(Error::domain("c_g", format!("must be positive, got {c_g}")));
    }
    Ok(n_g * (2.0 * ELEMENTARY_CHARGE) / c_g)
}

/// Capacitance of `2e` per `volts`; `2e/mV` is `two_e_per(1e-3)`.
pub fn two_e_per(volts: f64) -> f64 {
    2.0 * ELEMENTARY_CHARGE / volts
}
