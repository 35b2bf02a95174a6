//! CODATA 2018 values in SI units.

/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Vacuum magnetic permeability, N/A².
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// One electronvolt in joules (exact).
pub const ELECTRON_VOLT: f64 = ELEMENTARY_CHARGE;
