//! Charge-basis Hamiltonian `E_C(n̂ − n_g)² − (E_J/N)Ŝ_x`.
//!
//! In the basis `|n⟩`, `n ∈ {−N, …, N}`, the operator is symmetric tridiagonal
//! with diagonal `E_C(n − n_g)²` and coupling
//! `−(E_J/2N)·√(N(N+1) − n(n+1))` between `|n⟩` and `|n+1⟩`. Coefficients are
//! generated on demand, so a window into a basis of 10⁹ states costs nothing
//! until it is solved.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigensolve::{SymTridiagonal, Tridiagonal};
use crate::error::{Error, Result};
use crate::model::CircuitParams;

/// Largest basis for which dense matrices are built.
pub const DENSE_LIMIT: usize = 4001;

/// Largest window whose coefficients may be materialized into arrays.
pub const MATERIALIZE_LIMIT: u64 = 1 << 26;

/// Contiguous range of charge states, stored as basis indices `i = n + N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChargeWindow {
    pairs_total: u64,
    lo: u64,
    hi: u64,
}

impl ChargeWindow {
    /// The whole physical basis `[−N, N]`.
    pub fn full(pairs_total: u64) -> Self {
        ChargeWindow {
            pairs_total,
            lo: 0,
            hi: pairs_total,
        }
    }

    /// Window `[n_lo, n_hi]` given as charges. Both ends must be basis points.
    pub fn new(pairs_total: u64, n_lo: f64, n_hi: f64) -> Result<Self> {
        let n = pairs_total as f64 / 2.0;
        let out_of_range = || Error::WindowOutOfRange {
            lo: n_lo,
            hi: n_hi,
            min: -n,
            max: n,
        };
        if !(n_lo <= n_hi) || n_lo < -n || n_hi > n {
            return Err(out_of_range());
        }
        let to_index = |charge: f64| -> Result<u64> {
            let idx = charge + n;
            if idx.fract() != 0.0 {
                return Err(Error::domain(
                    "window",
                    format!("charge {charge} is not a basis point for 2N = {pairs_total}"),
                ));
            }
            Ok(idx as u64)
        };
        Ok(ChargeWindow {
            pairs_total,
            lo: to_index(n_lo)?,
            hi: to_index(n_hi)?,
        })
    }

    /// Window of half-width `half_width` around the basis point nearest
    /// `center`, clipped to the physical basis.
    pub fn around(pairs_total: u64, center: f64, half_width: u64) -> Self {
        let c = nearest_index(pairs_total, center);
        ChargeWindow {
            pairs_total,
            lo: c.saturating_sub(half_width),
            hi: c.saturating_add(half_width).min(pairs_total),
        }
    }

    pub fn dim(&self) -> u64 {
        self.hi - self.lo + 1
    }

    /// First and last basis index.
    pub fn index_range(&self) -> (u64, u64) {
        (self.lo, self.hi)
    }

    pub fn n_lo(&self) -> f64 {
        self.lo as f64 - self.pairs_total as f64 / 2.0
    }

    pub fn n_hi(&self) -> f64 {
        self.hi as f64 - self.pairs_total as f64 / 2.0
    }

    pub fn is_full(&self) -> bool {
        self.lo == 0 && self.hi == self.pairs_total
    }

    /// Charge of the `j`th state in the window.
    pub fn charge(&self, j: usize) -> f64 {
        (self.lo + j as u64) as f64 - self.pairs_total as f64 / 2.0
    }
}

/// Basis index of the charge state nearest `charge`, clamped to `[0, 2N]`.
pub fn nearest_index(pairs_total: u64, charge: f64) -> u64 {
    let idx = (charge + pairs_total as f64 / 2.0).round();
    if idx <= 0.0 {
        0
    } else if idx >= pairs_total as f64 {
        pairs_total
    } else {
        idx as u64
    }
}

/// Matrix-free symmetric tridiagonal Hamiltonian, full or windowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TridiagonalHamiltonian {
    params: CircuitParams,
    window: ChargeWindow,
    coupling: f64,
}

/// Full-basis Hamiltonian.
pub fn build(params: &CircuitParams) -> Result<TridiagonalHamiltonian> {
    build_windowed(params, ChargeWindow::full(params.pairs_total))
}

/// Hamiltonian restricted to `window`; retained coefficients are unchanged.
pub fn build_windowed(params: &CircuitParams, window: ChargeWindow) -> Result<TridiagonalHamiltonian> {
    params.validate()?;
    if window.pairs_total != params.pairs_total || window.hi > params.pairs_total {
        return Err(Error::WindowOutOfRange {
            lo: window.n_lo(),
            hi: window.n_hi(),
            min: -params.n_half(),
            max: params.n_half(),
        });
    }
    if usize::try_from(window.dim()).is_err() {
        return Err(Error::Capacity {
            dim: window.dim(),
            limit: usize::MAX as u64,
        });
    }
    Ok(TridiagonalHamiltonian {
        params: *params,
        window,
        coupling: params.e_j / params.pairs_total as f64,
    })
}

impl TridiagonalHamiltonian {
    pub fn params(&self) -> &CircuitParams {
        &self.params
    }

    pub fn window(&self) -> &ChargeWindow {
        &self.window
    }

    /// Charge `n` of the `j`th window state.
    pub fn charge(&self, j: usize) -> f64 {
        self.window.charge(j)
    }

    /// `(N − n)(N + n + 1)` for the basis index `i = n + N`, computed without
    /// cancellation.
    fn ladder_factor(&self, i: u64) -> f64 {
        (self.params.pairs_total - i) as f64 * (i + 1) as f64
    }

    /// Copies the coefficients into arrays.
    pub fn materialize(&self) -> Result<Tridiagonal> {
        let dim = self.window.dim();
        if dim > MATERIALIZE_LIMIT {
            return Err(Error::Capacity {
                dim,
                limit: MATERIALIZE_LIMIT,
            });
        }
        Ok(Tridiagonal::from_operator(self))
    }

    /// Three-column text table `n diag offdiag`; the last row's coupling is 0.
    pub fn export_table(&self) -> Result<String> {
        let dim = self.dim();
        if dim > DENSE_LIMIT {
            return Err(Error::Capacity {
                dim: dim as u64,
                limit: DENSE_LIMIT as u64,
            });
        }
        let mut out = String::from("# n diag offdiag\n");
        for j in 0..dim {
            let off = if j + 1 < dim { self.offdiag(j) } else { 0.0 };
            writeln!(out, "{} {:.16e} {:.16e}", self.charge(j), self.diag(j), off).unwrap();
        }
        Ok(out)
    }
}

impl SymTridiagonal for TridiagonalHamiltonian {
    fn dim(&self) -> usize {
        self.window.dim() as usize
    }

    #[inline]
    fn diag(&self, j: usize) -> f64 {
        let d = self.window.charge(j) - self.params.n_g;
        self.params.e_c * d * d
    }

    #[inline]
    fn offdiag(&self, j: usize) -> f64 {
        -self.coupling * self.ladder_factor(self.window.lo + j as u64).sqrt()
    }

    #[inline]
    fn offdiag_sq(&self, j: usize) -> f64 {
        self.coupling * self.coupling * self.ladder_factor(self.window.lo + j as u64)
    }

    fn max_offdiag_abs(&self) -> f64 {
        let (lo, hi) = self.window.index_range();
        if hi == lo {
            return 0.0;
        }
        // (2N − i)(i + 1) is concave in i with its peak near i = N − 1/2
        let peak = (self.params.pairs_total.saturating_sub(1) / 2).clamp(lo, hi - 1);
        [peak, (peak + 1).min(hi - 1)]
            .into_iter()
            .map(|i| self.coupling * self.ladder_factor(i).sqrt())
            .fold(0.0, f64::max)
    }

    fn diag_range(&self) -> (f64, f64) {
        let dim = self.dim();
        let nearest = nearest_index(self.params.pairs_total, self.params.n_g).clamp(self.window.lo, self.window.hi);
        let min = self.diag((nearest - self.window.lo) as usize);
        let max = self.diag(0).max(self.diag(dim - 1));
        (min, max)
    }
}

/// Dense spin matrices `Ŝ_x, Ŝ_y, Ŝ_z` in the charge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices {
    pub sx: DMatrix<Complex64>,
    pub sy: DMatrix<Complex64>,
    pub sz: DMatrix<Complex64>,
}

/// Spin-`N` matrices with `Ŝ_z = diag(n)` and `Ŝ₊|n⟩ = √(N(N+1) − n(n+1))|n+1⟩`.
pub fn spin_matrices(pairs_total: u64) -> Result<SpinMatrices> {
    if pairs_total == 0 {
        return Err(Error::domain("pairs_total", "2N must be at least 1"));
    }
    let dim = pairs_total + 1;
    if dim > DENSE_LIMIT as u64 {
        return Err(Error::Capacity {
            dim,
            limit: DENSE_LIMIT as u64,
        });
    }
    let dim = dim as usize;
    let n = pairs_total as f64 / 2.0;
    let mut sx = DMatrix::zeros(dim, dim);
    let mut sy = DMatrix::zeros(dim, dim);
    let mut sz = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        sz[(i, i)] = Complex64::new(i as f64 - n, 0.0);
        if i + 1 < dim {
            // ⟨i+1|Ŝ₊|i⟩
            let raise = ((pairs_total - i as u64) as f64 * (i + 1) as f64).sqrt();
            sx[(i + 1, i)] = Complex64::new(raise / 2.0, 0.0);
            sx[(i, i + 1)] = Complex64::new(raise / 2.0, 0.0);
            // Ŝ_y = (Ŝ₊ − Ŝ₋)/2i
            sy[(i + 1, i)] = Complex64::new(0.0, -raise / 2.0);
            sy[(i, i + 1)] = Complex64::new(0.0, raise / 2.0);
        }
    }
    Ok(SpinMatrices { sx, sy, sz })
}

impl SpinMatrices {
    /// `E_C(Ŝ_z − n_g)² − (E_J/N)Ŝ_x` assembled densely.
    pub fn hamiltonian(&self, params: &CircuitParams) -> DMatrix<Complex64> {
        let dim = self.sz.nrows();
        let shifted = &self.sz - DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(params.n_g, 0.0);
        (&shifted * &shifted) * Complex64::new(params.e_c, 0.0)
            - &self.sx * Complex64::new(params.e_j / params.n_half(), 0.0)
    }

    /// `Ŝ_x² + Ŝ_y² + Ŝ_z²`.
    pub fn casimir(&self) -> DMatrix<Complex64> {
        &self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz
    }
}
